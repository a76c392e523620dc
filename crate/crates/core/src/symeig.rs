//! Cyclic Jacobi eigensolver for real symmetric matrices.
//!
//! Each sweep visits every `(p, q)` pair in row order and annihilates
//! `a_pq` with a plane rotation. During the first three sweeps a rotation
//! is skipped when `|a_pq|` is below `0.2 · off / n²`. Convergence is
//! declared once the off-diagonal Frobenius norm drops to
//! `rel_tol · ‖A‖_F`.

use crate::error::{Error, Result};
use crate::sampling::{flip_to_upper, SymMatrix};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JacobiOptions {
    pub rel_tol: f64,
    pub max_sweeps: usize,
}

impl Default for JacobiOptions {
    fn default() -> Self {
        JacobiOptions {
            rel_tol: 1e-12,
            max_sweeps: 50,
        }
    }
}

/// Square matrix stored column-major; column `i` is eigenvector `i`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EigenVectors {
    n: usize,
    data: Vec<f64>,
}

impl EigenVectors {
    pub fn identity(n: usize) -> Self {
        let mut data = vec![0.0; n * n];
        for i in 0..n {
            data[i * n + i] = 1.0;
        }
        EigenVectors { n, data }
    }

    /// From a list of columns, each of length `columns.len()`.
    pub fn from_columns(columns: &[Vec<f64>]) -> Result<Self> {
        let n = columns.len();
        let mut data = Vec::with_capacity(n * n);
        for c in columns {
            if c.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: c.len(),
                });
            }
            data.extend_from_slice(c);
        }
        Ok(EigenVectors { n, data })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn column(&self, i: usize) -> &[f64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn column_mut(&mut self, i: usize) -> &mut [f64] {
        &mut self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn columns(&self) -> impl Iterator<Item = &[f64]> {
        self.data.chunks_exact(self.n.max(1))
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.data[col * self.n + row]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EigenDecomposition {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: EigenVectors,
    pub sweeps: usize,
}

impl EigenDecomposition {
    pub fn n(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn vector(&self, i: usize) -> &[f64] {
        self.eigenvectors.column(i)
    }

    /// Smallest gap between consecutive eigenvalues (infinite for n < 2).
    pub fn min_gap(&self) -> f64 {
        self.eigenvalues
            .windows(2)
            .map(|w| w[1] - w[0])
            .fold(f64::INFINITY, f64::min)
    }

    /// `V Λ Vᵀ` as a dense row-major matrix.
    pub fn reconstruct(&self) -> Vec<Vec<f64>> {
        let n = self.n();
        let mut out = vec![vec![0.0; n]; n];
        for (k, &lambda) in self.eigenvalues.iter().enumerate() {
            let v = self.vector(k);
            for i in 0..n {
                for j in 0..n {
                    out[i][j] += lambda * v[i] * v[j];
                }
            }
        }
        out
    }
}

/// Makes the first component of each column whose magnitude exceeds `1e-12`
/// positive. Idempotent.
pub fn sign_normalize(v: &mut EigenVectors) {
    for i in 0..v.n {
        flip_to_upper(v.column_mut(i));
    }
}

pub fn eig_symmetric(a: &SymMatrix) -> Result<EigenDecomposition> {
    eig_symmetric_with(a, JacobiOptions::default())
}

pub fn eig_symmetric_with(a: &SymMatrix, opts: JacobiOptions) -> Result<EigenDecomposition> {
    let n = a.n();
    if a.packed().iter().any(|x| !x.is_finite()) {
        return Err(Error::domain("matrix entries must be finite"));
    }
    // dense row-major working copy
    let mut m = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            m[i * n + j] = a.get(i, j);
        }
    }
    let mut v = EigenVectors::identity(n);
    let scale = a.frobenius_norm();
    let target = opts.rel_tol * scale;

    let off_norm = |m: &[f64]| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for j in (i + 1)..n {
                s += 2.0 * m[i * n + j] * m[i * n + j];
            }
        }
        s.sqrt()
    };

    let mut sweeps = 0;
    let mut off = off_norm(&m);
    while off > target {
        if sweeps == opts.max_sweeps {
            return Err(Error::NonConvergence {
                what: "Jacobi eigensolver",
                best: off,
                error_estimate: off,
            });
        }
        let threshold = if sweeps < 3 {
            0.2 * off / (n * n) as f64
        } else {
            0.0
        };
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = m[p * n + q];
                if apq == 0.0 || apq.abs() < threshold {
                    continue;
                }
                let app = m[p * n + p];
                let aqq = m[q * n + q];
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + theta.hypot(1.0));
                let c = 1.0 / t.hypot(1.0);
                let s = t * c;
                for k in 0..n {
                    if k == p || k == q {
                        continue;
                    }
                    let akp = m[k * n + p];
                    let akq = m[k * n + q];
                    let new_kp = c * akp - s * akq;
                    let new_kq = s * akp + c * akq;
                    m[k * n + p] = new_kp;
                    m[p * n + k] = new_kp;
                    m[k * n + q] = new_kq;
                    m[q * n + k] = new_kq;
                }
                m[p * n + p] = app - t * apq;
                m[q * n + q] = aqq + t * apq;
                m[p * n + q] = 0.0;
                m[q * n + p] = 0.0;
                let (cp, cq) = (p * n, q * n);
                for k in 0..n {
                    let vkp = v.data[cp + k];
                    let vkq = v.data[cq + k];
                    v.data[cp + k] = c * vkp - s * vkq;
                    v.data[cq + k] = s * vkp + c * vkq;
                }
            }
        }
        sweeps += 1;
        off = off_norm(&m);
    }

    let diag: Vec<f64> = (0..n).map(|i| m[i * n + i]).collect();
    let mut order: Vec<usize> = (0..n).collect();
    // stable: exact ties keep original column order
    order.sort_by(|&i, &j| diag[i].total_cmp(&diag[j]));
    let eigenvalues = order.iter().map(|&i| diag[i]).collect();
    let mut sorted = EigenVectors {
        n,
        data: Vec::with_capacity(n * n),
    };
    for &i in &order {
        sorted.data.extend_from_slice(v.column(i));
    }
    sign_normalize(&mut sorted);
    Ok(EigenDecomposition {
        eigenvalues,
        eigenvectors: sorted,
        sweeps,
    })
}
