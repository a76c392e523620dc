//! Seedable random sources for the ensembles.
//!
//! Every stream is a ChaCha20 generator keyed by `seed` (expanded with
//! `SeedableRng::seed_from_u64`) and positioned on ChaCha stream `stream_id`,
//! so `(seed, stream_id)` fixes the output bit-for-bit on every platform
//! and distinct stream ids are independent. Gaussians use Marsaglia's polar
//! method.

use crate::error::{Error, Result};
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;
use serde::{Deserialize, Serialize};

/// Entries with magnitude at or below this are treated as zero when locating
/// the first nonzero component of a vector.
pub const NONZERO_THRESHOLD: f64 = 1e-12;

#[derive(Debug, Clone)]
pub struct RngState {
    seed: u64,
    stream_id: u64,
    rng: ChaCha20Rng,
    spare: Option<f64>,
}

impl RngState {
    pub fn new(seed: u64, stream_id: u64) -> Self {
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        rng.set_stream(stream_id);
        RngState {
            seed,
            stream_id,
            rng,
            spare: None,
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream_id(&self) -> u64 {
        self.stream_id
    }

    /// A fresh state on another stream of the same key. Cheaper than
    /// [`RngState::new`] since the key expansion is reused.
    pub fn fork(&self, stream_id: u64) -> Self {
        let mut rng = self.rng.clone();
        rng.set_stream(stream_id);
        rng.set_word_pos(0);
        RngState {
            seed: self.seed,
            stream_id,
            rng,
            spare: None,
        }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    /// Uniform on the open interval (0, 1), 53 bits.
    pub fn uniform(&mut self) -> f64 {
        ((self.rng.next_u64() >> 11) as f64 + 0.5) * (1.0 / (1u64 << 53) as f64)
    }

    fn standard_normal(&mut self) -> f64 {
        if let Some(z) = self.spare.take() {
            return z;
        }
        loop {
            let u = 2.0 * self.uniform() - 1.0;
            let v = 2.0 * self.uniform() - 1.0;
            let s = u * u + v * v;
            if s >= 1.0 || s == 0.0 {
                continue;
            }
            let factor = (-2.0 * s.ln() / s).sqrt();
            self.spare = Some(v * factor);
            return u * factor;
        }
    }

    /// One draw from `N(mean, std_dev^2)`. Panics if `std_dev` is negative.
    pub fn gaussian(&mut self, mean: f64, std_dev: f64) -> f64 {
        assert!(std_dev >= 0.0, "std_dev must be non-negative");
        if std_dev == 0.0 {
            return mean;
        }
        mean + std_dev * self.standard_normal()
    }
}

pub fn gaussian(state: &mut RngState, mean: f64, std_dev: f64) -> f64 {
    state.gaussian(mean, std_dev)
}

/// Real symmetric matrix stored as its packed upper triangle (row-major).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SymMatrix {
    n: usize,
    entries: Vec<f64>,
}

impl SymMatrix {
    pub fn zeros(n: usize) -> Self {
        SymMatrix {
            n,
            entries: vec![0.0; n * (n + 1) / 2],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::diagonal(&vec![1.0; n])
    }

    pub fn diagonal(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m.set(i, i, d);
        }
        m
    }

    /// Builds from packed upper-triangular storage.
    pub fn from_packed(n: usize, entries: Vec<f64>) -> Result<Self> {
        if entries.len() != n * (n + 1) / 2 {
            return Err(Error::DimensionMismatch {
                expected: n * (n + 1) / 2,
                found: entries.len(),
            });
        }
        if entries.iter().any(|x| !x.is_finite()) {
            return Err(Error::domain("matrix entries must be finite"));
        }
        Ok(SymMatrix { n, entries })
    }

    /// Builds from a dense row-major square matrix, which must be symmetric.
    pub fn from_dense(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        let mut m = Self::zeros(n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: row.len(),
                });
            }
            for j in 0..n {
                if !row[j].is_finite() {
                    return Err(Error::domain("matrix entries must be finite"));
                }
                if j >= i {
                    m.set(i, j, row[j]);
                } else if row[j] != rows[j][i] {
                    return Err(Error::domain(format!(
                        "matrix is not symmetric at ({i},{j})"
                    )));
                }
            }
        }
        Ok(m)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn packed(&self) -> &[f64] {
        &self.entries
    }

    #[inline]
    fn index(&self, i: usize, j: usize) -> usize {
        let (r, c) = if i <= j { (i, j) } else { (j, i) };
        r * self.n - r * (r + 1) / 2 + c
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[self.index(i, j)]
    }

    /// Sets both `(i, j)` and `(j, i)`.
    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: f64) {
        let k = self.index(i, j);
        self.entries[k] = value;
    }

    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.get(i, j)).collect())
            .collect()
    }

    pub fn trace(&self) -> f64 {
        (0..self.n).map(|i| self.get(i, i)).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        let mut sum = 0.0;
        for i in 0..self.n {
            for j in i..self.n {
                let v = self.get(i, j);
                sum += if i == j { v * v } else { 2.0 * v * v };
            }
        }
        sum.sqrt()
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.n);
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.get(i, j) * x[j]).sum())
            .collect()
    }

    /// `P A Pᵀ` for the permutation sending coordinate `i` to `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        let mut out = Self::zeros(self.n);
        for i in 0..self.n {
            for j in i..self.n {
                out.set(perm[i], perm[j], self.get(i, j));
            }
        }
        out
    }
}

/// The input vector `b`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InputVector(Vec<f64>);

impl InputVector {
    pub fn new(components: Vec<f64>) -> Result<Self> {
        if components.iter().any(|x| !x.is_finite()) {
            return Err(Error::domain("input vector components must be finite"));
        }
        Ok(InputVector(components))
    }

    pub fn n(&self) -> usize {
        self.0.len()
    }

    pub fn components(&self) -> &[f64] {
        &self.0
    }

    pub fn norm(&self) -> f64 {
        self.0.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn scaled(&self, c: f64) -> Self {
        InputVector(self.0.iter().map(|x| c * x).collect())
    }

    pub fn permuted(&self, perm: &[usize]) -> Self {
        let mut out = vec![0.0; self.n()];
        for (i, &p) in perm.iter().enumerate() {
            out[p] = self.0[i];
        }
        InputVector(out)
    }
}

/// A GOE(n) draw: diagonal `N(0, 2)`, strict upper triangle `N(0, 1)`,
/// consumed row by row from the stream.
pub fn sample_goe(state: &mut RngState, n: usize) -> SymMatrix {
    let diag_sd = std::f64::consts::SQRT_2;
    let mut entries = Vec::with_capacity(n * (n + 1) / 2);
    for i in 0..n {
        for j in i..n {
            entries.push(state.gaussian(0.0, if i == j { diag_sd } else { 1.0 }));
        }
    }
    SymMatrix { n, entries }
}

/// `n` independent standard normal components.
pub fn sample_b(state: &mut RngState, n: usize) -> InputVector {
    InputVector((0..n).map(|_| state.gaussian(0.0, 1.0)).collect())
}

/// Flips `v` in place so its first component above [`NONZERO_THRESHOLD`]
/// is positive.
pub(crate) fn flip_to_upper(v: &mut [f64]) {
    if let Some(&first) = v.iter().find(|x| x.abs() > NONZERO_THRESHOLD) {
        if first < 0.0 {
            v.iter_mut().for_each(|x| *x = -*x);
        }
    }
}

/// Uniform point on `S^{n-1}`, or on the half sphere whose first nonzero
/// coordinate is positive when `hemisphere` is set.
pub fn sample_sphere(state: &mut RngState, n: usize, hemisphere: bool) -> Vec<f64> {
    assert!(n >= 1, "sphere dimension must be at least 1");
    loop {
        let mut v: Vec<f64> = (0..n).map(|_| state.gaussian(0.0, 1.0)).collect();
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if !(norm > 0.0) {
            continue;
        }
        v.iter_mut().for_each(|x| *x /= norm);
        if hemisphere {
            flip_to_upper(&mut v);
        }
        return v;
    }
}
