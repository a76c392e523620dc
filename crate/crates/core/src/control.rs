//! Controllability of `dx/dt = A x + b u`.
//!
//! The system is uncontrollable exactly when some eigenvector of `A` is
//! orthogonal to `b`, so the continuous statistic `z = min_i |<v_i, b>|`
//! carries all the information; thresholds only enter at the API edge.

use crate::error::{Error, Result};
use crate::sampling::{InputVector, SymMatrix};
use crate::symeig::{eig_symmetric, EigenDecomposition};
use serde::{Deserialize, Serialize};

/// Default relative threshold: `zero_tol = DEFAULT_ZERO_TOL · ‖b‖₂`.
pub const DEFAULT_ZERO_TOL: f64 = 1e-8;
pub const DEFAULT_RANK_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RandomSystem {
    a: SymMatrix,
    b: InputVector,
}

impl RandomSystem {
    pub fn new(a: SymMatrix, b: InputVector) -> Result<Self> {
        check_dims(a.n(), b.n())?;
        Ok(RandomSystem { a, b })
    }

    pub fn state_matrix(&self) -> &SymMatrix {
        &self.a
    }

    pub fn input(&self) -> &InputVector {
        &self.b
    }

    pub fn coupling(&self) -> Result<CouplingStat> {
        coupling_stat(&eig_symmetric(&self.a)?, &self.b)
    }

    /// Eigenvector test with the default tolerance `1e-8 · ‖b‖₂`.
    pub fn is_controllable(&self) -> Result<bool> {
        let d = eig_symmetric(&self.a)?;
        is_controllable_eig(&d, &self.b, DEFAULT_ZERO_TOL * self.b.norm())
    }

    pub fn kalman_rank(&self) -> Result<usize> {
        kalman_rank(&self.a, &self.b, DEFAULT_RANK_TOL)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CouplingStat {
    pub z: f64,
    pub argmin_index: usize,
}

fn check_dims(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(Error::DimensionMismatch { expected, found });
    }
    Ok(())
}

/// `z = min_i |<v_i, b>|`, ties resolved to the lowest index.
pub fn coupling_stat(decomp: &EigenDecomposition, b: &InputVector) -> Result<CouplingStat> {
    check_dims(decomp.n(), b.n())?;
    let mut best = CouplingStat {
        z: f64::INFINITY,
        argmin_index: 0,
    };
    for (i, v) in decomp.eigenvectors.columns().enumerate() {
        let z = v
            .iter()
            .zip(b.components())
            .map(|(x, y)| x * y)
            .sum::<f64>()
            .abs();
        if z < best.z {
            best = CouplingStat { z, argmin_index: i };
        }
    }
    Ok(best)
}

/// True iff no eigenvector is within `zero_tol` of orthogonal to `b`.
pub fn is_controllable_eig(
    decomp: &EigenDecomposition,
    b: &InputVector,
    zero_tol: f64,
) -> Result<bool> {
    if !(zero_tol > 0.0) {
        if b.norm() == 0.0 {
            return Ok(false);
        }
        return Err(Error::domain("zero_tol must be positive"));
    }
    Ok(coupling_stat(decomp, b)?.z > zero_tol)
}

/// Numerical rank of the Kalman matrix `[b, Ab, …, A^{n-1} b]`.
///
/// Columns are built by repeated matrix-vector products and scaled to unit
/// length, then reduced by Householder QR with column pivoting. Pivots at
/// or below `rank_tol` times the first pivot do not count.
pub fn kalman_rank(a: &SymMatrix, b: &InputVector, rank_tol: f64) -> Result<usize> {
    let n = a.n();
    check_dims(n, b.n())?;
    if n == 0 {
        return Ok(0);
    }
    let mut cols: Vec<Vec<f64>> = Vec::with_capacity(n);
    let mut current = b.components().to_vec();
    for k in 0..n {
        if k > 0 {
            current = a.mul_vec(&current);
        }
        let norm = current.iter().map(|x| x * x).sum::<f64>().sqrt();
        let col = if norm > 0.0 && norm.is_finite() {
            current.iter().map(|x| x / norm).collect()
        } else {
            vec![0.0; n]
        };
        // rescale the recurrence as well so high powers cannot overflow
        if norm > 0.0 && norm.is_finite() {
            current.iter_mut().for_each(|x| *x /= norm);
        }
        cols.push(col);
    }
    Ok(pivoted_qr_rank(cols, rank_tol))
}

fn pivoted_qr_rank(mut cols: Vec<Vec<f64>>, rank_tol: f64) -> usize {
    let m = cols.first().map_or(0, Vec::len);
    let ncols = cols.len();
    let mut first_pivot = 0.0;
    let mut rank = 0;
    for step in 0..ncols.min(m) {
        // pick the remaining column with the largest trailing norm
        let trailing = |c: &Vec<f64>| c[step..].iter().map(|x| x * x).sum::<f64>().sqrt();
        let (best, norm) = (step..ncols)
            .map(|j| (j, trailing(&cols[j])))
            .fold((step, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        if step == 0 {
            first_pivot = norm;
            if first_pivot == 0.0 {
                return 0;
            }
        }
        if norm <= rank_tol * first_pivot {
            break;
        }
        rank += 1;
        cols.swap(step, best);
        // Householder reflector zeroing cols[step][step+1..]
        let x0 = cols[step][step];
        let alpha = if x0 >= 0.0 { -norm } else { norm };
        let mut u: Vec<f64> = cols[step][step..].to_vec();
        u[0] -= alpha;
        let unorm2: f64 = u.iter().map(|x| x * x).sum();
        if unorm2 == 0.0 {
            continue;
        }
        for col in cols.iter_mut().skip(step) {
            let dot: f64 = u.iter().zip(&col[step..]).map(|(a, b)| a * b).sum();
            let f = 2.0 * dot / unorm2;
            for (c, ui) in col[step..].iter_mut().zip(&u) {
                *c -= f * ui;
            }
        }
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(v: &[f64]) -> InputVector {
        InputVector::new(v.to_vec()).unwrap()
    }

    #[test]
    fn coupling_examples() {
        let a = SymMatrix::diagonal(&[1.0, 2.0]);
        let d = eig_symmetric(&a).unwrap();
        let s = coupling_stat(&d, &b(&[1.0, 1.0])).unwrap();
        assert_eq!(s.z, 1.0);
        assert_eq!(s.argmin_index, 0);
        let s = coupling_stat(&d, &b(&[0.0, 1.0])).unwrap();
        assert_eq!(s.z, 0.0);
        // ascending order puts e₁ (eigenvalue 1) first
        assert_eq!(s.argmin_index, 0);
    }

    #[test]
    fn coupling_ignores_eigenvector_signs() {
        let a = SymMatrix::from_dense(&[vec![1.0, 0.5], vec![0.5, -0.3]]).unwrap();
        let mut d = eig_symmetric(&a).unwrap();
        let input = b(&[0.3, -1.2]);
        let before = coupling_stat(&d, &input).unwrap();
        d.eigenvectors
            .column_mut(0)
            .iter_mut()
            .for_each(|x| *x = -*x);
        let after = coupling_stat(&d, &input).unwrap();
        assert_eq!(before, after);
    }

    #[test]
    fn dimension_mismatch() {
        let d = eig_symmetric(&SymMatrix::identity(3)).unwrap();
        assert!(matches!(
            coupling_stat(&d, &b(&[1.0, 2.0])),
            Err(Error::DimensionMismatch {
                expected: 3,
                found: 2
            })
        ));
        assert!(kalman_rank(&SymMatrix::identity(3), &b(&[1.0]), 1e-8).is_err());
        assert!(RandomSystem::new(SymMatrix::identity(2), b(&[1.0])).is_err());
    }

    #[test]
    fn eigen_criterion_examples() {
        let a = SymMatrix::diagonal(&[1.0, 2.0]);
        let d = eig_symmetric(&a).unwrap();
        assert!(is_controllable_eig(&d, &b(&[1.0, 1.0]), 1e-9).unwrap());
        assert!(!is_controllable_eig(&d, &b(&[0.0, 1.0]), 1e-9).unwrap());
        assert!(!is_controllable_eig(&d, &b(&[0.0, 0.0]), 1e-9).unwrap());
    }

    #[test]
    fn kalman_examples() {
        let a = SymMatrix::diagonal(&[1.0, 2.0]);
        assert_eq!(kalman_rank(&a, &b(&[1.0, 1.0]), 1e-8).unwrap(), 2);
        assert_eq!(kalman_rank(&a, &b(&[0.0, 1.0]), 1e-8).unwrap(), 1);
        let i3 = SymMatrix::identity(3);
        assert_eq!(kalman_rank(&i3, &b(&[0.2, -1.0, 3.0]), 1e-8).unwrap(), 1);
        assert_eq!(kalman_rank(&i3, &b(&[0.0, 0.0, 0.0]), 1e-8).unwrap(), 0);
    }

    #[test]
    fn kalman_detects_two_missing_modes() {
        let a = SymMatrix::diagonal(&[-1.0, 0.5, 2.0, 3.0]);
        assert_eq!(kalman_rank(&a, &b(&[1.0, 0.0, 0.0, 1.0]), 1e-8).unwrap(), 2);
        assert_eq!(kalman_rank(&a, &b(&[1.0, 2.0, 3.0, 4.0]), 1e-8).unwrap(), 4);
    }

    #[test]
    fn system_wrapper() {
        let sys = RandomSystem::new(SymMatrix::diagonal(&[1.0, 2.0]), b(&[1.0, 1.0])).unwrap();
        assert!(sys.is_controllable().unwrap());
        assert_eq!(sys.kalman_rank().unwrap(), 2);
        assert_eq!(sys.coupling().unwrap().z, 1.0);
    }
}
