//! Epsilon-uncontrollability of random single-input linear systems
//! `dx/dt = A x + b u` with `A` drawn from the Gaussian orthogonal ensemble
//! and `b` a standard Gaussian vector.
//!
//! The crate is split the same way the computation is:
//!
//! * [`numerics`]: log-gamma, sphere areas, incomplete beta/gamma and
//!   adaptive Gauss-Kronrod quadrature on semi-infinite intervals.
//! * [`sampling`]: seedable ChaCha20 streams, Gaussian draws, GOE matrices,
//!   input vectors and uniform sphere points.
//! * [`symeig`]: cyclic Jacobi eigensolver with sign-normalized eigenvectors.
//! * [`control`]: the coupling statistic `z = min_i |<v_i, b>|`, the
//!   eigenvector controllability test and the Kalman rank test.
//! * [`theory`]: the closed forms for `n = 2` and the bounds for general `n`.
//! * [`mc`]: parallel, worker-count independent Monte Carlo estimators.

// `!(x > 0.0)` is used on purpose so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod control;
pub mod error;
pub mod mc;
pub mod numerics;
pub mod report;
pub mod sampling;
pub mod symeig;
pub mod theory;

pub use control::{coupling_stat, is_controllable_eig, kalman_rank, CouplingStat, RandomSystem};
pub use error::{Error, Result};
pub use mc::{estimate_cap_measure, estimate_p_eps, estimate_p_eps_b, sweep, Estimate, SweepRow};
pub use numerics::{QuadratureResult, Tolerance};
pub use sampling::{InputVector, RngState, SymMatrix};
pub use symeig::{eig_symmetric, sign_normalize, EigenDecomposition, EigenVectors, JacobiOptions};
pub use theory::{BoundKind, BoundValue, CapSpec};
