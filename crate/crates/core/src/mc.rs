//! Monte Carlo estimators for `P_ε`, `P_{ε,b}` and spherical cap measures.
//!
//! Trial `i` draws from ChaCha streams derived from `(seed, i)` only, so the
//! success count does not depend on how trials are split across workers.
//! Workers own contiguous blocks of trial indices and their counters are
//! summed at the end.

use crate::control::coupling_stat;
use crate::error::{Error, Result};
use crate::numerics::Tolerance;
use crate::sampling::{sample_b, sample_goe, sample_sphere, InputVector, RngState};
use crate::symeig::eig_symmetric;
use crate::theory::{p_eps_b_bound, p_eps_bound_integral, p_eps_bound_poly, p_eps_exact_n2};
use serde::{Deserialize, Serialize};

pub const MIN_TRIALS: u64 = 100;
pub const DEFAULT_TRIALS: u64 = 100_000;

/// Two-sided 95% normal quantile.
const Z95: f64 = 1.959963984540054;

/// Largest tolerated fraction of resampled trials.
const MAX_FAILURE_FRACTION: f64 = 1e-4;
const MAX_ATTEMPTS: u64 = 128;

const PURPOSE_MATRIX: u64 = 0;
const PURPOSE_INPUT: u64 = 1;

/// Stream id for one draw: trial index in the high 56 bits, then a 7-bit
/// attempt counter and a 1-bit purpose tag.
pub fn trial_stream(trial: u64, attempt: u64, purpose: u64) -> u64 {
    debug_assert!(trial < 1 << 56 && attempt < MAX_ATTEMPTS && purpose < 2);
    (trial << 8) | (attempt << 1) | purpose
}

pub fn default_workers() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub p_hat: f64,
    pub successes: u64,
    pub trials: u64,
    pub std_err: f64,
    /// Wilson score interval.
    pub ci95_lo: f64,
    pub ci95_hi: f64,
    pub seed: u64,
    /// Trials redrawn after an eigensolver failure.
    pub resampled: u64,
}

impl Estimate {
    pub fn from_counts(successes: u64, trials: u64, seed: u64, resampled: u64) -> Self {
        assert!(trials > 0 && successes <= trials);
        let nf = trials as f64;
        let p = successes as f64 / nf;
        let std_err = (p * (1.0 - p) / nf).sqrt();
        let z2 = Z95 * Z95;
        let denom = 1.0 + z2 / nf;
        let center = (p + z2 / (2.0 * nf)) / denom;
        let half = Z95 / denom * (p * (1.0 - p) / nf + z2 / (4.0 * nf * nf)).sqrt();
        Estimate {
            p_hat: p,
            successes,
            trials,
            std_err,
            ci95_lo: (center - half).max(0.0).min(p),
            ci95_hi: (center + half).min(1.0).max(p),
            seed,
            resampled,
        }
    }

    pub fn contains(&self, value: f64) -> bool {
        self.ci95_lo <= value && value <= self.ci95_hi
    }
}

fn check_trials(trials: u64) -> Result<()> {
    if trials < MIN_TRIALS {
        return Err(Error::domain(format!(
            "at least {MIN_TRIALS} trials are required, got {trials}"
        )));
    }
    Ok(())
}

fn check_common(n: usize, eps: f64, trials: u64) -> Result<()> {
    if n < 2 {
        return Err(Error::domain(format!(
            "dimension must be at least 2, got {n}"
        )));
    }
    if !(eps >= 0.0) {
        return Err(Error::domain(format!(
            "epsilon must be non-negative, got {eps}"
        )));
    }
    check_trials(trials)
}

#[derive(Default)]
struct Tally {
    successes: u64,
    resampled: u64,
}

/// Runs `trial(base, index, attempt)` for every index, retrying with the
/// next attempt counter when the trial reports a numerical failure.
fn run_trials<F>(trials: u64, seed: u64, workers: usize, trial: F) -> Result<Estimate>
where
    F: Fn(&RngState, u64, u64) -> Result<bool> + Sync,
{
    let workers = if workers == 0 {
        default_workers()
    } else {
        workers
    };
    let workers = (workers as u64).min(trials).max(1);
    let base = RngState::new(seed, 0);
    let block = trials.div_ceil(workers);

    let run_block = |start: u64, end: u64| -> Result<Tally> {
        let mut tally = Tally::default();
        for index in start..end {
            let mut attempt = 0;
            loop {
                match trial(&base, index, attempt) {
                    Ok(hit) => {
                        tally.successes += hit as u64;
                        break;
                    }
                    Err(e) if e.is_numerical() && attempt + 1 < MAX_ATTEMPTS => {
                        tally.resampled += 1;
                        attempt += 1;
                    }
                    Err(e) => return Err(e),
                }
            }
        }
        Ok(tally)
    };

    let tallies: Vec<Result<Tally>> = if workers == 1 {
        vec![run_block(0, trials)]
    } else {
        std::thread::scope(|scope| {
            let handles: Vec<_> = (0..workers)
                .map(|w| {
                    let start = (w * block).min(trials);
                    let end = ((w + 1) * block).min(trials);
                    let run_block = &run_block;
                    scope.spawn(move || run_block(start, end))
                })
                .collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("Monte Carlo worker panicked"))
                .collect()
        })
    };

    let mut total = Tally::default();
    for t in tallies {
        let t = t?;
        total.successes += t.successes;
        total.resampled += t.resampled;
    }
    if total.resampled as f64 > MAX_FAILURE_FRACTION * trials as f64 {
        return Err(Error::TooManyFailures {
            failures: total.resampled,
            trials,
        });
    }
    Ok(Estimate::from_counts(
        total.successes,
        trials,
        seed,
        total.resampled,
    ))
}

/// Estimates `P_ε = P(min_i |<v_i, b>| < ε)` with `A ~ GOE(n)`, `b ~ N(0, I_n)`.
///
/// `workers = 0` uses every available core.
pub fn estimate_p_eps(
    n: usize,
    eps: f64,
    trials: u64,
    seed: u64,
    workers: usize,
) -> Result<Estimate> {
    check_common(n, eps, trials)?;
    run_trials(trials, seed, workers, |base, index, attempt| {
        let mut rng_a = base.fork(trial_stream(index, attempt, PURPOSE_MATRIX));
        let mut rng_b = base.fork(trial_stream(index, attempt, PURPOSE_INPUT));
        let a = sample_goe(&mut rng_a, n);
        let b = sample_b(&mut rng_b, n);
        let decomp = eig_symmetric(&a)?;
        Ok(coupling_stat(&decomp, &b)?.z < eps)
    })
}

/// Estimates `P_{ε,b}` for a fixed nonzero `b`; only `A` is random.
pub fn estimate_p_eps_b(
    n: usize,
    eps: f64,
    b: &InputVector,
    trials: u64,
    seed: u64,
    workers: usize,
) -> Result<Estimate> {
    check_common(n, eps, trials)?;
    if b.n() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: b.n(),
        });
    }
    if !(b.norm() > 0.0) {
        return Err(Error::domain("b must be nonzero"));
    }
    run_trials(trials, seed, workers, |base, index, attempt| {
        let mut rng = base.fork(trial_stream(index, attempt, PURPOSE_MATRIX));
        let a = sample_goe(&mut rng, n);
        let decomp = eig_symmetric(&a)?;
        Ok(coupling_stat(&decomp, b)?.z < eps)
    })
}

/// Estimates the normalized measure of `{θ ∈ S^{n-1} : θ₁ ≥ height}`.
pub fn estimate_cap_measure(n: usize, height: f64, trials: u64, seed: u64) -> Result<Estimate> {
    estimate_cap_measure_with(n, height, trials, seed, 0)
}

pub fn estimate_cap_measure_with(
    n: usize,
    height: f64,
    trials: u64,
    seed: u64,
    workers: usize,
) -> Result<Estimate> {
    if n < 2 {
        return Err(Error::domain(format!(
            "dimension must be at least 2, got {n}"
        )));
    }
    if !(0.0..=1.0).contains(&height) {
        return Err(Error::domain(format!(
            "cap height must lie in [0,1], got {height}"
        )));
    }
    check_trials(trials)?;
    run_trials(trials, seed, workers, |base, index, _| {
        let mut rng = base.fork(trial_stream(index, 0, PURPOSE_MATRIX));
        Ok(sample_sphere(&mut rng, n, false)[0] >= height)
    })
}

/// One `(n, ε)` grid point of a sweep.
///
/// Bound columns are clamped to `[0, 1]`; the `raw_*` fields keep the
/// formula values. `bound_per_b` is evaluated at `‖b‖ = √n`, the root mean
/// square norm of `b`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub n: usize,
    pub epsilon: f64,
    pub estimate: Option<f64>,
    pub std_err: Option<f64>,
    pub ci_lo: Option<f64>,
    pub ci_hi: Option<f64>,
    pub bound_poly: f64,
    pub bound_integral: f64,
    pub bound_per_b: f64,
    pub exact_n2: Option<f64>,
    pub trials: Option<u64>,
    pub raw_bound_poly: f64,
    pub raw_bound_integral: f64,
    pub raw_bound_per_b: f64,
}

/// Evaluates every bound, and an estimate when `trials > 0`, on the grid
/// `n_list × eps_grid` (n-major order). Every estimate uses the same seed.
pub fn sweep(n_list: &[usize], eps_grid: &[f64], trials: u64, seed: u64) -> Result<Vec<SweepRow>> {
    sweep_with(n_list, eps_grid, trials, seed, 0, &Tolerance::default())
}

pub fn sweep_with(
    n_list: &[usize],
    eps_grid: &[f64],
    trials: u64,
    seed: u64,
    workers: usize,
    tol: &Tolerance,
) -> Result<Vec<SweepRow>> {
    if n_list.is_empty() || eps_grid.is_empty() {
        return Err(Error::domain(
            "sweep needs a nonempty n list and epsilon grid",
        ));
    }
    if trials > 0 {
        check_trials(trials)?;
    }
    let mut rows = Vec::with_capacity(n_list.len() * eps_grid.len());
    for &n in n_list {
        for &eps in eps_grid {
            let poly = p_eps_bound_poly(eps, n)?;
            let integral = p_eps_bound_integral(eps, n, tol)?;
            let per_b = p_eps_b_bound(eps, (n as f64).sqrt(), n)?;
            let exact_n2 = if n == 2 {
                Some(p_eps_exact_n2(eps, tol)?.clamped)
            } else {
                None
            };
            let est = if trials > 0 {
                Some(estimate_p_eps(n, eps, trials, seed, workers)?)
            } else {
                None
            };
            rows.push(SweepRow {
                n,
                epsilon: eps,
                estimate: est.map(|e| e.p_hat),
                std_err: est.map(|e| e.std_err),
                ci_lo: est.map(|e| e.ci95_lo),
                ci_hi: est.map(|e| e.ci95_hi),
                bound_poly: poly.clamped,
                bound_integral: integral.clamped,
                bound_per_b: per_b.clamped,
                exact_n2,
                trials: est.map(|e| e.trials),
                raw_bound_poly: poly.raw,
                raw_bound_integral: integral.raw,
                raw_bound_per_b: per_b.raw,
            });
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wilson_interval_invariants() {
        for &(s, t) in &[(0u64, 100u64), (100, 100), (37, 1000), (1, 100_000)] {
            let e = Estimate::from_counts(s, t, 0, 0);
            assert_eq!(e.p_hat, s as f64 / t as f64);
            assert!(e.ci95_lo <= e.p_hat && e.p_hat <= e.ci95_hi);
            assert!(e.ci95_lo >= 0.0 && e.ci95_hi <= 1.0);
            assert!((e.std_err - (e.p_hat * (1.0 - e.p_hat) / t as f64).sqrt()).abs() < 1e-18);
        }
        // zero successes still gives a nondegenerate upper limit
        let e = Estimate::from_counts(0, 1000, 0, 0);
        assert_eq!(e.ci95_lo, 0.0);
        assert!(e.ci95_hi > 0.003 && e.ci95_hi < 0.004);
    }

    #[test]
    fn zero_epsilon_never_succeeds() {
        let e = estimate_p_eps(3, 0.0, 1000, 7, 2).unwrap();
        assert_eq!(e.successes, 0);
    }

    #[test]
    fn huge_epsilon_always_succeeds() {
        let e = estimate_p_eps(3, 12.0, 2000, 7, 2).unwrap();
        assert_eq!(e.p_hat, 1.0);
    }

    #[test]
    fn argument_validation() {
        assert!(estimate_p_eps(1, 0.1, 1000, 0, 1).is_err());
        assert!(estimate_p_eps(2, -0.1, 1000, 0, 1).is_err());
        assert!(estimate_p_eps(2, 0.1, 99, 0, 1).is_err());
        let zero = InputVector::new(vec![0.0, 0.0]).unwrap();
        assert!(estimate_p_eps_b(2, 0.1, &zero, 1000, 0, 1).is_err());
        let short = InputVector::new(vec![1.0]).unwrap();
        assert!(estimate_p_eps_b(2, 0.1, &short, 1000, 0, 1).is_err());
        assert!(estimate_cap_measure(3, 1.5, 1000, 0).is_err());
        assert!(sweep(&[], &[0.1], 0, 0).is_err());
    }

    #[test]
    fn worker_count_does_not_change_counts() {
        let one = estimate_p_eps(4, 0.2, 3001, 99, 1).unwrap();
        for w in [2, 3, 8, 64] {
            let many = estimate_p_eps(4, 0.2, 3001, 99, w).unwrap();
            assert_eq!(one, many, "workers={w}");
        }
    }

    #[test]
    fn cap_small_cases() {
        let e = estimate_cap_measure(3, 0.0, 20_000, 5).unwrap();
        assert!((e.p_hat - 0.5).abs() < 3.0 * 0.5 / (20_000f64).sqrt());
        assert_eq!(estimate_cap_measure(3, 1.0, 1000, 5).unwrap().successes, 0);
    }

    #[test]
    fn sweep_shape() {
        let rows = sweep(&[2], &[0.0], 0, 1).unwrap();
        assert_eq!(rows.len(), 1);
        let r = &rows[0];
        assert_eq!(
            (r.bound_poly, r.bound_integral, r.bound_per_b),
            (0.0, 0.0, 0.0)
        );
        assert_eq!(r.exact_n2, Some(0.0));
        assert!(r.estimate.is_none() && r.trials.is_none());
        let rows = sweep(&[2, 3, 5], &[0.0, 0.1, 0.2, 0.3], 0, 1).unwrap();
        assert_eq!(rows.len(), 12);
        assert!(rows.iter().all(|r| r.exact_n2.is_some() == (r.n == 2)));
    }
}
