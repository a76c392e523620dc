//! Special functions and quadrature.
//!
//! Log-gamma and the regularized incomplete beta/gamma functions come from
//! `statrs` (Lanczos approximation, Lentz continued fraction with the
//! `x >= (a+1)/(a+b+2)` symmetry switch). This module pins their domains and
//! exposes them under the names the rest of the crate uses.

mod quad;

pub use quad::{integrate_interval, integrate_semi_infinite, QuadratureResult, Tolerance};

use crate::error::{Error, Result};
use statrs::function::{beta, gamma};
use std::f64::consts::PI;

/// `ln Γ(x)` for `x > 0`.
pub fn log_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::domain(format!("log_gamma requires x > 0, got {x}")));
    }
    Ok(gamma::ln_gamma(x))
}

/// Surface area `A_n = 2 π^{n/2} / Γ(n/2)` of the unit sphere `S^{n-1}` in `R^n`.
pub fn sphere_area(n: usize) -> Result<f64> {
    if n < 1 {
        return Err(Error::domain("sphere_area requires n >= 1"));
    }
    let half = n as f64 / 2.0;
    Ok((2f64.ln() + half * PI.ln() - gamma::ln_gamma(half)).exp())
}

/// Regularized incomplete beta function `I_x(a, b)`.
pub fn reg_incomplete_beta(x: f64, a: f64, b: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::domain(format!(
            "incomplete beta requires x in [0,1], got {x}"
        )));
    }
    if !(a > 0.0) || !(b > 0.0) {
        return Err(Error::domain(format!(
            "incomplete beta requires a, b > 0, got a={a}, b={b}"
        )));
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    if x == 1.0 {
        return Ok(1.0);
    }
    beta::checked_beta_reg(a, b, x)
        .map(|v| v.clamp(0.0, 1.0))
        .map_err(|e| Error::domain(e.to_string()))
}

/// Regularized lower incomplete gamma function `P(a, x)`.
///
/// `P(n/2, r/2)` is the chi-squared CDF with `n` degrees of freedom at `r`.
pub fn reg_lower_gamma(a: f64, x: f64) -> Result<f64> {
    if !(a > 0.0) || !(x >= 0.0) {
        return Err(Error::domain(format!(
            "lower incomplete gamma requires a > 0 and x >= 0, got a={a}, x={x}"
        )));
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    if x.is_infinite() {
        return Ok(1.0);
    }
    gamma::checked_gamma_lr(a, x)
        .map(|v| v.clamp(0.0, 1.0))
        .map_err(|e| Error::domain(e.to_string()))
}

/// Log of the chi-squared density with `dof` degrees of freedom, `r > 0`.
pub(crate) fn ln_chi2_pdf(r: f64, dof: usize) -> f64 {
    let half = dof as f64 / 2.0;
    let power = if dof == 2 { 0.0 } else { (half - 1.0) * r.ln() };
    power - r / 2.0 - half * std::f64::consts::LN_2 - gamma::ln_gamma(half)
}
