//! Closed forms and bounds for the ε-uncontrollability `P_ε`.
//!
//! For `n = 2` both `P_{ε,b}` and `P_ε` are known exactly. For general `n`
//! a union bound over the eigenvectors, integrated against the chi-squared
//! law of `‖b‖²`, gives an upper bound whose binomial expansion is a
//! polynomial of degree `n - 1` in `ε`. The spherical cap estimates those
//! bounds rest on are here too, with an exact cap measure to check them.

use crate::error::{Error, Result};
use crate::numerics::{
    integrate_semi_infinite, ln_chi2_pdf, log_gamma, reg_incomplete_beta, reg_lower_gamma,
    sphere_area, Tolerance,
};
use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_1_SQRT_2, PI, SQRT_2};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundKind {
    ExactN2,
    PerBExactN2,
    UnionBoundPerB,
    IntegralBound,
    PolyBound,
    CapUpper,
    CapLower,
}

impl BoundKind {
    pub fn label(self) -> &'static str {
        match self {
            BoundKind::ExactN2 => "exact_n2",
            BoundKind::PerBExactN2 => "per_b_exact_n2",
            BoundKind::UnionBoundPerB => "union_bound_per_b",
            BoundKind::IntegralBound => "integral_bound",
            BoundKind::PolyBound => "poly_bound",
            BoundKind::CapUpper => "cap_upper",
            BoundKind::CapLower => "cap_lower",
        }
    }
}

impl std::fmt::Display for BoundKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

/// A formula value together with its probability-clamped version.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundValue {
    pub raw: f64,
    pub clamped: f64,
    pub kind: BoundKind,
}

impl BoundValue {
    pub fn new(raw: f64, kind: BoundKind) -> Self {
        BoundValue {
            raw,
            clamped: raw.clamp(0.0, 1.0),
            kind,
        }
    }
}

/// A spherical cap `{θ ∈ S^{n-1} : θ₁ ≥ height}`. Its chord radius `r`
/// (distance from the pole to the rim) satisfies `r² = 2 (1 - height)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CapSpec {
    pub n: usize,
    pub height: f64,
    pub chord_radius: f64,
}

impl CapSpec {
    /// `height` in `[0, 1)`.
    pub fn from_height(n: usize, height: f64) -> Result<Self> {
        if n < 1 {
            return Err(Error::domain("cap dimension must be at least 1"));
        }
        if !(0.0..1.0).contains(&height) {
            return Err(Error::domain(format!(
                "cap height must lie in [0,1), got {height}"
            )));
        }
        Ok(CapSpec {
            n,
            height,
            chord_radius: (2.0 * (1.0 - height)).sqrt(),
        })
    }

    /// `chord_radius` in `[0, 2]`. Radii above `√2` describe caps larger
    /// than a hemisphere, whose derived height is negative.
    pub fn from_chord_radius(n: usize, chord_radius: f64) -> Result<Self> {
        if n < 1 {
            return Err(Error::domain("cap dimension must be at least 1"));
        }
        if !(0.0..=2.0).contains(&chord_radius) {
            return Err(Error::domain(format!(
                "chord radius must lie in [0,2], got {chord_radius}"
            )));
        }
        Ok(CapSpec {
            n,
            height: 1.0 - 0.5 * chord_radius * chord_radius,
            chord_radius,
        })
    }
}

fn check_eps(eps: f64) -> Result<()> {
    if !(eps >= 0.0) {
        return Err(Error::domain(format!(
            "epsilon must be non-negative, got {eps}"
        )));
    }
    Ok(())
}

fn check_n(n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::domain(format!(
            "dimension must be at least 2, got {n}"
        )));
    }
    Ok(())
}

fn check_b_norm(b_norm: f64) -> Result<()> {
    if !(b_norm > 0.0) || !b_norm.is_finite() {
        return Err(Error::domain(format!(
            "b_norm must be positive, got {b_norm}"
        )));
    }
    Ok(())
}

/// Clamps an arcsin argument that overshot `[-1, 1]` by rounding.
fn clip_unit(x: f64) -> f64 {
    const SLACK: f64 = 1e-14;
    if x > 1.0 && x <= 1.0 + SLACK {
        1.0
    } else if (-1.0 - SLACK..-1.0).contains(&x) {
        -1.0
    } else {
        x
    }
}

/// `1 - (1 - t)^m` without cancellation for small `t`.
fn one_minus_pow(t: f64, m: f64) -> f64 {
    if t >= 1.0 {
        return 1.0;
    }
    -(m * (-t).ln_1p()).exp_m1()
}

/// Exact `P_{ε,b}` for `n = 2`: `(4/π) asin(ε/‖b‖)` below `ε/‖b‖ = √2/2`,
/// and 1 from there on.
pub fn p_eps_b_exact_n2(eps: f64, b_norm: f64) -> Result<BoundValue> {
    check_eps(eps)?;
    check_b_norm(b_norm)?;
    let t = eps / b_norm;
    let raw = if t < FRAC_1_SQRT_2 {
        4.0 / PI * clip_unit(t).asin()
    } else {
        1.0
    };
    Ok(BoundValue::new(raw, BoundKind::PerBExactN2))
}

/// `∫_{2ε²}^∞ asin(ε/√r) e^{-r/2} dr`, shared by both forms of the n = 2 result.
fn arcsin_tail_integral(eps: f64, abs_tol: f64, tol: &Tolerance) -> Result<f64> {
    let inner = Tolerance { abs_tol, ..*tol };
    let f = |r: f64| clip_unit(eps / r.sqrt()).asin() * (-0.5 * r).exp();
    Ok(integrate_semi_infinite(f, 2.0 * eps * eps, &inner)?.value)
}

/// Exact `P_ε` for `n = 2`:
/// `(1 - e^{-ε²}) + (2/π) ∫_{2ε²}^∞ asin(ε/√r) e^{-r/2} dr`.
///
/// The first term is the probability that `‖b‖² ≤ 2ε²`, where `P_{ε,b} = 1`.
pub fn p_eps_exact_n2(eps: f64, tol: &Tolerance) -> Result<BoundValue> {
    check_eps(eps)?;
    if eps == 0.0 {
        return Ok(BoundValue::new(0.0, BoundKind::ExactN2));
    }
    let head = -(-eps * eps).exp_m1();
    let tail = arcsin_tail_integral(eps, tol.abs_tol * PI / 2.0, tol)?;
    Ok(BoundValue::new(head + 2.0 / PI * tail, BoundKind::ExactN2))
}

/// The misprinted variant `1 - e^{2ε²} + (4/(√2 π)) ∫_{2ε²}^∞ asin(ε/√x) e^{-x/2} dx`.
///
/// Kept only so it can be compared against simulation; it is not a
/// probability (it is negative for moderate ε).
pub fn p_eps_printed_statement_n2(eps: f64, tol: &Tolerance) -> Result<f64> {
    check_eps(eps)?;
    if eps == 0.0 {
        return Ok(0.0);
    }
    let coeff = 4.0 / (SQRT_2 * PI);
    let tail = arcsin_tail_integral(eps, tol.abs_tol / coeff, tol)?;
    Ok(-(2.0 * eps * eps).exp_m1() + coeff * tail)
}

/// Union bound for fixed `b`: `P_{ε,b} ≤ n (1 - (1 - t)^{n-1})`, `t = min(1, ε/‖b‖)`.
pub fn p_eps_b_bound(eps: f64, b_norm: f64, n: usize) -> Result<BoundValue> {
    check_eps(eps)?;
    check_b_norm(b_norm)?;
    check_n(n)?;
    let t = (eps / b_norm).min(1.0);
    let raw = n as f64 * one_minus_pow(t, (n - 1) as f64);
    Ok(BoundValue::new(raw, BoundKind::UnionBoundPerB))
}

/// The per-b bound averaged over `‖b‖² ~ χ²(n)`:
/// `E[min(1, n (1 - (max(0, 1 - ε/‖b‖))^{n-1}))]`.
///
/// The per-b factor `n (1 - (1 - ε/√r)^{n-1})` decreases in `r` and crosses
/// 1 at `r* = (ε / (1 - (1 - 1/n)^{1/(n-1)}))²`, so the integral splits into
/// the chi-squared mass below `r*` plus a smooth tail integral.
pub fn p_eps_bound_integral(eps: f64, n: usize, tol: &Tolerance) -> Result<BoundValue> {
    check_eps(eps)?;
    check_n(n)?;
    if eps == 0.0 {
        return Ok(BoundValue::new(0.0, BoundKind::IntegralBound));
    }
    let nf = n as f64;
    let m = (n - 1) as f64;
    let c = ((-1.0 / nf).ln_1p() / m).exp();
    let crossover = (eps / (1.0 - c)).powi(2);
    let head = reg_lower_gamma(nf / 2.0, crossover / 2.0)?;
    let integrand = |r: f64| {
        let t = eps / r.sqrt();
        nf * one_minus_pow(t, m).min(1.0 / nf) * ln_chi2_pdf(r, n).exp()
    };
    let tail = integrate_semi_infinite(integrand, crossover, tol)?.value;
    Ok(BoundValue::new(head + tail, BoundKind::IntegralBound))
}

/// Signed coefficients `c_k`, `k = 1..n-1`, of the polynomial bound
/// `Σ c_k ε^k`, `c_k = (-1)^{k+1} C(n-1, k) n Γ((n-k)/2) / (2^{k/2} Γ(n/2))`.
pub fn poly_coefficients(n: usize) -> Result<Vec<f64>> {
    check_n(n)?;
    let nf = n as f64;
    let ln_gamma_half_n = log_gamma(nf / 2.0)?;
    let ln_fact_n1 = log_gamma(nf)?;
    (1..n)
        .map(|k| {
            let kf = k as f64;
            let ln_binom = ln_fact_n1 - log_gamma(kf + 1.0)? - log_gamma(nf - kf)?;
            let ln_mag = ln_binom + nf.ln() + log_gamma((nf - kf) / 2.0)?
                - 0.5 * kf * std::f64::consts::LN_2
                - ln_gamma_half_n;
            let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
            Ok(sign * ln_mag.exp())
        })
        .collect()
}

/// The polynomial bound of degree `n - 1` in `ε`.
pub fn p_eps_bound_poly(eps: f64, n: usize) -> Result<BoundValue> {
    check_eps(eps)?;
    let coeffs = poly_coefficients(n)?;
    if eps == 0.0 {
        return Ok(BoundValue::new(0.0, BoundKind::PolyBound));
    }
    let raw = coeffs
        .iter()
        .enumerate()
        .map(|(i, c)| c * eps.powi(i as i32 + 1))
        .sum();
    Ok(BoundValue::new(raw, BoundKind::PolyBound))
}

/// Bound on `dP_ε/dε` at 0: `n (n-1) Γ((n-1)/2) / (√2 Γ(n/2))`.
pub fn growth_rate_bound(n: usize) -> Result<f64> {
    check_n(n)?;
    let nf = n as f64;
    let ln = (nf * (nf - 1.0)).ln() + log_gamma((nf - 1.0) / 2.0)?
        - 0.5 * std::f64::consts::LN_2
        - log_gamma(nf / 2.0)?;
    Ok(ln.exp())
}

/// Upper bound on the cap area: `e^{-n h²/2} A_n`.
pub fn cap_area_upper(spec: &CapSpec) -> Result<f64> {
    if !(0.0..1.0).contains(&spec.height) {
        return Err(Error::domain(format!(
            "upper cap bound needs height in [0,1), got {}",
            spec.height
        )));
    }
    let n = spec.n as f64;
    Ok((-n * spec.height * spec.height / 2.0).exp() * sphere_area(spec.n)?)
}

/// Lower bound on the cap area: `(1/2) (r/2)^{n-1} A_n`.
pub fn cap_area_lower(spec: &CapSpec) -> Result<f64> {
    if !(0.0..=2.0).contains(&spec.chord_radius) {
        return Err(Error::domain(format!(
            "lower cap bound needs chord radius in [0,2], got {}",
            spec.chord_radius
        )));
    }
    Ok(0.5 * (spec.chord_radius / 2.0).powi(spec.n as i32 - 1) * sphere_area(spec.n)?)
}

/// Normalized surface measure of `{θ ∈ S^{n-1} : θ₁ ≥ height}`,
/// `(1/2) I_{1-h²}((n-1)/2, 1/2)`.
pub fn cap_measure_exact(n: usize, height: f64) -> Result<f64> {
    check_n(n)?;
    if !(0.0..=1.0).contains(&height) {
        return Err(Error::domain(format!(
            "cap height must lie in [0,1], got {height}"
        )));
    }
    if height == 1.0 {
        return Ok(0.0);
    }
    let x = (1.0 - height * height).clamp(0.0, 1.0);
    Ok(0.5 * reg_incomplete_beta(x, (n as f64 - 1.0) / 2.0, 0.5)?)
}

/// `P(|θ₁| < t)` for `θ` uniform on the sphere (or either hemisphere):
/// the exact probability that a single eigenvector falls within `t` of
/// orthogonal to a fixed unit direction.
pub fn slab_probability(n: usize, t: f64) -> Result<f64> {
    check_n(n)?;
    if !(t >= 0.0) {
        return Err(Error::domain("slab half-width must be non-negative"));
    }
    if t >= 1.0 {
        return Ok(1.0);
    }
    Ok(1.0 - 2.0 * cap_measure_exact(n, t)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    #[test]
    fn per_b_exact_examples() {
        let v = p_eps_b_exact_n2(1.0, 2.0).unwrap();
        assert!((v.raw - 2.0 / 3.0).abs() < 1e-15);
        assert_eq!(v.kind, BoundKind::PerBExactN2);
        assert_eq!(p_eps_b_exact_n2(0.0, 1.0).unwrap().raw, 0.0);
        assert_eq!(p_eps_b_exact_n2(FRAC_1_SQRT_2, 1.0).unwrap().raw, 1.0);
        let below = p_eps_b_exact_n2(FRAC_1_SQRT_2 * (1.0 - 1e-12), 1.0)
            .unwrap()
            .raw;
        assert!((below - 1.0).abs() < 1e-11);
        assert!(p_eps_b_exact_n2(0.1, 0.0).is_err());
        assert!(p_eps_b_exact_n2(-0.1, 1.0).is_err());
    }

    #[test]
    fn exact_n2_limits() {
        assert_eq!(p_eps_exact_n2(0.0, &tol()).unwrap().raw, 0.0);
        let big = p_eps_exact_n2(8.0, &tol()).unwrap().raw;
        assert!((big - 1.0).abs() < 1e-10);
    }

    #[test]
    fn exact_n2_slope_near_zero() {
        let eps = 1e-3;
        let v = p_eps_exact_n2(eps, &Tolerance::absolute(1e-13).unwrap())
            .unwrap()
            .raw;
        let slope = 2.0 * (2.0 / PI).sqrt();
        assert!((v / eps - slope).abs() < 5e-3, "{}", v / eps);
    }

    #[test]
    fn exact_n2_against_direct_2d_average() {
        // independent route: average the per-b formula over the radial
        // chi law of ‖b‖ directly (density r e^{-r²/2} on [0, ∞))
        let t = Tolerance::absolute(1e-12).unwrap();
        for &eps in &[0.05, 0.3, 0.9] {
            let f = |r: f64| p_eps_b_exact_n2(eps, r).unwrap().raw * r * (-r * r / 2.0).exp();
            let direct = crate::numerics::integrate_semi_infinite(f, 1e-300, &t)
                .unwrap()
                .value;
            let got = p_eps_exact_n2(eps, &t).unwrap().raw;
            assert!((got - direct).abs() < 1e-9, "eps={eps}: {got} vs {direct}");
        }
    }

    #[test]
    fn printed_statement_is_not_a_probability() {
        let v = p_eps_printed_statement_n2(0.5, &tol()).unwrap();
        assert!(v < 0.0);
    }

    #[test]
    fn per_b_bound_examples() {
        let v = p_eps_b_bound(0.1, 1.0, 2).unwrap();
        assert!((v.raw - 0.2).abs() < 1e-15);
        assert_eq!(p_eps_b_bound(0.0, 1.0, 5).unwrap().raw, 0.0);
        let exact = p_eps_b_exact_n2(0.1, 1.0).unwrap().raw;
        assert!((exact - 0.1275371).abs() < 1e-7);
        assert!(v.raw >= exact);
        let over = p_eps_b_bound(3.0, 1.0, 4).unwrap();
        assert_eq!(over.raw, 4.0);
        assert_eq!(over.clamped, 1.0);
        assert!(p_eps_b_bound(0.1, 1.0, 1).is_err());
    }

    #[test]
    fn per_b_bound_dominates_exact_n2() {
        for i in 1..=70 {
            let eps = i as f64 / 100.0;
            let exact = p_eps_b_exact_n2(eps, 1.0).unwrap().clamped;
            let bound = p_eps_b_bound(eps, 1.0, 2).unwrap().clamped;
            assert!(exact <= bound, "eps={eps}");
        }
    }

    #[test]
    fn per_b_bound_dominates_exact_slab_union() {
        // each eigenvector alone has probability slab_probability(n, t)
        for n in 2..=12 {
            for i in 1..20 {
                let t = i as f64 / 20.0;
                let single = slab_probability(n, t).unwrap();
                let bound = p_eps_b_bound(t, 1.0, n).unwrap().raw;
                assert!(n as f64 * single <= bound + 1e-12, "n={n} t={t}");
            }
        }
    }

    #[test]
    fn poly_examples() {
        let v = p_eps_bound_poly(0.1, 2).unwrap();
        assert!((v.raw - (2.0 * PI).sqrt() * 0.1).abs() < 1e-14);
        assert!((v.raw - 0.2506628).abs() < 1e-7);
        assert_eq!(p_eps_bound_poly(0.0, 5).unwrap().raw, 0.0);
        // n = 3 by hand: c1 = 2·3·Γ(1)/(√2 Γ(3/2)), c2 = -3·Γ(1/2)/(2 Γ(3/2))
        let g32 = PI.sqrt() / 2.0;
        let want = 6.0 / (SQRT_2 * g32) * 0.1 - 3.0 * PI.sqrt() / (2.0 * g32) * 0.01;
        let got = p_eps_bound_poly(0.1, 3).unwrap().raw;
        assert!((got - want).abs() < 1e-13, "{got} vs {want}");
    }

    #[test]
    fn growth_rate_examples() {
        assert!((growth_rate_bound(2).unwrap() - (2.0 * PI).sqrt()).abs() < 1e-10);
        let g3 = 6.0 * SQRT_2 / PI.sqrt();
        assert!((growth_rate_bound(3).unwrap() - g3).abs() < 1e-10);
        assert!((g3 - 4.7873).abs() < 1e-4);
        for n in 2..=20 {
            let c1 = poly_coefficients(n).unwrap()[0];
            assert!((c1 - growth_rate_bound(n).unwrap()).abs() < 1e-10 * c1);
        }
        assert!(growth_rate_bound(1).is_err());
    }

    #[test]
    fn integral_bound_examples() {
        assert_eq!(p_eps_bound_integral(0.0, 4, &tol()).unwrap().raw, 0.0);
        let b = p_eps_bound_integral(0.1, 2, &tol()).unwrap().raw;
        let e = p_eps_exact_n2(0.1, &tol()).unwrap().raw;
        assert!(b >= e, "{b} < {e}");
        let i3 = p_eps_bound_integral(0.05, 3, &tol()).unwrap().raw;
        let p3 = p_eps_bound_poly(0.05, 3).unwrap().raw;
        assert!(i3 <= p3 + 1e-8);
    }

    #[test]
    fn integral_bound_matches_unsplit_quadrature() {
        // independent route: integrate the guarded integrand over [0, ∞)
        let t = Tolerance::absolute(1e-11).unwrap();
        for &n in &[2usize, 3, 5, 8] {
            for &eps in &[0.02, 0.2, 0.7] {
                let nf = n as f64;
                let norm =
                    nf / ((nf / 2.0) * std::f64::consts::LN_2 + log_gamma(nf / 2.0).unwrap()).exp();
                let g = |r: f64| {
                    let base = (1.0 - eps / r.sqrt()).max(0.0);
                    (1.0 - base.powi(n as i32 - 1)).min(1.0 / nf)
                };
                let f = |r: f64| norm * g(r) * (-r / 2.0).exp() * r.powf(nf / 2.0 - 1.0);
                let direct = crate::numerics::integrate_semi_infinite(f, 0.0, &t)
                    .unwrap()
                    .value;
                let got = p_eps_bound_integral(eps, n, &t).unwrap().raw;
                assert!(
                    (got - direct).abs() < 1e-8,
                    "n={n} eps={eps}: {got} vs {direct}"
                );
            }
        }
    }

    #[test]
    fn bounds_are_monotone_in_eps() {
        for &n in &[2usize, 3, 6] {
            let mut prev = (0.0, 0.0);
            for i in 0..=30 {
                let eps = i as f64 * 0.02;
                let p = p_eps_bound_poly(eps, n).unwrap().raw;
                let q = p_eps_bound_integral(eps, n, &tol()).unwrap().raw;
                assert!(p + 1e-12 >= prev.0 && q + 1e-9 >= prev.1, "n={n} eps={eps}");
                prev = (p, q);
            }
        }
        let mut prev = 0.0;
        for i in 0..=30 {
            let v = p_eps_exact_n2(i as f64 * 0.05, &tol()).unwrap().raw;
            assert!(v + 1e-9 >= prev);
            prev = v;
        }
    }

    #[test]
    fn vanishing_limit() {
        for n in 2..=20 {
            let g = growth_rate_bound(n).unwrap();
            for i in 1..=10 {
                let eps = i as f64 * 1e-3;
                assert!(p_eps_bound_poly(eps, n).unwrap().raw <= 2.0 * g * eps);
            }
        }
    }

    #[test]
    fn cap_examples() {
        let s = CapSpec::from_height(2, 0.0).unwrap();
        assert!((cap_area_upper(&s).unwrap() - 2.0 * PI).abs() < 1e-13);
        let s = CapSpec::from_height(2, 0.5).unwrap();
        assert!((cap_area_upper(&s).unwrap() - (-0.25f64).exp() * 2.0 * PI).abs() < 1e-13);
        assert!((cap_area_upper(&s).unwrap() - 4.8933496).abs() < 1e-6);
        assert!((s.chord_radius - 1.0).abs() < 1e-15);
        let full = CapSpec::from_chord_radius(5, 2.0).unwrap();
        assert!((cap_area_lower(&full).unwrap() - sphere_area(5).unwrap() / 2.0).abs() < 1e-13);
        assert_eq!(
            cap_area_lower(&CapSpec::from_chord_radius(5, 0.0).unwrap()).unwrap(),
            0.0
        );
        assert!(cap_area_upper(&full).is_err());
        assert!(CapSpec::from_height(3, 1.0).is_err());
        assert!(CapSpec::from_chord_radius(3, 2.5).is_err());
    }

    #[test]
    fn cap_measure_examples() {
        assert!((cap_measure_exact(4, 0.0).unwrap() - 0.5).abs() < 1e-15);
        assert!((cap_measure_exact(2, 0.5).unwrap() - 1.0 / 3.0).abs() < 1e-12);
        assert!((cap_measure_exact(2, 0.5).unwrap() - 0.5f64.acos() / PI).abs() < 1e-12);
        assert_eq!(cap_measure_exact(6, 1.0).unwrap(), 0.0);
        assert!(cap_measure_exact(3, 1.2).is_err());
    }

    #[test]
    fn cap_measure_n3_is_archimedes() {
        // on S², the cap above height h has normalized area (1 - h)/2
        for i in 0..=10 {
            let h = i as f64 / 10.0;
            assert!((cap_measure_exact(3, h).unwrap() - (1.0 - h) / 2.0).abs() < 1e-12);
        }
    }

    #[test]
    fn cap_sandwich_grid() {
        for n in 2..=10 {
            let area = sphere_area(n).unwrap();
            for i in 0..10 {
                let h = i as f64 / 10.0;
                let spec = CapSpec::from_height(n, h).unwrap();
                let exact = cap_measure_exact(n, h).unwrap() * area;
                assert!(cap_area_lower(&spec).unwrap() <= exact + 1e-12);
                assert!(exact <= cap_area_upper(&spec).unwrap() + 1e-12);
            }
        }
    }
}
