//! Gamma, reciprocal Gamma and Bessel `J_nu` of real order, plus zeros of
//! `nu -> J_nu(z0)` at fixed argument.
//!
//! All routines are pure and thread-safe.

#![allow(clippy::excessive_precision)]

use crate::config::SolverConfig;
use crate::dd::DD;
use crate::error::{Error, Result};
use std::f64::consts::PI;

/// Largest argument for which `Γ(x)` is representable as an `f64`.
pub const GAMMA_OVERFLOW_THRESHOLD: f64 = 171.624_376_956_302_7;

/// Upper bound of the `(nu, z)` envelope accepted by [`bessel_j`].
pub const BESSEL_ENVELOPE: f64 = 60.0;

// Lanczos approximation with g = 671/128 and 14 terms, as published in
// Numerical Recipes, 3rd edition, section 6.1 (`gammln`). Relative accuracy
// is close to full double precision for x >= 0.5.
const LANCZOS_G: f64 = 5.242_187_5;
const LANCZOS_SQRT_2PI: f64 = 2.506_628_274_631_000_5;
const LANCZOS_C0: f64 = 0.999_999_999_999_997_092;
const LANCZOS_COEF: [f64; 14] = [
    57.156_235_665_862_923_5,
    -59.597_960_355_475_491_2,
    14.136_097_974_741_747_1,
    -0.491_913_816_097_620_199,
    0.339_946_499_848_118_887e-4,
    0.465_236_289_270_485_756e-4,
    -0.983_744_753_048_795_646e-4,
    0.158_088_703_224_912_494e-3,
    -0.210_264_441_724_104_883e-3,
    0.217_439_618_115_212_643e-3,
    -0.164_318_106_536_763_890e-3,
    0.844_182_239_838_527_433e-4,
    -0.261_908_384_015_814_087e-4,
    0.368_991_826_595_316_234e-5,
];

fn lanczos_series(x: f64) -> f64 {
    let mut ser = LANCZOS_C0;
    let mut y = x;
    for c in LANCZOS_COEF {
        y += 1.0;
        ser += c / y;
    }
    ser
}

fn is_nonpositive_integer(x: f64) -> bool {
    x <= 0.0 && x == x.floor()
}

/// `sin(pi x)` with exact argument reduction.
fn sin_pi(x: f64) -> f64 {
    let mut r = x - 2.0 * (x / 2.0).floor();
    let mut sign = 1.0;
    if r >= 1.0 {
        r -= 1.0;
        sign = -1.0;
    }
    if r > 0.5 {
        r = 1.0 - r;
    }
    sign * (PI * r).sin()
}

/// Γ(x) for x >= 0.5 via Lanczos, with the power and exponential evaluated
/// on double-double shifted arguments so rounding in `x + g` and `x + 1/2`
/// does not get amplified by the large exponent.
fn gamma_lanczos(x: f64) -> f64 {
    let t = DD::sum(x, LANCZOS_G);
    let a = DD::sum(x, 0.5);
    let half = a.hi * 0.5;
    let ln_t = t.hi.ln();
    let correction = 1.0 + a.hi * t.lo / t.hi + a.lo * ln_t - t.lo;
    let p = t.hi.powf(half);
    LANCZOS_SQRT_2PI * lanczos_series(x) / x * p * (-t.hi).exp() * p * correction
}

/// The Gamma function.
///
/// Relative error is below 1e-13 on `(0, 170]`. Negative non-integer
/// arguments use the reflection formula. Arguments above
/// [`GAMMA_OVERFLOW_THRESHOLD`] report [`Error::Overflow`].
pub fn gamma(x: f64) -> Result<f64> {
    if x.is_nan() || is_nonpositive_integer(x) {
        return Err(Error::Pole(x));
    }
    if x > GAMMA_OVERFLOW_THRESHOLD {
        return Err(Error::Overflow(x));
    }
    if x >= 0.5 {
        Ok(gamma_lanczos(x))
    } else if x > 0.0 {
        Ok(gamma_lanczos(x + 1.0) / x)
    } else {
        // Γ(x) Γ(1 - x) = π / sin(π x)
        let g = 1.0 - x;
        if g > GAMMA_OVERFLOW_THRESHOLD {
            return Ok(PI / (sin_pi(x) * (ln_gamma(g)).exp()));
        }
        Ok(PI / (sin_pi(x) * gamma_lanczos(g)))
    }
}

/// `ln Γ(x)` for `x > 0`.
pub fn ln_gamma(x: f64) -> f64 {
    debug_assert!(x > 0.0);
    if x < 0.5 {
        return ln_gamma(x + 1.0) - x.ln();
    }
    let t = x + LANCZOS_G;
    (x + 0.5) * t.ln() - t + (LANCZOS_SQRT_2PI * lanczos_series(x) / x).ln()
}

/// The reciprocal Gamma function `1/Γ(x)`; exactly zero at the poles of Γ.
pub fn rgamma(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if is_nonpositive_integer(x) {
        return 0.0;
    }
    if x > GAMMA_OVERFLOW_THRESHOLD {
        return (-ln_gamma(x)).exp();
    }
    if x >= 0.5 {
        1.0 / gamma_lanczos(x)
    } else if x > 0.0 {
        x / gamma_lanczos(x + 1.0)
    } else {
        let g = 1.0 - x;
        let gg = if g > GAMMA_OVERFLOW_THRESHOLD { ln_gamma(g).exp() } else { gamma_lanczos(g) };
        sin_pi(x) * gg / PI
    }
}

/// Bessel function of the first kind `J_nu(z)` for real `nu, z` in `[0, 60]`.
///
/// Direct power series
/// `(z/2)^nu / Γ(nu+1) * Σ_k (-z²/4)^k / (k! (nu+1)_k)`.
/// The inner sum is accumulated in double-double arithmetic so the
/// cancellation between large alternating terms (up to ~1e11 at z = 30)
/// costs no accuracy in the final double. The sum stops once a term drops
/// below `1e-17` of the running sum past the peak term.
pub fn bessel_j(nu: f64, z: f64) -> Result<f64> {
    let inside = |v: f64| (0.0..=BESSEL_ENVELOPE).contains(&v);
    if !inside(nu) || !inside(z) {
        return Err(Error::BesselDomain { nu, z });
    }
    Ok(bessel_j_unchecked(nu, z))
}

pub(crate) fn bessel_j_unchecked(nu: f64, z: f64) -> f64 {
    if z == 0.0 {
        return if nu == 0.0 { 1.0 } else { 0.0 };
    }
    let half = 0.5 * z;
    let minus_w = -DD::prod(half, half);
    let w = half * half;

    let mut term = DD::ONE;
    let mut sum = DD::ONE;
    for k in 1..1000_u32 {
        let kf = f64::from(k);
        let denom = DD::sum(nu, kf) * DD::from_f64(kf);
        term = term * minus_w / denom;
        sum = sum + term;
        let past_peak = denom.hi > w;
        if past_peak && (term.abs() <= 1e-17 * sum.abs() || term.abs() < f64::MIN_POSITIVE) {
            break;
        }
    }
    let prefactor = if nu == 0.0 { 1.0 } else { half.powf(nu) * rgamma(nu + 1.0) };
    prefactor * sum.to_f64()
}

/// Zeros in the order `nu` of `J_nu(z0)` at a fixed argument.
#[derive(Debug, Clone, PartialEq)]
pub struct OrderZeroList {
    pub z0: f64,
    /// Ascending, all in `(root_tol, search_ceiling]`.
    pub zeros: Vec<f64>,
    pub search_ceiling: f64,
    /// Zeros found within `root_tol` of `nu = 0` and excluded.
    pub dropped: Vec<f64>,
}

/// Every `nu > 0` with `J_nu(z0) = 0`.
///
/// Since the first positive zero `j_{nu,1}` exceeds `nu`, no zero can exist
/// for `nu >= z0`, so scanning `(0, z0]` with `cfg.bracket_step` and bisecting
/// each sign change to `cfg.root_tol` finds them all (assuming no two zeros
/// share one scan cell).
pub fn find_nu_zeros(z0: f64, cfg: &SolverConfig) -> Result<OrderZeroList> {
    if !(z0 > 0.0) {
        return Err(Error::NonPositive { name: "z0", value: z0 });
    }
    bessel_j(0.0, z0)?;
    let f = |nu: f64| bessel_j_unchecked(nu, z0);

    let steps = (z0 / cfg.bracket_step).ceil().max(1.0) as usize;
    let mut candidates = Vec::new();
    let mut lo = 0.0;
    let mut f_lo = f(lo);
    for i in 1..=steps {
        let hi = (i as f64 * cfg.bracket_step).min(z0);
        let f_hi = f(hi);
        if f_hi == 0.0 {
            candidates.push(hi);
        } else if f_lo != 0.0 && f_lo.signum() != f_hi.signum() {
            candidates.push(bisect(f, lo, hi, f_lo, cfg.root_tol));
        }
        lo = hi;
        f_lo = f_hi;
    }

    let (dropped, zeros) = candidates.into_iter().partition(|&nu| nu <= cfg.root_tol);
    Ok(OrderZeroList { z0, zeros, search_ceiling: z0, dropped })
}

fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, mut f_lo: f64, tol: f64) -> f64 {
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let f_mid = f(mid);
        if f_mid == 0.0 {
            return mid;
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    // Independent reference: n! and (2n)!/(4^n n!) accumulated in double-double.
    fn factorial_dd(n: u32) -> DD {
        (1..=n).fold(DD::ONE, |acc, k| acc * DD::from_f64(f64::from(k)))
    }

    #[test]
    fn gamma_trivial_values() {
        assert_eq!(gamma(1.0).unwrap(), 1.0);
        assert_relative_eq!(gamma(5.0).unwrap(), 24.0, max_relative = 1e-15);
        assert_relative_eq!(gamma(0.5).unwrap(), 1.772_453_850_905_516, max_relative = 1e-15);
    }

    #[test]
    fn gamma_matches_factorials_up_to_170() {
        for n in 1..=170_u32 {
            let exact = factorial_dd(n - 1).to_f64();
            let got = gamma(f64::from(n)).unwrap();
            assert!(((got - exact) / exact).abs() <= 1e-13, "Γ({n}) = {got}, want {exact}");
        }
    }

    #[test]
    fn gamma_matches_half_integers() {
        let sqrt_pi = DD { hi: 1.772_453_850_905_516, lo: -7.666_586_499_825_799e-17 };
        for n in 0..=160_u32 {
            // Γ(n + 1/2) = (2n)! sqrt(pi) / (4^n n!)
            let ratio = factorial_dd(2 * n) / (factorial_dd(n) * DD::from_f64(4f64.powi(n as i32)));
            let exact = (ratio * sqrt_pi).to_f64();
            if !exact.is_finite() {
                break;
            }
            let got = gamma(f64::from(n) + 0.5).unwrap();
            assert!(((got - exact) / exact).abs() <= 1e-13, "Γ({n}.5) = {got}, want {exact}");
        }
    }

    #[test]
    fn gamma_poles_and_overflow() {
        assert_eq!(gamma(0.0), Err(Error::Pole(0.0)));
        assert_eq!(gamma(-3.0), Err(Error::Pole(-3.0)));
        assert!(matches!(gamma(172.0), Err(Error::Overflow(_))));
        assert!(gamma(171.5).unwrap().is_finite());
    }

    #[test]
    fn gamma_reflection() {
        // Γ(-1/2) = -2 sqrt(pi)
        assert_relative_eq!(gamma(-0.5).unwrap(), -2.0 * PI.sqrt(), max_relative = 1e-14);
        // Γ(-3/2) = 4 sqrt(pi) / 3
        assert_relative_eq!(gamma(-1.5).unwrap(), 4.0 * PI.sqrt() / 3.0, max_relative = 1e-14);
    }

    #[test]
    fn rgamma_values() {
        assert_eq!(rgamma(0.0), 0.0);
        assert_eq!(rgamma(-3.0), 0.0);
        assert_relative_eq!(rgamma(2.0), 1.0, max_relative = 1e-15);
        assert_relative_eq!(rgamma(-0.5), -0.5 / PI.sqrt(), max_relative = 1e-14);
        assert!(rgamma(175.0) > 0.0);
        assert_relative_eq!(rgamma(175.0), (-ln_gamma(175.0)).exp(), max_relative = 1e-12);
        assert_eq!(rgamma(400.0), 0.0);
    }

    #[test]
    fn bessel_trivial_values() {
        assert_eq!(bessel_j(0.0, 0.0).unwrap(), 1.0);
        assert_eq!(bessel_j(1.5, 0.0).unwrap(), 0.0);
        assert!(bessel_j(0.5, PI).unwrap().abs() <= 1e-12);
    }

    #[test]
    fn bessel_half_order_closed_forms() {
        for &z in &[0.1, 1.0, 2.5, 7.0, 13.3, 29.0, 45.0] {
            let j_half = (2.0 / (PI * z)).sqrt() * z.sin();
            let j_mhalf_plus = (2.0 / (PI * z)).sqrt() * (z.sin() / z - z.cos());
            assert!((bessel_j(0.5, z).unwrap() - j_half).abs() < 1e-13, "z={z}");
            assert!((bessel_j(1.5, z).unwrap() - j_mhalf_plus).abs() < 1e-13, "z={z}");
        }
    }

    #[test]
    fn bessel_first_zero_of_j0() {
        // Oracle: bracket the sign change of the series on (2, 3), bisect to 1e-14.
        let f = |z: f64| bessel_j(0.0, z).unwrap();
        assert!(f(2.0) > 0.0 && f(3.0) < 0.0);
        let root = bisect(f, 2.0, 3.0, f(2.0), 1e-14);
        assert!((root - 2.404_825_557_695_773).abs() < 1e-13);
        assert!(bessel_j(0.0, 2.404_825_557_695_773).unwrap().abs() < 1e-10);
    }

    #[test]
    fn bessel_domain_errors() {
        assert!(matches!(bessel_j(-0.1, 1.0), Err(Error::BesselDomain { .. })));
        assert!(matches!(bessel_j(1.0, 60.5), Err(Error::BesselDomain { .. })));
        assert!(matches!(bessel_j(f64::NAN, 1.0), Err(Error::BesselDomain { .. })));
    }

    #[test]
    fn nu_zeros_examples() {
        let cfg = SolverConfig::default();
        assert!(find_nu_zeros(2.0, &cfg).unwrap().zeros.is_empty());

        let list = find_nu_zeros(10.0, &cfg).unwrap();
        assert_eq!(list.zeros.len(), 3);
        for (got, approx) in list.zeros.iter().zip([0.9, 3.2, 6.1]) {
            assert!((got - approx).abs() < 0.15, "{got} vs {approx}");
            assert!(bessel_j(*got, 10.0).unwrap().abs() < cfg.residual_tol);
        }
        assert_eq!(list.search_ceiling, 10.0);

        let at_threshold = find_nu_zeros(2.404_825_557_695_773, &cfg).unwrap();
        assert!(at_threshold.zeros.is_empty());
    }

    #[test]
    fn nu_zeros_stable_under_step_halving() {
        let cfg = SolverConfig::default();
        let fine = SolverConfig { bracket_step: cfg.bracket_step / 2.0, ..cfg.clone() };
        for z0 in [3.0, 7.5, 10.0, 17.25, 29.0] {
            let a = find_nu_zeros(z0, &cfg).unwrap().zeros;
            let b = find_nu_zeros(z0, &fine).unwrap().zeros;
            assert_eq!(a.len(), b.len(), "z0={z0}");
            for (x, y) in a.iter().zip(&b) {
                assert!((x - y).abs() <= 2.0 * cfg.root_tol, "z0={z0}: {x} vs {y}");
            }
        }
    }

    proptest! {
        #[test]
        fn bessel_three_term_recurrence(nu in 1.0f64..20.0, z in 0.5f64..30.0) {
            let jm = bessel_j(nu - 1.0, z).unwrap();
            let j = bessel_j(nu, z).unwrap();
            let jp = bessel_j(nu + 1.0, z).unwrap();
            let scale = jm.abs().max(j.abs()).max(jp.abs());
            prop_assert!((jm + jp - 2.0 * nu / z * j).abs() <= 1e-10 * scale);
        }

        #[test]
        fn gamma_functional_equation(x in 0.1f64..50.0) {
            let lhs = gamma(x + 1.0).unwrap();
            let rhs = x * gamma(x).unwrap();
            prop_assert!(((lhs - rhs) / rhs).abs() <= 1e-12);
        }

        #[test]
        fn rgamma_inverts_gamma(x in -30.0f64..150.0) {
            prop_assume!((x - x.round()).abs() > 1e-6 || x > 0.5);
            let prod = rgamma(x) * gamma(x).unwrap();
            prop_assert!((prod - 1.0).abs() <= 1e-12);
        }
    }
}
