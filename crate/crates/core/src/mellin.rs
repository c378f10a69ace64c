//! Mellin-transform engine.
//!
//! With `x = (gamma/beta)^2 exp(-beta r)` the s-wave equation becomes
//! `x² u'' + x u' - rho² u + x u = 0` (`rho = alpha/beta`). Under the Mellin
//! transform `g(y) = ∫_0^∞ x^{y-1} u(x) dx` this turns into the first-order
//! difference equation `g(y+1) = (rho² - y²) g(y)`, solved in closed form by
//! `g(y) = rho Γ(rho + y) / Γ(rho - y + 1) g(0)`. Matching against the known
//! transform of `J_nu(a sqrt(x))` fixes `a = 2` and `nu = 2 rho`.

use crate::error::{Error, Result};
use crate::quad::{gauss_kronrod15, tanh_sinh, Estimate};
use crate::specfun::{gamma, rgamma};
use std::cell::Cell;

/// A sample `(y, g(y))` of a Mellin transform.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MellinPoint {
    pub y: f64,
    pub value: f64,
}

/// Rule applied on each fixed-width panel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[non_exhaustive]
pub enum PanelRule {
    /// 15-point Kronrod with embedded 7-point Gauss error estimate.
    #[default]
    GaussKronrod15,
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureConfig {
    /// Upper limit in the substituted variable `t = 2 sqrt(x)`.
    pub t_max: f64,
    pub n_panels: usize,
    pub scheme: PanelRule,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self { t_max: 200.0, n_panels: 4096, scheme: PanelRule::GaussKronrod15 }
    }
}

impl QuadratureConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.t_max > 0.0 && self.t_max.is_finite()) {
            return Err(Error::Config(format!("t_max must be positive, got {}", self.t_max)));
        }
        if self.n_panels < 16 {
            return Err(Error::Config(format!("n_panels must be >= 16, got {}", self.n_panels)));
        }
        Ok(())
    }
}

// Fewer sign changes than this in the upper half of the range means the
// integrand is treated as non-oscillatory and the truncated value is used.
const MIN_TAIL_ZEROS: usize = 6;

/// Numerical Mellin transform `∫_0^∞ x^{y-1} f(x) dx`.
///
/// Integrates in `t = 2 sqrt(x)` (so `x^{y-1} dx = (t/2)^{2y-1} dt`) over
/// `(0, t_max]`: tanh-sinh on the first panel to absorb the `t^{2y-1}`
/// endpoint behaviour, Kronrod panels elsewhere. When the integrand
/// oscillates in the upper half of the range, the improper limit is taken
/// from the partial integrals ending at successive integrand zeros, which
/// form an alternating sequence; repeated pairwise averaging of that
/// sequence removes the oscillating remainder.
///
/// Convergence of the integral for the given `y` is the caller's
/// responsibility; a crude check flags tails whose panel contributions are
/// not decaying.
pub fn mellin_numeric(f: impl Fn(f64) -> f64, y: f64, q: &QuadratureConfig) -> Result<Estimate> {
    q.validate()?;
    let bad_sample = Cell::new(None::<f64>);
    let integrand = |t: f64| -> f64 {
        let half = 0.5 * t;
        let v = half.powf(2.0 * y - 1.0) * f(half * half);
        if !v.is_finite() && bad_sample.get().is_none() {
            bad_sample.set(Some(t));
        }
        v
    };
    let mut g = integrand;

    let n = q.n_panels;
    let width = q.t_max / n as f64;
    let mut cumulative = Vec::with_capacity(n + 1);
    let mut panel_abs = Vec::with_capacity(n);
    cumulative.push(0.0);
    let first = tanh_sinh(&mut g, 0.0, width, 1e-15);
    let mut total = first.value;
    let mut error = first.abs_error;
    cumulative.push(total);
    panel_abs.push(first.value.abs());
    for i in 1..n {
        let a = i as f64 * width;
        let b = if i + 1 == n { q.t_max } else { a + width };
        let est = match q.scheme {
            PanelRule::GaussKronrod15 => gauss_kronrod15(&mut g, a, b),
        };
        total += est.value;
        error += est.abs_error;
        cumulative.push(total);
        panel_abs.push(est.value.abs());
    }
    if let Some(t) = bad_sample.get() {
        return Err(Error::Quadrature(t));
    }

    // Divergence check: compare mean panel magnitude in the last eighth of the
    // range with the fifth eighth.
    let mean = |s: &[f64]| s.iter().sum::<f64>() / s.len() as f64;
    let mid = mean(&panel_abs[n / 2..5 * n / 8]);
    let last = mean(&panel_abs[7 * n / 8..]);
    if mid > 0.0 && last > 1e-15 * total.abs().max(f64::MIN_POSITIVE) && last >= mid {
        return Err(Error::Divergence(last / mid));
    }

    // Partial integrals up to each integrand zero in the upper half.
    let mut partials = Vec::new();
    let mut s_prev = g(q.t_max / 2.0);
    for (i, &before) in cumulative.iter().enumerate().take(n).skip(n / 2) {
        let a = i as f64 * width;
        let b = (a + width).min(q.t_max);
        let s_next = g(b);
        if s_prev != 0.0 && s_next != 0.0 && s_prev.signum() != s_next.signum() {
            let zero = bisect_sign_change(&mut g, a, b, s_prev);
            let piece = gauss_kronrod15(&mut g, a, zero);
            partials.push(before + piece.value);
        }
        s_prev = s_next;
    }
    if let Some(t) = bad_sample.get() {
        return Err(Error::Quadrature(t));
    }

    if partials.len() < MIN_TAIL_ZEROS {
        return Ok(Estimate { value: total, abs_error: error });
    }
    let (value, accel_error) = repeated_average(partials);
    Ok(Estimate { value, abs_error: error + accel_error })
}

fn bisect_sign_change(f: &mut impl FnMut(f64) -> f64, mut lo: f64, mut hi: f64, f_lo: f64) -> f64 {
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let v = f(mid);
        if v == 0.0 {
            return mid;
        }
        if v.signum() == f_lo.signum() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Averages neighbours until one value is left; the error estimate is the
/// spread of the last pair.
fn repeated_average(mut level: Vec<f64>) -> (f64, f64) {
    let mut spread = f64::INFINITY;
    while level.len() > 1 {
        if level.len() == 2 {
            spread = (level[1] - level[0]).abs();
        }
        level = level.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect();
    }
    (level[0], spread)
}

/// Iterates `g(y+1) = (rho² - y²) g(y)` from `g(0) = g0` up to `g(n)`.
pub fn g_iterate(rho: f64, n: u32, g0: f64) -> f64 {
    let rho2 = rho * rho;
    (0..n).fold(g0, |g, y| {
        let y = f64::from(y);
        (rho2 - y * y) * g
    })
}

/// Closed-form solution `rho Γ(rho + y) / Γ(rho - y + 1) g0` of the
/// difference equation, valid at real `y`. Exactly zero where
/// `rho - y + 1` is a non-positive integer.
pub fn g_closed(rho: f64, y: f64, g0: f64) -> Result<f64> {
    Ok(rho * gamma(rho + y)? * rgamma(rho - y + 1.0) * g0)
}

/// Known Mellin transform of `J_nu(a x)`:
/// `2^{y-1} Γ(y/2 + nu/2) / (a^y Γ(nu/2 - y/2 + 1))`.
pub fn mellin_bessel_closed(nu: f64, a: f64, y: f64) -> Result<f64> {
    let num = gamma(0.5 * (y + nu))?;
    Ok(2f64.powf(y - 1.0) * num * rgamma(0.5 * (nu - y) + 1.0) / a.powf(y))
}

/// Mellin transform of `J_nu(a sqrt(x))`:
/// `(2/a)^{2y} Γ(y + nu/2) / Γ(nu/2 - y + 1)`.
///
/// Follows from [`mellin_bessel_closed`] under `x -> x²`: the transform at
/// `y` equals twice the plain transform at `2y`.
pub fn mellin_bessel_sqrt(nu: f64, a: f64, y: f64) -> Result<f64> {
    let num = gamma(y + 0.5 * nu)?;
    Ok((2.0 / a).powf(2.0 * y) * num * rgamma(0.5 * nu - y + 1.0))
}

/// Parameters that identify the difference-equation solution with the
/// transform of `J_nu(a sqrt(x))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BesselMatch {
    pub a: f64,
    pub nu: f64,
    /// The `g(0)` that makes the identification exact: `Γ(rho)/Γ(rho+1) = 1/rho`.
    pub g0: f64,
}

/// `a = 2`, `nu = 2 rho`, `g0 = 1/rho`.
pub fn match_parameters(rho: f64) -> Result<BesselMatch> {
    if !(rho > 0.0) {
        return Err(Error::NonPositive { name: "rho", value: rho });
    }
    Ok(BesselMatch { a: 2.0, nu: 2.0 * rho, g0: 1.0 / rho })
}

/// `(y, g(y))` pairs of the closed-form solution on a grid.
pub fn g_closed_table(rho: f64, g0: f64, ys: &[f64]) -> Result<Vec<MellinPoint>> {
    ys.iter().map(|&y| Ok(MellinPoint { y, value: g_closed(rho, y, g0)? })).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::bessel_j;
    use approx::assert_relative_eq;

    const RHOS: [f64; 4] = [0.5, 1.3, 2.0, 3.7];

    #[test]
    fn iterate_examples() {
        assert_eq!(g_iterate(2.0, 1, 1.0), 4.0);
        assert_eq!(g_iterate(2.0, 2, 1.0), 12.0);
        assert_eq!(g_iterate(2.0, 3, 1.0), 0.0);
    }

    #[test]
    fn closed_examples() {
        assert_relative_eq!(g_closed(2.0, 0.0, 1.0).unwrap(), 1.0, max_relative = 1e-14);
        assert_relative_eq!(g_closed(2.0, 2.0, 1.0).unwrap(), g_iterate(2.0, 2, 1.0), max_relative = 1e-14);
        assert_eq!(g_closed(2.0, 3.0, 1.0).unwrap(), 0.0);
        assert!(matches!(g_closed(0.5, -2.5, 1.0), Err(Error::Pole(_))));
    }

    #[test]
    fn closed_form_matches_iteration_at_integers() {
        for rho in RHOS {
            for n in 0..=20 {
                let it = g_iterate(rho, n, 1.0);
                let cf = g_closed(rho, f64::from(n), 1.0).unwrap();
                if it == 0.0 {
                    assert!(cf.abs() <= 1e-12, "rho={rho} n={n}: {cf}");
                } else {
                    assert!(((cf - it) / it).abs() <= 1e-10, "rho={rho} n={n}: {cf} vs {it}");
                }
            }
        }
    }

    #[test]
    fn functional_equation_at_real_y() {
        for rho in RHOS {
            for y in [-0.5, 0.0, 0.7, 1.0, 2.5] {
                if rho + y <= 0.0 && (rho + y).fract() == 0.0 {
                    continue; // Γ(rho + y) pole
                }
                let lhs = g_closed(rho, y + 1.0, 1.0).unwrap();
                let rhs = (rho * rho - y * y) * g_closed(rho, y, 1.0).unwrap();
                let scale = lhs.abs().max(rhs.abs()).max(f64::MIN_POSITIVE);
                assert!((lhs - rhs).abs() <= 1e-12 * scale, "rho={rho} y={y}: {lhs} vs {rhs}");
            }
        }
    }

    #[test]
    fn bessel_pair_examples() {
        assert_relative_eq!(mellin_bessel_closed(0.0, 1.0, 1.0).unwrap(), 1.0, max_relative = 1e-14);
        assert_relative_eq!(mellin_bessel_closed(2.0, 2.0, 1.0).unwrap(), 0.5, max_relative = 1e-14);
        let expect = 2f64.powf(-0.5) * gamma(0.75).unwrap() * rgamma(1.25);
        assert_relative_eq!(mellin_bessel_closed(1.0, 1.0, 0.5).unwrap(), expect, max_relative = 1e-14);

        assert_relative_eq!(mellin_bessel_sqrt(0.0, 2.0, 0.5).unwrap(), 1.0, max_relative = 1e-14);
        assert_relative_eq!(mellin_bessel_sqrt(2.0, 2.0, 1.0).unwrap(), 1.0, max_relative = 1e-14);
        assert_relative_eq!(mellin_bessel_sqrt(3.0, 2.0, 0.0).unwrap(), 1.0 / 1.5, max_relative = 1e-14);
    }

    #[test]
    fn sqrt_pair_is_rescaled_plain_pair() {
        for (nu, a, y) in [(0.5, 2.0, 0.25), (1.0, 1.5, 0.1), (2.7, 3.0, -0.4)] {
            let lhs = mellin_bessel_sqrt(nu, a, y).unwrap();
            let rhs = 2.0 * mellin_bessel_closed(nu, a, 2.0 * y).unwrap();
            assert_relative_eq!(lhs, rhs, max_relative = 1e-13);
        }
    }

    #[test]
    fn match_examples() {
        for (rho, expect) in [(1.0, (2.0, 2.0, 1.0)), (2.5, (2.0, 5.0, 0.4)), (0.5, (2.0, 1.0, 2.0))] {
            let m = match_parameters(rho).unwrap();
            assert_eq!((m.a, m.nu, m.g0), expect);
            for y in [0.0, 0.5, 1.0, 2.0] {
                let g = g_closed(rho, y, m.g0).unwrap();
                let b = mellin_bessel_sqrt(m.nu, m.a, y).unwrap();
                assert!((g - b).abs() <= 1e-12 * g.abs().max(1.0), "rho={rho} y={y}");
            }
        }
        assert!(match_parameters(0.0).is_err());
    }

    #[test]
    fn numeric_transform_of_exponential_is_gamma() {
        let q = QuadratureConfig::default();
        let est = mellin_numeric(|x| (-x).exp(), 3.0, &q).unwrap();
        assert!((est.value - 2.0).abs() <= 1e-10);
        let est = mellin_numeric(|x| (-x).exp(), 0.5, &q).unwrap();
        assert!((est.value - 1.772_453_850_9).abs() <= 1e-8);
    }

    #[test]
    fn numeric_transform_of_bessel_sqrt() {
        let q = QuadratureConfig { t_max: 60.0, ..Default::default() };
        let est = mellin_numeric(|x| bessel_j(0.0, 2.0 * x.sqrt()).unwrap(), 0.5, &q).unwrap();
        assert!((est.value - 1.0).abs() <= 1e-6, "{}", est.value);
    }

    #[test]
    fn numeric_transform_flags_divergence_and_bad_samples() {
        let q = QuadratureConfig::default();
        // ∫ x^{y-1} dx diverges for every y.
        assert!(matches!(mellin_numeric(|_| 1.0, 0.5, &q), Err(Error::Divergence(_))));
        assert!(matches!(mellin_numeric(|_| f64::NAN, 0.5, &q), Err(Error::Quadrature(_))));
        let bad = QuadratureConfig { n_panels: 8, ..Default::default() };
        assert!(matches!(mellin_numeric(|x| (-x).exp(), 1.0, &bad), Err(Error::Config(_))));
    }
}
