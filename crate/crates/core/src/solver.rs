//! Physics layer: potential parameters, the `r <-> x` map, bound-state
//! spectrum and the analytic wavefunction `u(r) = C J_nu(z0 exp(-beta r / 2))`.
//!
//! Bound states satisfy `u(0) = 0`, i.e. `J_nu(z0) = 0` with `nu = 2 alpha / beta > 0`.
//! The companion solution `J_{-nu}` is discarded because it diverges as
//! `r -> ∞`.

use crate::config::SolverConfig;
use crate::error::{Error, Result};
use crate::quad::adaptive;
use crate::specfun::{bessel_j, bessel_j_unchecked, find_nu_zeros, ln_gamma};

/// Inputs of the exponential well `V(r) = -V0 exp(-beta r)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PotentialParams {
    v0: f64,
    beta: f64,
    mu: f64,
    hbar: f64,
    gamma: f64,
    z0: f64,
}

impl PotentialParams {
    pub fn new(v0: f64, beta: f64, mu: f64, hbar: f64) -> Result<Self> {
        for (name, value) in [("V0", v0), ("beta", beta), ("mu", mu), ("hbar", hbar)] {
            if !(value > 0.0 && value.is_finite()) {
                return Err(Error::NonPositive { name, value });
            }
        }
        let gamma = (2.0 * mu * v0).sqrt() / hbar;
        Ok(Self { v0, beta, mu, hbar, gamma, z0: 2.0 * gamma / beta })
    }

    /// Units with `hbar = 1`, `2 mu = 1`, so that `E = -alpha²` and `gamma² = V0`.
    pub fn natural(v0: f64, beta: f64) -> Result<Self> {
        Self::new(v0, beta, 0.5, 1.0)
    }

    pub fn v0(&self) -> f64 {
        self.v0
    }
    pub fn beta(&self) -> f64 {
        self.beta
    }
    pub fn mu(&self) -> f64 {
        self.mu
    }
    pub fn hbar(&self) -> f64 {
        self.hbar
    }
    /// `sqrt(2 mu V0) / hbar`.
    pub fn gamma(&self) -> f64 {
        self.gamma
    }
    /// Bessel argument at the origin, `2 gamma / beta`.
    pub fn z0(&self) -> f64 {
        self.z0
    }

    /// `hbar² / (2 mu)`: converts between `alpha²` and energy.
    pub fn kinetic_scale(&self) -> f64 {
        self.hbar * self.hbar / (2.0 * self.mu)
    }

    pub fn potential(&self, r: f64) -> f64 {
        -self.v0 * (-self.beta * r).exp()
    }

    pub fn energy_of_alpha(&self, alpha: f64) -> f64 {
        -self.kinetic_scale() * alpha * alpha
    }

    pub fn alpha_of_energy(&self, energy: f64) -> f64 {
        (-energy / self.kinetic_scale()).sqrt()
    }

    /// `x = (gamma/beta)² exp(-beta r)`.
    pub fn x_of_r(&self, r: f64) -> f64 {
        self.x_max() * (-self.beta * r).exp()
    }

    /// Inverse of [`Self::x_of_r`] on `(0, (gamma/beta)²]`.
    pub fn r_of_x(&self, x: f64) -> Result<f64> {
        let x_max = self.x_max();
        if !(x > 0.0 && x <= x_max) {
            return Err(Error::InverseDomain { x, x_max });
        }
        Ok(-(x / x_max).ln() / self.beta)
    }

    fn x_max(&self) -> f64 {
        let ratio = self.gamma / self.beta;
        ratio * ratio
    }
}

/// One bound state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundState {
    /// Number of interior nodes; 0 is the ground state.
    pub n: usize,
    /// Bessel order `2 alpha / beta`.
    pub nu: f64,
    pub alpha: f64,
    pub energy: f64,
    /// Amplitude `C`; 1 until [`normalize`] is applied.
    pub norm_c: f64,
}

impl BoundState {
    /// Builds the state for a Bessel order `nu`, deriving `alpha` and the energy.
    pub fn from_nu(p: &PotentialParams, n: usize, nu: f64) -> Self {
        let alpha = 0.5 * nu * p.beta();
        Self { n, nu, alpha, energy: p.energy_of_alpha(alpha), norm_c: 1.0 }
    }

    pub fn rho(&self, p: &PotentialParams) -> f64 {
        self.alpha / p.beta()
    }
}

/// Bound states ordered by `n` (most bound first), plus anything worth flagging.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub states: Vec<BoundState>,
    pub warnings: Vec<String>,
}

/// All bound states of `p`.
pub fn spectrum(p: &PotentialParams, cfg: &SolverConfig) -> Result<Spectrum> {
    cfg.validate()?;
    let zeros = find_nu_zeros(p.z0(), cfg)?;
    let states = zeros
        .zeros
        .iter()
        .rev()
        .enumerate()
        .map(|(n, &nu)| BoundState::from_nu(p, n, nu))
        .collect();
    let warnings = zeros
        .dropped
        .iter()
        .map(|nu| format!("dropped near-threshold zero nu = {nu:e} (E ~ 0, not normalizable)"))
        .collect();
    Ok(Spectrum { states, warnings })
}

fn check_state(p: &PotentialParams, s: &BoundState, cfg: &SolverConfig) -> Result<()> {
    let residual = bessel_j(s.nu, p.z0())?;
    if !(residual.abs() <= cfg.residual_tol) {
        return Err(Error::ParameterMismatch { nu: s.nu, z0: p.z0(), residual });
    }
    Ok(())
}

#[inline]
fn u_unchecked(p: &PotentialParams, s: &BoundState, r: f64) -> f64 {
    s.norm_c * bessel_j_unchecked(s.nu, p.z0() * (-0.5 * p.beta() * r).exp())
}

/// `u(r) = C J_nu(z0 exp(-beta r / 2))`.
pub fn wavefunction(p: &PotentialParams, s: &BoundState, r: f64, cfg: &SolverConfig) -> Result<f64> {
    check_state(p, s, cfg)?;
    Ok(u_unchecked(p, s, r))
}

/// Sampled `u(r)` and `R(r) = u/r`.
#[derive(Debug, Clone, PartialEq)]
pub struct WavefunctionTable {
    pub r: Vec<f64>,
    pub u: Vec<f64>,
    /// `None` at `r = 0`, where `R` is not defined by the ratio.
    pub radial: Vec<Option<f64>>,
}

impl WavefunctionTable {
    pub fn len(&self) -> usize {
        self.r.len()
    }

    pub fn is_empty(&self) -> bool {
        self.r.is_empty()
    }

    /// Uniform spacing, if the grid has one.
    pub fn step(&self) -> Option<f64> {
        if self.r.len() < 2 {
            return None;
        }
        let h = (self.r[self.r.len() - 1] - self.r[0]) / (self.r.len() - 1) as f64;
        let uniform = self.r.windows(2).all(|w| ((w[1] - w[0]) - h).abs() <= 1e-9 * h);
        uniform.then_some(h)
    }
}

/// Samples `u` on `points` uniformly spaced radii in `[0, r_max]`.
pub fn wavefunction_table(
    p: &PotentialParams,
    s: &BoundState,
    r_max: f64,
    points: usize,
    cfg: &SolverConfig,
) -> Result<WavefunctionTable> {
    if !(r_max > 0.0) {
        return Err(Error::NonPositive { name: "r_max", value: r_max });
    }
    if points < 2 {
        return Err(Error::Config(format!("need at least 2 points, got {points}")));
    }
    check_state(p, s, cfg)?;
    let h = r_max / (points - 1) as f64;
    let r: Vec<f64> = (0..points).map(|i| i as f64 * h).collect();
    let u: Vec<f64> = r.iter().map(|&r| u_unchecked(p, s, r)).collect();
    let radial = r.iter().zip(&u).map(|(&r, &u)| (r > 0.0).then(|| u / r)).collect();
    Ok(WavefunctionTable { r, u, radial })
}

/// Radius beyond which `∫ u² dr` (with `C = 1`) is below `fraction * reference`.
///
/// Uses `|J_nu(x)| <= (x/2)^nu / Γ(nu+1)`, so the tail integral is bounded by
/// `((z0/2)^nu / Γ(nu+1))² exp(-nu beta r) / (nu beta)`.
fn tail_radius(p: &PotentialParams, nu: f64, fraction: f64, reference: f64) -> f64 {
    let nb = nu * p.beta();
    let log_amp = 2.0 * (nu * (0.5 * p.z0()).ln() - ln_gamma(nu + 1.0));
    let r = (log_amp - nb.ln() - (fraction * reference).ln()) / nb;
    r.max(0.0)
}

/// `∫_0^{r_max} u² dr` with the state's current amplitude, `r_max` chosen so
/// the neglected tail is below `1e-12` of the total.
pub fn norm_integral(p: &PotentialParams, s: &BoundState, cfg: &SolverConfig) -> Result<f64> {
    check_state(p, s, cfg)?;
    let f = |r: f64| {
        let u = u_unchecked(p, s, r);
        u * u
    };
    let panels = 20_000;
    let r_first = 20.0 / p.beta();
    let first = adaptive(f, 0.0, r_first, 0.0, cfg.norm_tol, panels).value;
    let reference = first / (s.norm_c * s.norm_c);
    let r_max = tail_radius(p, s.nu, 1e-13, reference).max(r_first);
    let est = adaptive(f, 0.0, r_max, 0.0, cfg.norm_tol, panels);
    if !est.value.is_finite() || est.value <= 0.0 {
        return Err(Error::Quadrature(r_max));
    }
    Ok(est.value)
}

/// Sets `C > 0` so that `∫ u² dr = 1`.
pub fn normalize(p: &PotentialParams, s: &BoundState, cfg: &SolverConfig) -> Result<BoundState> {
    let unit = BoundState { norm_c: 1.0, ..*s };
    let integral = norm_integral(p, &unit, cfg)?;
    Ok(BoundState { norm_c: 1.0 / integral.sqrt(), ..*s })
}

/// Radius past which the normalized state is negligible (`u²` tail below `1e-12`).
pub fn decay_radius(p: &PotentialParams, s: &BoundState) -> f64 {
    tail_radius(p, s.nu, 1e-12, 1.0 / (s.norm_c * s.norm_c))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn cfg() -> SolverConfig {
        SolverConfig::default()
    }

    #[test]
    fn params_examples() {
        let p = PotentialParams::natural(25.0, 1.0).unwrap();
        assert_relative_eq!(p.gamma(), 5.0, max_relative = 1e-15);
        assert_relative_eq!(p.z0(), 10.0, max_relative = 1e-15);
        assert_relative_eq!(PotentialParams::natural(1.0, 1.0).unwrap().z0(), 2.0, max_relative = 1e-15);
        let p = PotentialParams::new(25.0, 1.0, 0.5, 2.0).unwrap();
        assert_relative_eq!(p.gamma(), 2.5, max_relative = 1e-15);
        assert_relative_eq!(p.z0(), 5.0, max_relative = 1e-15);
        assert_relative_eq!(p.gamma().powi(2), 2.0 * p.mu() * p.v0() / p.hbar().powi(2), max_relative = 1e-15);
    }

    #[test]
    fn params_reject_non_positive() {
        assert!(matches!(PotentialParams::natural(-3.0, 1.0), Err(Error::NonPositive { name: "V0", .. })));
        assert!(matches!(PotentialParams::natural(1.0, 0.0), Err(Error::NonPositive { name: "beta", .. })));
        assert!(matches!(PotentialParams::new(1.0, 1.0, 0.0, 1.0), Err(Error::NonPositive { name: "mu", .. })));
        assert!(matches!(PotentialParams::new(1.0, 1.0, 1.0, f64::NAN), Err(Error::NonPositive { name: "hbar", .. })));
    }

    #[test]
    fn change_of_variables() {
        let p = PotentialParams::natural(25.0, 1.0).unwrap();
        assert_relative_eq!(p.x_of_r(0.0), 25.0, max_relative = 1e-15);
        assert!(p.x_of_r(50.0) < 25.0 * 2e-22);
        assert_relative_eq!(p.x_of_r(25f64.ln()), 1.0, max_relative = 1e-14);
        for r in [0.1, 1.0, 3.7, 20.0] {
            assert_relative_eq!(p.r_of_x(p.x_of_r(r)).unwrap(), r, max_relative = 1e-14);
        }
        assert_eq!(p.r_of_x(p.x_of_r(0.0)).unwrap(), 0.0);
        assert!(matches!(p.r_of_x(0.0), Err(Error::InverseDomain { .. })));
        assert!(matches!(p.r_of_x(26.0), Err(Error::InverseDomain { .. })));
    }

    #[test]
    fn spectrum_examples() {
        let empty = spectrum(&PotentialParams::natural(1.0, 1.0).unwrap(), &cfg()).unwrap();
        assert!(empty.states.is_empty());

        let p = PotentialParams::natural(25.0, 1.0).unwrap();
        let s = spectrum(&p, &cfg()).unwrap();
        assert_eq!(s.states.len(), 3);
        for (state, nu) in s.states.iter().zip([6.1, 3.2, 0.9]) {
            assert!((state.nu - nu).abs() < 0.15);
            assert_relative_eq!(state.energy, -(state.nu / 2.0).powi(2), max_relative = 1e-14);
            assert_eq!(state.norm_c, 1.0);
        }
        assert!(s.states.windows(2).all(|w| w[0].nu > w[1].nu && w[0].energy < w[1].energy));
        assert_eq!(s.states.iter().map(|s| s.n).collect::<Vec<_>>(), vec![0, 1, 2]);

        let one = spectrum(&PotentialParams::natural(25.0, 2.0).unwrap(), &cfg()).unwrap();
        assert_eq!(one.states.len(), 1);
    }

    #[test]
    fn wavefunction_vanishes_at_origin_and_infinity() {
        let p = PotentialParams::natural(25.0, 1.0).unwrap();
        for s in spectrum(&p, &cfg()).unwrap().states {
            let table = wavefunction_table(&p, &s, 30.0, 3001, &cfg()).unwrap();
            let max = table.u.iter().fold(0.0_f64, |m, u| m.max(u.abs()));
            assert!(wavefunction(&p, &s, 0.0, &cfg()).unwrap().abs() <= cfg().residual_tol * max);
            assert!(wavefunction(&p, &s, 50.0, &cfg()).unwrap().abs() < 1e-8 * max);
            assert_eq!(table.radial[0], None);
            assert_relative_eq!(table.radial[10].unwrap(), table.u[10] / table.r[10]);
        }
    }

    #[test]
    fn wavefunction_rejects_foreign_state() {
        let p = PotentialParams::natural(25.0, 1.0).unwrap();
        let fake = BoundState::from_nu(&p, 0, 5.0);
        assert!(matches!(wavefunction(&p, &fake, 1.0, &cfg()), Err(Error::ParameterMismatch { .. })));
    }

    #[test]
    fn normalize_is_unit_and_idempotent() {
        let p = PotentialParams::natural(25.0, 1.0).unwrap();
        for s in spectrum(&p, &cfg()).unwrap().states {
            let once = normalize(&p, &s, &cfg()).unwrap();
            assert!((norm_integral(&p, &once, &cfg()).unwrap() - 1.0).abs() <= 1e-8);
            let twice = normalize(&p, &once, &cfg()).unwrap();
            assert!((twice.norm_c - once.norm_c).abs() <= 1e-10 * once.norm_c);
            assert!(once.norm_c > 0.0);
        }
    }
}
