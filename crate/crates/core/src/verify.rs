//! The cross-validation suite behind `expwell verify`.
//!
//! Each check compares the Mellin/Bessel route against an independent
//! computation and reports pass/fail with the observed deviation.

use crate::config::SolverConfig;
use crate::error::Result;
use crate::mellin::{
    g_closed, g_iterate, match_parameters, mellin_bessel_sqrt, mellin_numeric, QuadratureConfig,
};
use crate::oracle::{fd_spectrum, numerov_spectrum, ode_residual, OracleSpectrum, RadialGrid};
use crate::solver::{decay_radius, normalize, spectrum, wavefunction_table, PotentialParams, Spectrum};
use crate::specfun::{bessel_j, gamma, BESSEL_ENVELOPE};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Seed for every randomized sample in the suite.
pub const SEED: u64 = 0x6d65_6c6c_696e;

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Self { name: name.into(), passed, detail: detail.into() }
    }
}

/// Analytic spectrum next to both extrapolated oracle spectra.
#[derive(Debug, Clone)]
pub struct CrossValidation {
    pub analytic: Spectrum,
    pub numerov: OracleSpectrum,
    pub finite_difference: OracleSpectrum,
}

impl CrossValidation {
    /// Analytic energies in ascending order, matching the oracle ordering.
    pub fn analytic_ascending(&self) -> Vec<f64> {
        self.analytic.states.iter().map(|s| s.energy).collect()
    }

    pub fn counts_agree(&self) -> bool {
        let n = self.analytic.states.len();
        self.numerov.energies.len() == n && self.finite_difference.energies.len() == n
    }

    /// Largest relative deviation of either oracle from the analytic energies.
    pub fn max_relative_deviation(&self) -> f64 {
        let analytic = self.analytic_ascending();
        let mut worst = 0.0_f64;
        for oracle in [&self.numerov.energies, &self.finite_difference.energies] {
            for (a, o) in analytic.iter().zip(oracle) {
                worst = worst.max(((o - a) / a).abs());
            }
        }
        worst
    }
}

/// Solves `p` analytically and with both oracles on a grid sized for its
/// shallowest analytic state.
pub fn cross_validate(p: &PotentialParams, cfg: &SolverConfig) -> Result<CrossValidation> {
    let analytic = spectrum(p, cfg)?;
    let alpha_min = analytic.states.last().map(|s| s.alpha);
    let grid = RadialGrid::for_params(p, alpha_min, cfg)?;
    let numerov = numerov_spectrum(p, &grid, cfg);
    let finite_difference = fd_spectrum(p, &grid, cfg.fd_levels);
    Ok(CrossValidation { analytic, numerov, finite_difference })
}

fn relative(a: f64, b: f64) -> f64 {
    let scale = a.abs().max(b.abs());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).abs() / scale
    }
}

pub const RHO_SET: [f64; 4] = [0.5, 1.3, 2.0, 3.7];
pub const Y_SET: [f64; 5] = [-0.5, 0.0, 0.7, 1.0, 2.5];

pub fn check_difference_equation() -> Result<Check> {
    let mut worst_rel = 0.0_f64;
    let mut worst_abs_zero = 0.0_f64;
    for rho in RHO_SET {
        for n in 0..=20 {
            let it = g_iterate(rho, n, 1.0);
            let cf = g_closed(rho, f64::from(n), 1.0)?;
            if it == 0.0 {
                worst_abs_zero = worst_abs_zero.max(cf.abs());
            } else {
                worst_rel = worst_rel.max(relative(cf, it));
            }
        }
    }
    Ok(Check::new(
        "difference equation: closed form = iteration",
        worst_rel <= 1e-10 && worst_abs_zero <= 1e-12,
        format!("max rel {worst_rel:.3e} (tol 1e-10), max |g| at exact zeros {worst_abs_zero:.3e} (tol 1e-12)"),
    ))
}

pub fn check_functional_equation() -> Result<Check> {
    let mut worst = 0.0_f64;
    for rho in RHO_SET {
        for y in Y_SET {
            if rho + y <= 0.0 && (rho + y).fract() == 0.0 {
                continue;
            }
            let lhs = g_closed(rho, y + 1.0, 1.0)?;
            let rhs = (rho * rho - y * y) * g_closed(rho, y, 1.0)?;
            worst = worst.max(relative(lhs, rhs));
        }
    }
    Ok(Check::new(
        "functional equation g(y+1) = (rho^2 - y^2) g(y) at real y",
        worst <= 1e-12,
        format!("max rel {worst:.3e} (tol 1e-12)"),
    ))
}

pub fn check_mellin_pairs(q: &QuadratureConfig) -> Result<Vec<Check>> {
    let bessel_q = QuadratureConfig { t_max: q.t_max.min(BESSEL_ENVELOPE), ..q.clone() };
    let mut worst_bessel = 0.0_f64;
    for nu in [0.5, 1.0, 2.7] {
        for y in [0.25, 0.5] {
            let numeric = mellin_numeric(|x| bessel_j(nu, 2.0 * x.sqrt()).unwrap_or(f64::NAN), y, &bessel_q)?;
            worst_bessel = worst_bessel.max((numeric.value - mellin_bessel_sqrt(nu, 2.0, y)?).abs());
        }
    }
    let mut worst_exp = 0.0_f64;
    for y in [0.5, 1.0, 2.5, 5.0] {
        let numeric = mellin_numeric(|x| (-x).exp(), y, q)?;
        worst_exp = worst_exp.max((numeric.value - gamma(y)?).abs());
    }
    Ok(vec![
        Check::new(
            "Mellin pair: J_nu(2 sqrt x) numeric vs closed form",
            worst_bessel <= 1e-6,
            format!("max abs {worst_bessel:.3e} (tol 1e-6)"),
        ),
        Check::new(
            "Mellin pair: exp(-x) numeric vs Gamma(y)",
            worst_exp <= 1e-10,
            format!("max abs {worst_exp:.3e} (tol 1e-10)"),
        ),
    ])
}

pub fn check_matching(rho: f64) -> Result<Check> {
    let m = match_parameters(rho)?;
    let mut worst = 0.0_f64;
    // y grid inside (-rho, rho + 1) away from the Gamma pole at y = -rho.
    for i in 0..=40 {
        let y = -0.5 * rho + (1.5 * rho + 1.0) * f64::from(i) / 40.0;
        let closed = g_closed(rho, y, m.g0)?;
        let pair = mellin_bessel_sqrt(m.nu, m.a, y)?;
        worst = worst.max((closed - pair).abs() / closed.abs().max(pair.abs()).max(1.0));
    }
    Ok(Check::new(
        format!("matching a=2, nu=2rho, g0=1/rho at rho={rho}"),
        worst <= 1e-12,
        format!("max scaled deviation {worst:.3e} (tol 1e-12)"),
    ))
}

pub fn check_cross_validation(p: &PotentialParams, cfg: &SolverConfig) -> Result<Check> {
    let cv = cross_validate(p, cfg)?;
    let dev = cv.max_relative_deviation();
    Ok(Check::new(
        format!("spectrum cross-validation V0={} beta={}", p.v0(), p.beta()),
        cv.counts_agree() && dev <= 1e-5,
        format!(
            "counts analytic/numerov/fd = {}/{}/{}, max rel deviation {dev:.3e} (tol 1e-5)",
            cv.analytic.states.len(),
            cv.numerov.energies.len(),
            cv.finite_difference.energies.len()
        ),
    ))
}

pub fn check_threshold(cfg: &SolverConfig) -> Result<Vec<Check>> {
    let p = PotentialParams::natural(1.0, 1.0)?;
    let cv = cross_validate(&p, cfg)?;
    let empty = cv.analytic.states.is_empty() && cv.counts_agree();

    let mut counts = Vec::new();
    for z0 in 1..=30 {
        let z0 = f64::from(z0);
        // beta = 1 and hbar = 1, 2mu = 1: z0 = 2 sqrt(V0).
        let p = PotentialParams::natural(0.25 * z0 * z0, 1.0)?;
        counts.push(spectrum(&p, cfg)?.states.len());
    }
    let monotone = counts.windows(2).all(|w| w[0] <= w[1]);
    Ok(vec![
        Check::new("threshold: z0 = 2 has no bound states (all methods)", empty, "V0=1, beta=1"),
        Check::new(
            "threshold: state count non-decreasing for z0 = 1..30",
            monotone,
            format!("counts {counts:?}"),
        ),
    ])
}

/// Largest `|u(0)|/max|u|`, whether every state has `n` interior nodes, and
/// the largest scaled ODE residual.
pub fn wavefunction_validity(p: &PotentialParams, cfg: &SolverConfig) -> Result<(f64, bool, f64)> {
    let mut origin = 0.0_f64;
    let mut nodes_ok = true;
    let mut residual = 0.0_f64;
    for s in spectrum(p, cfg)?.states {
        let s = normalize(p, &s, cfg)?;
        let r_max = decay_radius(p, &s).max(10.0 / p.beta());
        let h = 1e-3 / p.beta();
        let points = (r_max / h).ceil() as usize + 1;
        let table = wavefunction_table(p, &s, h * (points - 1) as f64, points, cfg)?;
        let max = table.u.iter().fold(0.0_f64, |m, u| m.max(u.abs()));
        origin = origin.max(table.u[0].abs() / max);
        nodes_ok &= interior_nodes(&table.u) == s.n;
        residual = residual.max(ode_residual(p, s.alpha, &table)?);
    }
    Ok((origin, nodes_ok, residual))
}

/// Sign changes among the samples after the first.
pub fn interior_nodes(u: &[f64]) -> usize {
    let mut count = 0;
    let mut last = 0.0_f64;
    for &v in u.iter().skip(1) {
        if v == 0.0 {
            continue;
        }
        if last != 0.0 && last.signum() != v.signum() {
            count += 1;
        }
        last = v;
    }
    count
}

pub fn check_wavefunctions(p: &PotentialParams, cfg: &SolverConfig) -> Result<Check> {
    let (origin, nodes_ok, residual) = wavefunction_validity(p, cfg)?;
    Ok(Check::new(
        format!("wavefunctions V0={} beta={}", p.v0(), p.beta()),
        origin <= 1e-8 && nodes_ok && residual <= 1e-6,
        format!(
            "max |u(0)|/max|u| {origin:.3e} (tol 1e-8), node counts {}, max scaled residual {residual:.3e} (tol 1e-6)",
            if nodes_ok { "ok" } else { "WRONG" }
        ),
    ))
}

pub fn check_scaling(p: &PotentialParams, cfg: &SolverConfig) -> Result<Check> {
    let scaled = PotentialParams::new(4.0 * p.v0(), 2.0 * p.beta(), p.mu(), p.hbar())?;
    let a = spectrum(p, cfg)?.states;
    let b = spectrum(&scaled, cfg)?.states;
    let mut nu_dev = 0.0_f64;
    let mut ratio_dev = 0.0_f64;
    for (x, y) in a.iter().zip(&b) {
        nu_dev = nu_dev.max((x.nu - y.nu).abs());
        ratio_dev = ratio_dev.max((y.energy / x.energy - 4.0).abs() / 4.0);
    }
    Ok(Check::new(
        format!("scaling (V0, beta) -> (4V0, 2beta) from V0={} beta={}", p.v0(), p.beta()),
        a.len() == b.len() && nu_dev <= cfg.root_tol && ratio_dev <= 1e-10,
        format!("max |dnu| {nu_dev:.3e} (tol {:.0e}), max |ratio/4 - 1| {ratio_dev:.3e} (tol 1e-10)", cfg.root_tol),
    ))
}

pub fn check_bessel(samples: usize) -> Result<Vec<Check>> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut worst = 0.0_f64;
    for _ in 0..samples {
        let nu: f64 = rng.gen_range(1.0..20.0);
        let z: f64 = rng.gen_range(0.5..30.0);
        let (jm, j, jp) = (bessel_j(nu - 1.0, z)?, bessel_j(nu, z)?, bessel_j(nu + 1.0, z)?);
        let scale = jm.abs().max(j.abs()).max(jp.abs());
        worst = worst.max((jm + jp - 2.0 * nu / z * j).abs() / scale);
    }
    let half = bessel_j(0.5, std::f64::consts::PI)?.abs();
    Ok(vec![
        Check::new(
            "Bessel three-term recurrence",
            worst <= 1e-10,
            format!("{samples} samples, max scaled defect {worst:.3e} (tol 1e-10)"),
        ),
        Check::new("Bessel J_1/2(pi) = 0", half <= 1e-12, format!("|J| = {half:.3e} (tol 1e-12)")),
    ])
}

/// Potentials checked by default: the three reference wells.
pub fn reference_wells() -> Vec<PotentialParams> {
    [(25.0, 1.0), (100.0, 2.0), (6.0, 1.0)]
        .into_iter()
        .map(|(v0, beta)| PotentialParams::natural(v0, beta).expect("positive"))
        .collect()
}

/// Runs every check. `extra` wells (e.g. from the command line) are added to
/// the per-potential checks.
pub fn run_suite(extra: &[PotentialParams], cfg: &SolverConfig) -> Result<Vec<Check>> {
    cfg.validate()?;
    let mut wells = reference_wells();
    for p in extra {
        if !wells.contains(p) {
            wells.push(*p);
        }
    }

    let mut checks = vec![check_difference_equation()?, check_functional_equation()?];
    checks.extend(check_mellin_pairs(&cfg.quadrature)?);
    for rho in [0.5, 1.0, 2.5] {
        checks.push(check_matching(rho)?);
    }
    for p in &wells {
        checks.push(check_cross_validation(p, cfg)?);
    }
    checks.extend(check_threshold(cfg)?);
    for p in &wells {
        checks.push(check_wavefunctions(p, cfg)?);
        checks.push(check_scaling(p, cfg)?);
    }
    checks.extend(check_bessel(200)?);
    Ok(checks)
}
