//! Brute-force reference solutions of `u'' - alpha² u + gamma² exp(-beta r) u = 0`
//! that share nothing with the Mellin/Bessel route: Numerov shooting, a
//! finite-difference Sturm-sequence eigensolver, and a finite-difference
//! residual check for sampled wavefunctions.

use crate::config::SolverConfig;
use crate::error::{Error, Result};
use crate::solver::{PotentialParams, WavefunctionTable};

/// Uniform grid on `[0, r_max]` including both ends.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialGrid {
    pub r_max: f64,
    pub n_points: usize,
}

impl RadialGrid {
    pub fn new(r_max: f64, n_points: usize) -> Result<Self> {
        if !(r_max > 0.0 && r_max.is_finite()) {
            return Err(Error::NonPositive { name: "r_max", value: r_max });
        }
        if n_points < 100 {
            return Err(Error::Config(format!("radial grid needs at least 100 points, got {n_points}")));
        }
        Ok(Self { r_max, n_points })
    }

    /// Grid sized for `p`: `r_max = cfg.decay_lengths * max(1/beta, 1/alpha_min)`
    /// and spacing `cfg.step_scale / max(beta, gamma)`.
    pub fn for_params(p: &PotentialParams, alpha_min: Option<f64>, cfg: &SolverConfig) -> Result<Self> {
        let mut length = 1.0 / p.beta();
        if let Some(alpha) = alpha_min.filter(|a| *a > 0.0) {
            length = length.max(1.0 / alpha);
        }
        let r_max = cfg.decay_lengths * length;
        let h = cfg.step_scale / p.beta().max(p.gamma());
        let n_points = ((r_max / h).ceil() as usize + 1).max(100);
        Self::new(r_max, n_points)
    }

    pub fn h(&self) -> f64 {
        self.r_max / (self.n_points - 1) as f64
    }

    /// Same extent, half the spacing.
    pub fn refined(&self) -> Self {
        Self { r_max: self.r_max, n_points: 2 * self.n_points - 1 }
    }

    pub fn r(&self, i: usize) -> f64 {
        i as f64 * self.h()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OracleMethod {
    Numerov,
    FiniteDifference,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleSpectrum {
    /// Ascending, all negative.
    pub energies: Vec<f64>,
    pub method: OracleMethod,
    pub grid: RadialGrid,
    pub richardson_applied: bool,
}

// exp(-beta r_i) on the grid; shared by every energy evaluated on it.
fn decay_table(p: &PotentialParams, g: &RadialGrid) -> Vec<f64> {
    let h = g.h();
    (0..g.n_points).map(|i| (-p.beta() * i as f64 * h).exp()).collect()
}

const RESCALE_AT: f64 = 1e150;

struct InwardRun {
    u0: f64,
    max_abs: f64,
    nodes: usize,
    values: Option<Vec<f64>>,
}

/// Numerov from `r_max` down to `0` for `u'' = k(r) u`, `k = alpha² - gamma² e^{-beta r}`.
///
/// Seeded with the decaying exponential `e^{-alpha r}`. Whenever `|u|` exceeds
/// `1e150` everything computed so far is scaled down by the same factor, so
/// the run never overflows and ratios are unaffected.
fn numerov_inward(p: &PotentialParams, energy: f64, decay: &[f64], h: f64, keep: bool) -> InwardRun {
    let n = decay.len();
    let alpha2 = -energy / p.kinetic_scale();
    let gamma2 = p.gamma() * p.gamma();
    let c = h * h / 12.0;
    let k = |i: usize| alpha2 - gamma2 * decay[i];

    let mut values = keep.then(|| vec![0.0; n]);
    let mut u_next = 1.0; // u[i + 1]
    let mut u_cur = (alpha2.sqrt() * h).exp(); // u[i]
    let mut k_next = k(n - 1);
    let mut k_cur = k(n - 2);
    if let Some(v) = values.as_mut() {
        v[n - 1] = u_next;
        v[n - 2] = u_cur;
    }
    let mut max_abs = u_next.abs().max(u_cur.abs());
    let mut nodes = 0;
    for i in (0..n - 2).rev() {
        let k_prev = k(i);
        let u_prev = (2.0 * u_cur * (1.0 + 5.0 * c * k_cur) - u_next * (1.0 - c * k_next)) / (1.0 - c * k_prev);
        if i > 0 && u_prev != 0.0 && u_cur != 0.0 && u_prev.signum() != u_cur.signum() {
            nodes += 1;
        }
        u_next = u_cur;
        u_cur = u_prev;
        k_next = k_cur;
        k_cur = k_prev;
        if let Some(v) = values.as_mut() {
            v[i] = u_cur;
        }
        max_abs = max_abs.max(u_cur.abs());
        if max_abs > RESCALE_AT {
            u_cur /= RESCALE_AT;
            u_next /= RESCALE_AT;
            max_abs /= RESCALE_AT;
            if let Some(v) = values.as_mut() {
                v[i..].iter_mut().for_each(|x| *x /= RESCALE_AT);
            }
        }
    }
    InwardRun { u0: u_cur, max_abs, nodes, values }
}

/// `u(0) / max|u|` for the inward Numerov solution at energy `energy < 0`.
/// Its zeros in `energy` are the eigenvalues.
pub fn numerov_mismatch(p: &PotentialParams, energy: f64, g: &RadialGrid) -> f64 {
    let run = numerov_inward(p, energy, &decay_table(p, g), g.h(), false);
    run.u0 / run.max_abs
}

/// Inward Numerov solution at `energy`, scaled to `max|u| = 1`.
pub fn numerov_solution(p: &PotentialParams, energy: f64, g: &RadialGrid) -> WavefunctionTable {
    let run = numerov_inward(p, energy, &decay_table(p, g), g.h(), true);
    let u: Vec<f64> = run.values.unwrap_or_default().into_iter().map(|v| v / run.max_abs).collect();
    let r: Vec<f64> = (0..g.n_points).map(|i| g.r(i)).collect();
    let radial = r.iter().zip(&u).map(|(&r, &u)| (r > 0.0).then(|| u / r)).collect();
    WavefunctionTable { r, u, radial }
}

/// Eigenvalues on a single grid, no extrapolation.
///
/// Samples the mismatch at `energy_scan_steps` points from `-V0` upwards (plus
/// one just below threshold), brackets each sign change and bisects it to
/// `energy_tol` relative width. A node-count jump of two or more inside a
/// cell without a sign change means two roots share it; such cells are
/// trisected until the roots separate.
pub fn numerov_eigenvalues(p: &PotentialParams, g: &RadialGrid, cfg: &SolverConfig) -> Vec<f64> {
    let decay = decay_table(p, g);
    let h = g.h();
    let eval = |e: f64| {
        let run = numerov_inward(p, e, &decay, h, false);
        (run.u0 / run.max_abs, run.nodes)
    };

    let steps = cfg.energy_scan_steps;
    let v0 = p.v0();
    let mut samples: Vec<f64> = (0..steps).map(|i| -v0 + v0 * i as f64 / steps as f64).collect();
    samples.push(-v0 * 1e-10);

    let mut roots = Vec::new();
    let mut lo = samples[0];
    let mut lo_val = eval(lo);
    for &hi in &samples[1..] {
        let hi_val = eval(hi);
        collect_roots(&eval, (lo, lo_val), (hi, hi_val), cfg.energy_tol, 0, &mut roots);
        lo = hi;
        lo_val = hi_val;
    }
    roots
}

fn collect_roots(
    eval: &impl Fn(f64) -> (f64, usize),
    (lo, (f_lo, n_lo)): (f64, (f64, usize)),
    (hi, (f_hi, n_hi)): (f64, (f64, usize)),
    tol: f64,
    depth: u32,
    roots: &mut Vec<f64>,
) {
    let sign_change = f_lo != 0.0 && f_hi != 0.0 && f_lo.signum() != f_hi.signum();
    let expected = n_hi.saturating_sub(n_lo);
    if sign_change && expected <= 1 {
        roots.push(bisect_energy(eval, lo, hi, f_lo, tol));
        return;
    }
    if f_lo == 0.0 {
        roots.push(lo);
    }
    if (expected >= 2 || (sign_change && expected > 1)) && depth < 12 {
        let third = (hi - lo) / 3.0;
        let (a, b) = (lo + third, lo + 2.0 * third);
        let (va, vb) = (eval(a), eval(b));
        collect_roots(eval, (lo, (f_lo, n_lo)), (a, va), tol, depth + 1, roots);
        collect_roots(eval, (a, va), (b, vb), tol, depth + 1, roots);
        collect_roots(eval, (b, vb), (hi, (f_hi, n_hi)), tol, depth + 1, roots);
    } else if sign_change {
        roots.push(bisect_energy(eval, lo, hi, f_lo, tol));
    }
}

fn bisect_energy(eval: &impl Fn(f64) -> (f64, usize), mut lo: f64, mut hi: f64, mut f_lo: f64, tol: f64) -> f64 {
    while hi - lo > tol * lo.abs().max(hi.abs()) {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let (f_mid, _) = eval(mid);
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

/// Pairs levels computed on `h` and `h/2` and removes the `h^order` error term.
fn richardson(coarse: &[f64], fine: &[f64], order: i32) -> Vec<f64> {
    let factor = 2f64.powi(order) - 1.0;
    coarse.iter().zip(fine).map(|(c, f)| f + (f - c) / factor).filter(|e| *e < 0.0).collect()
}

/// Numerov spectrum on `g` and `g.refined()`, Richardson-extrapolated
/// assuming an `O(h⁴)` leading error.
pub fn numerov_spectrum(p: &PotentialParams, g: &RadialGrid, cfg: &SolverConfig) -> OracleSpectrum {
    let coarse = numerov_eigenvalues(p, g, cfg);
    let fine = numerov_eigenvalues(p, &g.refined(), cfg);
    OracleSpectrum {
        energies: richardson(&coarse, &fine, 4),
        method: OracleMethod::Numerov,
        grid: *g,
        richardson_applied: true,
    }
}

/// Symmetric tridiagonal discretization of `-(hbar²/2mu) u'' + V u` with
/// `u(0) = u(r_max) = 0` on the interior grid points.
#[derive(Debug, Clone)]
pub struct Tridiagonal {
    pub diagonal: Vec<f64>,
    pub off_diagonal: f64,
}

impl Tridiagonal {
    pub fn hamiltonian(p: &PotentialParams, g: &RadialGrid) -> Self {
        let h = g.h();
        let t = p.kinetic_scale() / (h * h);
        let diagonal = (1..g.n_points - 1).map(|i| 2.0 * t + p.potential(g.r(i))).collect();
        Self { diagonal, off_diagonal: -t }
    }

    /// Number of eigenvalues strictly below `lambda` (Sturm sequence / LDLᵀ pivots).
    pub fn count_below(&self, lambda: f64) -> usize {
        let e2 = self.off_diagonal * self.off_diagonal;
        let guard = f64::EPSILON * self.off_diagonal.abs();
        let mut count = 0;
        let mut q = 1.0;
        for (i, &d) in self.diagonal.iter().enumerate() {
            q = if i == 0 { d - lambda } else { d - lambda - e2 / q };
            if q == 0.0 {
                q = -guard;
            }
            if q < 0.0 {
                count += 1;
            }
        }
        count
    }

    /// The `index`-th smallest eigenvalue (0-based) by bisection.
    pub fn eigenvalue(&self, index: usize) -> f64 {
        let spread = 2.0 * self.off_diagonal.abs();
        let mut lo = self.diagonal.iter().cloned().fold(f64::INFINITY, f64::min) - spread;
        let mut hi = self.diagonal.iter().cloned().fold(f64::NEG_INFINITY, f64::max) + spread;
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi || hi - lo <= 4.0 * f64::EPSILON * mid.abs() {
                break;
            }
            if self.count_below(mid) > index {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        0.5 * (lo + hi)
    }
}

/// Lowest (at most `k`) negative finite-difference eigenvalues on a single grid.
pub fn fd_eigenvalues(p: &PotentialParams, g: &RadialGrid, k: usize) -> Vec<f64> {
    let m = Tridiagonal::hamiltonian(p, g);
    let bound = m.count_below(0.0).min(k);
    (0..bound).map(|j| m.eigenvalue(j)).collect()
}

/// Finite-difference spectrum on `g` and `g.refined()`, Richardson-extrapolated
/// assuming an `O(h²)` leading error. Returns the extrapolated levels below 0.
pub fn fd_spectrum(p: &PotentialParams, g: &RadialGrid, k: usize) -> OracleSpectrum {
    let coarse_m = Tridiagonal::hamiltonian(p, g);
    let fine_m = Tridiagonal::hamiltonian(p, &g.refined());
    let m = coarse_m.count_below(0.0).max(fine_m.count_below(0.0)).min(k);
    let coarse: Vec<f64> = (0..m).map(|j| coarse_m.eigenvalue(j)).collect();
    let fine: Vec<f64> = (0..m).map(|j| fine_m.eigenvalue(j)).collect();
    OracleSpectrum {
        energies: richardson(&coarse, &fine, 2),
        method: OracleMethod::FiniteDifference,
        grid: *g,
        richardson_applied: true,
    }
}

/// Largest `|u'' - alpha² u + gamma² e^{-beta r} u|` over interior points,
/// divided by `max|u|`, with `u''` from the 5-point central difference.
pub fn ode_residual(p: &PotentialParams, alpha: f64, table: &WavefunctionTable) -> Result<f64> {
    let n = table.len();
    if n < 5 {
        return Err(Error::GridTooCoarse(n));
    }
    let h = table.step().ok_or(Error::NonUniformGrid)?;
    let u = &table.u;
    let scale = u.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    if scale == 0.0 {
        return Ok(0.0);
    }
    let alpha2 = alpha * alpha;
    let gamma2 = p.gamma() * p.gamma();
    let inv = 1.0 / (12.0 * h * h);
    let worst = (2..n - 2)
        .map(|i| {
            let d2 = (-u[i + 2] + 16.0 * u[i + 1] - 30.0 * u[i] + 16.0 * u[i - 1] - u[i - 2]) * inv;
            (d2 - alpha2 * u[i] + gamma2 * (-p.beta() * table.r[i]).exp() * u[i]).abs()
        })
        .fold(0.0_f64, f64::max);
    Ok(worst / scale)
}
