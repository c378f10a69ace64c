use crate::error::{Error, Result};
use crate::mellin::QuadratureConfig;

/// Tolerances and discretization knobs shared by the solver and the oracles.
#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    /// Bisection width for zeros of `nu -> J_nu(z0)`.
    pub root_tol: f64,
    /// Scan step in `nu` used to bracket sign changes.
    pub bracket_step: f64,
    /// Largest `|J_nu(z0)|` accepted for a bound state.
    pub residual_tol: f64,
    /// Number of energy samples in `(-V0, 0)` for the Numerov scan.
    pub energy_scan_steps: usize,
    /// Relative bisection width for oracle energies.
    pub energy_tol: f64,
    /// Oracle box size in decay lengths: `r_max >= decay_lengths * max(1/beta, 1/alpha_min)`.
    pub decay_lengths: f64,
    /// Oracle step relative to the shortest length scale `1/max(beta, gamma)`.
    pub step_scale: f64,
    /// Number of lowest finite-difference eigenvalues requested.
    pub fd_levels: usize,
    /// Relative tolerance for the normalization integral.
    pub norm_tol: f64,
    pub quadrature: QuadratureConfig,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            root_tol: 1e-13,
            bracket_step: 0.05,
            residual_tol: 1e-10,
            energy_scan_steps: 500,
            energy_tol: 1e-13,
            decay_lengths: 25.0,
            step_scale: 0.04,
            fd_levels: 32,
            norm_tol: 1e-13,
            quadrature: QuadratureConfig::default(),
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("root_tol", self.root_tol),
            ("bracket_step", self.bracket_step),
            ("residual_tol", self.residual_tol),
            ("energy_tol", self.energy_tol),
            ("decay_lengths", self.decay_lengths),
            ("step_scale", self.step_scale),
            ("norm_tol", self.norm_tol),
        ];
        for (name, value) in positive {
            if !(value > 0.0 && value.is_finite()) {
                return Err(Error::Config(format!("{name} must be positive, got {value}")));
            }
        }
        if self.energy_scan_steps < 2 {
            return Err(Error::Config("energy_scan_steps must be at least 2".into()));
        }
        if self.fd_levels == 0 {
            return Err(Error::Config("fd_levels must be at least 1".into()));
        }
        self.quadrature.validate()
    }
}
