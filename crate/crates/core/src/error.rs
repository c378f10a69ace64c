use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("gamma function pole at x = {0}")]
    Pole(f64),

    #[error("gamma function overflows at x = {0} (threshold {threshold})", threshold = crate::specfun::GAMMA_OVERFLOW_THRESHOLD)]
    Overflow(f64),

    #[error("bessel_j argument out of envelope: nu = {nu}, z = {z} (both must lie in [0, 60])")]
    BesselDomain { nu: f64, z: f64 },

    #[error("non-finite integrand sample at t = {0}")]
    Quadrature(f64),

    #[error("quadrature appears divergent: tail panel contributions are not decaying (ratio {0:.3})")]
    Divergence(f64),

    #[error("parameter `{name}` must be strictly positive, got {value}")]
    NonPositive { name: &'static str, value: f64 },

    #[error("x = {x} outside (0, {x_max}] for the inverse map r(x)")]
    InverseDomain { x: f64, x_max: f64 },

    #[error("state with nu = {nu} does not satisfy J_nu(z0) = 0 for z0 = {z0} (residual {residual:e})")]
    ParameterMismatch { nu: f64, z0: f64, residual: f64 },

    #[error("grid too coarse: {0} points, need at least 5")]
    GridTooCoarse(usize),

    #[error("wavefunction table is not sampled on a uniform grid")]
    NonUniformGrid,

    #[error("invalid configuration: {0}")]
    Config(String),
}
