//! Bound states of the s-wave Schrödinger equation in the exponential well
//! `V(r) = -V0 exp(-beta r)`.
//!
//! The analytic route goes through the Mellin transform: the radial equation
//! becomes a first-order difference equation in the Mellin variable, whose
//! Gamma-function solution is matched against the known transform of
//! `J_nu(2 sqrt(x))`. Bound states follow from `J_nu(2 gamma / beta) = 0`.
//!
//! Every analytic result can be checked against the brute-force solvers in
//! [`oracle`] (Numerov shooting and a finite-difference Sturm eigensolver).

// `!(x > 0.0)` also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
mod dd;
pub mod error;
pub mod mellin;
pub mod oracle;
pub mod quad;
pub mod solver;
pub mod specfun;
pub mod verify;

pub use config::SolverConfig;
pub use error::{Error, Result};
pub use solver::{BoundState, PotentialParams, Spectrum, WavefunctionTable};
