//! Five-mode decomposition of weakly nonlinear thermoviscous flow.
//!
//! The library splits small perturbations of a homogeneous thermoviscous
//! fluid into two acoustic, one entropy and two vortical modes using
//! per-wavevector spectral projectors, evolves the classical one-mode
//! equations (linear beam, Burgers, KZ/KZK) together with a direct integrator
//! of the full five-field system, and computes the acoustic radiation force
//! and the Eulerian streaming velocity it drives -- for quasi-periodic beams
//! and, in particular, for non-periodic impulse sources where time averaging
//! does not apply.
//!
//! Modules:
//! - [`material`]: equations-of-state model, sound speed, nonlinearity
//!   constants, dimensionless parameters.
//! - [`field`]: periodic grids, the five-component state, spectral transforms
//!   and the k-space operator calculus.
//! - [`modes`]: dispersion roots, eigenvector basis, projectors, modal
//!   decomposition.
//! - [`evolution`]: linear and nonlinear one-mode solvers plus the
//!   full-system oracle integrator.
//! - [`streaming`]: acoustic sources, quadratic columns, the radiation force
//!   and the streaming solver.
//! - [`cli`]: scenario files, deterministic artifact output and the
//!   subcommand entry points used by the `modalflow` binary.
//!
//! Start with the runnable examples (`cargo run --example ...`); each one
//! demonstrates a single capability end to end.

pub mod cli;
pub mod error;
pub mod evolution;
pub mod field;
pub mod material;
pub mod modes;
pub mod streaming;

pub use error::{ModalError, Result};
