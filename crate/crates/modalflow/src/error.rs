//! Error types shared across the crate.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, ModalError>;

#[derive(Debug, Error)]
pub enum ModalError {
    /// A physical or numerical precondition on an input value failed.
    #[error("domain error: {context}: {message}")]
    Domain { context: &'static str, message: String },

    /// A non-finite value was found where a finite one is required.
    #[error("non-finite value in {context} at flat index {index}")]
    NonFinite { context: &'static str, index: usize },

    /// Spectral data violates the Hermitian symmetry implied by a real field.
    #[error("Hermitian symmetry violated: max deviation {deviation:.3e} exceeds {tolerance:.3e}")]
    Symmetry { deviation: f64, tolerance: f64 },

    /// An operation that divides by ky was asked for a ky = 0 mode.
    #[error("paraxial singularity: {0} is undefined at ky = 0")]
    ParaxialSingularity(&'static str),

    /// Requested time step exceeds the advective stability bound.
    #[error("time step {dt:.3e} exceeds CFL bound {bound:.3e} ({context})")]
    CflViolation { dt: f64, bound: f64, context: &'static str },

    /// A diffusive evolution was configured with a growth-producing sign.
    #[error("stability error: {0}")]
    Stability(String),

    /// The integrator detected unbounded energy growth.
    #[error("divergence detected: energy grew by factor {factor:.3e} (limit {limit})")]
    Divergence { factor: f64, limit: f64 },

    /// A lossless run steepened to the characteristic-crossing point.
    #[error("characteristic crossing: shock forms near t = {t_estimate:.4}; stopped at t = {t:.4}")]
    ShockFormed { t: f64, t_estimate: f64 },

    /// The far-field gauge cannot be applied because the field does not decay.
    #[error("gauge infeasible: field magnitude {edge:.3e} at far y edge exceeds {tolerance:.3e} of max")]
    GaugeInfeasible { edge: f64, tolerance: f64 },

    /// Scenario or material file failed validation.
    #[error("schema error in {path}: {message}")]
    Schema { path: String, message: String },

    #[error("invalid figure index {0}: expected 1..=4")]
    InvalidFigure(u32),

    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl ModalError {
    pub fn domain(context: &'static str, message: impl Into<String>) -> Self {
        ModalError::Domain { context, message: message.into() }
    }
}
