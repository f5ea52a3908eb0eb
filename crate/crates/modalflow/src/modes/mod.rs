//! Modal structure of the linearized thermoviscous system.
//!
//! For a quasi-plane beam along y the linearized five-field system has five
//! eigen-branches per wavevector: two counter-propagating acoustic modes, one
//! entropy mode and two vortical modes. This module builds, per wavevector,
//! the dispersion roots, the eigenvector columns with their inverse rows, and
//! the five projectors, and decomposes arbitrary field states into modal
//! parts. Everything is truncated to first order in the aspect parameter mu
//! and the attenuation beta; the residual audits verify that the discarded
//! terms scale quadratically.

mod basis;
mod decompose;
mod graded;
mod projector;
mod symbol;

pub use basis::{
    dispersion_roots, mode_basis, mode_rows_as_printed, DispersionRoots, ModeBasis,
    TruncationOrder,
};
pub use decompose::{decompose, Decomposition};
pub use graded::{GradedC, GradedVec5};
pub use projector::{
    build_projector, projector_residuals, projector_set, sample_wavevectors, scaling_report,
    ProjectorResiduals, ScalingReport,
};
pub use symbol::{
    identity5, l_symbol, mat_add, mat_mul, mat_scale, mat_solve, mat_sub, mat_vec, max_abs,
    vec_max_abs, zeros5, Matrix5, Vector5, Wavevector,
};
