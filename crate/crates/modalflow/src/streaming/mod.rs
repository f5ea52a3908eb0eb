//! Radiation force and acoustic streaming driven by a dominant rightward
//! acoustic mode.
//!
//! The chain is: lift a density field to the full five-component acoustic
//! mode, form the quadratic columns of the momentum/energy balance, project
//! them onto the vortical subspace to obtain the transverse force density
//! `F1x`, and integrate the forced shear-diffusion equation for the Eulerian
//! streaming velocity. Because no time averaging enters, the force is defined
//! for arbitrary sources -- quasi-periodic beams, for which the classical
//! period-averaged result is recovered to leading order in the attenuation,
//! and single impulse (mono-polar) pulses.

mod average;
mod force;
mod lift;
mod quadratic;
mod solve;
mod sources;

pub use average::{time_average_force, AveragedForce};
pub use force::{
    gusev_rudenko_force, inviscid_vanishing_residual, radiation_force, vortical_force_row,
    ForceVariant, InviscidResidual, RadiationForceField, FAR_EDGE_DECAY_TOL, FAR_GAUGE_TOL,
};
pub use lift::{lift_acoustic_mode, lift_acoustic_mode_inviscid};
pub use quadratic::quadratic_columns;
pub use solve::{solve_streaming, StreamingState};
pub use sources::{
    monopole_density, quasi_periodic_density, AcousticSource, EntryWindow, TransverseProfile,
};
