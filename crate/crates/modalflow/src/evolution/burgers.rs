//! 1-D Burgers equation for the dominant rightward acoustic mode:
//!
//! ```text
//! d rho/dt + d rho/dy + eps eps_nl rho d rho/dy - (beta/2) d2 rho/dy2 = 0
//! ```
//!
//! In the lossless limit this is the simple-wave (characteristics) equation;
//! with absorption it matches the Cole-Hopf closed form, both of which serve
//! as test oracles.

use crate::error::{ModalError, Result};
use crate::field::ScalarField;
use crate::material::DimensionlessParams;

use super::kzk::one_way_path;
use super::{Direction, EvolutionConfig};

/// Advance the 1-D Burgers equation to time `t`.
pub fn evolve_burgers(
    rho0: &ScalarField,
    params: &DimensionlessParams,
    cfg: &EvolutionConfig,
    t: f64,
) -> Result<ScalarField> {
    Ok(evolve_burgers_path(rho0, params, cfg, &[t])?.pop().unwrap())
}

/// Advance the 1-D Burgers equation, capturing snapshots at the given times.
pub fn evolve_burgers_path(
    rho0: &ScalarField,
    params: &DimensionlessParams,
    cfg: &EvolutionConfig,
    times: &[f64],
) -> Result<Vec<ScalarField>> {
    if rho0.grid.nx != 1 || rho0.grid.nz != 1 {
        return Err(ModalError::domain(
            "evolve_burgers",
            format!("requires a 1-D grid (nx = nz = 1), got {}x{}x{}", rho0.grid.nx, rho0.grid.ny, rho0.grid.nz),
        ));
    }
    // mu never enters on a 1-D grid (kx = kz = 0), so the one-way stepper is
    // exactly the Burgers discretization here.
    one_way_path(rho0, params, cfg, Direction::Rightward, times)
}
