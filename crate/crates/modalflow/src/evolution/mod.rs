//! Time integration of the modal evolution equations.
//!
//! Linear equations are diagonal in k-space and are advanced by their exact
//! integrating factor. The one-mode nonlinear equations (Burgers, KZ/KZK) use
//! the exact linear factor plus a second-order explicit update of the
//! quadratic term. [`integrate_full_system`] advances the untruncated
//! five-field system with a per-wavevector matrix exponential and serves as
//! the independent oracle for every modal prediction.

mod burgers;
mod coupled;
mod full;
mod kzk;
mod linear;
mod matexp;

pub use burgers::{evolve_burgers, evolve_burgers_path};
pub use coupled::coupled_1d_rhs;
pub use full::{integrate_full_system, integrate_full_system_path};
pub use kzk::{evolve_kzk, evolve_kzk_path};
pub use linear::{evolve_diffusive_mode, evolve_linear_acoustic, DiffusiveMode};
pub use matexp::matrix_exp;

use crate::error::{ModalError, Result};

/// Propagation direction of the one-way acoustic equations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum Direction {
    Rightward,
    Leftward,
}

impl Direction {
    pub fn sign(self) -> f64 {
        match self {
            Direction::Rightward => 1.0,
            Direction::Leftward => -1.0,
        }
    }
}

/// Time-stepping scheme for the nonlinear terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum Scheme {
    /// Strang splitting: half linear factor, explicit midpoint nonlinear step,
    /// half linear factor.
    ExplicitSplit,
    /// Interaction-picture Heun step under the exact linear factor. Default.
    IntegratingFactor,
}

/// Integrator configuration.
#[derive(Debug, Clone, serde::Serialize, serde::Deserialize)]
pub struct EvolutionConfig {
    pub dt: f64,
    pub t_end: f64,
    pub scheme: Scheme,
    /// 2/3-rule truncation of nonlinear products. Default on.
    pub dealias: bool,
    /// Fraction of the advective stability bound the step may use.
    pub cfl_safety: f64,
    /// Permit eps_amp above the 0.1 default gate of the full-system integrator.
    pub allow_large_amplitude: bool,
}

impl EvolutionConfig {
    pub fn new(dt: f64, t_end: f64) -> Result<Self> {
        let cfg = EvolutionConfig {
            dt,
            t_end,
            scheme: Scheme::IntegratingFactor,
            dealias: true,
            cfl_safety: 0.5,
            allow_large_amplitude: false,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0) {
            return Err(ModalError::domain("evolution config", format!("dt must be > 0, got {}", self.dt)));
        }
        if !(self.cfl_safety > 0.0 && self.cfl_safety <= 1.0) {
            return Err(ModalError::domain(
                "evolution config",
                format!("cfl_safety must lie in (0, 1], got {}", self.cfl_safety),
            ));
        }
        Ok(())
    }
}

/// Step plan that lands exactly on each requested snapshot time.
pub(crate) fn plan_steps(dt: f64, targets: &[f64]) -> Vec<(f64, bool)> {
    // returns (step size, snapshot after this step)
    let mut plan = Vec::new();
    let mut t = 0.0_f64;
    for &target in targets {
        assert!(target >= t - 1e-12, "snapshot times must be ascending");
        while target - t > dt * (1.0 + 1e-9) {
            plan.push((dt, false));
            t += dt;
        }
        let rem = target - t;
        if rem > 1e-14 {
            plan.push((rem, true));
            t = target;
        } else if let Some(last) = plan.last_mut() {
            last.1 = true;
        } else {
            plan.push((0.0, true));
        }
    }
    plan
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plan_hits_targets_exactly() {
        let plan = plan_steps(0.3, &[0.5, 1.0]);
        let mut t = 0.0;
        let mut snaps = Vec::new();
        for (dt, snap) in plan {
            t += dt;
            if snap {
                snaps.push(t);
            }
        }
        assert!((snaps[0] - 0.5).abs() < 1e-12);
        assert!((snaps[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn config_validation() {
        assert!(EvolutionConfig::new(0.0, 1.0).is_err());
        let mut cfg = EvolutionConfig::new(0.1, 1.0).unwrap();
        cfg.cfl_safety = 1.5;
        assert!(cfg.validate().is_err());
    }
}
