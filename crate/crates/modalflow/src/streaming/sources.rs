//! Analytic and gridded acoustic density sources.

use serde::{Deserialize, Serialize};
use statrs::function::erf::erf;

use crate::error::{ModalError, Result};
use crate::field::{Grid, ScalarField};

/// Transverse beam profile theta(x).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TransverseProfile {
    /// theta(x) = exp(-(x / width)^2), the profile used throughout.
    Gaussian { width: f64 },
}

impl Default for TransverseProfile {
    fn default() -> Self {
        TransverseProfile::Gaussian { width: 1.0 }
    }
}

impl TransverseProfile {
    pub fn eval(&self, x: f64) -> f64 {
        match self {
            TransverseProfile::Gaussian { width } => (-(x / width) * (x / width)).exp(),
        }
    }
}

/// Quasi-periodic attenuated beam density
/// `rho1 = theta(x) exp(-beta y / 2) sin(t - y)` (background density 1).
pub fn quasi_periodic_density(theta: &TransverseProfile, beta: f64, x: f64, y: f64, t: f64) -> f64 {
    theta.eval(x) * (-beta * y / 2.0).exp() * (t - y).sin()
}

/// Smooth switch-on of the beam between `y_start` and `y_start + ramp`.
///
/// The analytic beam enters at full amplitude at y = 0, which no periodic
/// grid can represent; the window brings the sampled field smoothly from
/// zero so that spectral operators see a clean field. Comparisons against
/// closed-form results are made on `y >= end()`, where the window is
/// identically one and the sampled field equals the analytic one.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EntryWindow {
    pub y_start: f64,
    pub ramp: f64,
}

impl Default for EntryWindow {
    fn default() -> Self {
        EntryWindow { y_start: 2.0 * std::f64::consts::PI, ramp: 4.0 * std::f64::consts::PI }
    }
}

impl EntryWindow {
    /// First y at which the window equals one.
    pub fn end(&self) -> f64 {
        self.y_start + self.ramp
    }

    /// C-infinity transition built from exp(-1/s).
    pub fn eval(&self, y: f64) -> f64 {
        let s = (y - self.y_start) / self.ramp;
        if s <= 0.0 {
            0.0
        } else if s >= 1.0 {
            1.0
        } else {
            let f = (-1.0 / s).exp();
            let g = (-1.0 / (1.0 - s)).exp();
            f / (f + g)
        }
    }
}

/// Mono-polar two-dimensional impulse density
///
/// ```text
/// rho1 = -sqrt(2 beta / pi) exp(-x^2) exp(-tau^2 / (2 xi))
///        / ( eps_nl sqrt(xi / beta) (C - erf(tau / sqrt(2 xi))) )
/// ```
///
/// with `xi = beta y`, `tau = t - y`. The far-field form is only defined for
/// `y > 0`; `C > 1` keeps the denominator positive for every argument.
pub fn monopole_density(
    c_shape: f64,
    eps_nl: f64,
    beta: f64,
    x: f64,
    y: f64,
    t: f64,
) -> Result<f64> {
    if c_shape <= 1.0 {
        return Err(ModalError::domain(
            "monopole_density",
            format!("shape constant C must exceed 1 (erf ranges over (-1,1)), got {c_shape}"),
        ));
    }
    if y <= 0.0 {
        return Err(ModalError::domain(
            "monopole_density",
            format!("far-field form requires y > 0, got {y}"),
        ));
    }
    if !(beta > 0.0) {
        return Err(ModalError::domain("monopole_density", format!("beta must be > 0, got {beta}")));
    }
    let xi = beta * y;
    let tau = t - y;
    let amp = -(2.0 * beta / std::f64::consts::PI).sqrt() * (-x * x).exp();
    let gauss = (-tau * tau / (2.0 * xi)).exp();
    let den = eps_nl * (xi / beta).sqrt() * (c_shape - erf(tau / (2.0 * xi).sqrt()));
    Ok(amp * gauss / den)
}

/// An acoustic density source rho1(x, y, t).
#[derive(Debug, Clone)]
pub enum AcousticSource {
    QuasiPeriodicBeam { theta: TransverseProfile, beta: f64, window: EntryWindow },
    Monopole { c_shape: f64, eps_nl: f64, beta: f64 },
    /// Stored snapshots (time, field), ascending in time.
    Gridded { snapshots: Vec<(f64, ScalarField)> },
}

impl AcousticSource {
    pub fn monopole(c_shape: f64, eps_nl: f64, beta: f64) -> Result<Self> {
        if c_shape <= 1.0 {
            return Err(ModalError::domain("acoustic source", "monopole requires C > 1"));
        }
        if !(beta > 0.0) {
            return Err(ModalError::domain("acoustic source", "monopole requires beta > 0"));
        }
        Ok(AcousticSource::Monopole { c_shape, eps_nl, beta })
    }

    pub fn quasi_periodic(theta: TransverseProfile, beta: f64) -> Result<Self> {
        if !(beta > 0.0) {
            return Err(ModalError::domain("acoustic source", "quasi-periodic beam requires beta > 0"));
        }
        Ok(AcousticSource::QuasiPeriodicBeam { theta, beta, window: EntryWindow::default() })
    }

    /// Sample the source on a grid at time `t`. Gridded sources interpolate
    /// linearly between bracketing snapshots (clamped at the ends).
    pub fn density_grid(&self, grid: &Grid, t: f64) -> Result<ScalarField> {
        match self {
            AcousticSource::QuasiPeriodicBeam { theta, beta, window } => {
                Ok(ScalarField::from_fn(grid, |x, y, _| {
                    window.eval(y) * quasi_periodic_density(theta, *beta, x, y, t)
                }))
            }
            AcousticSource::Monopole { c_shape, eps_nl, beta } => {
                if grid.y0 <= 0.0 {
                    return Err(ModalError::domain(
                        "acoustic source",
                        format!("monopole grids must start at y > 0, got y0 = {}", grid.y0),
                    ));
                }
                let mut out = ScalarField::zeros(grid);
                for ix in 0..grid.nx {
                    for iy in 0..grid.ny {
                        for iz in 0..grid.nz {
                            out.data[[ix, iy, iz]] =
                                monopole_density(*c_shape, *eps_nl, *beta, grid.x(ix), grid.y(iy), t)?;
                        }
                    }
                }
                Ok(out)
            }
            AcousticSource::Gridded { snapshots } => {
                if snapshots.is_empty() {
                    return Err(ModalError::domain("acoustic source", "gridded source holds no snapshots"));
                }
                if t <= snapshots[0].0 {
                    return Ok(snapshots[0].1.clone());
                }
                if t >= snapshots[snapshots.len() - 1].0 {
                    return Ok(snapshots[snapshots.len() - 1].1.clone());
                }
                let hi = snapshots.partition_point(|(ts, _)| *ts < t);
                let (t0, f0) = &snapshots[hi - 1];
                let (t1, f1) = &snapshots[hi];
                let w = (t - t0) / (t1 - t0);
                let mut out = f0.clone();
                ndarray::Zip::from(&mut out.data).and(&f1.data).for_each(|a, b| {
                    *a = (1.0 - w) * *a + w * b;
                });
                Ok(out)
            }
        }
    }
}
