//! Reference figure data for the mono-polar impulse scenario: the normalized
//! force `F1x / (sqrt(mu) beta)` together with the source density, either
//! along y at fixed t (figures 1 and 2) or along t at fixed y (figures 3
//! and 4), all at the transverse point x = sqrt(2)/2.

use serde::{Deserialize, Serialize};

use crate::error::{ModalError, Result};
use crate::field::Grid;
use crate::material::DimensionlessParams;
use crate::streaming::{radiation_force, AcousticSource, ForceVariant};

/// Constants of the mono-polar source scenario.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FigureConstants {
    pub c_shape: f64,
    pub eps_nl: f64,
    pub beta: f64,
    pub mu: f64,
    /// Transverse evaluation point.
    pub x_probe: f64,
}

impl Default for FigureConstants {
    fn default() -> Self {
        FigureConstants {
            c_shape: 2.0,
            eps_nl: 1.2,
            beta: 0.1,
            mu: 1e-2,
            x_probe: std::f64::consts::SQRT_2 / 2.0,
        }
    }
}

/// Default desk-scale grid for the force scenarios.
pub fn default_force_grid() -> Grid {
    Grid::plane_xy(256, 512, 10.0, 11.9)
        .expect("static grid is valid")
        .with_origin(-5.0, 0.1, 0.0)
}

/// One row of figure data: abscissa, normalized force, source density.
#[derive(Debug, Clone, Serialize)]
pub struct FigureRow {
    pub abscissa: f64,
    pub force_normalized: f64,
    pub source_density: f64,
}

fn probe_index(grid: &Grid, x: f64) -> usize {
    let mut best = 0;
    let mut dist = f64::INFINITY;
    for ix in 0..grid.nx {
        let d = (grid.x(ix) - x).abs();
        if d < dist {
            dist = d;
            best = ix;
        }
    }
    best
}

/// Compute the data set of figure `fig` (1..=4).
pub fn emit_figure_data(
    fig: u32,
    constants: &FigureConstants,
    grid: &Grid,
) -> Result<Vec<FigureRow>> {
    let params = DimensionlessParams::from_beta(
        constants.mu,
        0.0,
        constants.beta,
        // Q, S chosen so eps_nl matches the source constant
        -(2.0 * constants.eps_nl - 1.0),
        0.0,
    )?;
    let source = AcousticSource::monopole(constants.c_shape, constants.eps_nl, constants.beta)?;
    let norm = 1.0 / (constants.mu.sqrt() * constants.beta);
    let ix = probe_index(grid, constants.x_probe);

    match fig {
        1 | 2 => {
            let t = if fig == 1 { 1.0 } else { 3.0 };
            let rho = source.density_grid(grid, t)?;
            let f = radiation_force(&rho, &params, ForceVariant::SimplifiedEq34)?;
            let mut rows = Vec::with_capacity(grid.ny);
            for iy in 0..grid.ny {
                rows.push(FigureRow {
                    abscissa: grid.y(iy),
                    force_normalized: f.f1x.data[[ix, iy, 0]] * norm,
                    source_density: rho.data[[ix, iy, 0]],
                });
            }
            Ok(rows)
        }
        3 | 4 => {
            let y = if fig == 3 { 1.0 } else { 3.0 };
            let mut iy_best = 0;
            let mut dist = f64::INFINITY;
            for iy in 0..grid.ny {
                let d = (grid.y(iy) - y).abs();
                if d < dist {
                    dist = d;
                    iy_best = iy;
                }
            }
            let n_t = 160;
            let dt = 0.05;
            let mut rows = Vec::with_capacity(n_t);
            for it in 1..=n_t {
                let t = it as f64 * dt;
                let rho = source.density_grid(grid, t)?;
                let f = radiation_force(&rho, &params, ForceVariant::SimplifiedEq34)?;
                rows.push(FigureRow {
                    abscissa: t,
                    force_normalized: f.f1x.data[[ix, iy_best, 0]] * norm,
                    source_density: rho.data[[ix, iy_best, 0]],
                });
            }
            Ok(rows)
        }
        other => Err(ModalError::InvalidFigure(other)),
    }
}
