//! Lift of a density field to the full five-component rightward acoustic mode.
//!
//! The column operator (the physical-space form of the rightward eigencolumn)
//! is applied per wavevector:
//!
//! ```text
//! vx  = sqrt(mu) d/dx int dy rho
//! vy  = rho - (mu/2) Lap_perp int dy int dy rho - (beta/2) d rho/dy
//! vz  = sqrt(mu) d/dz int dy rho
//! p   = rho - (delta21 + delta22) d rho/dy
//! rho = rho
//! ```
//!
//! On the gauge planes (`ky = 0` and Nyquist) the singular `1/ky` corrections
//! are dropped and only the identity entries act, so the returned density
//! component always equals the input exactly.

use num_complex::Complex64;

use crate::error::Result;
use crate::field::{forward_scalar, inverse_transform, GaugeNote, ScalarField, SpectralField};
use crate::material::DimensionlessParams;

fn lift_with(rho1: &ScalarField, mu: f64, beta: f64, sigma: f64) -> Result<(crate::field::FieldState, GaugeNote)> {
    let spec = forward_scalar(rho1)?;
    let grid = &rho1.grid;
    let kx = grid.kx();
    let ky = grid.ky();
    let kz = grid.kz();
    let sq = mu.sqrt();
    let frac = spec.ky_zero_energy_fraction();

    let mut out = SpectralField::zeros_like(grid, 0.0);
    for ix in 0..grid.nx {
        for iy in 0..grid.ny {
            for iz in 0..grid.nz {
                let amp = spec.data[[ix, iy, iz]];
                if amp.norm_sqr() == 0.0 {
                    continue;
                }
                let gauge_plane = iy == 0
                    || (grid.ny > 1 && iy == grid.ny / 2)
                    || (grid.nx > 1 && ix == grid.nx / 2)
                    || (grid.nz > 1 && iz == grid.nz / 2);
                if gauge_plane {
                    out.vy[[ix, iy, iz]] = amp;
                    out.p[[ix, iy, iz]] = amp;
                    out.rho[[ix, iy, iz]] = amp;
                    continue;
                }
                let q = kx[ix] * kx[ix] + kz[iz] * kz[iz];
                let a = mu * q / (2.0 * ky[iy] * ky[iy]);
                out.vx[[ix, iy, iz]] = Complex64::new(sq * kx[ix] / ky[iy], 0.0) * amp;
                out.vy[[ix, iy, iz]] = Complex64::new(1.0 - a, beta * ky[iy] / 2.0) * amp;
                out.vz[[ix, iy, iz]] = Complex64::new(sq * kz[iz] / ky[iy], 0.0) * amp;
                out.p[[ix, iy, iz]] = Complex64::new(1.0, sigma * ky[iy]) * amp;
                out.rho[[ix, iy, iz]] = amp;
            }
        }
    }
    let field = inverse_transform(&out)?;
    Ok((
        field,
        GaugeNote {
            ky_zero_energy_fraction: frac,
            flagged: frac > crate::field::GAUGE_ENERGY_TOL,
        },
    ))
}

/// Apply the full rightward-mode column (with attenuation corrections).
pub fn lift_acoustic_mode(
    rho1: &ScalarField,
    params: &DimensionlessParams,
) -> Result<(crate::field::FieldState, GaugeNote)> {
    lift_with(rho1, params.mu, params.beta_total, params.delta2_sum())
}

/// Apply the ideal (lossless) column: the mu-weighted geometry is kept but
/// every dissipation correction is dropped. This is the object whose
/// vortical projection vanishes at retained order.
pub fn lift_acoustic_mode_inviscid(
    rho1: &ScalarField,
    params: &DimensionlessParams,
) -> Result<(crate::field::FieldState, GaugeNote)> {
    lift_with(rho1, params.mu, 0.0, 0.0)
}
