//! Modal decomposition of a field state.
//!
//! Every `ky != 0` wavevector is split by the five projectors. The `ky = 0`
//! plane (and the self-paired Nyquist planes, which have no distinct mirror
//! mode) cannot be projected -- all projector entries carry `1/ky` -- so those
//! coefficients are routed unchanged into a separate axial-residual channel.
//! The five parts plus the residual reproduce the input up to the quadratic
//! truncation residual of the projector closure.

use num_complex::Complex64;

use crate::error::Result;
use crate::field::{
    forward_transform, inverse_transform, FieldState, GaugeNote, SpectralField,
};
use crate::material::DimensionlessParams;

use super::basis::mode_basis;
use super::symbol::Wavevector;

/// Result of [`decompose`].
#[derive(Debug, Clone)]
pub struct Decomposition {
    /// Modal parts: rightward acoustic, leftward acoustic, entropy, two vortical.
    pub parts: [FieldState; 5],
    /// Content of the unprojectable planes (`ky = 0` and Nyquist).
    pub axial_residual: FieldState,
    pub gauge: GaugeNote,
}

impl Decomposition {
    /// Sum of the five parts and the residual channel.
    pub fn reassemble(&self) -> FieldState {
        let mut sum = self.axial_residual.clone();
        for p in &self.parts {
            sum.add_scaled(p, 1.0);
        }
        sum
    }
}

fn is_self_paired(i: usize, n: usize) -> bool {
    n > 1 && n % 2 == 0 && i == n / 2
}

/// Split a field into its five modal parts plus the axial-residual channel.
pub fn decompose(f: &FieldState, params: &DimensionlessParams) -> Result<Decomposition> {
    let spec = forward_transform(f)?;
    let grid = &f.grid;
    let kx = grid.kx();
    let ky = grid.ky();
    let kz = grid.kz();

    let mut parts_spec: Vec<SpectralField> =
        (0..5).map(|_| SpectralField::zeros_like(grid, f.time_stamp)).collect();
    let mut axial_spec = SpectralField::zeros_like(grid, f.time_stamp);

    let mut total_energy = 0.0_f64;
    let mut axial_energy = 0.0_f64;

    for ix in 0..grid.nx {
        for iy in 0..grid.ny {
            for iz in 0..grid.nz {
                let psi: [Complex64; 5] = [
                    spec.vx[[ix, iy, iz]],
                    spec.vy[[ix, iy, iz]],
                    spec.vz[[ix, iy, iz]],
                    spec.p[[ix, iy, iz]],
                    spec.rho[[ix, iy, iz]],
                ];
                let energy: f64 = psi.iter().map(|c| c.norm_sqr()).sum();
                total_energy += energy;

                let unprojectable = iy == 0
                    || is_self_paired(iy, grid.ny)
                    || is_self_paired(ix, grid.nx)
                    || is_self_paired(iz, grid.nz);
                if unprojectable {
                    axial_energy += energy;
                    let dst = &mut axial_spec;
                    dst.vx[[ix, iy, iz]] = psi[0];
                    dst.vy[[ix, iy, iz]] = psi[1];
                    dst.vz[[ix, iy, iz]] = psi[2];
                    dst.p[[ix, iy, iz]] = psi[3];
                    dst.rho[[ix, iy, iz]] = psi[4];
                    continue;
                }

                let k = Wavevector::new(kx[ix], ky[iy], kz[iz]);
                let basis = mode_basis(k, params)?;
                for m in 0..5 {
                    let row = basis.row_value(m);
                    let col = basis.column_value(m);
                    // amplitude = row . psi; part = col * amplitude
                    let mut amp = Complex64::new(0.0, 0.0);
                    for c in 0..5 {
                        amp += row[c] * psi[c];
                    }
                    let dst = &mut parts_spec[m];
                    dst.vx[[ix, iy, iz]] = col[0] * amp;
                    dst.vy[[ix, iy, iz]] = col[1] * amp;
                    dst.vz[[ix, iy, iz]] = col[2] * amp;
                    dst.p[[ix, iy, iz]] = col[3] * amp;
                    dst.rho[[ix, iy, iz]] = col[4] * amp;
                }
            }
        }
    }

    let mut parts: Vec<FieldState> = Vec::with_capacity(5);
    for ps in &parts_spec {
        parts.push(inverse_transform(ps)?);
    }
    let axial_residual = inverse_transform(&axial_spec)?;
    let frac = if total_energy > 0.0 { axial_energy / total_energy } else { 0.0 };
    let gauge = GaugeNote {
        ky_zero_energy_fraction: frac,
        flagged: frac > crate::field::GAUGE_ENERGY_TOL,
    };
    let parts: [FieldState; 5] = parts.try_into().map_err(|_| unreachable!()).unwrap();
    Ok(Decomposition { parts, axial_residual, gauge })
}
