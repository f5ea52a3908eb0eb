//! The transverse radiation force of a dominant rightward acoustic mode.
//!
//! Two routes are implemented. The closed density form
//!
//! ```text
//! F1x = sqrt(mu) beta ( drho/dx drho/dy - 0.5 rho d2rho/dxdy
//!                       - d/dx int dy (drho/dy)^2 )
//! ```
//!
//! is the production formula; the expanded two-bracket form keeps the
//! thermoviscous contributions of the mode column and of the viscous
//! quadratic column separately, exactly as printed, so the truncation the
//! closed form performs can be audited. The y-antiderivatives here carry the
//! secular (y-mean) part explicitly -- it is the accumulated momentum flux
//! that drives the wake -- and the integration function of x is fixed by
//! requiring the force to vanish at the far y edge.

use ndarray::{Array3, Zip};
use serde::Serialize;

use crate::error::{ModalError, Result};
use crate::field::{
    apply_operator_scalar, forward_scalar, inverse_scalar, FieldState, Grid, ScalarField,
    SpectralOp,
};
use crate::material::DimensionlessParams;

use super::lift::{lift_acoustic_mode, lift_acoustic_mode_inviscid};
use super::quadratic::quadratic_columns;
use super::sources::TransverseProfile;

/// Force vanishing criterion at the far y edge, relative to max |F1x|.
pub const FAR_GAUGE_TOL: f64 = 1e-6;
/// Max relative magnitude the source may retain at the far y edge before the
/// far-field gauge is declared infeasible.
pub const FAR_EDGE_DECAY_TOL: f64 = 1e-3;

/// Which force formula produced a field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ForceVariant {
    /// The two printed brackets, term for term.
    ExpandedEq33,
    /// The closed single-bracket density form. Default.
    SimplifiedEq34,
}

/// Transverse force density with its gauge bookkeeping.
#[derive(Debug, Clone)]
pub struct RadiationForceField {
    pub f1x: ScalarField,
    /// Largest per-x constant removed by the far-edge anchoring.
    pub gauge_constant: f64,
    pub variant: ForceVariant,
}

fn d_scalar(f: &ScalarField, op: SpectralOp) -> Result<ScalarField> {
    let s = forward_scalar(f)?;
    inverse_scalar(&apply_operator_scalar(&s, op))
}

/// Per-(x, z) y-mean as a field constant along y.
fn y_mean_plane(f: &ScalarField) -> Array3<f64> {
    let g = &f.grid;
    let mut m = Array3::<f64>::zeros((g.nx, 1, g.nz));
    for ix in 0..g.nx {
        for iz in 0..g.nz {
            let mut acc = 0.0;
            for iy in 0..g.ny {
                acc += f.data[[ix, iy, iz]];
            }
            m[[ix, 0, iz]] = acc / g.ny as f64;
        }
    }
    m
}

fn plane_derivative(grid: &Grid, plane: &Array3<f64>, op: SpectralOp) -> Result<Array3<f64>> {
    let gp = Grid {
        nx: grid.nx,
        ny: 1,
        nz: grid.nz,
        lx: grid.lx,
        ly: 1.0,
        lz: grid.lz,
        x0: grid.x0,
        y0: 0.0,
        z0: grid.z0,
    };
    let f = ScalarField { grid: gp, data: plane.clone() };
    Ok(d_scalar(&f, op)?.data)
}

/// Secular-inclusive antiderivative: zero-mean spectral primitive plus
/// `mean * (y - y0)`. Returned split so callers can differentiate the ramp
/// analytically.
struct Antiderivative {
    periodic: ScalarField,
    mean: Array3<f64>,
}

fn antiderivative_full(f: &ScalarField) -> Result<Antiderivative> {
    let s = forward_scalar(f)?;
    let (p, _) = crate::field::antiderivative_y(&s)?;
    Ok(Antiderivative { periodic: inverse_scalar(&p)?, mean: y_mean_plane(f) })
}

/// `d/dx int dy f`, with the secular ramp differentiated analytically.
fn dx_int_dy(f: &ScalarField) -> Result<ScalarField> {
    let g = f.grid.clone();
    let anti = antiderivative_full(f)?;
    let mut out = d_scalar(&anti.periodic, SpectralOp::Dx)?;
    let dmean = plane_derivative(&g, &anti.mean, SpectralOp::Dx)?;
    for ix in 0..g.nx {
        for iy in 0..g.ny {
            let ramp = g.y(iy) - g.y0;
            for iz in 0..g.nz {
                out.data[[ix, iy, iz]] += dmean[[ix, 0, iz]] * ramp;
            }
        }
    }
    Ok(out)
}

/// Apply the vortical projection row
/// `(1 - mu dxx int int, -sqrt(mu) dx int, -mu dxdz int int, 0, 0)`
/// to a column. Only the first three entries participate. The antiderivatives
/// carry their secular ramps; no far-edge anchoring is applied here.
pub fn vortical_force_row(
    column: &FieldState,
    params: &DimensionlessParams,
) -> Result<ScalarField> {
    column.check_finite("vortical_force_row")?;
    let g = &column.grid;
    let mu = params.mu;
    let sq = mu.sqrt();

    let cx = ScalarField { grid: g.clone(), data: column.vx.clone() };
    let cy = ScalarField { grid: g.clone(), data: column.vy.clone() };
    let cz = ScalarField { grid: g.clone(), data: column.vz.clone() };

    // term 1: cx - mu dxx G2(cx)
    let mut out = cx.clone();
    if mu != 0.0 && g.nx > 1 {
        let g2 = double_antiderivative(&cx)?;
        let dxx = second_x_of_g2(&g2, g)?;
        Zip::from(&mut out.data).and(&dxx).for_each(|o, &v| *o -= mu * v);
    }
    // term 2: -sqrt(mu) dx G1(cy)
    if sq != 0.0 && g.nx > 1 {
        let t2 = dx_int_dy(&cy)?;
        Zip::from(&mut out.data).and(&t2.data).for_each(|o, &v| *o -= sq * v);
    }
    // term 3: -mu dxdz G2(cz)
    if mu != 0.0 && g.nx > 1 && g.nz > 1 {
        let g2 = double_antiderivative(&cz)?;
        let dxz = xz_of_g2(&g2, g)?;
        Zip::from(&mut out.data).and(&dxz).for_each(|o, &v| *o -= mu * v);
    }
    Ok(out)
}

/// Double antiderivative split: periodic part `P(P(f))`, the linear ramp from
/// the mean of `P(f)` (zero by the zero-mean gauge) and the quadratic ramp
/// `mean(f) (y - y0)^2 / 2`.
struct DoubleAntiderivative {
    periodic: ScalarField,
    mean: Array3<f64>,
}

fn double_antiderivative(f: &ScalarField) -> Result<DoubleAntiderivative> {
    let s = forward_scalar(f)?;
    let (p1, _) = crate::field::antiderivative_y(&s)?;
    let (p2, _) = crate::field::antiderivative_y(&p1)?;
    Ok(DoubleAntiderivative { periodic: inverse_scalar(&p2)?, mean: y_mean_plane(f) })
}

fn second_x_of_g2(g2: &DoubleAntiderivative, g: &Grid) -> Result<Array3<f64>> {
    let s = forward_scalar(&g2.periodic)?;
    let mut out =
        inverse_scalar(&apply_operator_scalar(&apply_operator_scalar(&s, SpectralOp::Dx), SpectralOp::Dx))?
            .data;
    let dmean = plane_derivative(g, &g2.mean, SpectralOp::Dx)?;
    let dmean2 = plane_derivative(g, &dmean, SpectralOp::Dx)?;
    for ix in 0..g.nx {
        for iy in 0..g.ny {
            let ramp = g.y(iy) - g.y0;
            for iz in 0..g.nz {
                out[[ix, iy, iz]] += dmean2[[ix, 0, iz]] * ramp * ramp / 2.0;
            }
        }
    }
    Ok(out)
}

fn xz_of_g2(g2: &DoubleAntiderivative, g: &Grid) -> Result<Array3<f64>> {
    let s = forward_scalar(&g2.periodic)?;
    let mut out =
        inverse_scalar(&apply_operator_scalar(&apply_operator_scalar(&s, SpectralOp::Dx), SpectralOp::Dz))?
            .data;
    let dx = plane_derivative(g, &g2.mean, SpectralOp::Dx)?;
    let dxz = plane_derivative(g, &dx, SpectralOp::Dz)?;
    for ix in 0..g.nx {
        for iy in 0..g.ny {
            let ramp = g.y(iy) - g.y0;
            for iz in 0..g.nz {
                out[[ix, iy, iz]] += dxz[[ix, 0, iz]] * ramp * ramp / 2.0;
            }
        }
    }
    Ok(out)
}

fn check_edge_decay(rho1: &ScalarField) -> Result<()> {
    // Both y edges must be quiet: the far edge anchors the gauge, and any
    // content at either edge is a periodic-wrap discontinuity that the
    // spectral derivatives would smear over the whole domain.
    let g = &rho1.grid;
    let global = rho1.max_abs();
    if global == 0.0 {
        return Ok(());
    }
    let mut edge = 0.0_f64;
    for ix in 0..g.nx {
        for iz in 0..g.nz {
            edge = edge.max(rho1.data[[ix, g.ny - 1, iz]].abs());
            edge = edge.max(rho1.data[[ix, 0, iz]].abs());
        }
    }
    if edge > FAR_EDGE_DECAY_TOL * global {
        return Err(ModalError::GaugeInfeasible { edge: edge / global, tolerance: FAR_EDGE_DECAY_TOL });
    }
    Ok(())
}

/// Subtract the far-row value per (x, z) so the force vanishes as y grows.
fn anchor_far_edge(f: &mut ScalarField) -> f64 {
    let g = f.grid.clone();
    let jlast = g.ny - 1;
    let mut max_shift = 0.0_f64;
    for ix in 0..g.nx {
        for iz in 0..g.nz {
            let shift = f.data[[ix, jlast, iz]];
            max_shift = max_shift.max(shift.abs());
            for iy in 0..g.ny {
                f.data[[ix, iy, iz]] -= shift;
            }
        }
    }
    max_shift
}

/// Radiation force of the density snapshot `rho1`.
pub fn radiation_force(
    rho1: &ScalarField,
    params: &DimensionlessParams,
    variant: ForceVariant,
) -> Result<RadiationForceField> {
    rho1.check_finite("radiation_force")?;
    check_edge_decay(rho1)?;
    let sq = params.mu.sqrt();
    let beta = params.beta_total;

    let rx = d_scalar(rho1, SpectralOp::Dx)?;
    let ry = d_scalar(rho1, SpectralOp::Dy)?;
    let rxy = d_scalar(&ry, SpectralOp::Dx)?;

    // (d rho/dy)^2 and its gauged x-derivative of the antiderivative
    let mut ry2 = ry.clone();
    ry2.data.mapv_inplace(|v| v * v);
    let c_term = dx_int_dy(&ry2)?;

    let mut f1x = ScalarField::zeros(&rho1.grid);
    match variant {
        ForceVariant::SimplifiedEq34 => {
            Zip::from(&mut f1x.data)
                .and(&rx.data)
                .and(&ry.data)
                .and(&rho1.data)
                .and(&rxy.data)
                .and(&c_term.data)
                .for_each(|o, &rx, &ry, &r, &rxy, &c| {
                    *o = sq * beta * (rx * ry - 0.5 * r * rxy - c);
                });
        }
        ForceVariant::ExpandedEq33 => {
            let ryy = d_scalar(&ry, SpectralOp::Dy)?;
            let mut r_ryy = rho1.clone();
            Zip::from(&mut r_ryy.data).and(&ryy.data).for_each(|a, &b| *a *= b);
            let d_term = dx_int_dy(&r_ryy)?;
            let sigma = params.delta2_sum();
            let d1sum = params.delta11 + params.delta12;
            let o = f1x.data.as_slice_mut().unwrap();
            let rx = rx.data.as_slice().unwrap();
            let ry = ry.data.as_slice().unwrap();
            let r = rho1.data.as_slice().unwrap();
            let rxy = rxy.data.as_slice().unwrap();
            let c = c_term.data.as_slice().unwrap();
            let d = d_term.data.as_slice().unwrap();
            for i in 0..o.len() {
                let a = rx[i] * ry[i];
                let b = r[i] * rxy[i];
                let bracket1 = beta / 2.0 * (a - d[i] - c[i]) + sigma * (d[i] - b);
                let bracket2 = beta * (d[i] - b) + d1sum * (d[i] - b);
                o[i] = sq * (bracket1 + bracket2);
            }
        }
    }
    let gauge_constant = anchor_far_edge(&mut f1x);
    Ok(RadiationForceField { f1x, gauge_constant, variant })
}

/// The classical period-averaged transverse force of a highly attenuated
/// quasi-periodic beam: `Phi1x = sqrt(mu) rho0^2 d/dx (theta^2 / 2) exp(-beta y)`
/// with the dimensionless background density rho0 = 1.
pub fn gusev_rudenko_force(
    theta: &TransverseProfile,
    beta: f64,
    grid: &Grid,
    mu: f64,
) -> Result<ScalarField> {
    let half_sq = ScalarField::from_fn(grid, |x, _, _| {
        let t = theta.eval(x);
        t * t / 2.0
    });
    let dx = d_scalar(&half_sq, SpectralOp::Dx)?;
    let rho0 = 1.0;
    let scale = mu.sqrt() * rho0 * rho0;
    let mut out = ScalarField::zeros(grid);
    for ix in 0..grid.nx {
        for iy in 0..grid.ny {
            let decay = (-beta * grid.y(iy)).exp();
            for iz in 0..grid.nz {
                out.data[[ix, iy, iz]] = scale * dx.data[[ix, iy, iz]] * decay;
            }
        }
    }
    Ok(out)
}

/// Result of the lossless-vanishing audit.
#[derive(Debug, Clone, Serialize)]
pub struct InviscidResidual {
    /// Norm of the vortical projection of the inviscid quadratic column.
    pub numerator: f64,
    /// Norm of the vortical projection of the thermoviscous column.
    pub denominator: f64,
    /// `numerator / denominator`; `None` for a vanishing denominator (beta = 0).
    pub ratio: Option<f64>,
}

/// Measure how completely the vortical projection annihilates the quadratic
/// column of the ideal (lossless) acoustic mode, relative to the genuine
/// thermoviscous force. The numerator vanishes at retained order, so the
/// ratio is small and shrinks with (mu, beta).
pub fn inviscid_vanishing_residual(
    rho1: &ScalarField,
    params: &DimensionlessParams,
) -> Result<InviscidResidual> {
    let (psi_ideal, _) = lift_acoustic_mode_inviscid(rho1, params)?;
    let (phi_ideal, _) = quadratic_columns(&psi_ideal, params)?;
    let numerator = vortical_force_row(&phi_ideal, params)?.l2_norm();

    let (psi_full, _) = lift_acoustic_mode(rho1, params)?;
    let (_, phi_tv) = quadratic_columns(&psi_full, params)?;
    let denominator = vortical_force_row(&phi_tv, params)?.l2_norm();

    let ratio = if denominator > 0.0 { Some(numerator / denominator) } else { None };
    Ok(InviscidResidual { numerator, denominator, ratio })
}
