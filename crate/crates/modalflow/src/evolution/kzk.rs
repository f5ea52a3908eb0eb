//! One-way nonlinear beam equation (KZ for beta = 0, KZK with absorption):
//!
//! ```text
//! d rho/dt +- d rho/dy +- (mu/2) int dy Lap_perp rho
//!          - (beta/2) d2 rho/dy2 +- eps eps_nl rho d rho/dy = 0
//! ```
//!
//! The linear part is advanced by its exact k-space factor; the quadratic
//! term explicitly, with 2/3-rule dealiasing of the product.

use num_complex::Complex64;

use crate::error::{ModalError, Result};
use crate::field::{
    apply_operator_scalar, dealias_two_thirds, forward_scalar, inverse_scalar, ScalarField,
    SpectralOp, SpectralScalar,
};
use crate::material::DimensionlessParams;

use super::{plan_steps, Direction, EvolutionConfig, Scheme};

/// Exact linear multiplier of the one-way beam equation over a step `dt`.
fn linear_multiplier(
    grid: &crate::field::Grid,
    params: &DimensionlessParams,
    sign: f64,
    dt: f64,
) -> SpectralScalar {
    let mut m = SpectralScalar::zeros(grid);
    let kx = grid.kx();
    let ky = grid.ky();
    let kz = grid.kz();
    let mu = params.mu;
    let beta = params.beta_total;
    for ix in 0..grid.nx {
        for iy in 0..grid.ny {
            for iz in 0..grid.nz {
                let m_val = if iy == 0 || (grid.ny > 1 && iy == grid.ny / 2) {
                    Complex64::new(1.0, 0.0)
                } else {
                    let omega =
                        ky[iy] + mu * (kx[ix] * kx[ix] + kz[iz] * kz[iz]) / (2.0 * ky[iy]);
                    (Complex64::new(-beta * ky[iy] * ky[iy] / 2.0, sign * omega) * dt).exp()
                };
                m.data[[ix, iy, iz]] = m_val;
            }
        }
    }
    m
}

fn mul_assign(dst: &mut SpectralScalar, m: &SpectralScalar) {
    ndarray::Zip::from(&mut dst.data).and(&m.data).for_each(|d, m| *d *= m);
}

/// Spectral nonlinear term `N^ = -sign * a_nl * F{rho d rho/dy}`, dealiased.
fn nonlinear_term(
    rho_spec: &SpectralScalar,
    a_nl: f64,
    sign: f64,
    dealias: bool,
) -> Result<(SpectralScalar, f64)> {
    let rho = inverse_scalar(rho_spec)?;
    let drho = inverse_scalar(&apply_operator_scalar(rho_spec, SpectralOp::Dy))?;
    let mut prod = rho.clone();
    ndarray::Zip::from(&mut prod.data).and(&drho.data).for_each(|p, d| *p *= d);
    let mut n = forward_scalar(&prod)?;
    let max_rho = rho.max_abs();
    ndarray::Zip::from(&mut n.data).for_each(|c| *c *= -sign * a_nl);
    if dealias {
        dealias_two_thirds(&mut n);
    }
    Ok((n, max_rho))
}

fn min_dy_slope(rho_spec: &SpectralScalar) -> Result<f64> {
    let drho = inverse_scalar(&apply_operator_scalar(rho_spec, SpectralOp::Dy))?;
    Ok(drho.data.iter().fold(f64::INFINITY, |m, v| m.min(*v)))
}

/// Shared stepper for the one-way nonlinear equations. `mu` enters only
/// through the linear multiplier, so the 1-D Burgers solver reuses it with a
/// 1-D grid.
pub(crate) fn one_way_path(
    rho0: &ScalarField,
    params: &DimensionlessParams,
    cfg: &EvolutionConfig,
    direction: Direction,
    times: &[f64],
) -> Result<Vec<ScalarField>> {
    cfg.validate()?;
    rho0.check_finite("one_way_path")?;
    let sign = direction.sign();
    let a_nl = params.eps_amp * params.eps_nl;
    let grid = &rho0.grid;
    let dy = grid.dy();
    let beta = params.beta_total;

    let mut spec = forward_scalar(rho0)?;
    let mut t = 0.0_f64;
    let mut out = Vec::with_capacity(times.len());
    let mut cached: Option<(f64, SpectralScalar, SpectralScalar)> = None; // (dt, E(dt), E(dt/2))

    for (dt, snap) in plan_steps(cfg.dt, times) {
        if dt > 0.0 {
            // audit the advective bound for the explicit nonlinear update
            let speed = a_nl * inverse_scalar(&spec)?.max_abs();
            if speed > 0.0 {
                let bound = cfg.cfl_safety * dy / speed;
                if dt > bound {
                    return Err(ModalError::CflViolation {
                        dt,
                        bound,
                        context: "one-way nonlinear step",
                    });
                }
            }
            if beta == 0.0 && a_nl > 0.0 {
                // Lossless runs stop when the remaining time to the
                // characteristic crossing (slope blow-up) falls below 50
                // steps; past that the grid cannot represent the profile.
                let slope = min_dy_slope(&spec)?;
                if slope < 0.0 {
                    let t_cross = -1.0 / (a_nl * slope);
                    if t_cross < 50.0 * dt {
                        return Err(ModalError::ShockFormed { t, t_estimate: t + t_cross });
                    }
                }
            }

            let rebuild = match &cached {
                Some((d, _, _)) => (d - dt).abs() > 1e-15,
                None => true,
            };
            if rebuild {
                cached = Some((
                    dt,
                    linear_multiplier(grid, params, sign, dt),
                    linear_multiplier(grid, params, sign, dt / 2.0),
                ));
            }
            let (_, e_full, e_half) = cached.as_ref().unwrap();

            match cfg.scheme {
                Scheme::IntegratingFactor => {
                    // Heun in the interaction picture:
                    // rho* = E (rho + dt N(rho)); rho' = E rho + dt/2 (E N(rho) + N(rho*))
                    let (n1, _) = nonlinear_term(&spec, a_nl, sign, cfg.dealias)?;
                    let mut pred = spec.clone();
                    ndarray::Zip::from(&mut pred.data).and(&n1.data).for_each(|p, n| *p += dt * n);
                    mul_assign(&mut pred, e_full);
                    let (n2, _) = nonlinear_term(&pred, a_nl, sign, cfg.dealias)?;
                    mul_assign(&mut spec, e_full);
                    let mut n1e = n1;
                    mul_assign(&mut n1e, e_full);
                    ndarray::Zip::from(&mut spec.data)
                        .and(&n1e.data)
                        .and(&n2.data)
                        .for_each(|s, a, b| *s += dt / 2.0 * (a + b));
                }
                Scheme::ExplicitSplit => {
                    // Strang: E(dt/2), midpoint nonlinear step, E(dt/2)
                    mul_assign(&mut spec, e_half);
                    let (n1, _) = nonlinear_term(&spec, a_nl, sign, cfg.dealias)?;
                    let mut mid = spec.clone();
                    ndarray::Zip::from(&mut mid.data)
                        .and(&n1.data)
                        .for_each(|p, n| *p += 0.5 * dt * n);
                    let (n2, _) = nonlinear_term(&mid, a_nl, sign, cfg.dealias)?;
                    ndarray::Zip::from(&mut spec.data).and(&n2.data).for_each(|s, n| *s += dt * n);
                    mul_assign(&mut spec, e_half);
                }
            }
            t += dt;
        }
        if snap {
            let mut f = inverse_scalar(&spec)?;
            f.grid = grid.clone();
            out.push(f);
        }
    }
    Ok(out)
}

/// Solve the beam equation up to time `t` and return the final field.
pub fn evolve_kzk(
    rho0: &ScalarField,
    params: &DimensionlessParams,
    cfg: &EvolutionConfig,
    direction: Direction,
    t: f64,
) -> Result<ScalarField> {
    Ok(evolve_kzk_path(rho0, params, cfg, direction, &[t])?.pop().unwrap())
}

/// Solve the beam equation, capturing snapshots at the given times.
pub fn evolve_kzk_path(
    rho0: &ScalarField,
    params: &DimensionlessParams,
    cfg: &EvolutionConfig,
    direction: Direction,
    times: &[f64],
) -> Result<Vec<ScalarField>> {
    one_way_path(rho0, params, cfg, direction, times)
}
