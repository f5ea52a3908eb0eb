//! Direct integrator of the full dimensionless five-field system
//! `d psi/dt + L psi = eps (phi + phi_tv)`.
//!
//! The linear operator is applied exactly through a per-wavevector 5x5
//! matrix exponential; the quadratic columns are evaluated in physical space
//! and advanced by a Heun step in the interaction picture. Because no modal
//! truncation enters, the trajectory is the reference against which every
//! one-mode prediction is measured.

use num_complex::Complex64;

use crate::error::{ModalError, Result};
use crate::field::{
    dealias_two_thirds, forward_transform, inverse_transform, FieldState, SpectralField,
    SpectralScalar,
};
use crate::material::DimensionlessParams;
use crate::modes::{l_symbol, mat_scale, Matrix5, Wavevector};
use crate::streaming::quadratic_columns;

use super::matexp::matrix_exp;
use super::{plan_steps, EvolutionConfig};

const ENERGY_GROWTH_LIMIT: f64 = 10.0;
const DEFAULT_AMPLITUDE_GATE: f64 = 0.1;

struct Propagator {
    dt: f64,
    mats: Vec<Matrix5>,
}

fn build_propagator(grid: &crate::field::Grid, params: &DimensionlessParams, dt: f64) -> Propagator {
    let kx = grid.kx();
    let ky = grid.ky();
    let kz = grid.kz();
    let mut mats = Vec::with_capacity(grid.len());
    for ix in 0..grid.nx {
        for iy in 0..grid.ny {
            for iz in 0..grid.nz {
                let l = l_symbol(Wavevector::new(kx[ix], ky[iy], kz[iz]), params);
                mats.push(matrix_exp(&mat_scale(&l, Complex64::new(-dt, 0.0))));
            }
        }
    }
    Propagator { dt, mats }
}

fn apply_propagator(p: &Propagator, f: &mut SpectralField) {
    let grid = f.grid.clone();
    let mut idx = 0usize;
    for ix in 0..grid.nx {
        for iy in 0..grid.ny {
            for iz in 0..grid.nz {
                let m = &p.mats[idx];
                idx += 1;
                let v = [
                    f.vx[[ix, iy, iz]],
                    f.vy[[ix, iy, iz]],
                    f.vz[[ix, iy, iz]],
                    f.p[[ix, iy, iz]],
                    f.rho[[ix, iy, iz]],
                ];
                let mut out = [Complex64::new(0.0, 0.0); 5];
                for (r, o) in out.iter_mut().enumerate() {
                    for (c, vc) in v.iter().enumerate() {
                        *o += m[r][c] * vc;
                    }
                }
                f.vx[[ix, iy, iz]] = out[0];
                f.vy[[ix, iy, iz]] = out[1];
                f.vz[[ix, iy, iz]] = out[2];
                f.p[[ix, iy, iz]] = out[3];
                f.rho[[ix, iy, iz]] = out[4];
            }
        }
    }
}

/// eps * (phi + phi_tv) transformed to spectral space, dealiased.
fn nonlinear_spectral(
    psi: &FieldState,
    params: &DimensionlessParams,
    dealias: bool,
) -> Result<SpectralField> {
    let (phi, phi_tv) = quadratic_columns(psi, params)?;
    let mut sum = phi;
    sum.add_scaled(&phi_tv, 1.0);
    for c in sum.components_mut() {
        c.mapv_inplace(|v| v * params.eps_amp);
    }
    let mut spec = forward_transform(&sum)?;
    if dealias {
        let grid = spec.grid.clone();
        for c in spec.components_mut() {
            let mut tmp = SpectralScalar { grid: grid.clone(), data: c.clone() };
            dealias_two_thirds(&mut tmp);
            c.assign(&tmp.data);
        }
    }
    Ok(spec)
}

fn add_scaled_spec(dst: &mut SpectralField, src: &SpectralField, a: f64) {
    for (d, s) in dst.components_mut().into_iter().zip(src.components()) {
        ndarray::Zip::from(d).and(s).for_each(|d, s| *d += a * s);
    }
}

/// Integrate the full system to time `t`, returning the final state.
pub fn integrate_full_system(
    psi0: &FieldState,
    params: &DimensionlessParams,
    cfg: &EvolutionConfig,
    t: f64,
) -> Result<FieldState> {
    Ok(integrate_full_system_path(psi0, params, cfg, &[t])?.pop().unwrap())
}

/// Integrate the full system, capturing snapshots at the given times.
pub fn integrate_full_system_path(
    psi0: &FieldState,
    params: &DimensionlessParams,
    cfg: &EvolutionConfig,
    times: &[f64],
) -> Result<Vec<FieldState>> {
    cfg.validate()?;
    psi0.check_finite("integrate_full_system")?;
    if params.eps_amp > DEFAULT_AMPLITUDE_GATE && !cfg.allow_large_amplitude {
        return Err(ModalError::domain(
            "integrate_full_system",
            format!(
                "eps_amp = {} exceeds the weakly nonlinear gate {DEFAULT_AMPLITUDE_GATE} \
                 (set allow_large_amplitude to override)",
                params.eps_amp
            ),
        ));
    }
    let grid = psi0.grid.clone();
    let initial_norm = psi0.l2_norm();
    let eps = params.eps_amp;

    // advective audit: |v| + quadratic coefficients, all O(max|psi|)
    let nl_scale = 1.0 + params.q_const.abs() + params.s_const.abs();
    let speed = eps * nl_scale * psi0.max_abs();
    if speed > 0.0 {
        let bound = cfg.cfl_safety * grid.dy() / speed;
        if cfg.dt > bound {
            return Err(ModalError::CflViolation { dt: cfg.dt, bound, context: "full-system quadratic term" });
        }
    }

    let mut spec = forward_transform(psi0)?;
    let mut prop: Option<Propagator> = None;
    let mut out = Vec::with_capacity(times.len());
    let mut t_now = 0.0_f64;

    for (dt, snap) in plan_steps(cfg.dt, times) {
        if dt > 0.0 {
            let rebuild = match &prop {
                Some(p) => (p.dt - dt).abs() > 1e-15,
                None => true,
            };
            if rebuild {
                prop = Some(build_propagator(&grid, params, dt));
            }
            let e = prop.as_ref().unwrap();

            if eps == 0.0 {
                apply_propagator(e, &mut spec);
            } else {
                // Heun in the interaction picture.
                let psi_now = inverse_transform(&spec)?;
                let n1 = nonlinear_spectral(&psi_now, params, cfg.dealias)?;
                let mut pred = spec.clone();
                add_scaled_spec(&mut pred, &n1, dt);
                apply_propagator(e, &mut pred);
                let psi_pred = inverse_transform(&pred)?;
                let n2 = nonlinear_spectral(&psi_pred, params, cfg.dealias)?;
                apply_propagator(e, &mut spec);
                let mut n1e = n1;
                apply_propagator(e, &mut n1e);
                add_scaled_spec(&mut spec, &n1e, dt / 2.0);
                add_scaled_spec(&mut spec, &n2, dt / 2.0);
            }
            t_now += dt;

            if initial_norm > 0.0 {
                let now = inverse_transform(&spec)?.l2_norm();
                let factor = now / initial_norm;
                if factor > ENERGY_GROWTH_LIMIT {
                    return Err(ModalError::Divergence { factor, limit: ENERGY_GROWTH_LIMIT });
                }
            }
        }
        if snap {
            let mut f = inverse_transform(&spec)?;
            f.grid = grid.clone();
            f.time_stamp = psi0.time_stamp + t_now;
            out.push(f);
        }
    }
    Ok(out)
}
