//! Quadratic columns of the weakly nonlinear system.
//!
//! `phi` collects the advection and state-equation products; `phi_tv` the
//! density-weighted viscous products and the dissipation-function row. The
//! printed dimensionless gradient is `(mu d/dx, d/dy, mu d/dz)`; the viscous
//! compressive blocks mirror the linear operator and carry the
//! `(sqrt(mu) d/dx, d/dy, sqrt(mu) d/dz)` weighting instead.

use ndarray::{Array3, Zip};

use crate::error::Result;
use crate::field::{derivative, FieldState, ScalarField, SpectralOp};
use crate::material::DimensionlessParams;

fn scalar(grid: &crate::field::Grid, data: &Array3<f64>) -> ScalarField {
    ScalarField { grid: grid.clone(), data: data.clone() }
}

fn d(grid: &crate::field::Grid, data: &Array3<f64>, op: SpectralOp) -> Result<Array3<f64>> {
    Ok(derivative(&scalar(grid, data), op)?.data)
}

/// Evaluate `(phi, phi_tv)` for the given state. Both columns are returned as
/// `FieldState`-shaped containers (the fifth entry of `phi_tv` is zero).
pub fn quadratic_columns(
    psi: &FieldState,
    params: &DimensionlessParams,
) -> Result<(FieldState, FieldState)> {
    psi.check_finite("quadratic_columns")?;
    let g = &psi.grid;
    let mu = params.mu;
    let sq = mu.sqrt();
    let (q, s) = (params.q_const, params.s_const);
    let (d11, d12) = (params.delta11, params.delta12);

    // first derivatives of all five components
    let dx = |a: &Array3<f64>| d(g, a, SpectralOp::Dx);
    let dy = |a: &Array3<f64>| d(g, a, SpectralOp::Dy);
    let dz = |a: &Array3<f64>| d(g, a, SpectralOp::Dz);

    let vx_x = dx(&psi.vx)?;
    let vx_y = dy(&psi.vx)?;
    let vx_z = dz(&psi.vx)?;
    let vy_x = dx(&psi.vy)?;
    let vy_y = dy(&psi.vy)?;
    let vy_z = dz(&psi.vy)?;
    let vz_x = dx(&psi.vz)?;
    let vz_y = dy(&psi.vz)?;
    let vz_z = dz(&psi.vz)?;
    let p_x = dx(&psi.p)?;
    let p_y = dy(&psi.p)?;
    let p_z = dz(&psi.p)?;
    let rho_x = dx(&psi.rho)?;
    let rho_y = dy(&psi.rho)?;
    let rho_z = dz(&psi.rho)?;

    // (v . grad) f with the printed mu-weighted gradient
    let advect = |fx: &Array3<f64>, fy: &Array3<f64>, fz: &Array3<f64>| -> Array3<f64> {
        let mut out = Array3::zeros(g.shape());
        {
            let o = out.as_slice_mut().unwrap();
            let (vx, vy, vz) = (
                psi.vx.as_slice().unwrap(),
                psi.vy.as_slice().unwrap(),
                psi.vz.as_slice().unwrap(),
            );
            let (fx, fy, fz) =
                (fx.as_slice().unwrap(), fy.as_slice().unwrap(), fz.as_slice().unwrap());
            for i in 0..o.len() {
                o[i] = mu * vx[i] * fx[i] + vy[i] * fy[i] + mu * vz[i] * fz[i];
            }
        }
        out
    };

    // divergence with the printed mu weights (quadratic column) and with the
    // sqrt(mu) weights (viscous blocks, matching the linear operator rows)
    let mut div_mu = Array3::zeros(g.shape());
    Zip::from(&mut div_mu).and(&vx_x).and(&vy_y).and(&vz_z).for_each(|o, &a, &b, &c| {
        *o = mu * a + b + mu * c;
    });
    let mut div_sq = Array3::zeros(g.shape());
    Zip::from(&mut div_sq).and(&vx_x).and(&vy_y).and(&vz_z).for_each(|o, &a, &b, &c| {
        *o = sq * a + b + sq * c;
    });

    // phi
    let adv_vx = advect(&vx_x, &vx_y, &vx_z);
    let adv_vy = advect(&vy_x, &vy_y, &vy_z);
    let adv_vz = advect(&vz_x, &vz_y, &vz_z);
    let adv_p = advect(&p_x, &p_y, &p_z);
    let adv_rho = advect(&rho_x, &rho_y, &rho_z);

    let mut phi = FieldState::zeros(g);
    Zip::from(&mut phi.vx).and(&adv_vx).and(&psi.rho).and(&p_x).for_each(|o, &a, &r, &px| {
        *o = -a + sq * r * px;
    });
    Zip::from(&mut phi.vy).and(&adv_vy).and(&psi.rho).and(&p_y).for_each(|o, &a, &r, &py| {
        *o = -a + r * py;
    });
    Zip::from(&mut phi.vz).and(&adv_vz).and(&psi.rho).and(&p_z).for_each(|o, &a, &r, &pz| {
        *o = -a + sq * r * pz;
    });
    Zip::from(&mut phi.p)
        .and(&psi.p)
        .and(&psi.rho)
        .and(&div_mu)
        .and(&adv_p)
        .for_each(|o, &p, &r, &dv, &ap| {
            *o = (q * p + s * r) * dv - ap;
        });
    Zip::from(&mut phi.rho).and(&psi.rho).and(&div_mu).and(&adv_rho).for_each(|o, &r, &dv, &ar| {
        *o = -r * dv - ar;
    });

    // phi_tv: -d12 rho Lap v_i - d11 rho grad^_i (div^ v),
    // with Lap = mu dxx + dyy + mu dzz and grad^ = (sqrt(mu) dx, dy, sqrt(mu) dz)
    let lap = |a: &Array3<f64>| -> Result<Array3<f64>> {
        let s_f = crate::field::forward_scalar(&scalar(g, a))?;
        let out = crate::field::apply_operator_scalar(&s_f, SpectralOp::LaplacianBeam { mu });
        Ok(crate::field::inverse_scalar(&out)?.data)
    };
    let lap_vx = lap(&psi.vx)?;
    let lap_vy = lap(&psi.vy)?;
    let lap_vz = lap(&psi.vz)?;
    let div_sq_x = dx(&div_sq)?;
    let div_sq_y = dy(&div_sq)?;
    let div_sq_z = dz(&div_sq)?;

    let mut phi_tv = FieldState::zeros(g);
    Zip::from(&mut phi_tv.vx).and(&psi.rho).and(&lap_vx).and(&div_sq_x).for_each(|o, &r, &lv, &dd| {
        *o = -d12 * r * lv - d11 * r * sq * dd;
    });
    Zip::from(&mut phi_tv.vy).and(&psi.rho).and(&lap_vy).and(&div_sq_y).for_each(|o, &r, &lv, &dd| {
        *o = -d12 * r * lv - d11 * r * dd;
    });
    Zip::from(&mut phi_tv.vz).and(&psi.rho).and(&lap_vz).and(&div_sq_z).for_each(|o, &r, &lv, &dd| {
        *o = -d12 * r * lv - d11 * r * sq * dd;
    });

    // dissipation-function row:
    // (1/E1) [ (d11 - d12/3)(div_mu v)^2
    //          + (d12/2) sum_ik (w_k d_k v_i + w_i d_i v_k - (2/3) delta_ik div^)^2 ]
    // with w = (sqrt(mu), 1, sqrt(mu)).
    let e1_inv = 1.0 / params.e1;
    {
        let grads: [[&Array3<f64>; 3]; 3] = [
            [&vx_x, &vx_y, &vx_z],
            [&vy_x, &vy_y, &vy_z],
            [&vz_x, &vz_y, &vz_z],
        ];
        let w = [sq, 1.0, sq];
        let mut tensor_sq = Array3::<f64>::zeros(g.shape());
        for i in 0..3 {
            for k in 0..3 {
                let delta = if i == k { 1.0 } else { 0.0 };
                let gi_k = grads[i][k]; // d_k v_i
                let gk_i = grads[k][i]; // d_i v_k
                Zip::from(&mut tensor_sq).and(gi_k).and(gk_i).and(&div_sq).for_each(
                    |o, &a, &b, &dv| {
                        let t = w[k] * a + w[i] * b - 2.0 / 3.0 * delta * dv;
                        *o += t * t;
                    },
                );
            }
        }
        Zip::from(&mut phi_tv.p).and(&div_mu).and(&tensor_sq).for_each(|o, &dv, &ts| {
            *o = e1_inv * ((d11 - d12 / 3.0) * dv * dv + d12 / 2.0 * ts);
        });
    }
    // fifth entry of phi_tv is identically zero

    Ok((phi, phi_tv))
}
