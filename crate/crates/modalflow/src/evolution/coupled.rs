//! Right-hand side of the coupled 1-D three-mode system for the rightward
//! acoustic density:
//!
//! ```text
//! d rho1/dt + d rho1/dy - (beta/2) d2 v1/dy2
//!   = (eps/2) ( -v dv/dy + rho dp/dy - v dp/dy + [Q p + S rho] dv/dy )
//! ```
//!
//! with `v`, `p`, `rho` sums over the three planar modes. The per-mode
//! velocity and pressure follow from the planar (kx = kz = 0) limit of the
//! eigenvector columns:
//!
//! ```text
//! v1 =  rho1 - (beta/2) d rho1/dy     p1 = rho1 - (d21 + d22) d rho1/dy
//! v2 = -rho2 - (beta/2) d rho2/dy     p2 = rho2 + (d21 + d22) d rho2/dy
//! v3 =  d22 d rho3/dy                 p3 = 0
//! ```
//!
//! Keeping only mode 1 and dropping the cross viscous-nonlinear products
//! reproduces the Burgers quadratic term `-eps eps_nl rho1 d rho1/dy`.

use ndarray::Zip;

use crate::error::{ModalError, Result};
use crate::field::{derivative, ScalarField, SpectralOp};
use crate::material::DimensionlessParams;

fn dy(f: &ScalarField) -> Result<ScalarField> {
    derivative(f, SpectralOp::Dy)
}

/// Evaluate the quadratic right side for `rho1` given the three modal
/// densities on a shared 1-D grid.
pub fn coupled_1d_rhs(
    rho1: &ScalarField,
    rho2: &ScalarField,
    rho3: &ScalarField,
    params: &DimensionlessParams,
) -> Result<ScalarField> {
    let g = &rho1.grid;
    if g.nx != 1 || g.nz != 1 {
        return Err(ModalError::domain("coupled_1d_rhs", "requires a 1-D grid (nx = nz = 1)"));
    }
    if rho2.grid != *g || rho3.grid != *g {
        return Err(ModalError::domain("coupled_1d_rhs", "modal densities must share one grid"));
    }
    for (f, ctx) in [(rho1, "rho1"), (rho2, "rho2"), (rho3, "rho3")] {
        let _ = ctx;
        f.check_finite("coupled_1d_rhs")?;
    }

    let beta = params.beta_total;
    let sigma = params.delta2_sum();
    let d1 = dy(rho1)?;
    let d2 = dy(rho2)?;
    let d3 = dy(rho3)?;

    let mut v = ScalarField::zeros(g);
    let mut p = ScalarField::zeros(g);
    let mut rho = ScalarField::zeros(g);
    Zip::from(&mut v.data)
        .and(&rho1.data)
        .and(&rho2.data)
        .and(&d1.data)
        .and(&d2.data)
        .and(&d3.data)
        .for_each(|v, &r1, &r2, &g1, &g2, &g3| {
            *v = r1 - r2 - beta / 2.0 * (g1 + g2) + params.delta22 * g3;
        });
    Zip::from(&mut p.data)
        .and(&rho1.data)
        .and(&rho2.data)
        .and(&d1.data)
        .and(&d2.data)
        .for_each(|p, &r1, &r2, &g1, &g2| {
            *p = r1 + r2 + sigma * (g2 - g1);
        });
    Zip::from(&mut rho.data)
        .and(&rho1.data)
        .and(&rho2.data)
        .and(&rho3.data)
        .for_each(|r, &r1, &r2, &r3| *r = r1 + r2 + r3);

    let dv = dy(&v)?;
    let dp = dy(&p)?;
    let mut rhs = ScalarField::zeros(g);
    let half_eps = params.eps_amp / 2.0;
    let (q, s) = (params.q_const, params.s_const);
    Zip::from(&mut rhs.data)
        .and(&v.data)
        .and(&p.data)
        .and(&rho.data)
        .and(&dv.data)
        .and(&dp.data)
        .for_each(|out, &v, &p, &rho, &dv, &dp| {
            *out = half_eps * (-v * dv + rho * dp - v * dp + (q * p + s * rho) * dv);
        });
    Ok(rhs)
}
