//! Exact k-space propagators of the per-mode linear equations.

use num_complex::Complex64;

use crate::error::{ModalError, Result};
use crate::field::{forward_scalar, inverse_scalar, ScalarField};
use crate::material::DimensionlessParams;

use super::{Direction, EvolutionConfig};

/// Advance the acoustic-mode density by time `t` under
/// `d rho/dt +- d rho/dy +- (mu/2) int dy Lap_perp rho - (beta/2) d2 rho/dy2 = 0`.
///
/// The equation is linear and diagonal in k, so the update is the exact
/// multiplier `exp((+-i Omega - beta ky^2 / 2) t)` with
/// `Omega = ky + mu (kx^2 + kz^2)/(2 ky)`. The `ky = 0` plane, where the
/// diffraction term is singular, is frozen by the zero-mean gauge.
pub fn evolve_linear_acoustic(
    rho: &ScalarField,
    params: &DimensionlessParams,
    _cfg: &EvolutionConfig,
    direction: Direction,
    t: f64,
) -> Result<ScalarField> {
    let spec = forward_scalar(rho)?;
    let sign = direction.sign();
    let mu = params.mu;
    let beta = params.beta_total;
    let ny = rho.grid.ny;
    let out = crate::field::ops_map_spectrum(&spec, |_, iy, _, kx, ky, kz| {
        if iy == 0 || (ny > 1 && ny % 2 == 0 && iy == ny / 2) {
            return Complex64::new(1.0, 0.0);
        }
        let omega = ky + mu * (kx * kx + kz * kz) / (2.0 * ky);
        (Complex64::new(-beta * ky * ky / 2.0, sign * omega) * t).exp()
    });
    let mut field = inverse_scalar(&out)?;
    field.grid = rho.grid.clone();
    Ok(field)
}

/// Which diffusive branch to advance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum DiffusiveMode {
    /// Heat-conduction decay: harmonics scale by `exp(delta22 ky^2 t)`
    /// (delta22 < 0 for real substances, matching the root `-i delta22 Omega^2`).
    Entropy,
    /// Shear decay: harmonics scale by `exp(-delta12 ky^2 t)`.
    Vortical,
}

/// Advance the axial velocity of the entropy or vortical mode by time `t`.
pub fn evolve_diffusive_mode(
    v: &ScalarField,
    params: &DimensionlessParams,
    _cfg: &EvolutionConfig,
    which: DiffusiveMode,
    t: f64,
) -> Result<ScalarField> {
    // rate r in exp(r ky^2 t); decay requires r <= 0.
    let rate = match which {
        DiffusiveMode::Entropy => params.delta22,
        DiffusiveMode::Vortical => -params.delta12,
    };
    if rate > 0.0 {
        return Err(ModalError::Stability(format!(
            "{which:?} mode would grow: decay rate {rate:.3e} has the wrong sign"
        )));
    }
    let spec = forward_scalar(v)?;
    let out = crate::field::ops_map_spectrum(&spec, |_, _, _, _, ky, _| {
        Complex64::new((rate * ky * ky * t).exp(), 0.0)
    });
    inverse_scalar(&out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Grid;
    use approx::assert_relative_eq;

    const TAU: f64 = 2.0 * std::f64::consts::PI;

    fn cfg() -> EvolutionConfig {
        EvolutionConfig::new(0.01, 1.0).unwrap()
    }

    #[test]
    fn pure_advection_translates_exactly() {
        let p = DimensionlessParams::ideal_gas_beta(0.0, 0.0, 0.0, 1.4).unwrap();
        let g = Grid::line_y(64, TAU).unwrap();
        let f = ScalarField::from_fn(&g, |_, y, _| (2.0 * y).sin() + 0.3 * (3.0 * y).cos());
        let t = 0.7;
        let out = evolve_linear_acoustic(&f, &p, &cfg(), Direction::Rightward, t).unwrap();
        for iy in 0..g.ny {
            let y = g.y(iy);
            let expect = (2.0 * (y - t)).sin() + 0.3 * (3.0 * (y - t)).cos();
            assert_relative_eq!(out.data[[0, iy, 0]], expect, epsilon = 1e-11);
        }
        let back = evolve_linear_acoustic(&f, &p, &cfg(), Direction::Leftward, t).unwrap();
        for iy in 0..g.ny {
            let y = g.y(iy);
            let expect = (2.0 * (y + t)).sin() + 0.3 * (3.0 * (y + t)).cos();
            assert_relative_eq!(back.data[[0, iy, 0]], expect, epsilon = 1e-11);
        }
    }

    #[test]
    fn single_harmonic_decays_at_beta_over_two() {
        let beta = 0.1;
        let p = DimensionlessParams::ideal_gas_beta(0.0, 0.0, beta, 1.4).unwrap();
        let g = Grid::line_y(32, TAU).unwrap();
        let f = ScalarField::from_fn(&g, |_, y, _| y.sin());
        let t = 2.0;
        let out = evolve_linear_acoustic(&f, &p, &cfg(), Direction::Rightward, t).unwrap();
        let decay = (-beta * t / 2.0_f64).exp();
        for iy in 0..g.ny {
            let expect = decay * (g.y(iy) - t).sin();
            assert_relative_eq!(out.data[[0, iy, 0]], expect, epsilon = 1e-12);
        }
    }

    #[test]
    fn beam_matches_refined_ode_oracle() {
        // Gaussian beam with mu > 0: compare the one-shot multiplier against
        // RK4 time stepping of the k-diagonal ODE at dt/16.
        let mu = 0.05;
        let beta = 0.02;
        let p = DimensionlessParams::ideal_gas_beta(mu, 0.0, beta, 1.4).unwrap();
        let g = Grid::plane_xy(32, 64, 16.0, TAU * 4.0).unwrap().with_origin(-8.0, 0.0, 0.0);
        let f = ScalarField::from_fn(&g, |x, y, _| (-x * x).exp() * (2.0 * y).sin());
        let t = 0.5;
        let out = evolve_linear_acoustic(&f, &p, &cfg(), Direction::Rightward, t).unwrap();

        // oracle: integrate d rho^/dt = (i Omega - beta ky^2/2) rho^ by RK4
        let spec = forward_scalar(&f).unwrap();
        let kx = g.kx();
        let ky = g.ky();
        let mut oracle = spec.clone();
        let steps = 16 * 50;
        let dt = t / steps as f64;
        for ix in 0..g.nx {
            for iy in 0..g.ny {
                if iy == 0 || iy == g.ny / 2 {
                    continue;
                }
                let omega = ky[iy] + mu * kx[ix] * kx[ix] / (2.0 * ky[iy]);
                let lam = Complex64::new(-beta * ky[iy] * ky[iy] / 2.0, omega);
                let mut v = oracle.data[[ix, iy, 0]];
                for _ in 0..steps {
                    // RK4 on v' = lam v
                    let k1 = lam * v;
                    let k2 = lam * (v + 0.5 * dt * k1);
                    let k3 = lam * (v + 0.5 * dt * k2);
                    let k4 = lam * (v + dt * k3);
                    v += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
                }
                oracle.data[[ix, iy, 0]] = v;
            }
        }
        let oracle_field = inverse_scalar(&oracle).unwrap();
        let mut max_err = 0.0_f64;
        for (a, b) in out.data.iter().zip(oracle_field.data.iter()) {
            max_err = max_err.max((a - b).abs());
        }
        assert!(max_err < 1e-8, "max_err = {max_err}");
    }

    #[test]
    fn entropy_harmonic_decay_rate() {
        let mut p = DimensionlessParams::ideal_gas_beta(0.0, 0.0, 0.1, 1.4).unwrap();
        p.delta22 = -0.02;
        let g = Grid::line_y(32, TAU).unwrap();
        let f = ScalarField::from_fn(&g, |_, y, _| y.sin());
        let t = 3.0;
        let out = evolve_diffusive_mode(&f, &p, &cfg(), DiffusiveMode::Entropy, t).unwrap();
        assert_relative_eq!(out.max_abs(), (-0.02 * t_f64(t)).exp(), max_relative = 1e-6);
    }

    fn t_f64(t: f64) -> f64 {
        t
    }

    #[test]
    fn zero_field_stays_zero() {
        let p = DimensionlessParams::ideal_gas_beta(0.0, 0.0, 0.1, 1.4).unwrap();
        let g = Grid::line_y(16, TAU).unwrap();
        let f = ScalarField::zeros(&g);
        let out = evolve_diffusive_mode(&f, &p, &cfg(), DiffusiveMode::Vortical, 5.0).unwrap();
        assert_eq!(out.max_abs(), 0.0);
    }

    #[test]
    fn vortical_gaussian_variance_grows_linearly() {
        // Heat kernel: variance sigma^2(t) = sigma0^2 + 2 delta12 t.
        let p = DimensionlessParams::ideal_gas_beta(0.0, 0.0, 0.05, 1.4).unwrap();
        let d12 = p.delta12;
        let ly = 60.0;
        let g = Grid::line_y(512, ly).unwrap().with_origin(0.0, -ly / 2.0, 0.0);
        let s0 = 1.5_f64;
        let f = ScalarField::from_fn(&g, |_, y, _| (-y * y / (2.0 * s0 * s0)).exp());
        let t = 20.0;
        let out = evolve_diffusive_mode(&f, &p, &cfg(), DiffusiveMode::Vortical, t).unwrap();
        // measure variance of the profile
        let measure = |field: &ScalarField| -> f64 {
            let mut m0 = 0.0;
            let mut m2 = 0.0;
            for iy in 0..g.ny {
                let y = g.y(iy);
                let v = field.data[[0, iy, 0]];
                m0 += v;
                m2 += y * y * v;
            }
            m2 / m0
        };
        let v0 = measure(&f);
        let v1 = measure(&out);
        assert_relative_eq!(v1 - v0, 2.0 * d12 * t, max_relative = 1e-5);
    }

    #[test]
    fn wrong_sign_override_is_a_stability_error() {
        let mut p = DimensionlessParams::ideal_gas_beta(0.0, 0.0, 0.1, 1.4).unwrap();
        p.delta22 = 0.02; // user override with growth sign
        let g = Grid::line_y(16, TAU).unwrap();
        let f = ScalarField::from_fn(&g, |_, y, _| y.sin());
        assert!(matches!(
            evolve_diffusive_mode(&f, &p, &cfg(), DiffusiveMode::Entropy, 1.0),
            Err(ModalError::Stability(_))
        ));
        p.delta22 = -0.02;
        p.delta12 = -0.01;
        assert!(matches!(
            evolve_diffusive_mode(&f, &p, &cfg(), DiffusiveMode::Vortical, 1.0),
            Err(ModalError::Stability(_))
        ));
    }
}
