//! Diagonal spectral operators: derivatives, transverse Laplacian, the
//! beam-weighted Laplacian and the y-antiderivative with zero-mean gauge.

use num_complex::Complex64;

use crate::error::Result;

use super::{GaugeNote, SpectralField, SpectralScalar};

/// The operators named by the k-space calculus.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SpectralOp {
    /// d/dx: multiply by -i kx (Nyquist zeroed).
    Dx,
    /// d/dy: multiply by -i ky (Nyquist zeroed).
    Dy,
    /// d/dz: multiply by -i kz (Nyquist zeroed).
    Dz,
    /// Transverse Laplacian d2/dx2 + d2/dz2: multiply by -(kx^2 + kz^2).
    TransverseLaplacian,
    /// Beam-weighted Laplacian mu d2/dx2 + d2/dy2 + mu d2/dz2.
    LaplacianBeam { mu: f64 },
}

fn odd_multiplier(k: f64, i: usize, n: usize) -> Complex64 {
    // Odd-order derivative at the self-paired Nyquist plane has no consistent
    // real representation; zero it.
    if n > 1 && n % 2 == 0 && i == n / 2 {
        Complex64::new(0.0, 0.0)
    } else {
        Complex64::new(0.0, -k)
    }
}

/// Multiply every coefficient by a caller-supplied diagonal factor
/// `(ix, iy, iz, kx, ky, kz) -> m`. The building block for custom multipliers.
pub fn map_spectrum(
    s: &SpectralScalar,
    mut f: impl FnMut(usize, usize, usize, f64, f64, f64) -> Complex64,
) -> SpectralScalar {
    let grid = &s.grid;
    let kx = grid.kx();
    let ky = grid.ky();
    let kz = grid.kz();
    let mut out = s.clone();
    for ix in 0..grid.nx {
        for iy in 0..grid.ny {
            for iz in 0..grid.nz {
                let m = f(ix, iy, iz, kx[ix], ky[iy], kz[iz]);
                out.data[[ix, iy, iz]] *= m;
            }
        }
    }
    out
}

/// Apply one diagonal operator to a scalar spectrum.
pub fn apply_operator_scalar(s: &SpectralScalar, op: SpectralOp) -> SpectralScalar {
    let (nx, ny, nz) = s.grid.shape();
    match op {
        SpectralOp::Dx => map_spectrum(s, |ix, _, _, kx, _, _| odd_multiplier(kx, ix, nx)),
        SpectralOp::Dy => map_spectrum(s, |_, iy, _, _, ky, _| odd_multiplier(ky, iy, ny)),
        SpectralOp::Dz => map_spectrum(s, |_, _, iz, _, _, kz| odd_multiplier(kz, iz, nz)),
        SpectralOp::TransverseLaplacian => {
            map_spectrum(s, |_, _, _, kx, _, kz| Complex64::new(-(kx * kx + kz * kz), 0.0))
        }
        SpectralOp::LaplacianBeam { mu } => map_spectrum(s, |_, _, _, kx, ky, kz| {
            Complex64::new(-(mu * kx * kx + ky * ky + mu * kz * kz), 0.0)
        }),
    }
}

/// Apply one diagonal operator component-wise to a five-component spectrum.
pub fn apply_operator(s: &SpectralField, op: SpectralOp) -> SpectralField {
    let mut out = s.clone();
    for (dst, src) in out.components_mut().into_iter().zip(s.components()) {
        let tmp = SpectralScalar { grid: s.grid.clone(), data: src.clone() };
        let applied = apply_operator_scalar(&tmp, op);
        dst.assign(&applied.data);
    }
    out
}

/// Energy fraction threshold above which the antiderivative flags its gauge note.
pub const GAUGE_ENERGY_TOL: f64 = 1e-8;

/// `int dy` in k-space: multiply `ky != 0` modes by `1/(-i ky)`, zero the
/// `ky = 0` plane (zero-mean gauge) and the ky Nyquist plane. Returns the
/// gauge note describing how much energy sat on the gauged plane.
pub fn antiderivative_y(s: &SpectralScalar) -> Result<(SpectralScalar, GaugeNote)> {
    let ny = s.grid.ny;
    let frac = s.ky_zero_energy_fraction();
    let out = map_spectrum(s, |_, iy, _, _, ky, _| {
        if iy == 0 || (ny > 1 && ny % 2 == 0 && iy == ny / 2) {
            Complex64::new(0.0, 0.0)
        } else {
            // 1 / (-i ky) = i / ky
            Complex64::new(0.0, 1.0 / ky)
        }
    });
    Ok((out, GaugeNote { ky_zero_energy_fraction: frac, flagged: frac > GAUGE_ENERGY_TOL }))
}

/// 2/3-rule dealiasing: zero coefficients with |mode index| above `n/3` on
/// every transformed axis (so products of retained modes cannot alias back).
pub fn dealias_two_thirds(s: &mut SpectralScalar) {
    let grid = s.grid.clone();
    let cut = |i: usize, n: usize| -> bool {
        if n == 1 {
            return false;
        }
        let m = if i <= n / 2 { i as isize } else { i as isize - n as isize };
        m.unsigned_abs() > n / 3
    };
    for ix in 0..grid.nx {
        for iy in 0..grid.ny {
            for iz in 0..grid.nz {
                if cut(ix, grid.nx) || cut(iy, grid.ny) || cut(iz, grid.nz) {
                    s.data[[ix, iy, iz]] = Complex64::new(0.0, 0.0);
                }
            }
        }
    }
}

/// Convenience: spectral derivative of a real scalar field, returned in
/// physical space.
pub fn derivative(
    f: &super::ScalarField,
    op: SpectralOp,
) -> Result<super::ScalarField> {
    let s = super::forward_scalar(f)?;
    super::inverse_scalar(&apply_operator_scalar(&s, op))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{forward_scalar, inverse_scalar, Grid, ScalarField};
    use approx::assert_relative_eq;

    fn line(n: usize) -> Grid {
        Grid::line_y(n, 2.0 * std::f64::consts::PI).unwrap()
    }

    #[test]
    fn dy_of_sine_is_cosine() {
        let g = line(32);
        let f = ScalarField::from_fn(&g, |_, y, _| y.sin());
        let d = derivative(&f, SpectralOp::Dy).unwrap();
        for iy in 0..32 {
            assert_relative_eq!(d.data[[0, iy, 0]], g.y(iy).cos(), epsilon = 1e-12);
        }
    }

    #[test]
    fn transverse_laplacian_matches_finite_differences() {
        let g = Grid::plane_xy(128, 4, 20.0, 1.0).unwrap().with_origin(-10.0, 0.0, 0.0);
        let f = ScalarField::from_fn(&g, |x, _, _| (-x * x).exp());
        let s = forward_scalar(&f).unwrap();
        let lap = inverse_scalar(&apply_operator_scalar(&s, SpectralOp::TransverseLaplacian)).unwrap();
        // O(h^2) centered finite-difference oracle
        let h = g.dx();
        let mut max_err = 0.0_f64;
        for ix in 1..g.nx - 1 {
            let fd = (f.data[[ix + 1, 0, 0]] - 2.0 * f.data[[ix, 0, 0]] + f.data[[ix - 1, 0, 0]]) / (h * h);
            max_err = max_err.max((lap.data[[ix, 0, 0]] - fd).abs());
        }
        // FD truncation error for exp(-x^2) with h = 0.156: |f''''| <= 12 -> ~ h^2
        assert!(max_err < 3.0 * h * h, "max_err = {max_err}, h^2 = {}", h * h);
    }

    #[test]
    fn beam_laplacian_with_mu_zero_is_second_y_derivative() {
        let g = Grid::plane_xy(8, 32, 3.0, 2.0 * std::f64::consts::PI).unwrap();
        let f = ScalarField::from_fn(&g, |x, y, _| (2.0 * y).sin() + x);
        let s = forward_scalar(&f).unwrap();
        let a = apply_operator_scalar(&s, SpectralOp::LaplacianBeam { mu: 0.0 });
        let b = apply_operator_scalar(&apply_operator_scalar(&s, SpectralOp::Dy), SpectralOp::Dy);
        for (x, y) in a.data.iter().zip(b.data.iter()) {
            assert!((x - y).norm() < 1e-12);
        }
    }

    #[test]
    fn antiderivative_of_cosine_is_sine() {
        let g = line(32);
        let f = ScalarField::from_fn(&g, |_, y, _| y.cos());
        let s = forward_scalar(&f).unwrap();
        let (a, note) = antiderivative_y(&s).unwrap();
        assert!(!note.flagged);
        let out = inverse_scalar(&a).unwrap();
        for iy in 0..32 {
            assert_relative_eq!(out.data[[0, iy, 0]], g.y(iy).sin(), epsilon = 1e-12);
        }
    }

    #[test]
    fn derivative_then_antiderivative_is_identity_on_zero_mean() {
        let g = line(64);
        let f = ScalarField::from_fn(&g, |_, y, _| (2.0 * y).sin() + 0.25 * (5.0 * y).cos());
        let s = forward_scalar(&f).unwrap();
        let d = apply_operator_scalar(&s, SpectralOp::Dy);
        let (a, _) = antiderivative_y(&d).unwrap();
        let back = inverse_scalar(&a).unwrap();
        for (x, y) in back.data.iter().zip(f.data.iter()) {
            assert!((x - y).abs() < 1e-10);
        }
        // And the other composition order.
        let (a2, _) = antiderivative_y(&s).unwrap();
        let d2 = apply_operator_scalar(&a2, SpectralOp::Dy);
        let back2 = inverse_scalar(&d2).unwrap();
        for (x, y) in back2.data.iter().zip(f.data.iter()) {
            assert!((x - y).abs() < 1e-10);
        }
    }

    #[test]
    fn constant_offset_is_gauged_away_with_warning() {
        let g = line(32);
        let f0 = ScalarField::from_fn(&g, |_, y, _| (3.0 * y).cos());
        let f1 = ScalarField::from_fn(&g, |_, y, _| (3.0 * y).cos() + 4.0);
        let (a0, n0) = antiderivative_y(&forward_scalar(&f0).unwrap()).unwrap();
        let (a1, n1) = antiderivative_y(&forward_scalar(&f1).unwrap()).unwrap();
        assert!(!n0.flagged);
        assert!(n1.flagged);
        let o0 = inverse_scalar(&a0).unwrap();
        let o1 = inverse_scalar(&a1).unwrap();
        // Trapezoid oracle with mean subtraction agrees with the offset-free primitive.
        for (x, y) in o0.data.iter().zip(o1.data.iter()) {
            assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn operators_commute_on_random_fields() {
        let g = Grid::plane_xy(16, 16, 3.0, 5.0).unwrap();
        let mut state = 42_u64;
        let mut rand = move || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (state >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        };
        let f = ScalarField::from_fn(&g, |_, _, _| rand());
        let s = forward_scalar(&f).unwrap();
        let ab = apply_operator_scalar(&apply_operator_scalar(&s, SpectralOp::Dx), SpectralOp::Dy);
        let ba = apply_operator_scalar(&apply_operator_scalar(&s, SpectralOp::Dy), SpectralOp::Dx);
        let scale = s.data.iter().fold(0.0_f64, |m, c| m.max(c.norm()));
        for (x, y) in ab.data.iter().zip(ba.data.iter()) {
            assert!((x - y).norm() <= 1e-12 * scale);
        }
    }

    #[test]
    fn dealias_zeroes_upper_third() {
        let g = line(12);
        let f = ScalarField::from_fn(&g, |_, y, _| (5.0 * y).cos() + (2.0 * y).cos());
        let mut s = forward_scalar(&f).unwrap();
        dealias_two_thirds(&mut s);
        assert!(s.data[[0, 5, 0]].norm() < 1e-14, "mode 5 > 12/3 must be cut");
        assert!(s.data[[0, 2, 0]].norm() > 0.49, "mode 2 kept");
    }
}
