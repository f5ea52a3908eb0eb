//! Grids, field containers and the spectral calculus.
//!
//! All axes are periodic. The transform convention matches the planar-wave
//! ansatz `exp(i omega t - i k.x)`: a physical field is synthesized as
//! `f(x) = sum_k f~(k) exp(-i k.x)`, so differentiation along an axis is
//! multiplication of the coefficient by `-i k`. The operator `int dy` is the
//! multiplication by `1/(-i ky)` on `ky != 0` modes with the zero-mean gauge
//! (the `ky = 0` plane is set to zero); callers that need a different
//! integration constant restore it in physical space.

mod io;
mod ops;
mod spectral;

pub use io::{read_field_csv, write_field_csv, FieldHeader};
pub use ops::{
    antiderivative_y, apply_operator, apply_operator_scalar, dealias_two_thirds, derivative,
    map_spectrum as ops_map_spectrum, SpectralOp, GAUGE_ENERGY_TOL,
};
pub use spectral::{
    forward_scalar, forward_transform, inverse_scalar, inverse_transform, GaugeNote,
    SpectralField, SpectralScalar, HERMITIAN_TOL,
};

use ndarray::Array3;

use crate::error::{ModalError, Result};

/// Uniform periodic grid. `nz = 1` gives a 2-D run, `nx = nz = 1` a 1-D run.
///
/// Axis origins allow domains such as `y in [0.1, 12.1)` for sources that are
/// singular at `y = 0`; spectral operators are translation invariant so the
/// origin only affects coordinates and output files.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Grid {
    pub nx: usize,
    pub ny: usize,
    pub nz: usize,
    pub lx: f64,
    pub ly: f64,
    pub lz: f64,
    #[serde(default)]
    pub x0: f64,
    #[serde(default)]
    pub y0: f64,
    #[serde(default)]
    pub z0: f64,
}

impl Grid {
    pub fn new(nx: usize, ny: usize, nz: usize, lx: f64, ly: f64, lz: f64) -> Result<Self> {
        let g = Grid { nx, ny, nz, lx, ly, lz, x0: 0.0, y0: 0.0, z0: 0.0 };
        g.validate()?;
        Ok(g)
    }

    /// 1-D grid along y.
    pub fn line_y(ny: usize, ly: f64) -> Result<Self> {
        Grid::new(1, ny, 1, 1.0, ly, 1.0)
    }

    /// 2-D grid in the (x, y) plane.
    pub fn plane_xy(nx: usize, ny: usize, lx: f64, ly: f64) -> Result<Self> {
        Grid::new(nx, ny, 1, lx, ly, 1.0)
    }

    pub fn with_origin(mut self, x0: f64, y0: f64, z0: f64) -> Self {
        self.x0 = x0;
        self.y0 = y0;
        self.z0 = z0;
        self
    }

    pub fn validate(&self) -> Result<()> {
        for (name, n) in [("nx", self.nx), ("ny", self.ny), ("nz", self.nz)] {
            if n == 0 {
                return Err(ModalError::domain("grid", format!("{name} must be >= 1")));
            }
            if n > 1 && n % 2 != 0 {
                return Err(ModalError::domain(
                    "grid",
                    format!("{name} = {n}: transformed axes need even point counts"),
                ));
            }
        }
        for (name, l) in [("lx", self.lx), ("ly", self.ly), ("lz", self.lz)] {
            if !(l > 0.0) {
                return Err(ModalError::domain("grid", format!("{name} must be > 0, got {l}")));
            }
        }
        Ok(())
    }

    pub fn shape(&self) -> (usize, usize, usize) {
        (self.nx, self.ny, self.nz)
    }

    pub fn len(&self) -> usize {
        self.nx * self.ny * self.nz
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn dx(&self) -> f64 {
        self.lx / self.nx as f64
    }

    pub fn dy(&self) -> f64 {
        self.ly / self.ny as f64
    }

    pub fn dz(&self) -> f64 {
        self.lz / self.nz as f64
    }

    pub fn x(&self, i: usize) -> f64 {
        self.x0 + i as f64 * self.dx()
    }

    pub fn y(&self, j: usize) -> f64 {
        self.y0 + j as f64 * self.dy()
    }

    pub fn z(&self, k: usize) -> f64 {
        self.z0 + k as f64 * self.dz()
    }

    /// Wavenumbers along one axis in FFT order: `2 pi / L * [0, 1, .., n/2-1, -n/2, .., -1]`.
    pub fn wavenumbers(n: usize, l: f64) -> Vec<f64> {
        let base = 2.0 * std::f64::consts::PI / l;
        (0..n)
            .map(|i| {
                let m = if i <= n / 2 { i as isize } else { i as isize - n as isize };
                base * m as f64
            })
            .collect()
    }

    pub fn kx(&self) -> Vec<f64> {
        if self.nx == 1 { vec![0.0] } else { Self::wavenumbers(self.nx, self.lx) }
    }

    pub fn ky(&self) -> Vec<f64> {
        if self.ny == 1 { vec![0.0] } else { Self::wavenumbers(self.ny, self.ly) }
    }

    pub fn kz(&self) -> Vec<f64> {
        if self.nz == 1 { vec![0.0] } else { Self::wavenumbers(self.nz, self.lz) }
    }
}

/// Real scalar field over a [`Grid`].
#[derive(Debug, Clone)]
pub struct ScalarField {
    pub grid: Grid,
    pub data: Array3<f64>,
}

impl ScalarField {
    pub fn zeros(grid: &Grid) -> Self {
        ScalarField { grid: grid.clone(), data: Array3::zeros(grid.shape()) }
    }

    /// Fill from a function of physical coordinates.
    pub fn from_fn(grid: &Grid, mut f: impl FnMut(f64, f64, f64) -> f64) -> Self {
        let mut s = Self::zeros(grid);
        for ix in 0..grid.nx {
            for iy in 0..grid.ny {
                for iz in 0..grid.nz {
                    s.data[[ix, iy, iz]] = f(grid.x(ix), grid.y(iy), grid.z(iz));
                }
            }
        }
        s
    }

    pub fn check_finite(&self, context: &'static str) -> Result<()> {
        for (idx, v) in self.data.iter().enumerate() {
            if !v.is_finite() {
                return Err(ModalError::NonFinite { context, index: idx });
            }
        }
        Ok(())
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
    }

    /// L2 norm with the uniform quadrature weight `dx dy dz`.
    pub fn l2_norm(&self) -> f64 {
        let w = self.grid.dx() * self.grid.dy() * self.grid.dz();
        (self.data.iter().map(|v| v * v).sum::<f64>() * w).sqrt()
    }

    pub fn scale(&mut self, a: f64) {
        self.data.mapv_inplace(|v| a * v);
    }
}

/// The five-component perturbation column `(vx, vy, vz, p, rho)` on a grid.
#[derive(Debug, Clone)]
pub struct FieldState {
    pub grid: Grid,
    pub vx: Array3<f64>,
    pub vy: Array3<f64>,
    pub vz: Array3<f64>,
    pub p: Array3<f64>,
    pub rho: Array3<f64>,
    pub time_stamp: f64,
}

impl FieldState {
    pub fn zeros(grid: &Grid) -> Self {
        let sh = grid.shape();
        FieldState {
            grid: grid.clone(),
            vx: Array3::zeros(sh),
            vy: Array3::zeros(sh),
            vz: Array3::zeros(sh),
            p: Array3::zeros(sh),
            rho: Array3::zeros(sh),
            time_stamp: 0.0,
        }
    }

    pub fn components(&self) -> [&Array3<f64>; 5] {
        [&self.vx, &self.vy, &self.vz, &self.p, &self.rho]
    }

    pub fn components_mut(&mut self) -> [&mut Array3<f64>; 5] {
        [&mut self.vx, &mut self.vy, &mut self.vz, &mut self.p, &mut self.rho]
    }

    pub fn component(&self, i: usize) -> &Array3<f64> {
        match i {
            0 => &self.vx,
            1 => &self.vy,
            2 => &self.vz,
            3 => &self.p,
            4 => &self.rho,
            _ => panic!("component index {i} out of range"),
        }
    }

    pub fn check_finite(&self, context: &'static str) -> Result<()> {
        for c in self.components() {
            for (idx, v) in c.iter().enumerate() {
                if !v.is_finite() {
                    return Err(ModalError::NonFinite { context, index: idx });
                }
            }
        }
        Ok(())
    }

    pub fn max_abs(&self) -> f64 {
        self.components().iter().map(|c| c.iter().fold(0.0_f64, |m, v| m.max(v.abs()))).fold(0.0, f64::max)
    }

    /// Sum of component L2 norms squared, square-rooted; the energy-like norm
    /// used by divergence detectors.
    pub fn l2_norm(&self) -> f64 {
        let w = self.grid.dx() * self.grid.dy() * self.grid.dz();
        let s: f64 = self.components().iter().map(|c| c.iter().map(|v| v * v).sum::<f64>()).sum();
        (s * w).sqrt()
    }

    pub fn add_scaled(&mut self, other: &FieldState, a: f64) {
        for (mine, theirs) in self.components_mut().into_iter().zip(other.components()) {
            ndarray::Zip::from(mine).and(theirs).for_each(|m, t| *m += a * t);
        }
    }

    /// Build from a single scalar component, others zero.
    pub fn from_rho(rho: &ScalarField) -> Self {
        let mut f = FieldState::zeros(&rho.grid);
        f.rho.assign(&rho.data);
        f
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_rejects_odd_transformed_axis() {
        assert!(Grid::new(3, 8, 1, 1.0, 1.0, 1.0).is_err());
        assert!(Grid::new(4, 8, 1, 1.0, 1.0, 1.0).is_ok());
        assert!(Grid::new(1, 8, 1, 1.0, 1.0, 1.0).is_ok());
    }

    #[test]
    fn grid_rejects_nonpositive_period() {
        assert!(Grid::new(4, 8, 1, 0.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn wavenumber_layout() {
        let k = Grid::wavenumbers(8, 2.0 * std::f64::consts::PI);
        assert_eq!(k.len(), 8);
        assert_eq!(k[0], 0.0);
        assert_eq!(k[1], 1.0);
        assert_eq!(k[4], 4.0); // Nyquist stored as +n/2
        assert_eq!(k[5], -3.0);
        assert_eq!(k[7], -1.0);
    }

    #[test]
    fn origin_offsets_coordinates() {
        let g = Grid::line_y(8, 4.0).unwrap().with_origin(0.0, 0.1, 0.0);
        assert_eq!(g.y(0), 0.1);
        assert!((g.y(7) - (0.1 + 3.5)).abs() < 1e-15);
    }
}
