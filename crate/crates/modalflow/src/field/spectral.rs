//! Forward/inverse transforms between physical and spectral representations.
//!
//! The analysis transform along one axis of length `n` is
//! `f~(k) = (1/n) sum_j f(x_j) exp(+i k x_j)` so that synthesis is
//! `f(x_j) = sum_k f~(k) exp(-i k x_j)` and derivatives are `-i k` multipliers.
//! Internally this is rustfft's inverse-direction kernel scaled by `1/n` for
//! analysis and the forward-direction kernel for synthesis.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use ndarray::Array3;
use num_complex::Complex64;
use once_cell::sync::Lazy;
use rustfft::{Fft, FftDirection, FftPlanner};

use crate::error::{ModalError, Result};

use super::{FieldState, Grid, ScalarField};

/// Relative tolerance of the Hermitian-symmetry check in the inverse transform.
pub const HERMITIAN_TOL: f64 = 1e-10;

static PLAN_CACHE: Lazy<Mutex<HashMap<(usize, bool), Arc<dyn Fft<f64>>>>> =
    Lazy::new(|| Mutex::new(HashMap::new()));

fn plan(n: usize, forward_kernel: bool) -> Arc<dyn Fft<f64>> {
    let mut cache = PLAN_CACHE.lock().unwrap();
    cache
        .entry((n, forward_kernel))
        .or_insert_with(|| {
            let mut planner = FftPlanner::new();
            let dir = if forward_kernel { FftDirection::Forward } else { FftDirection::Inverse };
            planner.plan_fft(n, dir)
        })
        .clone()
}

/// Metadata attached to gauge-sensitive results: how much of the total energy
/// sat in the `ky = 0` plane that the zero-mean gauge discarded or froze.
#[derive(Debug, Clone, Default, serde::Serialize)]
pub struct GaugeNote {
    pub ky_zero_energy_fraction: f64,
    pub flagged: bool,
}

/// Complex spectral coefficients of one scalar field.
#[derive(Debug, Clone)]
pub struct SpectralScalar {
    pub grid: Grid,
    pub data: Array3<Complex64>,
}

/// Spectral coefficients of the five-component state.
#[derive(Debug, Clone)]
pub struct SpectralField {
    pub grid: Grid,
    pub vx: Array3<Complex64>,
    pub vy: Array3<Complex64>,
    pub vz: Array3<Complex64>,
    pub p: Array3<Complex64>,
    pub rho: Array3<Complex64>,
    pub time_stamp: f64,
}

impl SpectralField {
    pub fn components(&self) -> [&Array3<Complex64>; 5] {
        [&self.vx, &self.vy, &self.vz, &self.p, &self.rho]
    }

    pub fn components_mut(&mut self) -> [&mut Array3<Complex64>; 5] {
        [&mut self.vx, &mut self.vy, &mut self.vz, &mut self.p, &mut self.rho]
    }

    pub fn zeros_like(grid: &Grid, time_stamp: f64) -> Self {
        let sh = grid.shape();
        SpectralField {
            grid: grid.clone(),
            vx: Array3::zeros(sh),
            vy: Array3::zeros(sh),
            vz: Array3::zeros(sh),
            p: Array3::zeros(sh),
            rho: Array3::zeros(sh),
            time_stamp,
        }
    }
}

impl SpectralScalar {
    pub fn zeros(grid: &Grid) -> Self {
        SpectralScalar { grid: grid.clone(), data: Array3::zeros(grid.shape()) }
    }

    /// Fraction of spectral energy on the `ky = 0` plane.
    pub fn ky_zero_energy_fraction(&self) -> f64 {
        let total: f64 = self.data.iter().map(|c| c.norm_sqr()).sum();
        if total == 0.0 {
            return 0.0;
        }
        let mut mean = 0.0;
        for ix in 0..self.grid.nx {
            for iz in 0..self.grid.nz {
                mean += self.data[[ix, 0, iz]].norm_sqr();
            }
        }
        mean / total
    }
}

/// Transform every lane along `axis` in place. `analysis = true` applies the
/// `exp(+ikx)/n` kernel; `false` the synthesis kernel.
fn transform_axis(data: &mut Array3<Complex64>, axis: usize, analysis: bool) {
    let n = data.shape()[axis];
    if n == 1 {
        return;
    }
    // Analysis uses the inverse-direction kernel (exp(+ikx)) scaled by 1/n.
    let fft = plan(n, !analysis);
    let scale = if analysis { 1.0 / n as f64 } else { 1.0 };
    let mut lane_buf = vec![Complex64::default(); n];
    for mut lane in data.lanes_mut(ndarray::Axis(axis)) {
        for (b, v) in lane_buf.iter_mut().zip(lane.iter()) {
            *b = *v;
        }
        fft.process(&mut lane_buf);
        for (v, b) in lane.iter_mut().zip(lane_buf.iter()) {
            *v = b * scale;
        }
    }
}

fn analysis_all_axes(data: &mut Array3<Complex64>) {
    for axis in 0..3 {
        transform_axis(data, axis, true);
    }
}

fn synthesis_all_axes(data: &mut Array3<Complex64>) {
    for axis in 0..3 {
        transform_axis(data, axis, false);
    }
}

fn mirror_index(i: usize, n: usize) -> usize {
    if i == 0 { 0 } else { n - i }
}

/// Largest relative deviation from `f~(-k) = conj(f~(k))`.
fn hermitian_deviation(data: &Array3<Complex64>) -> f64 {
    let (nx, ny, nz) = data.dim();
    let scale = data.iter().fold(0.0_f64, |m, c| m.max(c.norm())).max(f64::MIN_POSITIVE);
    let mut worst = 0.0_f64;
    for ix in 0..nx {
        let jx = mirror_index(ix, nx);
        for iy in 0..ny {
            let jy = mirror_index(iy, ny);
            for iz in 0..nz {
                let jz = mirror_index(iz, nz);
                let d = (data[[ix, iy, iz]] - data[[jx, jy, jz]].conj()).norm();
                worst = worst.max(d);
            }
        }
    }
    worst / scale
}

fn forward_array(grid: &Grid, real: &Array3<f64>) -> Array3<Complex64> {
    let mut c = real.mapv(|v| Complex64::new(v, 0.0));
    analysis_all_axes(&mut c);
    let _ = grid;
    c
}

fn inverse_array(data: &Array3<Complex64>) -> Result<Array3<f64>> {
    let dev = hermitian_deviation(data);
    if dev > HERMITIAN_TOL {
        return Err(ModalError::Symmetry { deviation: dev, tolerance: HERMITIAN_TOL });
    }
    let mut c = data.clone();
    synthesis_all_axes(&mut c);
    Ok(c.mapv(|v| v.re))
}

/// Analysis transform of a scalar field.
pub fn forward_scalar(f: &ScalarField) -> Result<SpectralScalar> {
    f.check_finite("forward_scalar")?;
    Ok(SpectralScalar { grid: f.grid.clone(), data: forward_array(&f.grid, &f.data) })
}

/// Synthesis transform of a scalar spectrum, with the Hermitian check.
pub fn inverse_scalar(s: &SpectralScalar) -> Result<ScalarField> {
    Ok(ScalarField { grid: s.grid.clone(), data: inverse_array(&s.data)? })
}

/// Analysis transform of the five-component state.
pub fn forward_transform(f: &FieldState) -> Result<SpectralField> {
    f.check_finite("forward_transform")?;
    Ok(SpectralField {
        grid: f.grid.clone(),
        vx: forward_array(&f.grid, &f.vx),
        vy: forward_array(&f.grid, &f.vy),
        vz: forward_array(&f.grid, &f.vz),
        p: forward_array(&f.grid, &f.p),
        rho: forward_array(&f.grid, &f.rho),
        time_stamp: f.time_stamp,
    })
}

/// Synthesis transform of the five-component state, with the Hermitian check.
pub fn inverse_transform(s: &SpectralField) -> Result<FieldState> {
    Ok(FieldState {
        grid: s.grid.clone(),
        vx: inverse_array(&s.vx)?,
        vy: inverse_array(&s.vy)?,
        vz: inverse_array(&s.vz)?,
        p: inverse_array(&s.p)?,
        rho: inverse_array(&s.rho)?,
        time_stamp: s.time_stamp,
    })
}
