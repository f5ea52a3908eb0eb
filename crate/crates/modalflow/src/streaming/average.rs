//! Period averaging of the radiation force for quasi-periodic sources.

use crate::error::{ModalError, Result};
use crate::field::{Grid, ScalarField};
use crate::material::DimensionlessParams;

use super::force::{gusev_rudenko_force, radiation_force, ForceVariant};
use super::sources::AcousticSource;

/// Samples per period of the uniform averaging quadrature.
pub const SAMPLES_PER_PERIOD: usize = 64;

/// Result of [`time_average_force`].
#[derive(Debug, Clone)]
pub struct AveragedForce {
    /// `<F1x>` over the integral number of periods.
    pub mean: ScalarField,
    /// The classical period-averaged reference force on the same grid.
    pub reference: ScalarField,
    /// Pointwise `mean - reference`.
    pub deviation: ScalarField,
    /// `||mean - reference||_2 / ||reference||_2`.
    pub rel_l2_deviation: f64,
    /// Half peak-to-peak amplitude of `F/<F> - 1` over the samples at the
    /// strongest reference point: the instantaneous ripple (about beta/4).
    pub ripple_amplitude: f64,
    pub n_periods: usize,
    pub n_samples: usize,
}

/// Average the radiation force of a quasi-periodic source over
/// `n_periods` full periods, sampling uniformly with at least
/// [`SAMPLES_PER_PERIOD`] points per period, and compare it against the
/// classical averaged force.
pub fn time_average_force(
    source: &AcousticSource,
    params: &DimensionlessParams,
    n_periods: usize,
    grid: &Grid,
) -> Result<AveragedForce> {
    if n_periods < 1 {
        return Err(ModalError::domain(
            "time_average_force",
            "averaging requires an integral number of periods (n_periods >= 1)",
        ));
    }
    let (theta, beta, window) = match source {
        AcousticSource::QuasiPeriodicBeam { theta, beta, window } => (*theta, *beta, *window),
        _ => {
            return Err(ModalError::domain(
                "time_average_force",
                "period averaging is defined for the quasi-periodic beam source",
            ))
        }
    };

    let reference = gusev_rudenko_force(&theta, beta, grid, params.mu)?;
    // Comparison region: past the entry window, where the sampled beam equals
    // the analytic one. Ripple probe: strongest reference point inside it.
    let y_cmp = window.end();
    let mut ref_peak = (0usize, 0usize, 0.0_f64);
    for ix in 0..grid.nx {
        for iy in 0..grid.ny {
            if grid.y(iy) < y_cmp {
                continue;
            }
            let v = reference.data[[ix, iy, 0]].abs();
            if v > ref_peak.2 {
                ref_peak = (ix, iy, v);
            }
        }
    }

    let n_samples = SAMPLES_PER_PERIOD * n_periods;
    let period = 2.0 * std::f64::consts::PI;
    let mut mean = ScalarField::zeros(grid);
    let mut probe = Vec::with_capacity(n_samples);
    for i in 0..n_samples {
        let t = i as f64 / n_samples as f64 * period * n_periods as f64;
        let rho = source.density_grid(grid, t)?;
        let f = radiation_force(&rho, params, ForceVariant::SimplifiedEq34)?;
        mean.data.scaled_add(1.0 / n_samples as f64, &f.f1x.data);
        probe.push(f.f1x.data[[ref_peak.0, ref_peak.1, 0]]);
    }

    let mut deviation = mean.clone();
    deviation.data.scaled_add(-1.0, &reference.data);
    let mut num = 0.0_f64;
    let mut den = 0.0_f64;
    for ix in 0..grid.nx {
        for iy in 0..grid.ny {
            if grid.y(iy) < y_cmp {
                continue;
            }
            num += deviation.data[[ix, iy, 0]].powi(2);
            den += reference.data[[ix, iy, 0]].powi(2);
        }
    }
    let rel = (num / den).sqrt();

    let probe_mean: f64 = probe.iter().sum::<f64>() / probe.len() as f64;
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for v in &probe {
        let r = v / probe_mean - 1.0;
        lo = lo.min(r);
        hi = hi.max(r);
    }
    let ripple = (hi - lo) / 2.0;

    Ok(AveragedForce {
        mean,
        reference,
        deviation,
        rel_l2_deviation: rel,
        ripple_amplitude: ripple,
        n_periods,
        n_samples,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::streaming::sources::TransverseProfile;

    fn setup() -> (AcousticSource, DimensionlessParams, Grid) {
        let beta = 0.05;
        let p = DimensionlessParams::ideal_gas_beta(1e-2, 0.0, beta, 1.4).unwrap();
        let src = AcousticSource::quasi_periodic(TransverseProfile::default(), beta).unwrap();
        let g = Grid::plane_xy(48, 1024, 10.0, 400.0).unwrap().with_origin(-5.0, 0.0, 0.0);
        (src, p, g)
    }

    #[test]
    fn rejects_zero_periods_and_wrong_sources() {
        let (src, p, g) = setup();
        assert!(time_average_force(&src, &p, 0, &g).is_err());
        let mono = AcousticSource::monopole(2.0, 1.2, 0.1).unwrap();
        assert!(time_average_force(&mono, &p, 1, &g).is_err());
    }

    #[test]
    fn doubling_periods_changes_nothing() {
        // exact periodicity: the average over 1 and 2 periods agree to 1e-10
        let (src, p, g) = setup();
        let a1 = time_average_force(&src, &p, 1, &g).unwrap();
        let a2 = time_average_force(&src, &p, 2, &g).unwrap();
        let mut diff = a1.mean.clone();
        diff.data.scaled_add(-1.0, &a2.mean.data);
        assert!(diff.max_abs() <= 1e-10 * a1.mean.max_abs().max(1e-300));
    }

    #[test]
    fn mean_matches_reference_and_ripple_is_beta_over_four() {
        let (src, p, g) = setup();
        let avg = time_average_force(&src, &p, 1, &g).unwrap();
        assert!(avg.rel_l2_deviation <= 0.1, "deviation {}", avg.rel_l2_deviation);
        let beta = 0.05;
        let expect = beta / 4.0;
        assert!(
            (avg.ripple_amplitude - expect).abs() <= 0.25 * expect,
            "ripple {} vs beta/4 = {expect}",
            avg.ripple_amplitude
        );
    }
}
