//! Thermodynamic model and the dimensionless parameter set.
//!
//! A fluid is described by background state, transport coefficients and the
//! dimensionless coefficients of the two-term equations of state
//!
//! ```text
//! rho0 e' = E1 p' + E2 (p0/rho0) rho' + E3 p'^2/p0 + E4 p0 rho'^2/rho0^2 + E5 p' rho'/rho0
//! T'      = Theta1 p'/(rho0 Cv) + Theta2 p0 rho'/(rho0^2 Cv)
//! ```
//!
//! From these the adiabatic sound speed `c = sqrt(p0 (1 - E2) / (rho0 E1))`,
//! the quadratic nonlinearity constants `Q`, `S`, and the four dissipation
//! numbers are derived. Everything downstream of [`MaterialModel::to_dimensionless`]
//! works in dimensionless variables; this module is the single SI boundary.

use serde::Deserialize;

use crate::error::{ModalError, Result};

/// SI description of a thermoviscous fluid.
///
/// `k_isothermal` and `beta_thermal` are optional bookkeeping fields; when
/// both are present they must be consistent with `Theta1`, `Theta2`:
/// `Theta1 = rho0 cv k / beta_th` and `Theta2 = -rho0 cv beta_th / p0`.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MaterialModel {
    /// Background density [kg/m^3].
    pub rho0: f64,
    /// Background pressure [Pa].
    pub p0: f64,
    /// Shear viscosity [Pa s].
    pub shear_viscosity: f64,
    /// Bulk viscosity [Pa s].
    pub bulk_viscosity: f64,
    /// Thermal conductivity [W/(m K)].
    pub thermal_conductivity: f64,
    /// Specific heat at constant volume [J/(kg K)].
    pub cv: f64,
    /// Energy-expansion coefficients (dimensionless).
    #[serde(rename = "E1")]
    pub e1: f64,
    #[serde(rename = "E2")]
    pub e2: f64,
    #[serde(rename = "E3")]
    pub e3: f64,
    #[serde(rename = "E4")]
    pub e4: f64,
    #[serde(rename = "E5")]
    pub e5: f64,
    /// Temperature-expansion coefficients (dimensionless).
    #[serde(rename = "Theta1")]
    pub theta1: f64,
    #[serde(rename = "Theta2")]
    pub theta2: f64,
    /// (1/rho0)(dp/drho) at constant T [m^2/s^2]; consistency field.
    #[serde(default)]
    pub k_isothermal: Option<f64>,
    /// -(1/rho0)(drho/dT) at the background state [1/K]; consistency field.
    #[serde(default)]
    pub beta_thermal: Option<f64>,
}

const THETA_CONSISTENCY_TOL: f64 = 1e-12;

impl MaterialModel {
    /// Ideal gas with adiabatic exponent `gamma`, built from `e = p / ((gamma - 1) rho)`.
    ///
    /// The expansion of that relation about the background gives
    /// `E1 = E4 = 1/(gamma-1)`, `E2 = E5 = -1/(gamma-1)`, `E3 = 0`, and the
    /// temperature coefficients `Theta1 = -Theta2 = 1/(gamma-1)`. The derived
    /// constants then satisfy the ideal-gas limits `Q = -gamma`, `S = 0`.
    pub fn ideal_gas(
        gamma: f64,
        p0: f64,
        rho0: f64,
        shear_viscosity: f64,
        bulk_viscosity: f64,
        thermal_conductivity: f64,
        cv: f64,
    ) -> Result<Self> {
        if !(gamma > 1.0) {
            return Err(ModalError::domain("ideal_gas", format!("gamma must exceed 1, got {gamma}")));
        }
        let g1 = 1.0 / (gamma - 1.0);
        let m = MaterialModel {
            rho0,
            p0,
            shear_viscosity,
            bulk_viscosity,
            thermal_conductivity,
            cv,
            e1: g1,
            e2: -g1,
            e3: 0.0,
            e4: g1,
            e5: -g1,
            theta1: g1,
            theta2: -g1,
            k_isothermal: None,
            beta_thermal: None,
        };
        m.validate()?;
        Ok(m)
    }

    /// Air at roughly 20 C, 1 atm. Convenience default for demos and tests.
    pub fn air() -> Self {
        MaterialModel::ideal_gas(1.4, 101_325.0, 1.2, 1.8e-5, 0.0, 0.026, 718.0)
            .expect("air constants are valid")
    }

    /// Parse a material from key-value TOML text. Keys are exactly the field
    /// names; SI units are documented in `materials/schema.md`.
    pub fn from_toml_str(text: &str, path: &str) -> Result<Self> {
        let m: MaterialModel = toml::from_str(text).map_err(|e| ModalError::Schema {
            path: path.to_string(),
            message: e.to_string(),
        })?;
        m.validate()?;
        Ok(m)
    }

    /// Load a material definition file (TOML key-value).
    pub fn from_file(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| ModalError::Io {
            path: path.display().to_string(),
            source: e,
        })?;
        Self::from_toml_str(&text, &path.display().to_string())
    }

    /// Check positivity, the sound-speed bounds and (when supplied) the
    /// `Theta`/`k`/`beta_thermal` consistency relations.
    pub fn validate(&self) -> Result<()> {
        let positive: [(&str, f64); 4] =
            [("rho0", self.rho0), ("p0", self.p0), ("cv", self.cv), ("E1", self.e1)];
        for (name, v) in positive {
            if !(v > 0.0) || !v.is_finite() {
                return Err(ModalError::domain("material", format!("{name} must be > 0, got {v}")));
            }
        }
        let nonneg: [(&str, f64); 3] = [
            ("shear_viscosity", self.shear_viscosity),
            ("bulk_viscosity", self.bulk_viscosity),
            ("thermal_conductivity", self.thermal_conductivity),
        ];
        for (name, v) in nonneg {
            if v < 0.0 || !v.is_finite() {
                return Err(ModalError::domain("material", format!("{name} must be >= 0, got {v}")));
            }
        }
        if !(self.e2 < 1.0) {
            return Err(ModalError::domain(
                "material",
                format!("E2 must be < 1 for a real sound speed, got {}", self.e2),
            ));
        }
        if let (Some(k), Some(bt)) = (self.k_isothermal, self.beta_thermal) {
            let th1 = self.rho0 * self.cv * k / bt;
            let th2 = -self.rho0 * self.cv * bt / self.p0;
            let rel1 = (th1 - self.theta1).abs() / self.theta1.abs().max(1.0);
            let rel2 = (th2 - self.theta2).abs() / self.theta2.abs().max(1.0);
            if rel1 > THETA_CONSISTENCY_TOL || rel2 > THETA_CONSISTENCY_TOL {
                return Err(ModalError::domain(
                    "material",
                    format!(
                        "Theta1/Theta2 inconsistent with k_isothermal/beta_thermal \
                         (relative deviations {rel1:.3e}, {rel2:.3e})"
                    ),
                ));
            }
        }
        Ok(())
    }

    /// Adiabatic sound speed `sqrt(p0 (1 - E2) / (rho0 E1))` [m/s].
    pub fn sound_speed(&self) -> Result<f64> {
        if self.e2 >= 1.0 {
            return Err(ModalError::domain(
                "sound_speed",
                format!("E2 must be < 1, got {}", self.e2),
            ));
        }
        if self.e1 <= 0.0 {
            return Err(ModalError::domain(
                "sound_speed",
                format!("E1 must be > 0, got {}", self.e1),
            ));
        }
        Ok((self.p0 * (1.0 - self.e2) / (self.rho0 * self.e1)).sqrt())
    }

    /// Quadratic nonlinearity constants of the equations of state:
    ///
    /// ```text
    /// Q = (1/E1) (-1 + 2 E3 (1 - E2)/E1 + E5)
    /// S = (1/(1 - E2)) (1 + E2 + 2 E4 + E5 (1 - E2)/E1)
    /// ```
    pub fn nonlinearity_constants(&self) -> Result<(f64, f64)> {
        if self.e1 == 0.0 {
            return Err(ModalError::domain("nonlinearity_constants", "E1 must be nonzero"));
        }
        if self.e2 == 1.0 {
            return Err(ModalError::domain("nonlinearity_constants", "E2 must differ from 1"));
        }
        let r = (1.0 - self.e2) / self.e1;
        let q = (-1.0 + 2.0 * r * self.e3 + self.e5) / self.e1;
        let s = (1.0 + self.e2 + 2.0 * self.e4 + r * self.e5) / (1.0 - self.e2);
        Ok((q, s))
    }

    /// Convert to the dimensionless parameter set for longitudinal scale
    /// `lambda` [m], amplitude parameter `eps_amp` and aspect parameter `mu`.
    ///
    /// ```text
    /// delta11 = (zeta + eta/3) / (rho0 c lambda)      delta12 = eta / (rho0 c lambda)
    /// delta21 = chi Theta1 / (rho0 c lambda Cv E1)    delta22 = chi Theta2 / (rho0 c lambda Cv (1 - E2))
    /// ```
    pub fn to_dimensionless(&self, lambda: f64, eps_amp: f64, mu: f64) -> Result<DimensionlessParams> {
        if !(lambda > 0.0) {
            return Err(ModalError::domain("to_dimensionless", format!("lambda must be > 0, got {lambda}")));
        }
        let c = self.sound_speed()?;
        let scale = self.rho0 * c * lambda;
        let delta11 = (self.bulk_viscosity + self.shear_viscosity / 3.0) / scale;
        let delta12 = self.shear_viscosity / scale;
        let delta21 = self.thermal_conductivity * self.theta1 / (scale * self.cv * self.e1);
        let delta22 = self.thermal_conductivity * self.theta2 / (scale * self.cv * (1.0 - self.e2));
        for (name, v) in [
            ("delta11", delta11),
            ("delta12", delta12),
            ("delta21", delta21),
            ("delta22", delta22),
        ] {
            if !v.is_finite() {
                return Err(ModalError::domain("to_dimensionless", format!("{name} is not finite")));
            }
        }
        let (q, s) = self.nonlinearity_constants()?;
        Ok(DimensionlessParams::new(
            mu,
            eps_amp,
            [delta11, delta12, delta21, delta22],
            q,
            s,
            c,
            lambda,
        )?
        .with_e1(self.e1))
    }
}

/// The dimensionless parameter set used by every solver module.
#[derive(Debug, Clone, serde::Serialize)]
pub struct DimensionlessParams {
    /// Beam aspect parameter mu (transverse/longitudinal scale ratio squared).
    pub mu: f64,
    /// Amplitude parameter epsilon.
    pub eps_amp: f64,
    /// Dissipation numbers.
    pub delta11: f64,
    pub delta12: f64,
    pub delta21: f64,
    pub delta22: f64,
    /// Total attenuation beta = delta11 + delta12 + delta21 + delta22.
    pub beta_total: f64,
    /// Nonlinearity constants of the equations of state.
    pub q_const: f64,
    pub s_const: f64,
    /// Nonlinearity parameter (-Q - S + 1) / 2.
    pub eps_nl: f64,
    /// Sound speed [m/s] retained for unit conversion on output.
    pub sound_speed: f64,
    /// Longitudinal length scale [m].
    pub length_scale: f64,
    /// Energy-expansion coefficient E1 of the source material; prefactors the
    /// dissipation-function row of the viscous quadratic column.
    pub e1: f64,
}

/// Non-fatal observations raised while building a parameter set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParamWarning {
    /// mu above the small-parameter comfort zone (> 0.3).
    LargeMu,
    /// eps_amp above the small-parameter comfort zone (> 0.3).
    LargeAmplitude,
    /// beta_total is zero: inviscid limit, all decay switched off.
    Inviscid,
    /// delta22 >= 0: entropy mode would not decay for a real substance.
    NonphysicalDelta22,
}

impl DimensionlessParams {
    /// Build from explicit dissipation numbers. Rejects negative or
    /// non-finite attenuation; soft conditions are reported by [`Self::warnings`].
    pub fn new(
        mu: f64,
        eps_amp: f64,
        deltas: [f64; 4],
        q_const: f64,
        s_const: f64,
        sound_speed: f64,
        length_scale: f64,
    ) -> Result<Self> {
        let [delta11, delta12, delta21, delta22] = deltas;
        let beta_total = delta11 + delta12 + delta21 + delta22;
        if !beta_total.is_finite() {
            return Err(ModalError::domain("params", "beta_total is not finite"));
        }
        if beta_total < 0.0 {
            return Err(ModalError::domain(
                "params",
                format!("beta_total must be >= 0, got {beta_total:.3e}"),
            ));
        }
        if !(mu >= 0.0) || !(eps_amp >= 0.0) {
            return Err(ModalError::domain("params", "mu and eps_amp must be >= 0"));
        }
        let eps_nl = (-q_const - s_const + 1.0) / 2.0;
        let p = DimensionlessParams {
            mu,
            eps_amp,
            delta11,
            delta12,
            delta21,
            delta22,
            beta_total,
            q_const,
            s_const,
            eps_nl,
            sound_speed,
            length_scale,
            e1: 1.0,
        };
        for w in p.warnings() {
            log::warn!("dimensionless params: {w:?}");
        }
        Ok(p)
    }

    pub fn with_e1(mut self, e1: f64) -> Self {
        self.e1 = e1;
        self
    }

    /// Dimensionless-only constructor for tests and scenarios: splits a total
    /// attenuation `beta` into the default profile
    /// `(0.35, 0.35, 0.5, -0.2) * beta`, which keeps `delta22 < 0`.
    pub fn from_beta(mu: f64, eps_amp: f64, beta: f64, q_const: f64, s_const: f64) -> Result<Self> {
        Self::new(
            mu,
            eps_amp,
            [0.35 * beta, 0.35 * beta, 0.5 * beta, -0.2 * beta],
            q_const,
            s_const,
            1.0,
            1.0,
        )
    }

    /// Ideal-gas flavored dimensionless parameters: `Q = -gamma`, `S = 0`
    /// so that `eps_nl = (gamma + 1)/2`.
    pub fn ideal_gas_beta(mu: f64, eps_amp: f64, beta: f64, gamma: f64) -> Result<Self> {
        Ok(Self::from_beta(mu, eps_amp, beta, -gamma, 0.0)?.with_e1(1.0 / (gamma - 1.0)))
    }

    pub fn warnings(&self) -> Vec<ParamWarning> {
        let mut w = Vec::new();
        if self.mu > 0.3 {
            w.push(ParamWarning::LargeMu);
        }
        if self.eps_amp > 0.3 {
            w.push(ParamWarning::LargeAmplitude);
        }
        if self.beta_total == 0.0 {
            w.push(ParamWarning::Inviscid);
        }
        if self.delta22 > 0.0 {
            w.push(ParamWarning::NonphysicalDelta22);
        }
        w
    }

    /// delta21 + delta22, the pressure-column correction of the acoustic modes.
    pub fn delta2_sum(&self) -> f64 {
        self.delta21 + self.delta22
    }

    /// Replace mu and all four deltas by `factor` times their value.
    /// Used by the residual-scaling audits.
    pub fn scaled(&self, factor: f64) -> Self {
        let mut p = self.clone();
        p.mu *= factor;
        p.delta11 *= factor;
        p.delta12 *= factor;
        p.delta21 *= factor;
        p.delta22 *= factor;
        p.beta_total = p.delta11 + p.delta12 + p.delta21 + p.delta22;
        p
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn sound_speed_ideal_gas_is_sqrt_gamma_p_over_rho() {
        let m = MaterialModel::air();
        let c = m.sound_speed().unwrap();
        // Independent route: c^2 = gamma p0 / rho0 for the ideal-gas coefficients.
        assert_relative_eq!(c, (1.4 * 101_325.0 / 1.2_f64).sqrt(), max_relative = 1e-14);
        assert_relative_eq!(c, 343.820_447_326_798_76, max_relative = 1e-12);
    }

    #[test]
    fn sound_speed_identity_case() {
        let m = MaterialModel {
            rho0: 1.0,
            p0: 1.0,
            shear_viscosity: 0.0,
            bulk_viscosity: 0.0,
            thermal_conductivity: 0.0,
            cv: 1.0,
            e1: 1.0,
            e2: 0.0,
            e3: 0.0,
            e4: 0.0,
            e5: 0.0,
            theta1: 1.0,
            theta2: -1.0,
            k_isothermal: None,
            beta_thermal: None,
        };
        assert_relative_eq!(m.sound_speed().unwrap(), 1.0);
    }

    #[test]
    fn sound_speed_rejects_e2_at_one() {
        let mut m = MaterialModel::air();
        m.e2 = 1.0;
        assert!(m.sound_speed().is_err());
        m.e2 = 1.5;
        assert!(m.sound_speed().is_err());
    }

    #[test]
    fn ideal_gas_nonlinearity_constants() {
        let m = MaterialModel::air();
        let (q, s) = m.nonlinearity_constants().unwrap();
        assert_relative_eq!(q, -1.4, max_relative = 1e-14);
        assert!(s.abs() < 1e-14);
        let p = m.to_dimensionless(0.01, 0.05, 0.01).unwrap();
        assert_relative_eq!(p.eps_nl, 1.2, max_relative = 1e-14);
    }

    #[test]
    fn direct_substitution_case() {
        // E3 = E4 = E5 = 0, E1 = 1, E2 = 0 -> Q = -1, S = 1.
        let m = MaterialModel {
            rho0: 1.0,
            p0: 1.0,
            shear_viscosity: 0.0,
            bulk_viscosity: 0.0,
            thermal_conductivity: 0.0,
            cv: 1.0,
            e1: 1.0,
            e2: 0.0,
            e3: 0.0,
            e4: 0.0,
            e5: 0.0,
            theta1: 1.0,
            theta2: -1.0,
            k_isothermal: None,
            beta_thermal: None,
        };
        let (q, s) = m.nonlinearity_constants().unwrap();
        assert_relative_eq!(q, -1.0);
        assert_relative_eq!(s, 1.0);
    }

    #[test]
    fn ideal_gas_q_s_limit_over_gamma_range() {
        // For all gamma in (1, 2] the constructor must reproduce (Q, S) = (-gamma, 0).
        let mut gamma = 1.05;
        while gamma <= 2.0 + 1e-12 {
            let m = MaterialModel::ideal_gas(gamma, 2.0e5, 0.7, 1e-5, 1e-6, 0.02, 700.0).unwrap();
            let (q, s) = m.nonlinearity_constants().unwrap();
            assert!((q + gamma).abs() < 1e-12, "gamma={gamma}: Q={q}");
            assert!(s.abs() < 1e-12, "gamma={gamma}: S={s}");
            gamma += 0.05;
        }
    }

    #[test]
    fn air_like_deltas_hand_check() {
        let m = MaterialModel::air();
        let p = m.to_dimensionless(0.01, 0.05, 0.01).unwrap();
        // Independent hand evaluation of the four quotients (mpmath cross-check).
        assert_relative_eq!(p.delta11, 1.454_247_424_455_107e-6, max_relative = 1e-12);
        assert_relative_eq!(p.delta12, 4.362_742_273_365_322e-6, max_relative = 1e-12);
        assert_relative_eq!(p.delta21, 8.776_795_040_815_411e-6, max_relative = 1e-12);
        assert_relative_eq!(p.delta22, -6.269_139_314_868_151e-6, max_relative = 1e-12);
        assert!(p.delta22 < 0.0, "Theta2 < 0 must give delta22 < 0");
        assert_eq!(p.beta_total, p.delta11 + p.delta12 + p.delta21 + p.delta22);
    }

    #[test]
    fn zero_conductivity_zeroes_thermal_deltas() {
        let m = MaterialModel::ideal_gas(1.4, 101_325.0, 1.2, 1.8e-5, 0.0, 0.0, 718.0).unwrap();
        let p = m.to_dimensionless(0.01, 0.05, 0.01).unwrap();
        assert_eq!(p.delta21, 0.0);
        assert_eq!(p.delta22, 0.0);
        assert_eq!(p.beta_total, p.delta11 + p.delta12);
    }

    #[test]
    fn inviscid_limit_accepted_with_warning() {
        let m = MaterialModel::ideal_gas(1.4, 101_325.0, 1.2, 0.0, 0.0, 0.0, 718.0).unwrap();
        let p = m.to_dimensionless(0.01, 0.05, 0.01).unwrap();
        assert_eq!(p.beta_total, 0.0);
        assert!(p.warnings().contains(&ParamWarning::Inviscid));
    }

    #[test]
    fn dissipation_linearity_in_transport_coefficients() {
        let scale = 3.7;
        let m1 = MaterialModel::ideal_gas(1.4, 101_325.0, 1.2, 1.8e-5, 1.0e-6, 0.026, 718.0).unwrap();
        let m2 = MaterialModel::ideal_gas(
            1.4,
            101_325.0,
            1.2,
            scale * 1.8e-5,
            scale * 1.0e-6,
            scale * 0.026,
            718.0,
        )
        .unwrap();
        let p1 = m1.to_dimensionless(0.01, 0.05, 0.01).unwrap();
        let p2 = m2.to_dimensionless(0.01, 0.05, 0.01).unwrap();
        for (a, b) in [
            (p1.delta11, p2.delta11),
            (p1.delta12, p2.delta12),
            (p1.delta21, p2.delta21),
            (p1.delta22, p2.delta22),
        ] {
            assert_relative_eq!(scale * a, b, max_relative = 1e-13);
        }
    }

    #[test]
    fn sound_speed_invariant_under_joint_background_scaling() {
        let m1 = MaterialModel::air();
        let mut m2 = m1.clone();
        m2.p0 *= 4.5;
        m2.rho0 *= 4.5;
        assert_relative_eq!(
            m1.sound_speed().unwrap(),
            m2.sound_speed().unwrap(),
            max_relative = 1e-14
        );
    }

    #[test]
    fn theta_consistency_enforced_when_supplied() {
        let mut m = MaterialModel::air();
        // Consistent pair: beta_th from Theta2, then k from Theta1.
        let bt = -m.theta2 * m.p0 / (m.rho0 * m.cv);
        let k = m.theta1 * bt / (m.rho0 * m.cv);
        m.k_isothermal = Some(k);
        m.beta_thermal = Some(bt);
        assert!(m.validate().is_ok());
        m.k_isothermal = Some(k * 1.001);
        assert!(m.validate().is_err());
    }

    #[test]
    fn warnings_for_large_small_parameters() {
        let p = DimensionlessParams::ideal_gas_beta(0.5, 0.4, 0.1, 1.4).unwrap();
        let w = p.warnings();
        assert!(w.contains(&ParamWarning::LargeMu));
        assert!(w.contains(&ParamWarning::LargeAmplitude));
    }
}
