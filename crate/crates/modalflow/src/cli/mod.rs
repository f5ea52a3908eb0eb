//! Scenario files and the deterministic batch runner.
//!
//! A scenario is a TOML file binding material, dimensionless parameters,
//! grid, source and exactly one command block. Running a scenario writes its
//! artifacts (CSV data, JSON reports) plus a manifest recording input hashes
//! and output digests; re-running with identical inputs produces identical
//! bytes.

mod figures;
mod report;

pub use figures::{default_force_grid, emit_figure_data, FigureConstants, FigureRow};
pub use report::{
    limit_audit, projector_audit, LimitAuditConfig, LimitAuditReport, ProjectorAuditConfig,
    ProjectorAuditReport,
};

use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{ModalError, Result};
use crate::evolution::{
    evolve_burgers_path, evolve_diffusive_mode, evolve_kzk_path, evolve_linear_acoustic,
    integrate_full_system_path, Direction, EvolutionConfig,
};
use crate::field::{read_field_csv, write_field_csv, FieldState, Grid, ScalarField};
use crate::material::{DimensionlessParams, MaterialModel};
use crate::modes::decompose;
use crate::streaming::{
    lift_acoustic_mode, radiation_force, solve_streaming, AcousticSource, ForceVariant,
    RadiationForceField, TransverseProfile,
};

// ---------------------------------------------------------------------------
// scenario schema

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub output_dir: Option<String>,
    #[serde(default)]
    pub material: Option<MaterialSpec>,
    #[serde(default)]
    pub params: Option<ParamsSpec>,
    #[serde(default)]
    pub grid: Option<GridSpec>,
    #[serde(default)]
    pub source: Option<SourceSpec>,
    pub command: Option<CommandSpec>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MaterialSpec {
    /// Path to a material TOML file (relative to the scenario file).
    pub file: Option<String>,
    /// Inline ideal-gas constructor.
    pub ideal_gas: Option<IdealGasSpec>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IdealGasSpec {
    pub gamma: f64,
    pub p0: f64,
    pub rho0: f64,
    #[serde(default)]
    pub shear_viscosity: f64,
    #[serde(default)]
    pub bulk_viscosity: f64,
    #[serde(default)]
    pub thermal_conductivity: f64,
    pub cv: f64,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamsSpec {
    #[serde(default)]
    pub mu: f64,
    #[serde(default)]
    pub eps_amp: f64,
    /// Longitudinal scale for the SI conversion (requires a material).
    pub lambda: Option<f64>,
    /// Total attenuation with the default delta split.
    pub beta: Option<f64>,
    pub delta11: Option<f64>,
    pub delta12: Option<f64>,
    pub delta21: Option<f64>,
    pub delta22: Option<f64>,
    /// Adiabatic exponent for the dimensionless ideal-gas route.
    pub gamma: Option<f64>,
    pub q: Option<f64>,
    pub s: Option<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub nx: usize,
    pub ny: usize,
    #[serde(default = "one")]
    pub nz: usize,
    pub lx: f64,
    pub ly: f64,
    #[serde(default = "one_f")]
    pub lz: f64,
    #[serde(default)]
    pub x0: f64,
    #[serde(default)]
    pub y0: f64,
    #[serde(default)]
    pub z0: f64,
}

fn one() -> usize {
    1
}
fn one_f() -> f64 {
    1.0
}

impl GridSpec {
    pub fn build(&self) -> Result<Grid> {
        Ok(Grid::new(self.nx, self.ny, self.nz, self.lx, self.ly, self.lz)?
            .with_origin(self.x0, self.y0, self.z0))
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SourceSpec {
    QuasiPeriodic {
        beta: f64,
        #[serde(default = "one_f")]
        width: f64,
    },
    Monopole {
        c_shape: f64,
        eps_nl: f64,
        beta: f64,
    },
    Gridded {
        files: Vec<String>,
        times: Vec<f64>,
    },
}

impl SourceSpec {
    pub fn build(&self, base: &Path) -> Result<AcousticSource> {
        match self {
            SourceSpec::QuasiPeriodic { beta, width } => {
                AcousticSource::quasi_periodic(TransverseProfile::Gaussian { width: *width }, *beta)
            }
            SourceSpec::Monopole { c_shape, eps_nl, beta } => {
                AcousticSource::monopole(*c_shape, *eps_nl, *beta)
            }
            SourceSpec::Gridded { files, times } => {
                if files.len() != times.len() || files.is_empty() {
                    return Err(ModalError::domain(
                        "scenario source",
                        "gridded source needs equally many files and times (>= 1)",
                    ));
                }
                let mut snapshots = Vec::with_capacity(files.len());
                for (f, t) in files.iter().zip(times) {
                    let field = read_field_csv(&base.join(f))?;
                    snapshots.push((
                        *t,
                        ScalarField { grid: field.grid.clone(), data: field.rho.clone() },
                    ));
                }
                Ok(AcousticSource::Gridded { snapshots })
            }
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CommandSpec {
    pub which: String,
    #[serde(default)]
    pub material: Option<MaterialCommand>,
    #[serde(default)]
    pub dispersion: Option<DispersionCommand>,
    #[serde(default)]
    pub project: Option<ProjectCommand>,
    #[serde(default)]
    pub evolve: Option<EvolveCommand>,
    #[serde(default)]
    pub force: Option<ForceCommand>,
    #[serde(default)]
    pub stream: Option<StreamCommand>,
    #[serde(default)]
    pub figures: Option<FiguresCommand>,
    #[serde(default)]
    pub verify_projectors: Option<ProjectorAuditConfig>,
    #[serde(default)]
    pub verify_limit: Option<LimitAuditConfig>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MaterialCommand {}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DispersionCommand {
    pub kx: Vec<f64>,
    pub ky: Vec<f64>,
    pub kz: Vec<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProjectCommand {
    pub input: String,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EvolveCommand {
    /// linear | entropy | vortical | burgers | kzk | full
    pub equation: String,
    #[serde(default = "rightward")]
    pub direction: String,
    pub dt: f64,
    pub snapshots: Vec<f64>,
    #[serde(default)]
    pub dealias: Option<bool>,
    pub initial: InitialSpec,
}

fn rightward() -> String {
    "rightward".into()
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitialSpec {
    /// Named analytic profile: sine | gaussian_y | gaussian_beam
    pub profile: Option<String>,
    #[serde(default = "one_f")]
    pub amplitude: f64,
    #[serde(default = "one_f")]
    pub harmonic: f64,
    #[serde(default = "one_f")]
    pub width: f64,
    #[serde(default)]
    pub center: f64,
    /// Alternatively a stored field file.
    pub file: Option<String>,
    /// For the full system: lift the scalar profile to the rightward mode.
    #[serde(default)]
    pub lift_mode1: bool,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ForceCommand {
    pub times: Vec<f64>,
    #[serde(default)]
    pub variant: Option<ForceVariant>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StreamCommand {
    /// CSV produced by the force command.
    pub force_file: String,
    pub dt: f64,
    pub snapshots: Vec<f64>,
    #[serde(default)]
    pub include_self_advection: bool,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FiguresCommand {
    pub figures: Vec<u32>,
    #[serde(default)]
    pub constants: Option<FigureConstants>,
}

// ---------------------------------------------------------------------------
// manifest

#[derive(Debug, Clone, Serialize)]
pub struct OutputRecord {
    pub path: String,
    pub sha256: String,
    pub bytes: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct Manifest {
    pub scenario: String,
    pub scenario_sha256: String,
    pub crate_version: String,
    pub seed: u64,
    pub outputs: Vec<OutputRecord>,
    pub summary: serde_json::Value,
}

fn sha_hex(bytes: &[u8]) -> String {
    let mut h = Sha256::new();
    h.update(bytes);
    hex::encode(h.finalize())
}

struct ArtifactSink {
    dir: PathBuf,
    outputs: Vec<OutputRecord>,
}

impl ArtifactSink {
    fn new(dir: &Path) -> Result<Self> {
        std::fs::create_dir_all(dir).map_err(|e| ModalError::Io {
            path: dir.display().to_string(),
            source: e,
        })?;
        Ok(ArtifactSink { dir: dir.to_path_buf(), outputs: Vec::new() })
    }

    fn write(&mut self, name: &str, bytes: &[u8]) -> Result<()> {
        let path = self.dir.join(name);
        std::fs::write(&path, bytes).map_err(|e| ModalError::Io {
            path: path.display().to_string(),
            source: e,
        })?;
        self.outputs.push(OutputRecord {
            path: name.to_string(),
            sha256: sha_hex(bytes),
            bytes: bytes.len(),
        });
        Ok(())
    }

    fn write_field(&mut self, name: &str, f: &FieldState) -> Result<()> {
        let path = self.dir.join(name);
        write_field_csv(&path, f)?;
        for suffix in ["", ".header.json"] {
            let p = self.dir.join(format!("{name}{suffix}"));
            let bytes = std::fs::read(&p).map_err(|e| ModalError::Io {
                path: p.display().to_string(),
                source: e,
            })?;
            self.outputs.push(OutputRecord {
                path: format!("{name}{suffix}"),
                sha256: sha_hex(&bytes),
                bytes: bytes.len(),
            });
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// parameter resolution

/// Resolve the dimensionless parameters from the scenario's material and
/// params blocks. Explicit deltas win over `beta`, which wins over the
/// SI route through the material and `lambda`.
pub fn resolve_params(
    material: Option<&MaterialModel>,
    spec: &ParamsSpec,
) -> Result<DimensionlessParams> {
    let explicit_deltas = match (spec.delta11, spec.delta12, spec.delta21, spec.delta22) {
        (Some(a), Some(b), Some(c), Some(d)) => Some([a, b, c, d]),
        (None, None, None, None) => None,
        _ => {
            return Err(ModalError::domain(
                "params",
                "either all four deltas or none must be given",
            ))
        }
    };
    let (q, s, e1, c, lambda) = if let Some(m) = material {
        let (q, s) = m.nonlinearity_constants()?;
        (q, s, m.e1, m.sound_speed()?, spec.lambda.unwrap_or(1.0))
    } else if let (Some(q), Some(s)) = (spec.q, spec.s) {
        (q, s, 1.0, 1.0, 1.0)
    } else {
        let gamma = spec.gamma.unwrap_or(1.4);
        (-gamma, 0.0, 1.0 / (gamma - 1.0), 1.0, 1.0)
    };

    if let Some(d) = explicit_deltas {
        return Ok(DimensionlessParams::new(spec.mu, spec.eps_amp, d, q, s, c, lambda)?.with_e1(e1));
    }
    if let Some(beta) = spec.beta {
        return Ok(DimensionlessParams::new(
            spec.mu,
            spec.eps_amp,
            [0.35 * beta, 0.35 * beta, 0.5 * beta, -0.2 * beta],
            q,
            s,
            c,
            lambda,
        )?
        .with_e1(e1));
    }
    if let Some(m) = material {
        let lambda = spec.lambda.ok_or_else(|| {
            ModalError::domain("params", "material route requires lambda (longitudinal scale)")
        })?;
        return m.to_dimensionless(lambda, spec.eps_amp, spec.mu);
    }
    Err(ModalError::domain(
        "params",
        "no dissipation given: set beta, the four deltas, or a material with lambda",
    ))
}

// ---------------------------------------------------------------------------
// runner

pub fn load_scenario(path: &Path) -> Result<(Scenario, String)> {
    let text = std::fs::read_to_string(path).map_err(|e| ModalError::Io {
        path: path.display().to_string(),
        source: e,
    })?;
    let sc: Scenario = toml::from_str(&text).map_err(|e| ModalError::Schema {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    Ok((sc, sha_hex(text.as_bytes())))
}

fn csv_force_rows(
    grid: &Grid,
    rows: &[(f64, RadiationForceField)],
    norm: f64,
) -> String {
    let mut out = String::from("x,y,t,f1x_normalized\n");
    for (t, f) in rows {
        for ix in 0..grid.nx {
            for iy in 0..grid.ny {
                out.push_str(&format!(
                    "{:.12e},{:.12e},{:.12e},{:.12e}\n",
                    grid.x(ix),
                    grid.y(iy),
                    t,
                    f.f1x.data[[ix, iy, 0]] * norm
                ));
            }
        }
    }
    out
}

/// Parse a force CSV back into per-time scalar fields (inverse of
/// [`csv_force_rows`], un-normalizing by `1/norm`).
pub fn parse_force_csv(text: &str, grid: &Grid, norm: f64) -> Result<Vec<(f64, RadiationForceField)>> {
    let mut lines = text.lines();
    let header = lines.next().unwrap_or_default();
    if header.trim() != "x,y,t,f1x_normalized" {
        return Err(ModalError::Schema {
            path: "force csv".into(),
            message: format!("unexpected header {header}"),
        });
    }
    let mut rows: Vec<(f64, RadiationForceField)> = Vec::new();
    let mut current_t = f64::NAN;
    let mut idx = 0usize;
    for (n, line) in lines.enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let vals: Vec<f64> = line
            .split(',')
            .map(|v| v.trim().parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| ModalError::Schema {
                path: "force csv".into(),
                message: format!("line {}: {e}", n + 2),
            })?;
        if vals.len() != 4 {
            return Err(ModalError::Schema {
                path: "force csv".into(),
                message: format!("line {}: expected 4 columns", n + 2),
            });
        }
        let t = vals[2];
        if current_t.is_nan() || (t - current_t).abs() > 1e-12 {
            rows.push((
                t,
                RadiationForceField {
                    f1x: ScalarField::zeros(grid),
                    gauge_constant: 0.0,
                    variant: ForceVariant::SimplifiedEq34,
                },
            ));
            current_t = t;
            idx = 0;
        }
        let iy = idx % grid.ny;
        let ix = idx / grid.ny;
        if ix >= grid.nx {
            return Err(ModalError::Schema {
                path: "force csv".into(),
                message: "more rows than grid points per time".into(),
            });
        }
        rows.last_mut().unwrap().1.f1x.data[[ix, iy, 0]] = vals[3] / norm;
        idx += 1;
    }
    Ok(rows)
}

fn build_initial_scalar(grid: &Grid, init: &InitialSpec, base: &Path) -> Result<ScalarField> {
    if let Some(file) = &init.file {
        let f = read_field_csv(&base.join(file))?;
        return Ok(ScalarField { grid: f.grid.clone(), data: f.rho.clone() });
    }
    let profile = init.profile.as_deref().unwrap_or("sine");
    let (a, k, w, c) = (init.amplitude, init.harmonic, init.width, init.center);
    let f = match profile {
        "sine" => ScalarField::from_fn(grid, |_, y, _| {
            a * (k * 2.0 * std::f64::consts::PI * (y - grid.y0) / grid.ly).sin()
        }),
        "gaussian_y" => ScalarField::from_fn(grid, |_, y, _| a * (-((y - c) / w).powi(2)).exp()),
        "gaussian_beam" => ScalarField::from_fn(grid, |x, y, _| {
            a * (-(x / w).powi(2)).exp()
                * (k * 2.0 * std::f64::consts::PI * (y - grid.y0) / grid.ly).cos()
        }),
        other => {
            return Err(ModalError::domain(
                "scenario initial",
                format!("unknown profile {other}; expected sine | gaussian_y | gaussian_beam"),
            ))
        }
    };
    Ok(f)
}

fn scalar_to_state(rho: &ScalarField, t: f64) -> FieldState {
    let mut f = FieldState::from_rho(rho);
    f.time_stamp = t;
    f
}

/// Execute a scenario file; artifacts land in `output_override` or the
/// scenario's `output_dir` (required in one of the two). Returns the manifest,
/// which is also written as `manifest.json`.
pub fn run_scenario(path: &Path, output_override: Option<&Path>) -> Result<Manifest> {
    let (sc, scenario_hash) = load_scenario(path)?;
    let base = path.parent().unwrap_or(Path::new(".")).to_path_buf();
    let out_dir = match (output_override, &sc.output_dir) {
        (Some(p), _) => p.to_path_buf(),
        (None, Some(d)) => base.join(d),
        (None, None) => {
            return Err(ModalError::Schema {
                path: path.display().to_string(),
                message: "no output directory (scenario output_dir or --out)".into(),
            })
        }
    };
    let command = sc.command.as_ref().ok_or_else(|| ModalError::Schema {
        path: path.display().to_string(),
        message: "missing [command] block".into(),
    })?;

    let material = match &sc.material {
        Some(MaterialSpec { file: Some(f), .. }) => Some(MaterialModel::from_file(&base.join(f))?),
        Some(MaterialSpec { ideal_gas: Some(ig), .. }) => Some(MaterialModel::ideal_gas(
            ig.gamma,
            ig.p0,
            ig.rho0,
            ig.shear_viscosity,
            ig.bulk_viscosity,
            ig.thermal_conductivity,
            ig.cv,
        )?),
        Some(_) => {
            return Err(ModalError::Schema {
                path: path.display().to_string(),
                message: "[material] needs either file or ideal_gas".into(),
            })
        }
        None => None,
    };

    let mut sink = ArtifactSink::new(&out_dir)?;
    let mut summary = serde_json::Map::new();

    match command.which.as_str() {
        "material" => {
            let m = material.as_ref().ok_or_else(|| ModalError::Schema {
                path: path.display().to_string(),
                message: "material command requires a [material] block".into(),
            })?;
            let spec = sc.params.clone().unwrap_or_default();
            let c = m.sound_speed()?;
            let (q, s) = m.nonlinearity_constants()?;
            let mut body = serde_json::json!({
                "sound_speed": c,
                "q_const": q,
                "s_const": s,
                "eps_nl": (-q - s + 1.0) / 2.0,
            });
            if spec.lambda.is_some() {
                let p = resolve_params(material.as_ref(), &spec)?;
                body["dimensionless"] = serde_json::to_value(&p).unwrap();
            }
            sink.write("material.json", serde_json::to_string_pretty(&body).unwrap().as_bytes())?;
            summary.insert("material".into(), body);
        }
        "dispersion" => {
            let cmd = command.dispersion.as_ref().ok_or_else(|| missing_block(path, "dispersion"))?;
            let params = resolve_params(material.as_ref(), &sc.params.clone().unwrap_or_default())?;
            let mut rows = Vec::new();
            for &kx in &cmd.kx {
                for &ky in &cmd.ky {
                    for &kz in &cmd.kz {
                        let k = crate::modes::Wavevector::new(kx, ky, kz);
                        let r = crate::modes::dispersion_roots(k, &params)?;
                        rows.push(serde_json::json!({
                            "k": [kx, ky, kz],
                            "omega": r.omega.iter().map(|c| vec![c.re, c.im]).collect::<Vec<_>>(),
                        }));
                    }
                }
            }
            let body = serde_json::json!({ "roots": rows });
            sink.write("dispersion.json", serde_json::to_string_pretty(&body).unwrap().as_bytes())?;
            summary.insert("n_roots".into(), serde_json::json!(rows.len()));
        }
        "project" => {
            let cmd = command.project.as_ref().ok_or_else(|| missing_block(path, "project"))?;
            let params = resolve_params(material.as_ref(), &sc.params.clone().unwrap_or_default())?;
            let f = read_field_csv(&base.join(&cmd.input))?;
            let d = decompose(&f, &params)?;
            let names = ["acoustic_right", "acoustic_left", "entropy", "vortical_xy", "vortical_zy"];
            for (i, name) in names.iter().enumerate() {
                sink.write_field(&format!("mode_{i1}_{name}.csv", i1 = i + 1), &d.parts[i])?;
            }
            sink.write_field("axial_residual.csv", &d.axial_residual)?;
            let gauge = serde_json::to_value(&d.gauge).unwrap();
            sink.write("gauge.json", serde_json::to_string_pretty(&gauge).unwrap().as_bytes())?;
            summary.insert("gauge".into(), gauge);
        }
        "evolve" => {
            let cmd = command.evolve.as_ref().ok_or_else(|| missing_block(path, "evolve"))?;
            let params = resolve_params(material.as_ref(), &sc.params.clone().unwrap_or_default())?;
            let grid = sc
                .grid
                .as_ref()
                .ok_or_else(|| missing_block(path, "grid"))?
                .build()?;
            let t_end = cmd.snapshots.last().copied().unwrap_or(0.0);
            let mut cfg = EvolutionConfig::new(cmd.dt, t_end)?;
            if let Some(d) = cmd.dealias {
                cfg.dealias = d;
            }
            let direction = match cmd.direction.as_str() {
                "rightward" => Direction::Rightward,
                "leftward" => Direction::Leftward,
                other => {
                    return Err(ModalError::Schema {
                        path: path.display().to_string(),
                        message: format!("unknown direction {other}"),
                    })
                }
            };
            let rho0 = build_initial_scalar(&grid, &cmd.initial, &base)?;
            let states: Vec<FieldState> = match cmd.equation.as_str() {
                "linear" => cmd
                    .snapshots
                    .iter()
                    .map(|&t| {
                        Ok(scalar_to_state(
                            &evolve_linear_acoustic(&rho0, &params, &cfg, direction, t)?,
                            t,
                        ))
                    })
                    .collect::<Result<_>>()?,
                "entropy" | "vortical" => {
                    let which = if cmd.equation == "entropy" {
                        crate::evolution::DiffusiveMode::Entropy
                    } else {
                        crate::evolution::DiffusiveMode::Vortical
                    };
                    cmd.snapshots
                        .iter()
                        .map(|&t| {
                            Ok(scalar_to_state(
                                &evolve_diffusive_mode(&rho0, &params, &cfg, which, t)?,
                                t,
                            ))
                        })
                        .collect::<Result<_>>()?
                }
                "burgers" => evolve_burgers_path(&rho0, &params, &cfg, &cmd.snapshots)?
                    .into_iter()
                    .zip(&cmd.snapshots)
                    .map(|(f, &t)| scalar_to_state(&f, t))
                    .collect(),
                "kzk" => evolve_kzk_path(&rho0, &params, &cfg, direction, &cmd.snapshots)?
                    .into_iter()
                    .zip(&cmd.snapshots)
                    .map(|(f, &t)| scalar_to_state(&f, t))
                    .collect(),
                "full" => {
                    let psi0 = if cmd.initial.lift_mode1 {
                        lift_acoustic_mode(&rho0, &params)?.0
                    } else {
                        FieldState::from_rho(&rho0)
                    };
                    integrate_full_system_path(&psi0, &params, &cfg, &cmd.snapshots)?
                }
                other => {
                    return Err(ModalError::Schema {
                        path: path.display().to_string(),
                        message: format!(
                            "unknown equation {other}; expected linear | entropy | vortical | burgers | kzk | full"
                        ),
                    })
                }
            };
            for (i, f) in states.iter().enumerate() {
                sink.write_field(&format!("state_{i:03}.csv"), f)?;
            }
            summary.insert("snapshots".into(), serde_json::json!(cmd.snapshots));
        }
        "force" => {
            let cmd = command.force.as_ref().ok_or_else(|| missing_block(path, "force"))?;
            let params = resolve_params(material.as_ref(), &sc.params.clone().unwrap_or_default())?;
            let grid = sc
                .grid
                .as_ref()
                .map(|g| g.build())
                .unwrap_or_else(|| Ok(default_force_grid()))?;
            let source = sc
                .source
                .as_ref()
                .ok_or_else(|| missing_block(path, "source"))?
                .build(&base)?;
            let variant = cmd.variant.unwrap_or(ForceVariant::SimplifiedEq34);
            let norm = 1.0 / (params.mu.sqrt() * params.beta_total);
            let mut rows = Vec::new();
            let mut gauge_constants = Vec::new();
            for &t in &cmd.times {
                let rho = source.density_grid(&grid, t)?;
                let f = radiation_force(&rho, &params, variant)?;
                gauge_constants.push(f.gauge_constant);
                rows.push((t, f));
            }
            sink.write("force.csv", csv_force_rows(&grid, &rows, norm).as_bytes())?;
            summary.insert(
                "force".into(),
                serde_json::json!({
                    "times": cmd.times,
                    "normalization": norm,
                    "gauge_constants": gauge_constants,
                }),
            );
        }
        "stream" => {
            let cmd = command.stream.as_ref().ok_or_else(|| missing_block(path, "stream"))?;
            let params = resolve_params(material.as_ref(), &sc.params.clone().unwrap_or_default())?;
            let grid = sc
                .grid
                .as_ref()
                .map(|g| g.build())
                .unwrap_or_else(|| Ok(default_force_grid()))?;
            let norm = 1.0 / (params.mu.sqrt() * params.beta_total);
            let text = std::fs::read_to_string(base.join(&cmd.force_file)).map_err(|e| {
                ModalError::Io { path: cmd.force_file.clone(), source: e }
            })?;
            let forces = parse_force_csv(&text, &grid, norm)?;
            let t_end = cmd.snapshots.last().copied().unwrap_or(0.0);
            let cfg = EvolutionConfig::new(cmd.dt, t_end)?;
            let states =
                solve_streaming(&forces, &params, &cfg, &cmd.snapshots, cmd.include_self_advection)?;
            let mut out = String::from("x,y,t,vx,vy\n");
            for st in &states {
                for ix in 0..grid.nx {
                    for iy in 0..grid.ny {
                        out.push_str(&format!(
                            "{:.12e},{:.12e},{:.12e},{:.12e},{:.12e}\n",
                            grid.x(ix),
                            grid.y(iy),
                            st.time_stamp,
                            st.vx.data[[ix, iy, 0]],
                            st.vy.data[[ix, iy, 0]],
                        ));
                    }
                }
            }
            sink.write("streaming.csv", out.as_bytes())?;
            summary.insert("stream_snapshots".into(), serde_json::json!(cmd.snapshots));
        }
        "figures" => {
            let cmd = command.figures.as_ref().ok_or_else(|| missing_block(path, "figures"))?;
            let constants = cmd.constants.clone().unwrap_or_default();
            let grid = sc
                .grid
                .as_ref()
                .map(|g| g.build())
                .unwrap_or_else(|| Ok(default_force_grid()))?;
            for &fig in &cmd.figures {
                let rows = emit_figure_data(fig, &constants, &grid)?;
                let abscissa = if fig <= 2 { "y" } else { "t" };
                let mut out = format!("{abscissa},f1x_normalized,rho1\n");
                for r in rows {
                    out.push_str(&format!(
                        "{:.12e},{:.12e},{:.12e}\n",
                        r.abscissa, r.force_normalized, r.source_density
                    ));
                }
                sink.write(&format!("figure_{fig}.csv"), out.as_bytes())?;
            }
            summary.insert("figures".into(), serde_json::json!(cmd.figures));
        }
        "verify-projectors" => {
            let cfg = command
                .verify_projectors
                .clone()
                .unwrap_or_else(|| ProjectorAuditConfig { seed: sc.seed, ..Default::default() });
            let report = projector_audit(&cfg)?;
            let body = serde_json::to_value(&report).unwrap();
            sink.write("projector_audit.json", serde_json::to_string_pretty(&body).unwrap().as_bytes())?;
            summary.insert("projector_audit".into(), body);
        }
        "verify-limit" => {
            let cfg = command.verify_limit.clone().unwrap_or_default();
            let report = limit_audit(&cfg)?;
            let body = serde_json::to_value(&report).unwrap();
            sink.write("limit_audit.json", serde_json::to_string_pretty(&body).unwrap().as_bytes())?;
            summary.insert("limit_audit".into(), body);
        }
        other => {
            return Err(ModalError::Schema {
                path: path.display().to_string(),
                message: format!("unknown command {other}"),
            })
        }
    }

    let manifest = Manifest {
        scenario: path.display().to_string(),
        scenario_sha256: scenario_hash,
        crate_version: env!("CARGO_PKG_VERSION").to_string(),
        seed: sc.seed,
        outputs: sink.outputs.clone(),
        summary: serde_json::Value::Object(summary),
    };
    let manifest_bytes = serde_json::to_string_pretty(&manifest).unwrap();
    let mpath = out_dir.join("manifest.json");
    let mut file = std::fs::File::create(&mpath).map_err(|e| ModalError::Io {
        path: mpath.display().to_string(),
        source: e,
    })?;
    file.write_all(manifest_bytes.as_bytes()).map_err(|e| ModalError::Io {
        path: mpath.display().to_string(),
        source: e,
    })?;
    Ok(manifest)
}

fn missing_block(path: &Path, which: &str) -> ModalError {
    ModalError::Schema {
        path: path.display().to_string(),
        message: format!("command {which} requires its [command.{which}] / supporting block"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_scenario_is_a_schema_error() {
        let dir = std::env::temp_dir().join("modalflow_cli_empty");
        std::fs::create_dir_all(&dir).unwrap();
        let p = dir.join("empty.scn");
        std::fs::write(&p, "").unwrap();
        match run_scenario(&p, Some(&dir.join("out"))) {
            Err(ModalError::Schema { message, .. }) => {
                assert!(message.contains("command"), "unexpected message {message}")
            }
            other => panic!("expected schema error, got {other:?}"),
        }
    }

    #[test]
    fn unknown_keys_are_schema_errors_with_location() {
        let dir = std::env::temp_dir().join("modalflow_cli_badkey");
        std::fs::create_dir_all(&dir).unwrap();
        let p = dir.join("bad.scn");
        std::fs::write(&p, "[grid]\nnx = 4\nny = 4\nlx = 1.0\nly = 1.0\nbogus = 3\n").unwrap();
        match run_scenario(&p, Some(&dir.join("out"))) {
            Err(ModalError::Schema { message, .. }) => {
                assert!(message.contains("bogus"), "message should name the field: {message}")
            }
            other => panic!("expected schema error, got {other:?}"),
        }
    }

    #[test]
    fn params_resolution_priorities() {
        // explicit deltas win and beta_total is recomputed from them
        let spec = ParamsSpec {
            mu: 1e-2,
            delta11: Some(0.01),
            delta12: Some(0.02),
            delta21: Some(0.005),
            delta22: Some(-0.002),
            beta: Some(99.0),
            ..Default::default()
        };
        let p = resolve_params(None, &spec).unwrap();
        assert!((p.beta_total - 0.033).abs() < 1e-15);
        // partial deltas are rejected
        let spec2 = ParamsSpec { delta11: Some(0.01), ..Default::default() };
        assert!(resolve_params(None, &spec2).is_err());
        // gamma default gives the air-flavored Q
        let spec3 = ParamsSpec { beta: Some(0.1), ..Default::default() };
        let p3 = resolve_params(None, &spec3).unwrap();
        assert!((p3.q_const + 1.4).abs() < 1e-12);
        assert!((p3.eps_nl - 1.2).abs() < 1e-12);
    }
}
