//! Batch front end. Every subcommand runs a scenario file; the simple
//! informational ones also accept direct flags. The library's runnable
//! examples are the richer way in (`cargo run --example ...`).

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use modalflow::cli::{
    emit_figure_data, limit_audit, projector_audit, run_scenario, FigureConstants,
    LimitAuditConfig, ProjectorAuditConfig,
};
use modalflow::material::MaterialModel;

#[derive(Parser)]
#[command(name = "modalflow", version, about = "Five-mode thermoviscous flow decomposition, radiation force and streaming")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct ScenarioArgs {
    /// Scenario file (TOML).
    #[arg(long)]
    scenario: PathBuf,
    /// Output directory (overrides the scenario's output_dir).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Inspect a material file: sound speed, Q, S and dimensionless numbers.
    Material {
        /// Material definition file; alternatively use --scenario.
        #[arg(long)]
        file: Option<PathBuf>,
        #[arg(long)]
        lambda: Option<f64>,
        #[arg(long, default_value_t = 0.0)]
        mu: f64,
        #[arg(long, default_value_t = 0.0)]
        eps: f64,
        #[arg(long)]
        scenario: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Dispersion roots at given wavevectors (scenario-driven).
    Dispersion(ScenarioArgs),
    /// Decompose a stored field into the five modal parts.
    Project(ScenarioArgs),
    /// Run an evolution equation (linear | entropy | vortical | burgers | kzk | full).
    Evolve(ScenarioArgs),
    /// Radiation force of a source, as CSV of (x, y, t, F1x / (sqrt(mu) beta)).
    Force(ScenarioArgs),
    /// Streaming velocity driven by a stored force series.
    Stream(ScenarioArgs),
    /// Reference figure data for the mono-polar scenario.
    Figures {
        /// Figure indices 1..=4; defaults to all four.
        #[arg(long, value_delimiter = ',')]
        figs: Option<Vec<u32>>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        scenario: Option<PathBuf>,
    },
    /// Projector algebra audit (residual norms and scaling ratios) as JSON.
    #[command(name = "verify-projectors")]
    VerifyProjectors {
        #[arg(long)]
        scenario: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long, default_value_t = 1e-2)]
        mu: f64,
        #[arg(long, default_value_t = 1e-2)]
        beta: f64,
        #[arg(long, default_value_t = 2024)]
        seed: u64,
    },
    /// Quasi-periodic limit audit (averaged force, ripple, variants) as JSON.
    #[command(name = "verify-limit")]
    VerifyLimit {
        #[arg(long)]
        scenario: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn run() -> modalflow::Result<()> {
    let cli = Cli::parse();
    match cli.command {
        Command::Material { file, lambda, mu, eps, scenario, out } => {
            if let Some(sc) = scenario {
                run_scenario(&sc, out.as_deref())?;
                return Ok(());
            }
            let file = file.ok_or_else(|| {
                modalflow::ModalError::domain("material", "either --file or --scenario is required")
            })?;
            let m = MaterialModel::from_file(&file)?;
            let c = m.sound_speed()?;
            let (q, s) = m.nonlinearity_constants()?;
            let mut body = serde_json::json!({
                "sound_speed": c,
                "q_const": q,
                "s_const": s,
                "eps_nl": (-q - s + 1.0) / 2.0,
            });
            if let Some(lambda) = lambda {
                let p = m.to_dimensionless(lambda, eps, mu)?;
                body["dimensionless"] = serde_json::to_value(&p).unwrap();
            }
            println!("{}", serde_json::to_string_pretty(&body).unwrap());
            Ok(())
        }
        Command::Dispersion(a) => run_scenario(&a.scenario, a.out.as_deref()).map(summarize),
        Command::Project(a) => run_scenario(&a.scenario, a.out.as_deref()).map(summarize),
        Command::Evolve(a) => run_scenario(&a.scenario, a.out.as_deref()).map(summarize),
        Command::Force(a) => run_scenario(&a.scenario, a.out.as_deref()).map(summarize),
        Command::Stream(a) => run_scenario(&a.scenario, a.out.as_deref()).map(summarize),
        Command::Figures { figs, out, scenario } => {
            if let Some(sc) = scenario {
                run_scenario(&sc, out.as_deref()).map(summarize)?;
                return Ok(());
            }
            let constants = FigureConstants::default();
            let grid = modalflow::cli::default_force_grid();
            let figs = figs.unwrap_or_else(|| vec![1, 2, 3, 4]);
            let dir = out.unwrap_or_else(|| PathBuf::from("."));
            std::fs::create_dir_all(&dir).ok();
            for fig in figs {
                let rows = emit_figure_data(fig, &constants, &grid)?;
                let abscissa = if fig <= 2 { "y" } else { "t" };
                let mut text = format!("{abscissa},f1x_normalized,rho1\n");
                for r in rows {
                    text.push_str(&format!(
                        "{:.12e},{:.12e},{:.12e}\n",
                        r.abscissa, r.force_normalized, r.source_density
                    ));
                }
                let path = dir.join(format!("figure_{fig}.csv"));
                std::fs::write(&path, text).map_err(|e| modalflow::ModalError::Io {
                    path: path.display().to_string(),
                    source: e,
                })?;
                println!("wrote {}", path.display());
            }
            Ok(())
        }
        Command::VerifyProjectors { scenario, out, samples, mu, beta, seed } => {
            if let Some(sc) = scenario {
                run_scenario(&sc, out.as_deref()).map(summarize)?;
                return Ok(());
            }
            let cfg = ProjectorAuditConfig { n_samples: samples, mu, beta, seed, ..Default::default() };
            let report = projector_audit(&cfg)?;
            let text = serde_json::to_string_pretty(&report).unwrap();
            if let Some(dir) = out {
                std::fs::create_dir_all(&dir).ok();
                let path = dir.join("projector_audit.json");
                std::fs::write(&path, &text).map_err(|e| modalflow::ModalError::Io {
                    path: path.display().to_string(),
                    source: e,
                })?;
                println!("wrote {}", path.display());
            } else {
                println!("{text}");
            }
            Ok(())
        }
        Command::VerifyLimit { scenario, out } => {
            if let Some(sc) = scenario {
                run_scenario(&sc, out.as_deref()).map(summarize)?;
                return Ok(());
            }
            let report = limit_audit(&LimitAuditConfig::default())?;
            let text = serde_json::to_string_pretty(&report).unwrap();
            if let Some(dir) = out {
                std::fs::create_dir_all(&dir).ok();
                let path = dir.join("limit_audit.json");
                std::fs::write(&path, &text).map_err(|e| modalflow::ModalError::Io {
                    path: path.display().to_string(),
                    source: e,
                })?;
                println!("wrote {}", path.display());
            } else {
                println!("{text}");
            }
            Ok(())
        }
    }
}

fn summarize(m: modalflow::cli::Manifest) {
    println!("scenario {} -> {} artifacts", m.scenario, m.outputs.len());
    for o in &m.outputs {
        println!("  {} ({} bytes, sha256 {})", o.path, o.bytes, &o.sha256[..12]);
    }
}

fn main() -> ExitCode {
    env_logger::init();
    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
