//! Batch front-end: `make-instanton`, `flow`, `measure`, `scenario <name>`.
//!
//! Exit codes: 0 when every check passes, 1 when a check fails or the
//! initial data fall outside a scenario's hypothesis, 2 on errors.

pub mod config;
pub mod report;
pub mod run;
pub mod scenario;

use std::path::PathBuf;

use clap::{Parser, Subcommand};

pub use config::{GeometryConfig, InitialConfig, MeasurementConfig, NoiseSpec, OutputConfig, RunConfig, ScenarioParams};
pub use report::{Check, Outcome, ScenarioReport};
pub use run::{build_initial, flow_recorded, make_snapshot, measure_snapshot, run_flow, RecordedFlow};
pub use scenario::{interpolate_links, run_scenario, ScenarioName, ALL_SCENARIOS};

use crate::error::{config_err, Result};

#[derive(Debug, Parser)]
#[command(name = "ymflow", version, about = "Yang-Mills gradient flow on lattice S^4 charts and 4-tori")]
pub struct Cli {
    /// TOML run configuration.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output directory (overrides `output.directory`).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Random seed (overrides `seed`).
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Worker threads for the data-parallel kernels.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write the configured initial data as a snapshot.
    MakeInstanton,
    /// Flow the configured initial data and record the trajectory.
    Flow,
    /// Measure every observable on a stored field.
    Measure {
        #[arg(long)]
        snapshot: PathBuf,
    },
    /// Run a reference scenario (its shipped config unless --config is given).
    Scenario {
        /// gap_s4 | flat_gap_torus | twisted_torus_gap | retraction_path
        name: String,
    },
}

impl Cli {
    fn load(&self, fallback: Option<ScenarioName>) -> Result<RunConfig> {
        let mut cfg = match (&self.config, fallback) {
            (Some(p), _) => RunConfig::load(p)?,
            (None, Some(n)) => n.reference_config(),
            (None, None) => return Err(config_err("--config is required for this command")),
        };
        if let Some(d) = &self.out {
            cfg.output.directory = d.clone();
        }
        if let Some(s) = self.seed {
            cfg.seed = s;
        }
        Ok(cfg)
    }
}

fn write_summary(rep: &ScenarioReport, cfg: &RunConfig) -> Result<()> {
    run::ensure_dir(&cfg.output.directory)?;
    rep.write_json(&cfg.output.directory.join("summary.json"))?;
    print!("{rep}");
    Ok(())
}

/// Executes a parsed command line and returns the process exit code.
pub fn execute(cli: &Cli) -> Result<i32> {
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(config_err("--threads must be at least 1"));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| config_err(format!("--threads: {e}")))?;
    }
    match &cli.command {
        Command::MakeInstanton => {
            let cfg = cli.load(None)?;
            let path = make_snapshot(&cfg)?;
            println!("{}", path.display());
            Ok(0)
        }
        Command::Flow => {
            let cfg = cli.load(None)?;
            let rep = run_flow(&cfg)?;
            write_summary(&rep, &cfg)?;
            Ok(if rep.passed() { 0 } else { 1 })
        }
        Command::Measure { snapshot } => {
            let cfg = match &cli.config {
                Some(p) => Some(RunConfig::load(p)?),
                None => None,
            };
            let rec = measure_snapshot(cfg.as_ref(), snapshot)?;
            let text = serde_json::to_string_pretty(&rec)?;
            if let Some(dir) = cli.out.clone().or(cfg.map(|c| c.output.directory)) {
                run::ensure_dir(&dir)?;
                let path = dir.join("measurement.json");
                std::fs::write(&path, format!("{text}\n")).map_err(|source| crate::Error::Io { path, source })?;
            }
            println!("{text}");
            Ok(0)
        }
        Command::Scenario { name } => {
            let name: ScenarioName = name.parse()?;
            let cfg = cli.load(Some(name))?;
            let rep = run_scenario(name, &cfg)?;
            write_summary(&rep, &cfg)?;
            Ok(if rep.passed() { 0 } else { 1 })
        }
    }
}
