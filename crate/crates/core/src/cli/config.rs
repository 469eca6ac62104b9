//! TOML run configuration.
//!
//! Every table rejects unknown keys, so a typo is an error rather than a
//! silently ignored setting.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{config_err, Error, Result};
use crate::flow::FlowConfig;
use crate::geometry::LatticeGeometry;
use crate::instantons::{InstantonSpec, TwistSpec};
use crate::observables::{GapConstants, MorreySampling, PhiSampling};

pub const CONFIG_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub version: u32,
    #[serde(default)]
    pub seed: u64,
    pub geometry: GeometryConfig,
    pub initial: InitialConfig,
    #[serde(default)]
    pub flow: FlowConfig,
    #[serde(default)]
    pub measurement: MeasurementConfig,
    #[serde(default)]
    pub output: OutputConfig,
    #[serde(default)]
    pub scenario: ScenarioParams,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum GeometryConfig {
    RoundS4Chart {
        n: usize,
        box_halfwidth: f64,
        #[serde(default = "one")]
        sphere_radius: f64,
        #[serde(default)]
        grid_offset: [f64; 4],
    },
    FlatTorus {
        n: usize,
        spacing: f64,
    },
}

fn one() -> f64 {
    1.0
}

fn two() -> usize {
    2
}

impl GeometryConfig {
    pub fn build(&self) -> Result<Arc<LatticeGeometry>> {
        let g = match *self {
            GeometryConfig::RoundS4Chart { n, box_halfwidth, sphere_radius, grid_offset } => {
                LatticeGeometry::round_s4_chart_offset(n, box_halfwidth, sphere_radius, grid_offset)
            }
            GeometryConfig::FlatTorus { n, spacing } => LatticeGeometry::flat_torus(n, spacing),
        };
        g.map(Arc::new).map_err(|e| config_err(format!("geometry: {e}")))
    }
}

/// Smoothed Gaussian noise scaled to a target clover-energy increment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NoiseSpec {
    /// Target increase of the Yang-Mills energy.
    pub amplitude: f64,
    #[serde(default = "d_sweeps")]
    pub sweeps: usize,
}

fn d_sweeps() -> usize {
    4
}

/// Initial data: exactly one of `identity`, `instanton`, `random`,
/// `snapshot`, optionally followed by a perturbation and a twist.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitialConfig {
    #[serde(default = "two")]
    pub rank: usize,
    #[serde(default)]
    pub identity: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub instanton: Option<InstantonSpec>,
    /// Noise on the identity field.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub random: Option<NoiseSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub snapshot: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub perturbation: Option<NoiseSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub twist: Option<TwistSpec>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InitialSource {
    Identity,
    Instanton,
    Random,
    Snapshot,
}

impl InitialConfig {
    pub fn source(&self) -> Result<InitialSource> {
        let given: Vec<InitialSource> = [
            (self.identity, InitialSource::Identity),
            (self.instanton.is_some(), InitialSource::Instanton),
            (self.random.is_some(), InitialSource::Random),
            (self.snapshot.is_some(), InitialSource::Snapshot),
        ]
        .into_iter()
        .filter_map(|(on, s)| on.then_some(s))
        .collect();
        match given.as_slice() {
            [s] => Ok(*s),
            [] => Err(config_err("initial: no data source; give one of identity, instanton, random, snapshot")),
            _ => Err(config_err(format!("initial: exactly one data source allowed, got {given:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeasurementConfig {
    #[serde(default)]
    pub morrey: MorreySampling,
    #[serde(default)]
    pub phi: PhiSampling,
    #[serde(default)]
    pub gap: GapConstants,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    #[serde(default = "d_dir")]
    pub directory: PathBuf,
    /// Write the `Phi` side file next to each trajectory.
    #[serde(default = "yes")]
    pub phi_json: bool,
    /// Write a checkpoint of the final flow state.
    #[serde(default)]
    pub checkpoint: bool,
}

fn d_dir() -> PathBuf {
    PathBuf::from("out")
}

fn yes() -> bool {
    true
}

impl Default for OutputConfig {
    fn default() -> Self {
        OutputConfig { directory: d_dir(), phi_json: true, checkpoint: false }
    }
}

/// Thresholds and knobs of the scenario checks. Each scenario reads only
/// the fields it needs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ScenarioParams {
    /// Minimal fitted decay rate of `||F^+||`.
    pub rate_min: f64,
    pub kappa_tol: f64,
    /// `||F^+||^2` must be nonincreasing from this time on.
    pub monotone_from: f64,
    pub monotone_slack: f64,
    /// Flat torus: final `YM` below this fraction of the initial one.
    pub energy_ratio: f64,
    /// Flat torus: final `sup |F|` below this over `a^2`.
    pub sup_f_lattice: f64,
    /// Twisted torus: energy floor. When absent the untwisted run with the
    /// same data is flowed and `floor_factor` times its final energy is used.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub energy_floor: Option<f64>,
    pub floor_factor: f64,
    /// Twisted torus: final Morrey norm above this fraction of the initial.
    pub morrey_floor_ratio: f64,
    /// Twisted torus: required `grad_sq(0) / grad_sq(end)`.
    pub grad_drop: f64,
    /// Retraction path: number of samples including both endpoints.
    pub samples: usize,
    /// Retraction path: bound on `||F^+||^2 / YM` after the flow.
    pub instanton_tol: f64,
    /// Retraction path: second endpoint (first is `initial.instanton`).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub endpoint: Option<InstantonSpec>,
    /// Retraction path: flow samples concurrently.
    pub parallel_samples: bool,
}

impl Default for ScenarioParams {
    fn default() -> Self {
        ScenarioParams {
            rate_min: 1.0,
            kappa_tol: 0.05,
            monotone_from: 0.1,
            monotone_slack: 1e-10,
            energy_ratio: 1e-6,
            sup_f_lattice: 1e-4,
            energy_floor: None,
            floor_factor: 100.0,
            morrey_floor_ratio: 0.1,
            grad_drop: 1e4,
            samples: 9,
            instanton_tol: 0.02,
            endpoint: None,
            parallel_samples: false,
        }
    }
}

impl RunConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let cfg: RunConfig = toml::from_str(text).map_err(|e| config_err(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Reads a config file; relative snapshot paths resolve against the
    /// file's directory.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io { path: path.to_path_buf(), source })?;
        let mut cfg = Self::from_toml_str(&text).map_err(|e| config_err(format!("{}: {e}", path.display())))?;
        if let Some(s) = cfg.initial.snapshot.as_mut() {
            if s.is_relative() {
                if let Some(dir) = path.parent() {
                    *s = dir.join(&*s);
                }
            }
        }
        cfg.check_files()?;
        Ok(cfg)
    }

    pub fn to_toml_string(&self) -> Result<String> {
        toml::to_string_pretty(self).map_err(|e| config_err(e.to_string()))
    }

    /// Structural checks that do not touch the file system.
    pub fn validate(&self) -> Result<()> {
        if self.version != CONFIG_VERSION {
            return Err(config_err(format!("version: expected {CONFIG_VERSION}, got {}", self.version)));
        }
        let geom = self.geometry.build()?;
        let src = self.initial.source()?;
        if !(2..=3).contains(&self.initial.rank) {
            return Err(config_err(format!("initial.rank: only 2 and 3 are supported, got {}", self.initial.rank)));
        }
        if src == InitialSource::Instanton && self.initial.rank != 2 {
            return Err(config_err("initial.instanton: instanton data are SU(2); set initial.rank = 2"));
        }
        if let Some(spec) = &self.initial.instanton {
            spec.evaluator().map_err(|e| config_err(format!("initial.instanton: {e}")))?;
        }
        for (name, n) in [("random", &self.initial.random), ("perturbation", &self.initial.perturbation)] {
            if let Some(n) = n {
                if !(n.amplitude >= 0.0 && n.amplitude.is_finite()) {
                    return Err(config_err(format!("initial.{name}.amplitude must be finite and >= 0")));
                }
            }
        }
        if let Some(t) = &self.initial.twist {
            if t.rank() != self.initial.rank {
                return Err(config_err(format!("initial.twist: rank {} does not match initial.rank {}", t.rank(), self.initial.rank)));
            }
            if !t.is_trivial() && !matches!(self.geometry, GeometryConfig::FlatTorus { .. }) {
                return Err(config_err("initial.twist: twists need geometry.kind = \"flat_torus\""));
            }
        }
        self.flow.validate().map_err(|e| config_err(format!("flow: {e}")))?;
        self.measurement.morrey.validate()?;
        self.measurement.phi.validate(&geom)?;
        let p = &self.scenario;
        if p.samples < 2 {
            return Err(config_err("scenario.samples must be at least 2"));
        }
        if let Some(e) = &p.endpoint {
            e.evaluator().map_err(|e| config_err(format!("scenario.endpoint: {e}")))?;
        }
        Ok(())
    }

    /// The referenced snapshot must exist.
    pub fn check_files(&self) -> Result<()> {
        if let Some(s) = &self.initial.snapshot {
            if !s.is_file() {
                return Err(config_err(format!("initial.snapshot: {} does not exist", s.display())));
            }
        }
        Ok(())
    }
}
