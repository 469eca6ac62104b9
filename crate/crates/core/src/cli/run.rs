//! Geometry -> initial data -> flow -> measurements, with file output.

use std::fs::File;
use std::io::BufWriter;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use log::info;

use super::config::{InitialSource, RunConfig};
use super::report::{Check, ScenarioReport};
use crate::error::{Error, Result};
use crate::flow::{Flow, FlowOutcome, FlowStatus};
use crate::gauge::snapshot::{load_field, peek_header, save_snapshot, write_checkpoint, CheckpointHeader};
use crate::gauge::{GaugeField, GaugeMatrix, Su2, SuN};
use crate::geometry::LatticeGeometry;
use crate::instantons::{apply_twist, discretize, random_perturbation};
use crate::observables::{phi_series, CsvSink, Measurer, ObservableRecord};

/// Link types the front-end can run. Only SU(2) has instanton data.
pub trait CliGroup: GaugeMatrix {
    fn instanton_field(cfg: &RunConfig, geom: &Arc<LatticeGeometry>) -> Result<GaugeField<Self>>;
}

impl CliGroup for Su2 {
    fn instanton_field(cfg: &RunConfig, geom: &Arc<LatticeGeometry>) -> Result<GaugeField<Su2>> {
        let spec = cfg.initial.instanton.as_ref().expect("source checked");
        discretize(&spec.evaluator()?, geom.clone())
    }
}

impl CliGroup for SuN<3> {
    fn instanton_field(_: &RunConfig, _: &Arc<LatticeGeometry>) -> Result<GaugeField<Self>> {
        Err(Error::Unsupported("instanton data are only available for SU(2)".into()))
    }
}

// perturbations must not reuse the random-source stream
const PERTURBATION_SEED_SALT: u64 = 0x5eed_0f_9e37_79b9;

pub fn build_initial<G: CliGroup>(cfg: &RunConfig, geom: &Arc<LatticeGeometry>) -> Result<GaugeField<G>> {
    let init = &cfg.initial;
    let mut u = match init.source()? {
        InitialSource::Identity => GaugeField::identity(geom.clone()),
        InitialSource::Instanton => G::instanton_field(cfg, geom)?,
        InitialSource::Random => {
            let n = init.random.as_ref().expect("source checked");
            random_perturbation(&GaugeField::identity(geom.clone()), n.amplitude, n.sweeps, cfg.seed)?.field
        }
        InitialSource::Snapshot => {
            let path = init.snapshot.as_ref().expect("source checked");
            let v: GaugeField<G> = load_field(path)?;
            if !v.geometry().same_lattice(geom) {
                return Err(Error::GeometryMismatch(format!(
                    "snapshot {} was taken on a different lattice than the configured geometry",
                    path.display()
                )));
            }
            // reuse the configured geometry so every consumer shares one Arc
            let twist = v.twist().cloned();
            let w = GaugeField::from_links(geom.clone(), v.links().to_vec())?;
            match twist {
                Some(t) => apply_twist(&w, &t)?,
                None => w,
            }
        }
    };
    if let Some(p) = &init.perturbation {
        let pert = random_perturbation(&u, p.amplitude, p.sweeps, cfg.seed ^ PERTURBATION_SEED_SALT)?;
        info!("perturbation scale {:.6e}, energy increment {:.6e}", pert.scale, pert.increment);
        u = pert.field;
    }
    if let Some(t) = &init.twist {
        u = apply_twist(&u, t)?;
    }
    Ok(u)
}

pub fn measurer(cfg: &RunConfig, geom: &LatticeGeometry) -> Result<Measurer> {
    Measurer::new(geom, cfg.measurement.morrey.clone(), cfg.measurement.phi.clone())
}

pub fn ensure_dir(dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|source| Error::Io { path: dir.to_path_buf(), source })
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    File::create(path).map(BufWriter::new).map_err(|source| Error::Io { path: path.to_path_buf(), source })
}

/// A flow whose trajectory has been written to disk.
#[derive(Debug)]
pub struct RecordedFlow<G: GaugeMatrix> {
    pub outcome: FlowOutcome<G>,
    pub csv: PathBuf,
    pub phi: Option<PathBuf>,
    pub checkpoint: Option<PathBuf>,
}

impl<G: GaugeMatrix> RecordedFlow<G> {
    pub fn files(&self) -> Vec<PathBuf> {
        std::iter::once(self.csv.clone()).chain(self.phi.clone()).chain(self.checkpoint.clone()).collect()
    }

    pub fn first(&self) -> &ObservableRecord {
        self.outcome.trajectory.first().expect("flows record t = 0")
    }

    pub fn last(&self) -> &ObservableRecord {
        self.outcome.trajectory.last().expect("flows record t = 0")
    }
}

/// Flows `u0` with the configured integrator, streaming `<tag>.csv` and
/// writing `<tag>_phi.json` and `<tag>.ymchk` as configured.
pub fn flow_recorded<G: GaugeMatrix>(cfg: &RunConfig, u0: GaugeField<G>, dir: &Path, tag: &str) -> Result<RecordedFlow<G>> {
    ensure_dir(dir)?;
    let geom = u0.geometry_arc().clone();
    let flow = Flow::new(cfg.flow.clone(), &geom)?;
    let m = measurer(cfg, &geom)?;
    let csv = dir.join(format!("{tag}.csv"));
    let mut sink = CsvSink::new(create(&csv)?)?;
    let outcome = flow.run(u0, &m, &mut |r| {
        info!("[{tag}] t {:.4} ym {:.6e} kappa {:.5} grad_sq {:.3e}", r.t, r.ym, r.kappa, r.grad_sq);
        sink.push(r)
    })?;
    sink.finish()?;
    let phi = if cfg.output.phi_json {
        let path = dir.join(format!("{tag}_phi.json"));
        let text = serde_json::to_string_pretty(&phi_series(&outcome.trajectory))?;
        std::fs::write(&path, text + "\n").map_err(|source| Error::Io { path: path.clone(), source })?;
        Some(path)
    } else {
        None
    };
    let checkpoint = if cfg.output.checkpoint {
        let path = dir.join(format!("{tag}.ymchk"));
        let s = &outcome.state;
        let h = CheckpointHeader { status: s.status.code(), t: s.t, step_count: s.step_count, running_k: s.running_k };
        let mut w = create(&path)?;
        write_checkpoint(&s.field, &h, &mut w)?;
        std::io::Write::flush(&mut w)?;
        Some(path)
    } else {
        None
    };
    info!("[{tag}] finished with {:?} after {} steps at t = {}", outcome.state.status, outcome.state.step_count, outcome.state.t);
    Ok(RecordedFlow { outcome, csv, phi, checkpoint })
}

/// `make-instanton`: writes the initial data as `initial.ymf`.
pub fn make_snapshot(cfg: &RunConfig) -> Result<PathBuf> {
    fn go<G: CliGroup>(cfg: &RunConfig) -> Result<PathBuf> {
        let geom = cfg.geometry.build()?;
        let u: GaugeField<G> = build_initial(cfg, &geom)?;
        ensure_dir(&cfg.output.directory)?;
        let path = cfg.output.directory.join("initial.ymf");
        save_snapshot(&u, &path)?;
        Ok(path)
    }
    match cfg.initial.rank {
        2 => go::<Su2>(cfg),
        _ => go::<SuN<3>>(cfg),
    }
}

/// `flow`: runs the configured flow and reports whether it stayed finite.
pub fn run_flow(cfg: &RunConfig) -> Result<ScenarioReport> {
    fn go<G: CliGroup>(cfg: &RunConfig, rep: &mut ScenarioReport) -> Result<()> {
        let geom = cfg.geometry.build()?;
        let u: GaugeField<G> = build_initial(cfg, &geom)?;
        let run = flow_recorded(cfg, u, &cfg.output.directory, "trajectory")?;
        let st = &run.outcome.state;
        rep.push(Check::holds("no_blowup", st.status != FlowStatus::Blowup, "smooth existence up to the final time"));
        rep.note(format!("status {:?} at t = {} after {} steps", st.status, st.t, st.step_count));
        rep.trajectories.extend(run.files());
        Ok(())
    }
    let start = std::time::Instant::now();
    let mut rep = ScenarioReport::new("flow");
    match cfg.initial.rank {
        2 => go::<Su2>(cfg, &mut rep)?,
        _ => go::<SuN<3>>(cfg, &mut rep)?,
    }
    rep.finalize(start.elapsed().as_secs_f64());
    Ok(rep)
}

/// `measure`: observables of a stored field (snapshot or checkpoint).
pub fn measure_snapshot(cfg: Option<&RunConfig>, path: &Path) -> Result<ObservableRecord> {
    fn go<G: GaugeMatrix>(cfg: Option<&RunConfig>, path: &Path) -> Result<ObservableRecord> {
        let u: GaugeField<G> = load_field(path)?;
        let geom = u.geometry();
        let defaults = RunConfig::measurement_defaults();
        let cfg = cfg.unwrap_or(&defaults);
        let pre = crate::flow::Preconditioner::new(geom, cfg.flow.precond_clamp);
        measurer(cfg, geom)?.measure(&u, &pre, 0.0, 0.0)
    }
    match peek_header(path)?.rank {
        2 => go::<Su2>(cfg, path),
        3 => go::<SuN<3>>(cfg, path),
        r => Err(Error::Unsupported(format!("snapshots of rank {r} cannot be measured by this front-end"))),
    }
}

impl RunConfig {
    /// Defaults used by `measure` when no config is given.
    fn measurement_defaults() -> RunConfig {
        RunConfig {
            version: super::config::CONFIG_VERSION,
            seed: 0,
            geometry: super::config::GeometryConfig::FlatTorus { n: 4, spacing: 1.0 },
            initial: super::config::InitialConfig { identity: true, rank: 2, ..Default::default() },
            flow: Default::default(),
            measurement: Default::default(),
            output: Default::default(),
            scenario: Default::default(),
        }
    }
}
