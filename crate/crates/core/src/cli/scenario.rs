//! Reference experiments with pass/fail checks.

use std::path::Path;
use std::str::FromStr;
use std::time::Instant;

use log::info;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::RunConfig;
use super::report::{Check, Outcome, ScenarioReport};
use super::run::{build_initial, ensure_dir, flow_recorded, measurer, RecordedFlow};
use crate::error::{config_err, Error, Result};
use crate::flow::{wilson_action, FlowStatus, Preconditioner};
use crate::gauge::{GaugeField, GaugeMatrix, Su2};
use crate::instantons::discretize;
use crate::observables::{diagnostics, nonincreasing, ObservableRecord};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScenarioName {
    GapS4,
    FlatGapTorus,
    TwistedTorusGap,
    RetractionPath,
}

pub const ALL_SCENARIOS: [ScenarioName; 4] =
    [ScenarioName::GapS4, ScenarioName::FlatGapTorus, ScenarioName::TwistedTorusGap, ScenarioName::RetractionPath];

impl ScenarioName {
    pub fn as_str(self) -> &'static str {
        match self {
            ScenarioName::GapS4 => "gap_s4",
            ScenarioName::FlatGapTorus => "flat_gap_torus",
            ScenarioName::TwistedTorusGap => "twisted_torus_gap",
            ScenarioName::RetractionPath => "retraction_path",
        }
    }

    fn reference_toml(self) -> &'static str {
        match self {
            ScenarioName::GapS4 => include_str!("../../configs/gap_s4.toml"),
            ScenarioName::FlatGapTorus => include_str!("../../configs/flat_gap_torus.toml"),
            ScenarioName::TwistedTorusGap => include_str!("../../configs/twisted_torus_gap.toml"),
            ScenarioName::RetractionPath => include_str!("../../configs/retraction_path.toml"),
        }
    }

    /// The shipped reference configuration.
    pub fn reference_config(self) -> RunConfig {
        RunConfig::from_toml_str(self.reference_toml()).expect("shipped configs are valid")
    }
}

impl FromStr for ScenarioName {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        ALL_SCENARIOS
            .into_iter()
            .find(|n| n.as_str() == s)
            .ok_or_else(|| config_err(format!("unknown scenario {s:?}; expected one of gap_s4, flat_gap_torus, twisted_torus_gap, retraction_path")))
    }
}

impl std::fmt::Display for ScenarioName {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

pub fn run_scenario(name: ScenarioName, cfg: &RunConfig) -> Result<ScenarioReport> {
    let start = Instant::now();
    let dir = cfg.output.directory.clone();
    ensure_dir(&dir)?;
    let mut rep = ScenarioReport::new(name.as_str());
    match name {
        ScenarioName::GapS4 => gap_s4(cfg, &dir, &mut rep)?,
        ScenarioName::FlatGapTorus => flat_gap_torus(cfg, &dir, &mut rep)?,
        ScenarioName::TwistedTorusGap => twisted_torus_gap(cfg, &dir, &mut rep)?,
        ScenarioName::RetractionPath => retraction_path(cfg, &dir, &mut rep)?,
    }
    rep.finalize(start.elapsed().as_secs_f64());
    Ok(rep)
}

fn require_su2(cfg: &RunConfig) -> Result<()> {
    if cfg.initial.rank != 2 {
        return Err(config_err("initial.rank: scenarios run SU(2) fields"));
    }
    Ok(())
}

fn status_checks<G: GaugeMatrix>(run: &RecordedFlow<G>, rep: &mut ScenarioReport, claim: &str) {
    let st = run.outcome.state.status;
    rep.push(Check::holds("no_blowup", st != FlowStatus::Blowup, "smooth long-time existence below the threshold"));
    rep.push(Check::holds("converged", st == FlowStatus::Converged, claim));
    rep.note(format!("flow ended {st:?} at t = {} after {} steps", run.outcome.state.t, run.outcome.state.step_count));
}

/// `||F^+||^2 = 2 sd`.
fn fplus_sq(r: &ObservableRecord) -> f64 {
    2.0 * r.sd
}

fn max_increase(values: &[f64]) -> f64 {
    values.windows(2).map(|w| w[1] - w[0]).fold(0.0, f64::max)
}

fn gap_s4(cfg: &RunConfig, dir: &Path, rep: &mut ScenarioReport) -> Result<()> {
    require_su2(cfg)?;
    let p = &cfg.scenario;
    let geom = cfg.geometry.build()?;
    let u0: GaugeField<Su2> = build_initial(cfg, &geom)?;
    let pre = Preconditioner::new(&geom, cfg.flow.precond_clamp);
    let r0 = measurer(cfg, &geom)?.measure(&u0, &pre, 0.0, 0.0)?;
    let threshold = cfg.measurement.gap.threshold(r0.kappa.round());
    if !(r0.ym < threshold) {
        rep.outcome = Outcome::OutOfWindow;
        rep.note(format!("initial YM {:.6} is not below the gap threshold {threshold:.6}; nothing certified", r0.ym));
        return Ok(());
    }
    let run = flow_recorded(cfg, u0, dir, "trajectory")?;
    rep.trajectories.extend(run.files());
    let traj = &run.outcome.trajectory;
    let diag = diagnostics(traj, &cfg.measurement.gap)?;
    status_checks(&run, rep, "the flow converges smoothly to an instanton");

    let tail: Vec<f64> = traj.iter().filter(|r| r.t >= p.monotone_from).map(fplus_sq).collect();
    let inc = max_increase(&tail);
    rep.push(Check {
        name: "fplus_monotone".into(),
        value: inc,
        threshold: p.monotone_slack,
        pass: nonincreasing(&tail, p.monotone_slack),
        claim: "||F^+(t)||^2 is nonincreasing once the flow is underway".into(),
    });
    let rate = diag.decay.rate.unwrap_or(f64::NAN);
    rep.push(Check {
        name: "decay_rate".into(),
        value: rate,
        threshold: p.rate_min,
        pass: rate >= p.rate_min,
        claim: "||F^+(t)|| decays exponentially, ||F^+(tau0)|| e^{-3(t - tau0)} in the continuum".into(),
    });
    rep.note(format!(
        "decay fit over t >= {:.4} on {} points: rate {rate:.4} (continuum rate 3, gap {:.4})",
        diag.decay.tail_start,
        diag.decay.points,
        3.0 - rate
    ));
    let last = run.last();
    let action = wilson_action(&run.outcome.state.field);
    let grad_tol = cfg.flow.stop_grad_tol * (action.max(0.0) + geom.total_volume());
    rep.push(Check {
        name: "final_grad_sq".into(),
        value: last.grad_sq,
        threshold: grad_tol,
        pass: last.grad_sq <= grad_tol,
        claim: "the limit is a critical point".into(),
    });
    let k0 = r0.kappa.round();
    rep.push(Check::below(
        "kappa",
        (last.kappa - k0).abs(),
        p.kappa_tol,
        "the limit instanton carries the charge of the bundle",
    ));
    rep.note(format!(
        "initial YM {:.6} (threshold {threshold:.6}), kappa {:.6} -> {:.6}; final K {:.6}; max min(1,t) sup|F^+| {:.6}",
        r0.ym, r0.kappa, last.kappa, diag.final_k, diag.max_scaled_sup_fplus
    ));
    Ok(())
}

fn flat_gap_torus(cfg: &RunConfig, dir: &Path, rep: &mut ScenarioReport) -> Result<()> {
    require_su2(cfg)?;
    let p = &cfg.scenario;
    let geom = cfg.geometry.build()?;
    let u0: GaugeField<Su2> = build_initial(cfg, &geom)?;
    let run = flow_recorded(cfg, u0, dir, "trajectory")?;
    rep.trajectories.extend(run.files());
    status_checks(&run, rep, "the flow converges smoothly to a flat connection");
    let (first, last) = (run.first(), run.last());
    let ratio = if first.ym > 0.0 { last.ym / first.ym } else { 0.0 };
    rep.push(Check::below("energy_ratio", ratio, p.energy_ratio, "YM(A(t)) -> 0: the limit is flat"));
    let a = geom.spacing();
    rep.push(Check::below("final_sup_f", last.sup_f, p.sup_f_lattice / (a * a), "sup |F_A(t)| -> 0"));
    rep.note(format!("initial YM {:.6e}, morrey_24 {:.6e}", first.ym, first.morrey24));
    Ok(())
}

fn twisted_torus_gap(cfg: &RunConfig, dir: &Path, rep: &mut ScenarioReport) -> Result<()> {
    require_su2(cfg)?;
    let p = &cfg.scenario;
    if cfg.initial.twist.as_ref().is_none_or(|t| t.is_trivial()) {
        return Err(config_err("initial.twist: twisted_torus_gap needs a nontrivial twist"));
    }
    let geom = cfg.geometry.build()?;
    let floor = match p.energy_floor {
        Some(f) => f,
        None => {
            // the same data on the trivial bundle sets the scale of "flowed to zero"
            let mut plain = cfg.clone();
            plain.initial.twist = None;
            let u: GaugeField<Su2> = build_initial(&plain, &geom)?;
            let run = flow_recorded(&plain, u, dir, "untwisted")?;
            rep.trajectories.extend(run.files());
            let f = p.floor_factor * run.last().ym;
            rep.note(format!(
                "energy floor {f:.6e} = {} x final YM of the untwisted run ({:?})",
                p.floor_factor, run.outcome.state.status
            ));
            f
        }
    };
    let u0: GaugeField<Su2> = build_initial(cfg, &geom)?;
    let run = flow_recorded(cfg, u0, dir, "trajectory")?;
    rep.trajectories.extend(run.files());
    let traj = &run.outcome.trajectory;
    let st = run.outcome.state.status;
    rep.push(Check::holds("no_blowup", st != FlowStatus::Blowup, "smooth long-time existence"));
    let min_ym = traj.iter().map(|r| r.ym).fold(f64::INFINITY, f64::min);
    rep.push(Check::above(
        "energy_floor",
        min_ym,
        floor,
        "a bundle without flat connections keeps YM bounded away from zero",
    ));
    let (first, last) = (run.first(), run.last());
    rep.push(Check::above(
        "morrey_floor",
        last.morrey24,
        p.morrey_floor_ratio * first.morrey24,
        "a flat connection exists iff inf ||F_A||_{M^{2,4}} = 0",
    ));
    let drop = if last.grad_sq > 0.0 { first.grad_sq / last.grad_sq } else { f64::INFINITY };
    rep.push(Check::above("grad_drop", drop, p.grad_drop, "the flow settles on a critical point or plateau"));
    rep.note(format!(
        "flow ended {st:?} at t = {}; YM {:.6e} -> {:.6e}, morrey_24 {:.6e} -> {:.6e}",
        run.outcome.state.t, first.ym, last.ym, first.morrey24, last.morrey24
    ));
    Ok(())
}

/// `exp(s log(U_b U_a^dag)) U_a` on every link.
pub fn interpolate_links(a: &GaugeField<Su2>, b: &GaugeField<Su2>, s: f64) -> Result<GaugeField<Su2>> {
    if !a.geometry().same_lattice(b.geometry()) {
        return Err(Error::GeometryMismatch("interpolation endpoints live on different lattices".into()));
    }
    let links = a
        .links()
        .iter()
        .zip(b.links())
        .map(|(ua, ub)| ((*ub * ua.adjoint()).log() * s).exp_alg() * *ua)
        .collect();
    GaugeField::from_links(a.geometry_arc().clone(), links)
}

fn retraction_path(cfg: &RunConfig, dir: &Path, rep: &mut ScenarioReport) -> Result<()> {
    require_su2(cfg)?;
    let p = &cfg.scenario;
    let spec_a = cfg.initial.instanton.as_ref().ok_or_else(|| config_err("initial.instanton: retraction_path needs instanton endpoints"))?;
    let spec_b = p.endpoint.as_ref().ok_or_else(|| config_err("scenario.endpoint: retraction_path needs a second endpoint"))?;
    let geom = cfg.geometry.build()?;
    let a = discretize(&spec_a.evaluator()?, geom.clone())?;
    let b = discretize(&spec_b.evaluator()?, geom.clone())?;
    let pre = Preconditioner::new(&geom, cfg.flow.precond_clamp);
    let m = measurer(cfg, &geom)?;
    let n = p.samples;
    rep.note("finitely many samples along one path: a spot-check, not a certificate of continuity of the limit map");

    let mut admitted = Vec::new();
    for i in 0..n {
        let s = i as f64 / (n - 1) as f64;
        let u = interpolate_links(&a, &b, s)?;
        let r = m.measure(&u, &pre, 0.0, 0.0)?;
        let thr = cfg.measurement.gap.threshold(r.kappa.round());
        if r.ym < thr {
            admitted.push((i, u));
        } else {
            rep.note(format!("sample {i} (s = {s:.4}) skipped: YM {:.6} is not below {thr:.6}", r.ym));
        }
    }
    let flow_one = |(i, u): (usize, GaugeField<Su2>)| -> Result<(usize, RecordedFlow<Su2>)> {
        info!("retraction sample {i}");
        Ok((i, flow_recorded(cfg, u, dir, &format!("sample_{i:02}"))?))
    };
    let runs: Vec<(usize, RecordedFlow<Su2>)> = if p.parallel_samples {
        admitted.into_par_iter().map(flow_one).collect::<Result<_>>()?
    } else {
        admitted.into_iter().map(flow_one).collect::<Result<_>>()?
    };
    rep.push(Check::above("samples_flowed", runs.len() as f64, 0.0, "samples of the path lie in the gap window"));
    if runs.is_empty() {
        return Ok(());
    }
    let mut worst_asd: f64 = 0.0;
    let mut blowups = 0;
    let mut kappas = Vec::new();
    for (i, run) in &runs {
        rep.trajectories.extend(run.files());
        let last = run.last();
        let ratio = if last.ym > 0.0 { fplus_sq(last) / last.ym } else { 0.0 };
        worst_asd = worst_asd.max(ratio);
        if run.outcome.state.status == FlowStatus::Blowup {
            blowups += 1;
        }
        kappas.push(last.kappa);
        rep.note(format!(
            "sample {i}: {:?} at t = {}, ||F^+||^2/YM {ratio:.3e}, kappa {:.6}",
            run.outcome.state.status, run.outcome.state.t, last.kappa
        ));
    }
    rep.push(Check::holds("no_blowup", blowups == 0, "smooth long-time existence below the threshold"));
    rep.push(Check::below("asd_endpoints", worst_asd, p.instanton_tol, "each flowed sample is an instanton"));
    let spread = kappas.iter().fold(f64::NEG_INFINITY, |m, &k| m.max(k)) - kappas.iter().fold(f64::INFINITY, |m, &k| m.min(k));
    rep.push(Check::below("kappa_constant", spread, p.kappa_tol, "the charge is constant along the retracted family"));
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::LatticeGeometry;
    use std::sync::Arc;

    #[test]
    fn reference_configs_parse() {
        for n in ALL_SCENARIOS {
            let c = n.reference_config();
            assert_eq!(n.as_str().parse::<ScenarioName>().unwrap(), n);
            assert_eq!(c.initial.rank, 2);
        }
        assert!("gap".parse::<ScenarioName>().is_err());
    }

    #[test]
    fn interpolation_hits_both_endpoints() {
        let g = Arc::new(LatticeGeometry::flat_torus(4, 0.5).unwrap());
        let a = crate::instantons::random_perturbation(&GaugeField::<Su2>::identity(g.clone()), 0.5, 1, 1).unwrap().field;
        let b = crate::instantons::random_perturbation(&GaugeField::<Su2>::identity(g.clone()), 0.5, 1, 2).unwrap().field;
        let close = |x: &GaugeField<Su2>, y: &GaugeField<Su2>| {
            x.links().iter().zip(y.links()).all(|(p, q)| (*p - *q).norm_sq() < 1e-24)
        };
        assert!(close(&interpolate_links(&a, &b, 0.0).unwrap(), &a));
        assert!(close(&interpolate_links(&a, &b, 1.0).unwrap(), &b));
    }
}
