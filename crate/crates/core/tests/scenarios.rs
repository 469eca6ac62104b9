//! Scenario orchestration on lattices small enough for the unit-test budget.

use std::path::Path;
use std::process::Command;

use sha2::{Digest, Sha256};

use ymflow::cli::{run_scenario, Outcome, RunConfig, ScenarioName};

fn small_retraction(dir: &Path, parallel: bool) -> RunConfig {
    let mut cfg = RunConfig::from_toml_str(
        r#"
version = 1
[geometry]
kind = "round_s4_chart"
n = 8
box_halfwidth = 2.0
[initial.instanton]
family = "thooft_jnr"
centers = [[0.5, 0.0, 0.0, 0.0], [-0.5, 0.0, 0.0, 0.0]]
scales = [0.7, 0.7]
[flow]
t_max = 0.2
measure_every = 0.1
precond_clamp = 4.0
[scenario]
samples = 3
[scenario.endpoint]
family = "thooft_jnr"
centers = [[0.0, 0.5, 0.0, 0.0], [0.0, -0.5, 0.0, 0.0]]
scales = [0.7, 0.7]
"#,
    )
    .unwrap();
    cfg.output.directory = dir.to_path_buf();
    cfg.scenario.parallel_samples = parallel;
    cfg
}

#[test]
fn retraction_path_flows_every_admitted_sample() {
    let tmp = tempfile::tempdir().unwrap();
    let rep = run_scenario(ScenarioName::RetractionPath, &small_retraction(tmp.path(), false)).unwrap();
    let flowed = rep.check("samples_flowed").unwrap().value as usize;
    assert!(flowed >= 2, "{rep}");
    let csvs: Vec<_> = rep.trajectories.iter().filter(|p| p.extension().is_some_and(|e| e == "csv")).collect();
    assert_eq!(csvs.len(), flowed);
    for name in ["no_blowup", "asd_endpoints", "kappa_constant"] {
        assert!(rep.check(name).is_some(), "missing {name}");
    }
    assert!(rep.check("no_blowup").unwrap().pass);
    assert!(rep.notes.iter().any(|n| n.contains("spot-check")));
    assert_ne!(rep.outcome, Outcome::OutOfWindow);

    // flowing the samples in parallel changes nothing on disk
    let tmp2 = tempfile::tempdir().unwrap();
    let par = run_scenario(ScenarioName::RetractionPath, &small_retraction(tmp2.path(), true)).unwrap();
    assert_eq!(par.checks, rep.checks);
    for p in &csvs {
        let q = tmp2.path().join(p.file_name().unwrap());
        assert_eq!(std::fs::read(p).unwrap(), std::fs::read(q).unwrap());
    }
}

#[test]
fn twisted_scenario_rejects_trivial_twist() {
    let tmp = tempfile::tempdir().unwrap();
    let mut cfg = ScenarioName::FlatGapTorus.reference_config();
    cfg.output.directory = tmp.path().to_path_buf();
    let err = run_scenario(ScenarioName::TwistedTorusGap, &cfg).unwrap_err();
    assert!(err.to_string().contains("twist"), "{err}");
}

fn digest(path: &Path) -> Vec<u8> {
    Sha256::digest(std::fs::read(path).unwrap()).to_vec()
}

#[test]
fn flow_outputs_are_reproducible_across_thread_counts() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = tmp.path().join("rand.toml");
    std::fs::write(
        &cfg,
        r#"
version = 1
seed = 11
[geometry]
kind = "flat_torus"
n = 4
spacing = 0.5
[initial.random]
amplitude = 0.5
sweeps = 2
[flow]
t_max = 0.3
measure_every = 0.05
"#,
    )
    .unwrap();
    let mut hashes = Vec::new();
    for (k, threads) in ["1", "1", "4", "4"].iter().enumerate() {
        let out = tmp.path().join(format!("run{k}"));
        let o = Command::new(env!("CARGO_BIN_EXE_ymflow"))
            .args(["flow", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap(), "--threads", threads])
            .env("RUST_LOG", "warn")
            .output()
            .unwrap();
        assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
        hashes.push((digest(&out.join("trajectory.csv")), digest(&out.join("trajectory_phi.json"))));
    }
    assert_eq!(hashes[0], hashes[1]);
    assert_eq!(hashes[2], hashes[3]);
    // reductions run in a fixed order, so thread count does not matter either
    assert_eq!(hashes[0], hashes[2]);
}
