//! Run summaries over a recorded trajectory.

use serde::{Deserialize, Serialize};

use super::record::ObservableRecord;
use crate::error::{Error, Result};

fn d_delta() -> f64 {
    2.0
}

/// Energy-gap constant `delta` (2 for SU(r) in the standard representation).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GapConstants {
    #[serde(default = "d_delta")]
    pub delta: f64,
}

impl Default for GapConstants {
    fn default() -> Self {
        GapConstants { delta: 2.0 }
    }
}

impl GapConstants {
    /// `4 pi^2 (|kappa| + delta)`.
    pub fn threshold(&self, kappa: f64) -> f64 {
        4.0 * std::f64::consts::PI.powi(2) * (kappa.abs() + self.delta)
    }
}

/// Least-squares exponential fit `||F^+(t)|| ~ exp(-rate t)` over the tail.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DecayFit {
    /// `None` when the fit is indeterminate: too few tail points, values at
    /// the noise floor, or no measurable change.
    pub rate: Option<f64>,
    pub tail_start: f64,
    pub points: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    /// `max_t min(1, t) sup |F^+|_g`.
    pub max_scaled_sup_fplus: f64,
    pub final_k: f64,
    pub decay: DecayFit,
    pub initial_ym: f64,
    pub initial_kappa: f64,
    pub threshold: f64,
    /// `YM(0) < 4 pi^2 (|round kappa(0)| + delta)`.
    pub in_gap_window: bool,
}

/// Tail used for the decay fit: the final decade of flow time,
/// `t >= t_final / 10`.
pub fn fit_decay(records: &[ObservableRecord]) -> DecayFit {
    let t_end = records.last().map_or(0.0, |r| r.t);
    let tail_start = t_end / 10.0;
    let tail: Vec<(f64, f64)> =
        records.iter().filter(|r| r.t > 0.0 && r.t >= tail_start).map(|r| (r.t, r.fplus_l2())).collect();
    let scale = records.iter().map(|r| r.ym.max(0.0).sqrt()).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
    let floor = 1e-12 * scale;
    let usable: Vec<(f64, f64)> = tail.iter().copied().filter(|&(_, y)| y > floor).collect();
    let indeterminate = DecayFit { rate: None, tail_start, points: usable.len() };
    if usable.len() < 3 {
        return indeterminate;
    }
    let logs: Vec<(f64, f64)> = usable.iter().map(|&(t, y)| (t, y.ln())).collect();
    let spread = logs.iter().map(|p| (p.1 - logs[0].1).abs()).fold(0.0, f64::max);
    if spread < 1e-9 {
        return indeterminate;
    }
    let n = logs.len() as f64;
    let mt = logs.iter().map(|p| p.0).sum::<f64>() / n;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = logs.iter().map(|p| (p.0 - mt) * (p.1 - my)).sum();
    let sxx: f64 = logs.iter().map(|p| (p.0 - mt).powi(2)).sum();
    if sxx <= 0.0 {
        return indeterminate;
    }
    DecayFit { rate: Some(-sxy / sxx), tail_start, points: logs.len() }
}

pub fn diagnostics(records: &[ObservableRecord], gap: &GapConstants) -> Result<Diagnostics> {
    if records.len() < 2 {
        return Err(Error::Numerical(format!("diagnostics need at least 2 records, got {}", records.len())));
    }
    let first = &records[0];
    let max_scaled = records.iter().map(|r| r.t.min(1.0) * r.sup_fp).fold(0.0, f64::max);
    let threshold = gap.threshold(first.kappa.round());
    Ok(Diagnostics {
        max_scaled_sup_fplus: max_scaled,
        final_k: records.last().expect("non-empty").running_k,
        decay: fit_decay(records),
        initial_ym: first.ym,
        initial_kappa: first.kappa,
        threshold,
        in_gap_window: first.ym < threshold,
    })
}

/// Whether `values` never increases by more than `slack`.
pub fn nonincreasing(values: &[f64], slack: f64) -> bool {
    values.windows(2).all(|w| w[1] <= w[0] + slack)
}
