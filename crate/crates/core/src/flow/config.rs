use serde::{Deserialize, Serialize};

use crate::error::{config_err, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Integrator {
    Euler,
    #[default]
    Rk3,
}

fn d_dt() -> f64 {
    0.01
}
fn d_true() -> bool {
    true
}
fn d_safety() -> f64 {
    0.1
}
fn d_tmax() -> f64 {
    1.0
}
fn d_stop() -> f64 {
    1e-8
}
fn d_blowup() -> f64 {
    4.0
}
fn d_measure() -> f64 {
    0.1
}
fn d_clamp() -> f64 {
    1e4
}
fn d_lattice_step() -> f64 {
    0.1
}
fn d_reunit() -> u64 {
    64
}

/// Integrator and stopping parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FlowConfig {
    #[serde(default)]
    pub integrator: Integrator,
    /// Step size when `adapt` is off.
    #[serde(default = "d_dt")]
    pub dt_init: f64,
    #[serde(default = "d_dt")]
    pub dt_max: f64,
    /// `dt = min(dt_max, safety / max(1, ||force||_inf))`.
    #[serde(default = "d_true")]
    pub adapt: bool,
    #[serde(default = "d_safety")]
    pub safety: f64,
    #[serde(default = "d_tmax")]
    pub t_max: f64,
    /// Converged once `grad_sq <= stop_grad_tol * (S + Vol)`.
    #[serde(default = "d_stop")]
    pub stop_grad_tol: f64,
    /// Blowup once `max_x |F|_g(x) (lambda(x) a)^2` exceeds this.
    #[serde(default = "d_blowup")]
    pub blowup_sup_tol: f64,
    /// Flow time between recorded measurements.
    #[serde(default = "d_measure")]
    pub measure_every: f64,
    /// Upper bound on the chart preconditioner `lambda^{-2}`.
    #[serde(default = "d_clamp")]
    pub precond_clamp: f64,
    /// Explicit-scheme stability bound: adaptive steps never exceed
    /// `lattice_step * a^2 / max_link_weight`, whatever the force is.
    #[serde(default = "d_lattice_step")]
    pub lattice_step: f64,
    #[serde(default = "d_reunit")]
    pub reunitarize_every: u64,
}

impl Default for FlowConfig {
    fn default() -> Self {
        FlowConfig {
            integrator: Integrator::Rk3,
            dt_init: d_dt(),
            dt_max: d_dt(),
            adapt: true,
            safety: d_safety(),
            t_max: d_tmax(),
            stop_grad_tol: d_stop(),
            blowup_sup_tol: d_blowup(),
            measure_every: d_measure(),
            precond_clamp: d_clamp(),
            lattice_step: d_lattice_step(),
            reunitarize_every: d_reunit(),
        }
    }
}

impl FlowConfig {
    pub fn validate(&self) -> Result<()> {
        let pos = |name: &str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(config_err(format!("flow.{name} must be positive and finite, got {v}")))
            }
        };
        pos("dt_init", self.dt_init)?;
        pos("dt_max", self.dt_max)?;
        pos("safety", self.safety)?;
        pos("t_max", self.t_max)?;
        pos("stop_grad_tol", self.stop_grad_tol)?;
        pos("blowup_sup_tol", self.blowup_sup_tol)?;
        pos("measure_every", self.measure_every)?;
        pos("precond_clamp", self.precond_clamp)?;
        pos("lattice_step", self.lattice_step)?;
        if self.dt_init > self.dt_max {
            return Err(config_err("flow.dt_init must not exceed flow.dt_max"));
        }
        if self.reunitarize_every == 0 {
            return Err(config_err("flow.reunitarize_every must be at least 1"));
        }
        Ok(())
    }
}
