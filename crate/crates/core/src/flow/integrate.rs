//! Lie-group integrators and the flow driver.

use serde::{Deserialize, Serialize};

use super::config::{FlowConfig, Integrator};
use super::force::{force_and_grad, wilson_action, Preconditioner};
use crate::error::{Error, Result};
use crate::gauge::{AlgebraField, GaugeField, GaugeMatrix};
use crate::observables::{cutoff_curvature, sup_norms, Measurer, ObservableRecord};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FlowStatus {
    Running,
    Converged,
    Blowup,
    TimeCap,
}

impl FlowStatus {
    pub fn code(self) -> u8 {
        match self {
            FlowStatus::Running => 0,
            FlowStatus::Converged => 1,
            FlowStatus::Blowup => 2,
            FlowStatus::TimeCap => 3,
        }
    }

    pub fn from_code(c: u8) -> Result<Self> {
        Ok(match c {
            0 => FlowStatus::Running,
            1 => FlowStatus::Converged,
            2 => FlowStatus::Blowup,
            3 => FlowStatus::TimeCap,
            _ => return Err(Error::Format(format!("unknown flow status code {c}"))),
        })
    }
}

#[derive(Debug, Clone)]
pub struct FlowState<G: GaugeMatrix> {
    pub field: GaugeField<G>,
    pub t: f64,
    pub step_count: u64,
    pub status: FlowStatus,
    /// `int sup |F^+|_g dt`, trapezoid rule over steps.
    pub running_k: f64,
    /// `sup |F^+|_g` of the current field.
    sup_fplus: f64,
}

impl<G: GaugeMatrix> FlowState<G> {
    pub fn new(field: GaugeField<G>) -> Self {
        let (_, sfp) = sup_norms(&field.clover_field_strength());
        FlowState { field, t: 0.0, step_count: 0, status: FlowStatus::Running, running_k: 0.0, sup_fplus: sfp }
    }

    /// Resumes from checkpointed values.
    pub fn resume(field: GaugeField<G>, t: f64, step_count: u64, status: FlowStatus, running_k: f64) -> Self {
        let (_, sfp) = sup_norms(&field.clover_field_strength());
        FlowState { field, t, step_count, status, running_k, sup_fplus: sfp }
    }

    pub fn sup_fplus(&self) -> f64 {
        self.sup_fplus
    }
}

/// What one step did.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepInfo {
    pub dt: f64,
    /// Wilson action and squared gradient at the start of the step.
    pub action: f64,
    pub grad_sq: f64,
}

/// Integrator bound to a geometry's preconditioner.
#[derive(Debug, Clone)]
pub struct Flow {
    cfg: FlowConfig,
    pre: Preconditioner,
    dt_stable: f64,
}

const RK3_A: [f64; 3] = [0.25, 8.0 / 9.0, 0.75];
const RK3_B: [f64; 2] = [-17.0 / 36.0, -8.0 / 9.0];

impl Flow {
    pub fn new(cfg: FlowConfig, geom: &crate::geometry::LatticeGeometry) -> Result<Self> {
        cfg.validate()?;
        let pre = Preconditioner::new(geom, cfg.precond_clamp);
        let a = geom.spacing();
        let dt_stable = cfg.lattice_step * a * a / pre.max_weight().max(f64::MIN_POSITIVE);
        Ok(Flow { cfg, pre, dt_stable })
    }

    pub fn config(&self) -> &FlowConfig {
        &self.cfg
    }

    /// Largest step the adaptive controller will take.
    pub fn stable_dt(&self) -> f64 {
        self.dt_stable.min(self.cfg.dt_max)
    }

    pub fn preconditioner(&self) -> &Preconditioner {
        &self.pre
    }

    fn choose_dt(&self, z: &AlgebraField<impl GaugeMatrix>, cap: f64) -> f64 {
        let dt = if self.cfg.adapt {
            self.cfg.dt_max.min(self.dt_stable).min(self.cfg.safety / z.max_norm().max(1.0))
        } else {
            self.cfg.dt_init
        };
        dt.min(cap)
    }

    /// One step of at most `cap` in time. The state must be running.
    pub fn step<G: GaugeMatrix>(&self, state: &mut FlowState<G>, cap: f64) -> Result<StepInfo> {
        if state.status != FlowStatus::Running {
            return Err(Error::Numerical(format!("cannot step a flow with status {:?}", state.status)));
        }
        let (z0, grad) = force_and_grad(&state.field, &self.pre);
        let action = wilson_action(&state.field);
        let dt = self.choose_dt(&z0, cap);
        self.advance(state, z0, dt)?;
        Ok(StepInfo { dt, action, grad_sq: grad })
    }

    fn advance<G: GaugeMatrix>(&self, state: &mut FlowState<G>, z0: AlgebraField<G>, dt: f64) -> Result<()> {
        match self.cfg.integrator {
            Integrator::Euler => state.field.left_multiply_exp(&z0.scaled(dt)),
            Integrator::Rk3 => {
                let z0 = z0.scaled(dt);
                state.field.left_multiply_exp(&z0.scaled(RK3_A[0]));
                let z1 = force_and_grad(&state.field, &self.pre).0.scaled(dt);
                state.field.left_multiply_exp(&z1.combine(RK3_A[1], &z0, RK3_B[0]));
                let z2 = force_and_grad(&state.field, &self.pre).0.scaled(dt);
                let w = z2.combine(RK3_A[2], &z1, RK3_B[1]).combine(1.0, &z0, 17.0 / 36.0);
                state.field.left_multiply_exp(&w);
            }
        }
        state.t += dt;
        state.step_count += 1;
        if !state.field.is_finite() {
            state.status = FlowStatus::Blowup;
            return Ok(());
        }
        if state.step_count % self.cfg.reunitarize_every == 0 {
            state.field.reunitarize()?;
        }
        let f = state.field.clover_field_strength();
        let (_, sfp) = sup_norms(&f);
        state.running_k += 0.5 * dt * (state.sup_fplus + sfp);
        state.sup_fplus = sfp;
        if !sfp.is_finite() || cutoff_curvature(&f) > self.cfg.blowup_sup_tol {
            state.status = FlowStatus::Blowup;
        }
        Ok(())
    }

    fn converged<G: GaugeMatrix>(&self, state: &FlowState<G>, action: f64, grad: f64) -> bool {
        let vol = state.field.geometry().total_volume();
        grad <= self.cfg.stop_grad_tol * (action.max(0.0) + vol)
    }

    /// Flows until convergence, blowup or `t_max`, recording observables at
    /// `t = 0, measure_every, 2 measure_every, ...` and at the end.
    pub fn run<G: GaugeMatrix>(
        &self,
        u0: GaugeField<G>,
        measurer: &Measurer,
        sink: &mut dyn FnMut(&ObservableRecord) -> Result<()>,
    ) -> Result<FlowOutcome<G>> {
        self.run_from(FlowState::new(u0), measurer, sink)
    }

    pub fn run_from<G: GaugeMatrix>(
        &self,
        mut state: FlowState<G>,
        measurer: &Measurer,
        sink: &mut dyn FnMut(&ObservableRecord) -> Result<()>,
    ) -> Result<FlowOutcome<G>> {
        if !measurer.matches(state.field.geometry()) || !self.pre.matches(state.field.geometry()) {
            return Err(Error::GeometryMismatch("flow or measurer built for another lattice".into()));
        }
        let mut traj = Vec::new();
        let mut emit = |state: &FlowState<G>, traj: &mut Vec<ObservableRecord>| -> Result<()> {
            let rec = measurer.measure(&state.field, &self.pre, state.t, state.running_k)?;
            sink(&rec)?;
            traj.push(rec);
            Ok(())
        };
        let every = self.cfg.measure_every;
        let eps = 1e-12 * self.cfg.t_max.max(1.0);
        emit(&state, &mut traj)?;
        let mut next = ((state.t / every).floor() + 1.0) * every;
        let mut last_emit = state.t;
        let mut steps = Vec::new();
        while state.status == FlowStatus::Running {
            let (z0, grad) = force_and_grad(&state.field, &self.pre);
            let action = wilson_action(&state.field);
            if self.converged(&state, action, grad) {
                state.status = FlowStatus::Converged;
                break;
            }
            if state.t >= self.cfg.t_max - eps {
                state.status = FlowStatus::TimeCap;
                break;
            }
            let cap = next.min(self.cfg.t_max) - state.t;
            let dt = self.choose_dt(&z0, cap);
            self.advance(&mut state, z0, dt)?;
            steps.push(StepInfo { dt, action, grad_sq: grad });
            if state.status == FlowStatus::Running && state.t >= next - eps {
                emit(&state, &mut traj)?;
                last_emit = state.t;
                while next <= state.t + eps {
                    next += every;
                }
            }
        }
        if last_emit != state.t || traj.is_empty() {
            emit(&state, &mut traj)?;
        }
        Ok(FlowOutcome { state, trajectory: traj, steps })
    }
}

/// Final state plus every recorded measurement and per-step data.
#[derive(Debug, Clone)]
pub struct FlowOutcome<G: GaugeMatrix> {
    pub state: FlowState<G>,
    pub trajectory: Vec<ObservableRecord>,
    pub steps: Vec<StepInfo>,
}
