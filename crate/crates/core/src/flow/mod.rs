//! Discrete Yang-Mills gradient flow of the Wilson action.

mod config;
mod force;
mod integrate;

pub use config::{FlowConfig, Integrator};
pub use force::{force, force_and_grad, grad_norm_sq, staple_sum, wilson_action, Preconditioner};
pub use integrate::{Flow, FlowOutcome, FlowState, FlowStatus, StepInfo};
