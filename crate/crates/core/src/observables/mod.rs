//! Measured quantities: energy, self-dual split, charge, gradient norm,
//! sup-norms, Morrey norms, the Gaussian functional `Phi`, and run summaries.

mod diagnostics;
mod energy;
mod morrey;
mod record;

pub use crate::flow::grad_norm_sq;
pub use diagnostics::{diagnostics, fit_decay, nonincreasing, DecayFit, Diagnostics, GapConstants};
pub use energy::{
    cutoff_curvature, pointwise_norms, sd_split, split_energies, sup_norms, topological_charge, ym_energy,
    SplitEnergies,
};
pub use morrey::{gaussian_phi, morrey_norm, CutoffSpec, MorreySampling, PhiSampling};
pub use record::{phi_series, CsvSink, Measurer, ObservableRecord, PhiSample, PhiSeries, CSV_COLUMNS};
