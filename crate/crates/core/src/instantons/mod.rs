//! Initial data: continuum instantons, their lattice discretizations, smooth
//! random perturbations and 't Hooft-twisted torus bundles.

pub mod conventions;
mod continuum;
mod lattice;
mod spec;
mod twist;

pub use continuum::{
    continuum_curvature, point_density, Adhm, AdhmData, Bpst, ConnectionEvaluator, PointDensity, Rotated, ThooftJnr,
    ZeroConnection,
};
pub use lattice::{apply_twist, discretize, random_perturbation, Perturbation};
pub use spec::{InstantonFamily, InstantonSpec};
pub use twist::TwistSpec;
