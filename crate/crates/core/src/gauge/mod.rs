//! Gauge-field representation: SU(r) links, su(r) fields, plaquettes, the
//! clover field strength and gauge transformations.

mod field;
pub mod matrix;
pub mod snapshot;

pub use field::{
    plane_index, random_gauge_transform, AlgebraField, FieldStrength, GaugeField, GaugeTransform, PLANES,
};
pub(crate) use field::supports_twist;
pub use matrix::{su2_to_dense, GaugeMatrix, Su2, SuN};
