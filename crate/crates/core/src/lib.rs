//! Yang-Mills gradient flow on four-dimensional lattices modelling the round
//! four-sphere (a stereographic chart) and flat four-tori.
//!
//! The crate builds instanton initial data, runs the discrete gradient flow of
//! the Wilson action, and measures energy, topological charge, the
//! self-dual/anti-self-dual split, sup- and Morrey norms of the curvature and a
//! Gaussian-weighted monotonicity functional.

pub mod cli;
pub mod error;
pub mod flow;
pub mod gauge;
pub mod geometry;
pub mod instantons;
pub mod observables;
pub mod quadrature;

pub use error::{Error, Result};
