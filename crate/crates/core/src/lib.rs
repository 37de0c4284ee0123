//! Numerical laboratory for SU(2) monopoles on flat ℝ³ in the large-mass limit.
//!
//! The core is generic over the scalar type (`f32` or `f64`); the aliases
//! below fix `f64`, which every published tolerance assumes.

// `!(x > 0)` is used on purpose so NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod algebra;
pub mod analysis;
pub mod audit;
pub mod bps;
pub mod bubbling;
pub mod error;
pub mod fields;
pub mod measures;
pub mod profile;
pub mod quadrature;
pub mod radial_solver;
pub mod scalar;

pub use error::{Error, Result};
pub use scalar::Real;

pub type Vec3 = algebra::Vec3<f64>;
pub type Su2Vec = algebra::Su2Vec<f64>;
pub type RadialProfile = profile::RadialProfile<f64>;
pub type FieldSampler = fields::FieldSampler<f64>;
pub type EnergyMeasure = measures::EnergyMeasure<f64>;
pub type QuadConfig = quadrature::QuadConfig<f64>;
pub type ScenarioSequence = bubbling::ScenarioSequence<f64>;
pub type ConcentrationReport = analysis::ConcentrationReport<f64>;
