//! Executable checks of the concentration estimates on field samplers.

mod blowup;
mod bochner;
mod radius;
mod regularity;
mod sphere;
mod tail;
mod zeros;

pub use blowup::{estimate_blow_up_set, BlowUpOptions, ConcentrationReport, PointDensity};
pub use bochner::{bochner_check, BochnerFit};
pub use radius::{calibrate_radius_constant, taubes_radius, RadiusQuery, MAX_DELTA, RADIUS_BOUND_CONSTANT};
pub use regularity::{
    eps_regularity_sweep, interior_lower_bound_check, lower_bound_thresholds, scaled_probe_set, BallVerdict,
    EpsRegularityProbe, LowerBoundBall, LowerBoundProbe, ProbeSpec, EPSILON_ZERO_SURROGATE, REGULARITY_CONSTANT,
};
pub use sphere::fibonacci_directions;
pub use tail::{asymptotic_tail_fit, higgs_derivative_l2_sq, TailFit};
pub use zeros::{degree, find_zeros, hausdorff_distance, Aabb, DegreeResult, ZeroSearch};
