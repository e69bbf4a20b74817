//! Curves in `U(n)` described by their right logarithmic derivative, the
//! Finsler length and geodesics of the operator-norm metric, and the unit
//! sphere the group acts on.

mod curve;
mod sphere;

pub use curve::{
    center_curve, curve_length, curve_length_with_steps, evolve, evolve_centered,
    geodesic_between, EvolutionResult, GeneratorCurve, Geodesic, Segment, SegmentKind,
    DEFAULT_STEPS,
};
pub use sphere::{
    gauss_lemma_check, norming_functional, orbit_map, sphere_distance, UnitVector,
};
