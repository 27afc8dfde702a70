//! Arithmetic degrees, canonical heights and orbit classification.

mod canonical;
mod generic;
mod preperiodic;
mod relation;

pub use canonical::{
    certify_positive_height, decide_positive_height, estimate_canonical_height, CanonicalHeightEstimate,
    PositivityVerdict, ResidueClassLimits, WindowStats, MAX_PERIOD,
};
pub use generic::{
    affine_height_integer, parse_affine_point, two_sided_height_estimate, GenericMap, GenericOrbit,
    DEFAULT_GENERIC_BUDGET_BITS,
};
pub use preperiodic::{is_preperiodic, PreperiodicMethod, PreperiodicResult, DEFAULT_CYCLE_CAP};
pub use relation::{
    arithmetic_degree_spectrum, estimate_arithmetic_degree, exact_arithmetic_degree, orbit_relation_lattice,
    relations_hold, AlphaEstimate, ArithmeticDegreeReport,
};
