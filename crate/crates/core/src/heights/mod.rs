//! Weil heights of rational torus points and of their monomial iterates.

mod iterate;
mod logs;
mod point;

pub use iterate::{
    direct_orbit_oracle, height_sequence, iterate_height, DirectOrbit, HeightSequence, IterateHeight,
    DEFAULT_ORACLE_BUDGET_BITS,
};
pub use logs::{ln_bigint, ln_fixed, LogLinear};
pub use point::{PlaceLogProfile, TorusPoint};

pub(crate) use point::parse_rational;
