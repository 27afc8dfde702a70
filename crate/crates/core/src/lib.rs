//! Exact dynamical invariants of monomial self-maps of the algebraic torus.
//!
//! The crate is organised bottom-up:
//!
//! * [`linalg`] exact matrices over `Z`/`Q`, canonical subspaces and saturated lattices;
//! * [`poly`] integer polynomials, factorisation over `Z` and certified root radii;
//! * [`monomial`] the monomial map `φ_A`, its degree sequence, spectral profile and
//!   zero-height subgroup;
//! * [`heights`] Weil heights of rational torus points through per-place log vectors;
//! * [`dynamics`] arithmetic degrees, canonical-height estimators and classifiers,
//!   plus a generic rational-map orbit engine.
//!
//! ```
//! use torusdyn::{Execution, IntMatrix, MonomialMap, TorusPoint};
//! use torusdyn::dynamics::exact_arithmetic_degree;
//!
//! let a = IntMatrix::from_i64(&[&[2, 0], &[0, 3]]);
//! let phi = MonomialMap::new(a.clone())?;
//! let degs = phi.degree_sequence(4, Execution::Parallel);
//! assert_eq!(degs[3], 81u32.into());
//! let alpha = exact_arithmetic_degree(&a, &TorusPoint::parse("7,1")?)?.alpha;
//! assert!(alpha.is_exactly(2));
//! # Ok::<(), torusdyn::Error>(())
//! ```

pub mod dynamics;
pub mod error;
pub mod heights;
pub mod jsonfmt;
pub mod linalg;
pub mod monomial;
pub mod par;
pub mod poly;

pub use error::{Error, Result};
pub use par::Execution;

pub use dynamics::{
    ArithmeticDegreeReport, CanonicalHeightEstimate, GenericMap, PositivityVerdict,
    PreperiodicResult,
};
pub use heights::{HeightSequence, LogLinear, PlaceLogProfile, TorusPoint};
pub use linalg::{IntMatrix, Lattice, RatMatrix, Subspace};
pub use monomial::{MonomialMap, SpectralProfile, ZeroHeightGroup};
pub use poly::{FactoredPoly, IntPoly, RootRadius};
