//! Orbit relations and the arithmetic degree.

use std::cmp::Ordering;

use num_bigint::BigInt;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::heights::{height_sequence, TorusPoint};
use crate::linalg::{integral_charpoly, max_invariant_subspace, restrict_operator, saturate, IntMatrix, Lattice, Subspace};
use crate::par::Execution;
use crate::poly::{factor_over_z, root_radius, IntPoly, RootRadius, DEFAULT_PRECISION};

/// Saturated lattice of characters `e` with `e · A^n v_p(P) = 0` for every
/// prime `p` and every `n ≥ 0`.
pub fn orbit_relation_lattice(a: &IntMatrix, p: &TorusPoint) -> Result<Lattice> {
    let n = a.nrows();
    if p.dim() != n {
        return Err(Error::DimensionMismatch { expected: n, found: p.dim() });
    }
    let profile = p.log_profile()?;
    let w = Subspace::span_int(n, profile.valuations())?;
    let v = max_invariant_subspace(&a.transpose(), &w.perp())?;
    Ok(saturate(&v))
}

/// Tail-window statistics of `h_n^{1/n}`.
#[derive(Clone, Debug)]
pub struct AlphaEstimate {
    pub value: f64,
    pub window: (usize, usize),
    /// `h_n^{1/n}` for `n = 1..=n_max`.
    pub roots: Vec<f64>,
}

#[derive(Clone, Debug)]
pub struct ArithmeticDegreeReport {
    pub alpha: RootRadius,
    pub relation_lattice: Lattice,
    /// Characteristic polynomial of `A` on `L^⊥`.
    pub restricted_charpoly: IntPoly,
    /// Irreducible factor of the restricted polynomial whose radius is `α`.
    pub realizing_factor: Option<IntPoly>,
    pub numeric_estimate: Option<AlphaEstimate>,
}

impl ArithmeticDegreeReport {
    pub fn to_json(&self) -> Value {
        let mut v = json!({
            "alpha": self.alpha.to_json(),
            "relation_lattice": self.relation_lattice.to_json(),
            "restricted_charpoly": self.restricted_charpoly.to_string(),
            "realizing_factor": self.realizing_factor.as_ref().map(|f| f.to_string()),
        });
        if let Some(e) = &self.numeric_estimate {
            v["numeric_estimate"] = json!({
                "value": crate::jsonfmt::float(e.value),
                "window": [e.window.0, e.window.1],
            });
        }
        v
    }
}

/// `α_φ(P) = ρ(A|_{L^⊥})`, or `1` when the relation lattice is everything.
pub fn exact_arithmetic_degree(a: &IntMatrix, p: &TorusPoint) -> Result<ArithmeticDegreeReport> {
    let lattice = orbit_relation_lattice(a, p)?;
    if lattice.is_full() {
        return Ok(ArithmeticDegreeReport {
            alpha: RootRadius::one(),
            relation_lattice: lattice,
            restricted_charpoly: IntPoly::one(),
            realizing_factor: None,
            numeric_estimate: None,
        });
    }
    let complement = lattice.span().perp();
    let restricted = restrict_operator(a, &complement)?;
    let cp = integral_charpoly(&restricted)?;
    let alpha = root_radius(&cp, DEFAULT_PRECISION)?;
    let mut realizing_factor = None;
    for (f, _) in factor_over_z(&cp)?.factors() {
        if root_radius(f, DEFAULT_PRECISION)?.compare(&alpha)? == Ordering::Equal {
            realizing_factor = Some(f.clone());
            break;
        }
    }
    Ok(ArithmeticDegreeReport { alpha, relation_lattice: lattice, restricted_charpoly: cp, realizing_factor, numeric_estimate: None })
}

/// Every value the arithmetic degree can take for `φ_A`: `1` and the radii of
/// the irreducible factors of the characteristic polynomial, ascending and
/// without repeats.
pub fn arithmetic_degree_spectrum(a: &IntMatrix) -> Result<Vec<RootRadius>> {
    let mut out = vec![RootRadius::one()];
    for (f, _) in factor_over_z(&a.charpoly()?)?.factors() {
        let r = root_radius(f, DEFAULT_PRECISION)?;
        let mut pos = out.len();
        let mut dup = false;
        for (i, s) in out.iter().enumerate() {
            match r.compare(s)? {
                Ordering::Equal => {
                    dup = true;
                    break;
                }
                Ordering::Less => {
                    pos = i;
                    break;
                }
                Ordering::Greater => {}
            }
        }
        if !dup {
            out.insert(pos, r);
        }
    }
    Ok(out)
}

/// Largest `h_n^{1/n}` over `n ∈ [⌈3 n_max / 4⌉, n_max]`. Biased low as a
/// limsup proxy when the orbit height has a sub-exponential factor below one.
/// A window of exactly zero heights reports `1`, matching the convention for
/// preperiodic points.
pub fn estimate_arithmetic_degree(a: &IntMatrix, p: &TorusPoint, n_max: usize, exec: Execution) -> Result<AlphaEstimate> {
    if n_max < 8 {
        return Err(Error::InvalidInput(format!("n_max must be at least 8, got {n_max}")));
    }
    let seq = height_sequence(a, &p.log_profile()?, n_max, exec)?;
    let roots: Vec<f64> = (1..=n_max).map(|n| seq.values[n].max(0.0).powf(1.0 / n as f64)).collect();
    let start = (3 * n_max).div_ceil(4);
    let value = if (start..=n_max).all(|n| seq.exact(n).is_zero()) {
        1.0
    } else {
        roots[start - 1..].iter().copied().fold(0.0, f64::max)
    };
    Ok(AlphaEstimate { value, window: (start, n_max), roots })
}

/// Checks that each basis relation `e` of `lattice` satisfies `|∏ x_i^{e_i}| = 1`.
pub fn relations_hold(lattice: &Lattice, p: &TorusPoint) -> Result<bool> {
    let profile = p.log_profile()?;
    Ok(lattice
        .basis()
        .iter()
        .all(|e| profile.valuations().iter().all(|v| e.iter().zip(v).map(|(x, y)| x * y).sum::<BigInt>() == BigInt::from(0))))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diag23() -> IntMatrix {
        IntMatrix::from_i64(&[&[2, 0], &[0, 3]])
    }

    fn pt(c: &[i64]) -> TorusPoint {
        TorusPoint::from_i64(c).unwrap()
    }

    #[test]
    fn relation_lattices() {
        let l = orbit_relation_lattice(&diag23(), &pt(&[2, 1])).unwrap();
        assert_eq!(l.basis(), &[vec![BigInt::from(0), BigInt::from(1)]]);
        assert_eq!(orbit_relation_lattice(&diag23(), &pt(&[2, 3])).unwrap().rank(), 0);
        assert!(orbit_relation_lattice(&diag23(), &pt(&[1, 1])).unwrap().is_full());
    }

    #[test]
    fn exact_degrees() {
        let r = exact_arithmetic_degree(&diag23(), &pt(&[2, 1])).unwrap();
        assert!(r.alpha.is_exactly(2));
        assert_eq!(r.realizing_factor, Some(IntPoly::from_i64s(&[-2, 1])));
        assert!(exact_arithmetic_degree(&diag23(), &pt(&[7, 1])).unwrap().alpha.is_exactly(2));
        assert!(exact_arithmetic_degree(&diag23(), &pt(&[1, -1])).unwrap().alpha.is_exactly(1));
    }

    #[test]
    fn estimates() {
        let e = estimate_arithmetic_degree(&diag23(), &pt(&[2, 3]), 40, Execution::Parallel).unwrap();
        assert!((e.value - 3.0).abs() < 0.05);
        let fib = IntMatrix::from_i64(&[&[0, 1], &[1, 1]]);
        let e = estimate_arithmetic_degree(&fib, &pt(&[2, 3]), 40, Execution::Sequential).unwrap();
        assert!((e.value - 1.618_033_988_75).abs() < 0.05);
        let id = estimate_arithmetic_degree(&IntMatrix::identity(2), &pt(&[2, 3]), 16, Execution::Sequential).unwrap();
        assert!(id.value < 1.01);
        assert!(estimate_arithmetic_degree(&fib, &pt(&[2, 3]), 4, Execution::Sequential).is_err());
        let torsion = estimate_arithmetic_degree(&fib, &pt(&[-1, 1]), 16, Execution::Sequential).unwrap();
        assert_eq!(torsion.value, 1.0);
    }

    #[test]
    fn spectrum() {
        let s = arithmetic_degree_spectrum(&diag23()).unwrap();
        assert_eq!(s.len(), 3);
        assert!(s[0].is_exactly(1) && s[1].is_exactly(2) && s[2].is_exactly(3));
        let unip = arithmetic_degree_spectrum(&IntMatrix::from_i64(&[&[1, 1], &[0, 1]])).unwrap();
        assert_eq!(unip.len(), 1);
    }
}
