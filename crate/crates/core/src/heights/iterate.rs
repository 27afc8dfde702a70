//! Heights along monomial orbits from valuation vectors alone.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::{json, Value};

use super::logs::{ln_bigint, LogLinear};
use super::point::{arch_logs, finite_part, log_over, MonomialImage, PlaceLogProfile, TorusPoint};
use crate::error::{Error, Result};
use crate::linalg::IntMatrix;
use crate::par::{self, Execution};

/// Default ceiling on the size of coordinates the direct oracle will build.
pub const DEFAULT_ORACLE_BUDGET_BITS: u64 = 1 << 24;

/// `h(φ^n(P))` split into its exact finite and archimedean parts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IterateHeight {
    pub finite: LogLinear,
    pub arch: LogLinear,
}

impl IterateHeight {
    pub fn total(&self) -> LogLinear {
        self.finite.add(&self.arch)
    }
}

fn height_from_valuations(primes: &[BigInt], vals: &[Vec<BigInt>], dim: usize) -> Result<IterateHeight> {
    let finite = finite_part(primes, vals);
    let arch = LogLinear::maxplus(&arch_logs(primes, vals, dim))?;
    Ok(IterateHeight { finite, arch })
}

fn check_square(a: &IntMatrix, dim: usize) -> Result<()> {
    if !a.is_square() || a.nrows() != dim {
        return Err(Error::DimensionMismatch { expected: dim, found: a.nrows() });
    }
    if a.det()?.is_zero() {
        return Err(Error::SingularMatrix);
    }
    Ok(())
}

/// `h(φ_A^n(P))` via `v_p(φ_A^n(P)) = A^n v_p(P)`; the iterate itself is never
/// formed.
pub fn iterate_height(a: &IntMatrix, profile: &PlaceLogProfile, n: u64) -> Result<IterateHeight> {
    check_square(a, profile.dim())?;
    let an = a.pow(n);
    let vals: Vec<Vec<BigInt>> = profile.valuations().iter().map(|v| an.mul_vec(v)).collect();
    height_from_valuations(profile.primes(), &vals, profile.dim())
}

/// `h(φ^n(P))` for `n = 0..=n_max`.
#[derive(Clone, Debug)]
pub struct HeightSequence {
    pub values: Vec<f64>,
    pub finite: Vec<LogLinear>,
    pub arch: Vec<LogLinear>,
    /// Fixed-point bits behind each float in `values`.
    pub precision_bits: u32,
}

impl HeightSequence {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn exact(&self, n: usize) -> LogLinear {
        self.finite[n].add(&self.arch[n])
    }

    pub fn to_json(&self) -> Value {
        json!({
            "values": self.values.iter().map(|&v| crate::jsonfmt::float(v)).collect::<Vec<_>>(),
            "exact": (0..self.len()).map(|n| self.exact(n).to_string()).collect::<Vec<_>>(),
            "precision_bits": self.precision_bits,
        })
    }
}

/// Height sequence of a monomial orbit. The valuation vectors are pushed
/// forward sequentially (cheap); the exact maxplus decisions, which dominate,
/// run per iterate under `exec`.
pub fn height_sequence(a: &IntMatrix, profile: &PlaceLogProfile, n_max: usize, exec: Execution) -> Result<HeightSequence> {
    check_square(a, profile.dim())?;
    let mut steps: Vec<Vec<Vec<BigInt>>> = Vec::with_capacity(n_max + 1);
    steps.push(profile.valuations().to_vec());
    for n in 1..=n_max {
        let next = steps[n - 1].iter().map(|v| a.mul_vec(v)).collect();
        steps.push(next);
    }
    let parts = par::map_slice(exec, &steps, |vals| height_from_valuations(profile.primes(), vals, profile.dim()));
    let mut finite = Vec::with_capacity(parts.len());
    let mut arch = Vec::with_capacity(parts.len());
    for p in parts {
        let p = p?;
        finite.push(p.finite);
        arch.push(p.arch);
    }
    let coeff_bits = finite.iter().chain(&arch).map(LogLinear::coeff_bits).max().unwrap_or(0);
    let precision_bits = 64 + coeff_bits as u32 + (usize::BITS - n_max.leading_zeros());
    let values = finite
        .iter()
        .zip(&arch)
        .map(|(f, r)| f.add(r).to_rational(precision_bits).to_f64().unwrap_or(f64::NAN))
        .collect();
    Ok(HeightSequence { values, finite, arch, precision_bits })
}

/// Result of iterating a point by brute force.
#[derive(Clone, Debug)]
pub struct DirectOrbit {
    pub point: TorusPoint,
    /// Common denominator `D` of the coordinates.
    pub denominator: BigInt,
    /// `max(D, |D x_i|)`, the height's integer.
    pub max_coordinate: BigInt,
    pub finite: LogLinear,
    pub arch: LogLinear,
}

impl DirectOrbit {
    pub fn height_f64(&self) -> f64 {
        ln_bigint(&self.max_coordinate)
    }
}

/// `φ_A^n(P)` by exact exponentiation, refusing when the result would exceed
/// `budget_bits` in total numerator and denominator size.
pub fn direct_orbit_oracle(a: &IntMatrix, p: &TorusPoint, n: u64, budget_bits: u64) -> Result<DirectOrbit> {
    check_square(a, p.dim())?;
    let an = a.pow(n);
    let sizes: Vec<u64> = p.coords().iter().map(|c| c.numer().bits() + c.denom().bits()).collect();
    let mut estimate = BigInt::zero();
    for i in 0..an.nrows() {
        for (e, s) in an.row(i).iter().zip(&sizes) {
            estimate += e.abs() * s;
        }
    }
    if estimate > BigInt::from(budget_bits) {
        return Err(Error::BudgetExceeded(format!("direct orbit needs about {estimate} bits, budget is {budget_bits}")));
    }
    let image = MonomialImage::of(p, &an)?;
    let point = p.apply_monomial(&an)?;
    // D = ∏ b^{d_b} with d_b the largest denominator exponent of b
    let shift: Vec<BigInt> = (0..image.base.len())
        .map(|k| image.exps.iter().map(|e| -&e[k]).fold(BigInt::zero(), |m, v| if v > m { v } else { m }))
        .collect();
    let denominator = image.power_product(&shift);
    let mut max_coordinate = denominator.clone();
    for i in 0..image.exps.len() {
        let (v, rest) = image.split(i, Some(&shift));
        debug_assert!(rest.is_one());
        if v > max_coordinate {
            max_coordinate = v;
        }
    }
    let primes = p.log_profile()?.primes().to_vec();
    let finite = log_over(&primes, &BigRational::from_integer(denominator.clone()));
    let arch = log_over(&primes, &BigRational::from_integer(max_coordinate.clone())).sub(&finite);
    Ok(DirectOrbit { point, denominator, max_coordinate, finite, arch })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(x: i64) -> BigInt {
        BigInt::from(x)
    }

    fn log(p: i64, c: i64) -> LogLinear {
        LogLinear::int_term(&b(p), &b(c))
    }

    #[test]
    fn diagonal_iterates() {
        let a = IntMatrix::from_i64(&[&[2, 0], &[0, 3]]);
        let prof = TorusPoint::from_i64(&[2, 3]).unwrap().log_profile().unwrap();
        assert_eq!(iterate_height(&a, &prof, 4).unwrap().total(), log(3, 81));
        let seq = height_sequence(&a, &prof, 3, Execution::Parallel).unwrap();
        let want: Vec<LogLinear> = [1, 3, 9, 27].iter().map(|&c| log(3, c)).collect();
        assert_eq!((0..4).map(|n| seq.exact(n)).collect::<Vec<_>>(), want);
    }

    #[test]
    fn fibonacci_iterate_matches_hand_orbit() {
        let a = IntMatrix::from_i64(&[&[0, 1], &[1, 1]]);
        let p = TorusPoint::from_i64(&[2, 3]).unwrap();
        // (3,6), (6,18), (18,108)
        let h = iterate_height(&a, &p.log_profile().unwrap(), 3).unwrap().total();
        assert_eq!(h, log(2, 2).add(&log(3, 3)));
        let d = direct_orbit_oracle(&a, &p, 3, DEFAULT_ORACLE_BUDGET_BITS).unwrap();
        assert_eq!(d.max_coordinate, b(108));
    }

    #[test]
    fn oracle_examples() {
        let p = TorusPoint::from_i64(&[2, 3]).unwrap();
        let diag = IntMatrix::from_i64(&[&[2, 0], &[0, 3]]);
        let d = direct_orbit_oracle(&diag, &p, 2, DEFAULT_ORACLE_BUDGET_BITS).unwrap();
        assert_eq!(d.point, TorusPoint::from_i64(&[16, 19683]).unwrap());
        assert_eq!(d.arch, log(3, 9));

        let neg = IntMatrix::from_i64(&[&[-2, 0], &[0, -2]]);
        let d = direct_orbit_oracle(&neg, &p, 1, DEFAULT_ORACLE_BUDGET_BITS).unwrap();
        assert_eq!(d.max_coordinate, b(36));
        assert_eq!(d.finite, log(2, 2).add(&log(3, 2)));
        assert!(d.arch.is_zero());

        let id = IntMatrix::identity(2);
        assert_eq!(direct_orbit_oracle(&id, &p, 5, 64).unwrap().point, p);
        assert!(matches!(direct_orbit_oracle(&diag, &p, 40, 1 << 20), Err(Error::BudgetExceeded(_))));
    }

    #[test]
    fn alternating_heights() {
        let a = IntMatrix::from_i64(&[&[-2, 0], &[0, -2]]);
        let prof = TorusPoint::from_i64(&[2, 3]).unwrap().log_profile().unwrap();
        let seq = height_sequence(&a, &prof, 6, Execution::Sequential).unwrap();
        for n in 0..=6usize {
            let k = 1i64 << n;
            let want = if n % 2 == 0 { log(3, k) } else { log(2, k).add(&log(3, k)) };
            assert_eq!(seq.exact(n), want, "n = {n}");
        }
    }

    #[test]
    fn singular_rejected() {
        let a = IntMatrix::from_i64(&[&[1, 1], &[1, 1]]);
        let prof = TorusPoint::from_i64(&[2, 3]).unwrap().log_profile().unwrap();
        assert_eq!(iterate_height(&a, &prof, 1), Err(Error::SingularMatrix));
    }
}
