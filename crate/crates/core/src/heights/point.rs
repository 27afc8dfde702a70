use std::collections::BTreeMap;
use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_prime::nt_funcs::{factorize128, factors};
use num_prime::FactorizationConfig;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::{json, Value};

use super::logs::LogLinear;
use crate::error::{Error, Result};
use crate::linalg::IntMatrix;

/// A point of `G_m^N(Q)`: every coordinate a nonzero rational.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TorusPoint {
    coords: Vec<BigRational>,
}

impl TorusPoint {
    pub fn new(coords: Vec<BigRational>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::InvalidInput("point has no coordinates".into()));
        }
        if let Some(index) = coords.iter().position(Zero::is_zero) {
            return Err(Error::ZeroCoordinate { index });
        }
        Ok(TorusPoint { coords })
    }

    pub fn from_i64(coords: &[i64]) -> Result<Self> {
        Self::new(coords.iter().map(|&c| BigRational::from_integer(c.into())).collect())
    }

    /// `2/3,5,-1` or `{"coords":["2/3","5","-1"]}`.
    pub fn parse(s: &str) -> Result<Self> {
        let t = s.trim();
        if t.starts_with('{') {
            let v: Value = serde_json::from_str(t).map_err(|e| Error::Parse(e.to_string()))?;
            return Self::from_json(&v);
        }
        let coords = t.split(',').map(parse_rational).collect::<Result<Vec<_>>>()?;
        Self::new(coords)
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let arr = v
            .get("coords")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse("expected {\"coords\": [...]}".into()))?;
        let coords = arr
            .iter()
            .map(|c| match c {
                Value::String(s) => parse_rational(s),
                Value::Number(n) => parse_rational(&n.to_string()),
                _ => Err(Error::Parse(format!("bad coordinate {c}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(coords)
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[BigRational] {
        &self.coords
    }

    /// All coordinates are `±1`, i.e. the point is torsion.
    pub fn is_torsion(&self) -> bool {
        self.coords.iter().all(|c| c.abs().is_one())
    }

    pub fn is_identity(&self) -> bool {
        self.coords.iter().all(One::is_one)
    }

    /// `φ_A(P)`, computed exactly.
    pub fn apply_monomial(&self, a: &IntMatrix) -> Result<TorusPoint> {
        let image = MonomialImage::of(self, a)?;
        let coords = (0..image.exps.len())
            .map(|i| {
                let (num, den) = image.split(i, None);
                // numerator and denominator are built from disjoint coprime factors
                BigRational::new_raw(num * &image.signs[i], den)
            })
            .collect();
        TorusPoint::new(coords)
    }

    pub fn log_profile(&self) -> Result<PlaceLogProfile> {
        PlaceLogProfile::of(self)
    }

    /// Exact Weil height of `[1 : x_1 : … : x_N]`.
    pub fn weil_height(&self) -> Result<LogLinear> {
        self.log_profile()?.height()
    }

    pub fn to_json(&self) -> Value {
        json!({ "coords": self.coords.iter().map(|c| c.to_string()).collect::<Vec<_>>() })
    }
}

impl fmt::Display for TorusPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(|c| c.to_string()).collect();
        write!(f, "({})", parts.join(", "))
    }
}

impl fmt::Debug for TorusPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TorusPoint{self}")
    }
}

pub(crate) fn parse_rational(s: &str) -> Result<BigRational> {
    let t = s.trim().replace('\u{2212}', "-");
    let bad = || Error::Parse(format!("bad rational '{}'", s.trim()));
    let (n, d) = match t.split_once('/') {
        Some((n, d)) => (n.trim().parse::<BigInt>().map_err(|_| bad())?, d.trim().parse::<BigInt>().map_err(|_| bad())?),
        None => (t.parse::<BigInt>().map_err(|_| bad())?, BigInt::one()),
    };
    if d.is_zero() {
        return Err(Error::Parse(format!("zero denominator in '{}'", s.trim())));
    }
    Ok(BigRational::new(n, d))
}

/// `x^e` for a nonzero rational and any integer exponent.
/// `φ_A(P)` written over a gcd-free base of the coordinates of `P`: output
/// coordinate `i` is `signs[i] · ∏_b b^{exps[i][b]}`. Big powers are only ever
/// multiplied, never reduced, so no large gcd is needed.
pub(crate) struct MonomialImage {
    pub base: Vec<BigInt>,
    pub exps: Vec<Vec<BigInt>>,
    pub signs: Vec<BigInt>,
}

impl MonomialImage {
    pub fn of(p: &TorusPoint, a: &IntMatrix) -> Result<Self> {
        if a.ncols() != p.dim() {
            return Err(Error::DimensionMismatch { expected: a.ncols(), found: p.dim() });
        }
        let parts: Vec<BigInt> = p.coords.iter().flat_map(|c| [c.numer().abs(), c.denom().clone()]).collect();
        let base = coprime_base(&parts);
        // exponent of each base element in each input coordinate
        let input: Vec<Vec<BigInt>> = p
            .coords
            .iter()
            .map(|c| {
                let (mut num, mut den) = (c.numer().abs(), c.denom().clone());
                let v = base.iter().map(|b| BigInt::from(strip_prime(&mut num, b)) - BigInt::from(strip_prime(&mut den, b))).collect();
                debug_assert!(num.is_one() && den.is_one());
                v
            })
            .collect();
        let mut exps = Vec::with_capacity(a.nrows());
        let mut signs = Vec::with_capacity(a.nrows());
        for i in 0..a.nrows() {
            let row = a.row(i);
            exps.push((0..base.len()).map(|k| row.iter().zip(&input).map(|(e, v)| e * &v[k]).sum()).collect());
            let odd = row.iter().zip(&p.coords).filter(|(e, c)| c.is_negative() && e.is_odd()).count();
            signs.push(if odd % 2 == 1 { -BigInt::one() } else { BigInt::one() });
        }
        Ok(MonomialImage { base, exps, signs })
    }

    /// `∏ b^{e_b}` for non-negative exponents.
    pub fn power_product(&self, e: &[BigInt]) -> BigInt {
        self.base.iter().zip(e).fold(BigInt::one(), |acc, (b, k)| {
            acc * num_traits::pow(b.clone(), k.to_usize().expect("exponent fits in usize"))
        })
    }

    /// `(|numerator|, denominator)` of coordinate `i`, each multiplied by
    /// `∏ b^{shift_b}` when a shift is given.
    pub fn split(&self, i: usize, shift: Option<&[BigInt]>) -> (BigInt, BigInt) {
        let mut num = BigInt::one();
        let mut den = BigInt::one();
        for (k, b) in self.base.iter().enumerate() {
            let e = &self.exps[i][k] + shift.map_or_else(BigInt::zero, |s| s[k].clone());
            let k = e.abs().to_usize().expect("exponent fits in usize");
            if e.is_positive() {
                num *= num_traits::pow(b.clone(), k);
            } else if e.is_negative() {
                den *= num_traits::pow(b.clone(), k);
            }
        }
        (num, den)
    }
}

/// Pairwise coprime integers `> 1` whose products give every input `> 1`.
pub(crate) fn coprime_base(xs: &[BigInt]) -> Vec<BigInt> {
    let mut base: Vec<BigInt> = Vec::new();
    let mut work: Vec<BigInt> = xs.iter().filter(|x| **x > BigInt::one()).cloned().collect();
    while let Some(y) = work.pop() {
        if y.is_one() {
            continue;
        }
        match base.iter().position(|b| !b.gcd(&y).is_one()) {
            None => base.push(y),
            Some(pos) => {
                let b = base.swap_remove(pos);
                let g = b.gcd(&y);
                work.push(&b / &g);
                work.push(&y / &g);
                work.push(g);
            }
        }
    }
    base.sort();
    base
}

/// Prime factorization of a positive integer.
pub(crate) fn factor_positive(n: &BigInt) -> Result<BTreeMap<BigInt, u64>> {
    assert!(n.is_positive());
    let mut out = BTreeMap::new();
    if n.is_one() {
        return Ok(out);
    }
    if let Some(small) = n.to_u128() {
        for (p, e) in factorize128(small) {
            out.insert(BigInt::from(p), e as u64);
        }
        return Ok(out);
    }
    let mut config = FactorizationConfig::default();
    config.rho_trials = 64;
    let (found, rest) = factors(n.magnitude().clone(), Some(config));
    if let Some(rest) = rest {
        let shown: Vec<String> = rest.iter().map(BigUint::to_string).collect();
        return Err(Error::BudgetExceeded(format!("could not factor {}", shown.join(", "))));
    }
    for (p, e) in found {
        out.insert(BigInt::from_biguint(Sign::Plus, p), e as u64);
    }
    Ok(out)
}

/// Per-place decomposition of a torus point: the valuation vector at every
/// prime that occurs, plus the sign of each coordinate.
///
/// The archimedean log vector is determined by the valuations through
/// `log|x_i| = Σ_p v_p(x_i) log p`, so it is kept exact.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PlaceLogProfile {
    dim: usize,
    primes: Vec<BigInt>,
    valuations: Vec<Vec<BigInt>>,
    signs: Vec<i8>,
}

impl PlaceLogProfile {
    fn of(p: &TorusPoint) -> Result<Self> {
        let n = p.dim();
        let mut table: BTreeMap<BigInt, Vec<BigInt>> = BTreeMap::new();
        for (i, c) in p.coords.iter().enumerate() {
            for (part, sign) in [(c.numer().abs(), 1i64), (c.denom().clone(), -1)] {
                for (q, e) in factor_positive(&part)? {
                    let row = table.entry(q).or_insert_with(|| vec![BigInt::zero(); n]);
                    row[i] += BigInt::from(e) * sign;
                }
            }
        }
        let signs = p.coords.iter().map(|c| crate::linalg::sign_i8(c.numer())).collect();
        let (primes, valuations) = table.into_iter().unzip();
        Ok(PlaceLogProfile { dim: n, primes, valuations, signs })
    }

    /// Build directly from valuation vectors (one per prime) and signs.
    pub fn from_parts(primes: Vec<BigInt>, valuations: Vec<Vec<BigInt>>, signs: Vec<i8>) -> Result<Self> {
        let dim = signs.len();
        if primes.len() != valuations.len() {
            return Err(Error::DimensionMismatch { expected: primes.len(), found: valuations.len() });
        }
        if let Some(v) = valuations.iter().find(|v| v.len() != dim) {
            return Err(Error::DimensionMismatch { expected: dim, found: v.len() });
        }
        Ok(PlaceLogProfile { dim, primes, valuations, signs })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn primes(&self) -> &[BigInt] {
        &self.primes
    }

    /// `v_p(x_1), …, v_p(x_N)` for each prime, in the order of [`primes`](Self::primes).
    pub fn valuations(&self) -> &[Vec<BigInt>] {
        &self.valuations
    }

    pub fn valuation(&self, p: &BigInt) -> Option<&[BigInt]> {
        self.primes.iter().position(|q| q == p).map(|i| self.valuations[i].as_slice())
    }

    pub fn signs(&self) -> &[i8] {
        &self.signs
    }

    /// `log|x_i|` for every coordinate, exact.
    pub fn arch(&self) -> Vec<LogLinear> {
        arch_logs(&self.primes, &self.valuations, self.dim)
    }

    pub fn arch_f64(&self) -> Vec<f64> {
        self.arch().iter().map(LogLinear::to_f64).collect()
    }

    /// Non-archimedean contribution `Σ_p log p · maxplus(-v_p)`.
    pub fn finite_height(&self) -> LogLinear {
        finite_part(&self.primes, &self.valuations)
    }

    pub fn arch_height(&self) -> Result<LogLinear> {
        LogLinear::maxplus(&self.arch())
    }

    pub fn height(&self) -> Result<LogLinear> {
        Ok(self.finite_height().add(&self.arch_height()?))
    }

    pub fn to_json(&self) -> Value {
        let finite: serde_json::Map<String, Value> = self
            .primes
            .iter()
            .zip(&self.valuations)
            .map(|(p, v)| (p.to_string(), Value::Array(v.iter().map(crate::jsonfmt::int).collect())))
            .collect();
        json!({
            "finite": finite,
            "arch": self.arch_f64().into_iter().map(crate::jsonfmt::float).collect::<Vec<_>>(),
            "signs": self.signs,
        })
    }
}

pub(crate) fn arch_logs(primes: &[BigInt], vals: &[Vec<BigInt>], dim: usize) -> Vec<LogLinear> {
    (0..dim)
        .map(|i| {
            let mut l = LogLinear::zero();
            for (p, v) in primes.iter().zip(vals) {
                l.add_term(p, &BigRational::from_integer(v[i].clone()));
            }
            l
        })
        .collect()
}

pub(crate) fn finite_part(primes: &[BigInt], vals: &[Vec<BigInt>]) -> LogLinear {
    let mut l = LogLinear::zero();
    for (p, v) in primes.iter().zip(vals) {
        let m = v.iter().map(|x| -x).max().unwrap_or_default().max(BigInt::zero());
        l.add_term(p, &BigRational::from_integer(m));
    }
    l
}

/// Factor a positive rational over a known set of primes into `Σ c_p log p`.
/// Panics if another prime divides it.
pub(crate) fn log_over(primes: &[BigInt], x: &BigRational) -> LogLinear {
    let mut out = LogLinear::zero();
    for (part, sign) in [(x.numer().abs(), 1i64), (x.denom().clone(), -1)] {
        let mut rest = part;
        for p in primes {
            let e = strip_prime(&mut rest, p);
            out.add_term(p, &BigRational::from_integer(BigInt::from(e) * sign));
        }
        assert!(rest.is_one(), "value has a prime factor outside the given set");
    }
    out
}

/// Divide out every factor `p` from `n` and return how many there were.
/// Works with `p^(2^k)` so huge valuations cost a logarithmic number of
/// divisions.
fn strip_prime(n: &mut BigInt, p: &BigInt) -> u64 {
    if n.is_zero() {
        return 0;
    }
    if p == &BigInt::from(2) {
        let tz = n.trailing_zeros().unwrap_or(0);
        *n >>= tz;
        return tz;
    }
    let mut e = 0u64;
    let mut pows = vec![p.clone()];
    loop {
        let last = pows.last().expect("non-empty");
        let (q, r) = n.div_rem(last);
        if !r.is_zero() {
            break;
        }
        *n = q;
        e += 1 << (pows.len() - 1);
        let sq = last * last;
        if sq.bits() > n.bits() {
            break;
        }
        pows.push(sq);
    }
    for (k, pk) in pows.iter().enumerate().rev() {
        let (q, r) = n.div_rem(pk);
        if r.is_zero() {
            *n = q;
            e += 1 << k;
        }
    }
    e
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(x: i64) -> BigInt {
        BigInt::from(x)
    }

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn coprime_bases() {
        let base = coprime_base(&[b(12), b(18), b(35), b(1)]);
        assert_eq!(base, vec![b(2), b(3), b(35)]);
        let base = coprime_base(&[b(6), b(10), b(15)]);
        assert_eq!(base, vec![b(2), b(3), b(5)]);
        // no factorization: 101·103 and 4 stay whole until something splits them
        assert_eq!(coprime_base(&[b(101 * 103), b(4)]), vec![b(4), b(101 * 103)]);
        assert_eq!(coprime_base(&[b(4), b(6)]), vec![b(2), b(3)]);
    }

    #[test]
    fn apply_monomial_reduces() {
        let p = TorusPoint::parse("2/3, 3/4, -5").unwrap();
        let a = IntMatrix::from_i64(&[&[1, 1, 0], &[0, -2, 1], &[2, 0, 3]]);
        let img = p.apply_monomial(&a).unwrap();
        assert_eq!(img, TorusPoint::parse("1/2, -80/9, -500/9").unwrap());
    }

    #[test]
    fn strip_prime_large_valuations() {
        for (p, e) in [(3i64, 1u64), (3, 1000), (7, 12345), (2, 777), (10007, 37)] {
            let mut n = BigInt::from(p).pow(e as u32) * b(11 * 13);
            assert_eq!(strip_prime(&mut n, &b(p)), e);
            assert_eq!(n, b(143));
        }
        let mut one = b(1);
        assert_eq!(strip_prime(&mut one, &b(5)), 0);
    }

    #[test]
    fn profile_of_small_points() {
        let p = TorusPoint::parse("2/3, 5").unwrap();
        let prof = p.log_profile().unwrap();
        assert_eq!(prof.primes(), &[b(2), b(3), b(5)]);
        assert_eq!(prof.valuation(&b(3)).unwrap(), &[b(-1), b(0)]);
        let h = p.weil_height().unwrap();
        assert_eq!(h, LogLinear::int_term(&b(3), &b(1)).add(&LogLinear::int_term(&b(5), &b(1))));

        let t = TorusPoint::parse("-1, 1/2").unwrap().log_profile().unwrap();
        assert_eq!(t.signs(), &[-1, 1]);
        assert_eq!(t.valuation(&b(2)).unwrap(), &[b(0), b(-1)]);
        assert!(TorusPoint::parse("1,1").unwrap().weil_height().unwrap().is_zero());
        assert_eq!(TorusPoint::parse("-7,1").unwrap().weil_height().unwrap().to_string(), "log 7");
    }

    #[test]
    fn zero_and_bad_input() {
        assert_eq!(TorusPoint::parse("1,0"), Err(Error::ZeroCoordinate { index: 1 }));
        assert!(TorusPoint::parse("1/0").is_err());
        assert!(TorusPoint::parse("x").is_err());
        let j = TorusPoint::parse(r#"{"coords":["2/3", 5, "-1"]}"#).unwrap();
        assert_eq!(j, TorusPoint::parse("2/3,5,-1").unwrap());
    }

    #[test]
    fn monomial_action() {
        let a = IntMatrix::from_i64(&[&[0, 1], &[1, 1]]);
        let p = TorusPoint::from_i64(&[2, 3]).unwrap();
        assert_eq!(p.apply_monomial(&a).unwrap(), TorusPoint::from_i64(&[3, 6]).unwrap());
        let inv = TorusPoint::new(vec![BigRational::new(1.into(), 2.into())]).unwrap();
        let m = IntMatrix::from_i64(&[&[-3]]);
        assert_eq!(inv.apply_monomial(&m).unwrap().coords(), &[q(8)]);
    }

    #[test]
    fn large_coordinates_factor() {
        let n = BigInt::from(1_000_003u64) * BigInt::from(998_244_353u64) * BigInt::from(2u64).pow(70);
        let f = factor_positive(&n).unwrap();
        assert_eq!(f[&b(2)], 70);
        assert_eq!(f[&b(998_244_353)], 1);
    }
}
