//! Exact linear combinations of logarithms of primes, with rigorous sign
//! decisions through fixed-point natural logarithms.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};

/// Largest fixed-point precision tried before a sign is declared undecided.
const MAX_LOG_BITS: u32 = 1 << 16;

/// `ln(x)` for `x` in `[1, 2)` given as `num / den`, via `2·atanh((x-1)/(x+1))`,
/// in fixed point with `bits` fractional bits. Returns the value and an
/// error bound in units of `2^-bits`.
fn ln_ratio_fixed(num: &BigInt, den: &BigInt, bits: u32) -> (BigInt, BigInt) {
    // z = (num - den) / (num + den) <= 1/3
    let z = ((num - den) << bits) / (num + den);
    if z.is_zero() {
        return (BigInt::zero(), BigInt::one());
    }
    let z2 = (&z * &z) >> bits;
    let mut term = z.clone();
    let mut sum = BigInt::zero();
    let mut k = 1u64;
    let mut steps = 0u64;
    while !term.is_zero() {
        sum += &term / k;
        term = (&term * &z2) >> bits;
        k += 2;
        steps += 1;
    }
    // each truncation loses at most one ulp; the tail below one ulp is bounded
    // by a geometric series with ratio 1/9
    (sum << 1u32, BigInt::from(8 * steps + 16))
}

fn ln2_fixed(bits: u32) -> (BigInt, BigInt) {
    // ln 2 = ln(4/3) + ln(3/2)
    let (a, ea) = ln_ratio_fixed(&BigInt::from(4), &BigInt::from(3), bits);
    let (b, eb) = ln_ratio_fixed(&BigInt::from(3), &BigInt::from(2), bits);
    (a + b, ea + eb)
}

/// `ln(n)` for an integer `n ≥ 1` in fixed point, with an error bound in ulps.
pub fn ln_fixed(n: &BigInt, bits: u32) -> (BigInt, BigInt) {
    assert!(n.is_positive(), "logarithm of a non-positive integer");
    type Cache = Mutex<HashMap<(BigInt, u32), (BigInt, BigInt)>>;
    static CACHE: OnceLock<Cache> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(hit) = cache.lock().expect("log cache poisoned").get(&(n.clone(), bits)) {
        return hit.clone();
    }
    let k = n.bits() - 1;
    let pow = BigInt::one() << k;
    let (lm, em) = ln_ratio_fixed(n, &pow, bits);
    let (l2, e2) = ln2_fixed(bits);
    let out = (lm + &l2 * k, em + e2 * k);
    cache.lock().expect("log cache poisoned").insert((n.clone(), bits), out.clone());
    out
}

/// Natural logarithm of a positive big integer as `f64`, by splitting off a
/// power of two so the mantissa fits a double.
pub fn ln_bigint(n: &BigInt) -> f64 {
    assert!(n.is_positive());
    let bits = n.bits();
    if bits <= 1000 {
        return n.to_f64().expect("fits in f64").ln();
    }
    let shift = bits - 64;
    let top = (n >> shift).to_f64().expect("64-bit mantissa");
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// `Σ c_p · log p` over primes `p` with rational coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct LogLinear {
    terms: BTreeMap<BigInt, BigRational>,
}

impl LogLinear {
    pub fn zero() -> Self {
        Self::default()
    }

    /// `c · log p`.
    pub fn term(p: BigInt, c: BigRational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(p, c);
        }
        LogLinear { terms }
    }

    pub fn int_term(p: &BigInt, c: &BigInt) -> Self {
        Self::term(p.clone(), BigRational::from_integer(c.clone()))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &BTreeMap<BigInt, BigRational> {
        &self.terms
    }

    pub fn coeff(&self, p: &BigInt) -> BigRational {
        self.terms.get(p).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn add_term(&mut self, p: &BigInt, c: &BigRational) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(p.clone()).or_insert_with(BigRational::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(p);
        }
    }

    pub fn add(&self, other: &LogLinear) -> LogLinear {
        let mut out = self.clone();
        for (p, c) in &other.terms {
            out.add_term(p, c);
        }
        out
    }

    pub fn sub(&self, other: &LogLinear) -> LogLinear {
        let mut out = self.clone();
        for (p, c) in &other.terms {
            out.add_term(p, &-c);
        }
        out
    }

    pub fn scale(&self, k: &BigRational) -> LogLinear {
        if k.is_zero() {
            return LogLinear::zero();
        }
        LogLinear { terms: self.terms.iter().map(|(p, c)| (p.clone(), c * k)).collect() }
    }

    /// Value in fixed point with `bits` fractional bits plus an error bound,
    /// both in units of `2^-bits`.
    pub fn eval_fixed(&self, bits: u32) -> (BigInt, BigInt) {
        let mut den_lcm = BigInt::one();
        for c in self.terms.values() {
            den_lcm = num_integer::Integer::lcm(&den_lcm, c.denom());
        }
        let mut acc = BigInt::zero();
        let mut err = BigInt::zero();
        for (p, c) in &self.terms {
            let (l, e) = ln_fixed(p, bits);
            let ci = c.numer() * (&den_lcm / c.denom());
            acc += &ci * l;
            err += ci.abs() * e;
        }
        // divide by the common denominator, losing at most one more ulp
        (acc / &den_lcm, err / &den_lcm + 1)
    }

    /// Rigorous sign; exact zero only for the empty combination, since the
    /// logarithms of distinct primes are linearly independent over `Q`.
    pub fn sign(&self) -> Result<Ordering> {
        if self.is_zero() {
            return Ok(Ordering::Equal);
        }
        let mut bits = 64 + self.coeff_bits() as u32;
        while bits <= MAX_LOG_BITS {
            let (v, e) = self.eval_fixed(bits);
            if v.abs() > e {
                return Ok(if v.is_positive() { Ordering::Greater } else { Ordering::Less });
            }
            bits *= 2;
        }
        Err(Error::Undecided { bits: MAX_LOG_BITS })
    }

    pub fn cmp_exact(&self, other: &LogLinear) -> Result<Ordering> {
        self.sub(other).sign()
    }

    /// Rational approximation within `2^-(bits-1)` (absolute).
    pub fn to_rational(&self, bits: u32) -> BigRational {
        let (v, _) = self.eval_fixed(bits);
        BigRational::new(v, BigInt::one() << bits)
    }

    /// Largest coefficient size in bits.
    pub fn coeff_bits(&self) -> u64 {
        self.terms.values().map(|c| c.numer().bits().max(c.denom().bits())).max().unwrap_or(0)
    }

    pub fn to_f64(&self) -> f64 {
        self.to_rational(64 + self.coeff_bits() as u32).to_f64().unwrap_or(f64::NAN)
    }

    /// Maximum of `0` and the given forms, decided exactly.
    pub fn maxplus(forms: &[LogLinear]) -> Result<LogLinear> {
        let mut best = LogLinear::zero();
        for f in forms {
            if f.cmp_exact(&best)? == Ordering::Greater {
                best = f.clone();
            }
        }
        Ok(best)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "terms": self.terms.iter().map(|(p, c)| json!({
                "p": crate::jsonfmt::int(p),
                "coeff": crate::jsonfmt::rat(c),
            })).collect::<Vec<_>>(),
            "value": crate::jsonfmt::float(self.to_f64()),
        })
    }
}

impl fmt::Display for LogLinear {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (p, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            let a = c.abs();
            if !a.is_one() {
                write!(f, "{a}·")?;
            }
            write!(f, "log {p}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for LogLinear {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LogLinear({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(x: i64) -> BigInt {
        BigInt::from(x)
    }

    fn q(x: i64) -> BigRational {
        BigRational::from_integer(x.into())
    }

    #[test]
    fn fixed_point_logs() {
        for n in [2i64, 3, 5, 7, 1_000_003] {
            let (v, e) = ln_fixed(&b(n), 80);
            let approx = BigRational::new(v, BigInt::one() << 80).to_f64().unwrap();
            assert!((approx - (n as f64).ln()).abs() < 1e-14, "ln {n}");
            assert!(e < b(1 << 16));
        }
        assert_eq!(ln_fixed(&b(1), 64).0, BigInt::zero());
    }

    #[test]
    fn signs_of_close_combinations() {
        // 2^10 = 1024 > 1000 = 2^3 5^3: 7 log 2 - 3 log 5 > 0
        let f = LogLinear::int_term(&b(2), &b(7)).sub(&LogLinear::int_term(&b(5), &b(3)));
        assert_eq!(f.sign().unwrap(), Ordering::Greater);
        // 3^12 = 531441 > 2^19 = 524288
        let g = LogLinear::int_term(&b(3), &b(12)).sub(&LogLinear::int_term(&b(2), &b(19)));
        assert_eq!(g.sign().unwrap(), Ordering::Greater);
        assert_eq!(LogLinear::zero().sign().unwrap(), Ordering::Equal);
    }

    #[test]
    fn maxplus_and_display() {
        let a = LogLinear::term(b(3), q(2));
        let c = LogLinear::term(b(2), q(3));
        // 9 > 8
        assert_eq!(LogLinear::maxplus(&[a.clone(), c]).unwrap(), a);
        assert_eq!(LogLinear::maxplus(&[LogLinear::term(b(2), q(-1))]).unwrap(), LogLinear::zero());
        assert_eq!(a.to_string(), "2·log 3");
    }

    #[test]
    fn ln_of_huge_integers() {
        let n = BigInt::from(10).pow(400);
        assert!((ln_bigint(&n) - 400.0 * 10f64.ln()).abs() < 1e-9);
    }
}
