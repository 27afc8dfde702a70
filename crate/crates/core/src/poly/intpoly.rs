use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Dense univariate polynomial over `Z`, coefficients in ascending degree.
///
/// The coefficient vector never carries trailing zeros; the zero polynomial
/// is the empty vector.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        IntPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigInt::one())
    }

    pub fn constant(c: BigInt) -> Self {
        Self::new(vec![c])
    }

    /// The monomial `c·T^k`.
    pub fn monomial(c: BigInt, k: usize) -> Self {
        let mut v = vec![BigInt::zero(); k + 1];
        v[k] = c;
        Self::new(v)
    }

    /// `T - a`.
    pub fn linear_root(a: BigInt) -> Self {
        IntPoly { coeffs: vec![-a, BigInt::one()] }.normalized()
    }

    fn normalized(self) -> Self {
        Self::new(self.coeffs)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn leading(&self) -> BigInt {
        self.coeffs.last().cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_one()
    }

    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in &self.coeffs {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    /// Primitive part with positive leading coefficient.
    pub fn primitive_part(&self) -> IntPoly {
        if self.is_zero() {
            return IntPoly::zero();
        }
        let mut c = self.content();
        if self.leading().is_negative() {
            c = -c;
        }
        IntPoly::new(self.coeffs.iter().map(|a| a / &c).collect())
    }

    pub fn scale(&self, k: &BigInt) -> IntPoly {
        IntPoly::new(self.coeffs.iter().map(|a| a * k).collect())
    }

    pub fn derivative(&self) -> IntPoly {
        IntPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        )
    }

    pub fn pow(&self, e: u32) -> IntPoly {
        let mut result = IntPoly::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_rational(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + BigRational::from_integer(c.clone());
        }
        acc
    }

    /// Sign of `self(num/den)` for `den > 0`, computed without fractions.
    pub fn sign_at(&self, num: &BigInt, den: &BigInt) -> Ordering {
        if self.is_zero() {
            return Ordering::Equal;
        }
        let mut acc = BigInt::zero();
        let mut den_pow = BigInt::one();
        // Horner in homogeneous form: sum c_i num^i den^(d-i)
        for c in self.coeffs.iter().rev() {
            acc = acc * num + c * &den_pow;
            den_pow *= den;
        }
        acc.sign_ordering()
    }

    /// `T^d · f(1/T)`.
    pub fn reversed(&self) -> IntPoly {
        IntPoly::new(self.coeffs.iter().rev().cloned().collect())
    }

    /// Quotient and remainder when `divisor` is monic or the division is exact
    /// over `Z`. Returns `None` if a non-integral quotient coefficient appears.
    pub fn div_rem_exact(&self, divisor: &IntPoly) -> Option<(IntPoly, IntPoly)> {
        assert!(!divisor.is_zero(), "division by zero polynomial");
        if self.degree() < divisor.degree() || self.is_zero() {
            return Some((IntPoly::zero(), self.clone()));
        }
        let dl = divisor.leading();
        let dd = divisor.degree();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![BigInt::zero(); self.degree() - dd + 1];
        for k in (0..quot.len()).rev() {
            let top = &rem[k + dd];
            if top.is_zero() {
                continue;
            }
            let (q, r) = top.div_rem(&dl);
            if !r.is_zero() {
                return None;
            }
            for (j, c) in divisor.coeffs.iter().enumerate() {
                rem[k + j] -= &q * c;
            }
            quot[k] = q;
        }
        Some((IntPoly::new(quot), IntPoly::new(rem)))
    }

    /// Exact quotient `self / divisor` over `Z`, if it exists.
    pub fn div_exact(&self, divisor: &IntPoly) -> Option<IntPoly> {
        let (q, r) = self.div_rem_exact(divisor)?;
        r.is_zero().then_some(q)
    }

    pub fn divides(&self, other: &IntPoly) -> bool {
        other.div_exact(self).is_some()
    }

    /// Pseudo-remainder `prem(self, b)` scaled so its sign matches the true
    /// remainder over `Q` (multiplier `|lc(b)|^(deg a - deg b + 1)`).
    pub fn pseudo_rem_signed(&self, b: &IntPoly) -> IntPoly {
        assert!(!b.is_zero());
        if self.degree() < b.degree() {
            return self.clone();
        }
        let lc = b.leading();
        let db = b.degree();
        let mut r = self.coeffs.clone();
        let mut steps = 0u32;
        while r.len() > db && !r.is_empty() {
            let top = r.last().unwrap().clone();
            let shift = r.len() - 1 - db;
            for c in r.iter_mut() {
                *c *= &lc;
            }
            for (j, c) in b.coeffs.iter().enumerate() {
                r[shift + j] -= &top * c;
            }
            steps += 1;
            while r.last().is_some_and(|c| c.is_zero()) {
                r.pop();
            }
        }
        let mut rem = IntPoly::new(r);
        if lc.is_negative() && steps % 2 == 1 {
            rem = -rem;
        }
        rem
    }

    /// Greatest common divisor over `Z`: primitive, positive leading coefficient.
    /// `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &IntPoly) -> IntPoly {
        let mut a = self.primitive_part();
        let mut b = other.primitive_part();
        if a.is_zero() {
            return b;
        }
        if b.is_zero() {
            return a;
        }
        if a.degree() < b.degree() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            let r = a.pseudo_rem_signed(&b);
            a = b;
            b = r.primitive_part();
        }
        a.primitive_part()
    }

    pub fn is_squarefree(&self) -> bool {
        self.gcd(&self.derivative()).is_constant()
    }

    /// Squarefree part (primitive).
    pub fn squarefree_part(&self) -> IntPoly {
        let g = self.gcd(&self.derivative());
        self.primitive_part()
            .div_exact(&g)
            .expect("gcd divides its argument")
            .primitive_part()
    }

    /// Composition `self(other(T))`.
    pub fn compose(&self, other: &IntPoly) -> IntPoly {
        let mut acc = IntPoly::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * other) + &IntPoly::constant(c.clone());
        }
        acc
    }

    /// Parse either the dense list form `[-1,-1,1]` or an expression in `T`
    /// such as `T^2 - T - 1`.
    pub fn parse(s: &str) -> Result<IntPoly> {
        let s = s.trim().replace('\u{2212}', "-");
        if s.starts_with('[') {
            let inner = s
                .strip_prefix('[')
                .and_then(|t| t.strip_suffix(']'))
                .ok_or_else(|| Error::Parse(format!("unterminated coefficient list: {s}")))?;
            let mut coeffs = Vec::new();
            for tok in inner.split(',').map(str::trim).filter(|t| !t.is_empty()) {
                coeffs.push(
                    tok.parse::<BigInt>()
                        .map_err(|e| Error::Parse(format!("bad coefficient {tok:?}: {e}")))?,
                );
            }
            return Ok(IntPoly::new(coeffs));
        }
        parse_expression(&s)
    }

    /// Cyclotomic polynomial `Φ_n`.
    pub fn cyclotomic(n: usize) -> IntPoly {
        assert!(n >= 1);
        let mut p = IntPoly::monomial(BigInt::one(), n) - IntPoly::one();
        for d in 1..n {
            if n.is_multiple_of(d) {
                p = p.div_exact(&IntPoly::cyclotomic(d)).expect("Φ_d divides T^n - 1");
            }
        }
        p
    }
}

trait SignOrdering {
    fn sign_ordering(&self) -> Ordering;
}

impl SignOrdering for BigInt {
    fn sign_ordering(&self) -> Ordering {
        if self.is_negative() {
            Ordering::Less
        } else if self.is_zero() {
            Ordering::Equal
        } else {
            Ordering::Greater
        }
    }
}

/// Deterministic ordering used for factor lists: degree first, then the
/// ascending coefficient vectors lexicographically.
pub fn canonical_cmp(a: &IntPoly, b: &IntPoly) -> Ordering {
    a.degree()
        .cmp(&b.degree())
        .then_with(|| a.coeffs.cmp(&b.coeffs))
}

fn parse_expression(s: &str) -> Result<IntPoly> {
    // terms separated by + / - at top level; each term is [coef][*][T[^k]]
    let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if compact.is_empty() {
        return Err(Error::Parse("empty polynomial".into()));
    }
    let mut result = IntPoly::zero();
    let bytes: Vec<char> = compact.chars().collect();
    let mut i = 0;
    while i < bytes.len() {
        let mut sign = BigInt::one();
        while i < bytes.len() && (bytes[i] == '+' || bytes[i] == '-') {
            if bytes[i] == '-' {
                sign = -sign;
            }
            i += 1;
        }
        let start = i;
        while i < bytes.len() && bytes[i] != '+' && bytes[i] != '-' {
            i += 1;
        }
        let term: String = bytes[start..i].iter().collect();
        if term.is_empty() {
            return Err(Error::Parse(format!("dangling sign in {s:?}")));
        }
        result = &result + &parse_term(&term)?.scale(&sign);
    }
    Ok(result)
}

fn parse_term(term: &str) -> Result<IntPoly> {
    let var_pos = term.find(['T', 't', 'x', 'X']);
    let (coef_str, rest) = match var_pos {
        Some(p) => (&term[..p], Some(&term[p + 1..])),
        None => (term, None),
    };
    let coef_str = coef_str.trim_end_matches('*');
    let coef = if coef_str.is_empty() {
        BigInt::one()
    } else {
        coef_str
            .parse::<BigInt>()
            .map_err(|e| Error::Parse(format!("bad coefficient {coef_str:?}: {e}")))?
    };
    let exp = match rest {
        None => 0,
        Some("") => 1,
        Some(r) => {
            let r = r.strip_prefix('^').ok_or_else(|| Error::Parse(format!("bad term {term:?}")))?;
            r.parse::<usize>()
                .map_err(|e| Error::Parse(format!("bad exponent {r:?}: {e}")))?
        }
    };
    Ok(IntPoly::monomial(coef, exp))
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let abs = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let show_coef = !abs.is_one() || i == 0;
            if show_coef {
                write!(f, "{abs}")?;
            }
            match i {
                0 => {}
                1 => write!(f, "T")?,
                _ => write!(f, "T^{i}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntPoly({self})")
    }
}

impl Add for &IntPoly {
    type Output = IntPoly;
    fn add(self, rhs: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        IntPoly::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub for &IntPoly {
    type Output = IntPoly;
    fn sub(self, rhs: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        IntPoly::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Mul for &IntPoly {
    type Output = IntPoly;
    fn mul(self, rhs: &IntPoly) -> IntPoly {
        if self.is_zero() || rhs.is_zero() {
            return IntPoly::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPoly::new(out)
    }
}

impl Add for IntPoly {
    type Output = IntPoly;
    fn add(self, rhs: IntPoly) -> IntPoly {
        &self + &rhs
    }
}

impl Sub for IntPoly {
    type Output = IntPoly;
    fn sub(self, rhs: IntPoly) -> IntPoly {
        &self - &rhs
    }
}

impl Mul for IntPoly {
    type Output = IntPoly;
    fn mul(self, rhs: IntPoly) -> IntPoly {
        &self * &rhs
    }
}

impl Neg for IntPoly {
    type Output = IntPoly;
    fn neg(self) -> IntPoly {
        IntPoly::new(self.coeffs.into_iter().map(|c| -c).collect())
    }
}

impl serde::Serialize for IntPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> IntPoly {
        IntPoly::from_i64s(c)
    }

    #[test]
    fn parse_both_forms() {
        assert_eq!(IntPoly::parse("T^2 - T - 1").unwrap(), p(&[-1, -1, 1]));
        assert_eq!(IntPoly::parse("[-1,-1,1]").unwrap(), p(&[-1, -1, 1]));
        assert_eq!(IntPoly::parse("[\u{2212}1, \u{2212}1, 1]").unwrap(), p(&[-1, -1, 1]));
        assert_eq!(IntPoly::parse("3T^4 + 2*T - 7").unwrap(), p(&[-7, 2, 0, 0, 3]));
        assert!(IntPoly::parse("T^").is_err());
    }

    #[test]
    fn display_round_trip() {
        for s in ["T^2 - T - 1", "-2T^3 + 5", "T", "0", "T^4 - 5T^2 + 6"] {
            let q = IntPoly::parse(s).unwrap();
            assert_eq!(q.to_string(), s);
        }
    }

    #[test]
    fn gcd_and_exact_division() {
        let a = p(&[-1, 0, 1]); // T^2 - 1
        let b = p(&[1, 2, 1]); // (T+1)^2
        assert_eq!(a.gcd(&b), p(&[1, 1]));
        assert_eq!(a.div_exact(&p(&[-1, 1])), Some(p(&[1, 1])));
        assert_eq!(a.div_exact(&p(&[1, 2])), None);
        assert_eq!(p(&[6, 4]).gcd(&p(&[9, 6])), p(&[3, 2]));
    }

    #[test]
    fn sign_at_rational_points() {
        let f = p(&[-2, 0, 1]); // T^2 - 2
        assert_eq!(f.sign_at(&BigInt::from(3), &BigInt::from(2)), Ordering::Greater);
        assert_eq!(f.sign_at(&BigInt::from(7), &BigInt::from(5)), Ordering::Less);
        assert_eq!(p(&[-1, 2]).sign_at(&BigInt::from(1), &BigInt::from(2)), Ordering::Equal);
    }

    #[test]
    fn cyclotomics() {
        assert_eq!(IntPoly::cyclotomic(1), p(&[-1, 1]));
        assert_eq!(IntPoly::cyclotomic(3), p(&[1, 1, 1]));
        assert_eq!(IntPoly::cyclotomic(4), p(&[1, 0, 1]));
        assert_eq!(IntPoly::cyclotomic(12), p(&[1, 0, -1, 0, 1]));
    }

    #[test]
    fn pseudo_remainder_sign_matches_rational_remainder() {
        // (T^2 + 1) mod (-2T + 1): rational remainder is 5/4 > 0
        let r = p(&[1, 0, 1]).pseudo_rem_signed(&p(&[1, -2]));
        assert!(r.leading().is_positive());
    }
}
