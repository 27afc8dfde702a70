use std::cmp::Ordering;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::{json, Value};

use super::factor::squarefree_decompose;
use super::IntPoly;
use crate::error::{Error, Result};

/// Default bisection ceiling in bits; `TORUSDYN_PRECISION_CAP` overrides it.
pub const DEFAULT_PRECISION_CAP: u32 = 16384;
/// Default requested enclosure precision.
pub const DEFAULT_PRECISION: u32 = 128;

pub fn precision_cap() -> u32 {
    std::env::var("TORUSDYN_PRECISION_CAP")
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .filter(|&b: &u32| b >= 8)
        .unwrap_or(DEFAULT_PRECISION_CAP)
}

fn rat(n: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(n.into())
}

fn two_pow(k: u32) -> BigInt {
    BigInt::one() << k
}

/// Certified enclosure of the maximal root modulus `ρ(f)`.
///
/// `lo ≤ ρ ≤ hi`. Internally `ρ²` is pinned down as the largest real root of
/// a squarefree integer polynomial whose roots include every `λ_i λ_j`, which
/// is what makes exact comparisons possible.
#[derive(Clone, Debug)]
pub struct RootRadius {
    pub lo: BigRational,
    pub hi: BigRational,
    pub n_max_modulus: usize,
    pub precision_bits: u32,
    cert: Cert,
}

#[derive(Clone, Debug)]
enum Cert {
    /// every root is zero
    Zero,
    Sq(SqEnclosure),
}

/// `ρ²` as the largest real root of `poly`, inside `[lo, hi]`.
#[derive(Clone, Debug)]
struct SqEnclosure {
    poly: IntPoly,
    sturm: Arc<Vec<IntPoly>>,
    lo: BigRational,
    hi: BigRational,
    exact: Option<BigRational>,
}

impl SqEnclosure {
    fn exact(r: BigRational) -> Self {
        let poly = IntPoly::new(vec![-r.numer().clone(), r.denom().clone()]);
        let sturm = Arc::new(sturm_chain(&poly));
        SqEnclosure { poly, sturm, lo: r.clone(), hi: r.clone(), exact: Some(r) }
    }

    fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    /// One bisection step; the root stays in `(lo, hi]`.
    fn bisect(&mut self) {
        if self.exact.is_some() {
            return;
        }
        let mid = (&self.lo + &self.hi) / rat(2);
        if roots_in(&self.sturm, &mid, &self.hi) >= 1 {
            self.lo = mid;
        } else {
            self.hi = mid;
        }
    }
}

impl RootRadius {
    /// An exactly known radius `r ≥ 0` (rational).
    pub fn exact(r: BigRational, n_max_modulus: usize) -> Self {
        assert!(!r.is_negative());
        let cert = if r.is_zero() { Cert::Zero } else { Cert::Sq(SqEnclosure::exact(&r * &r)) };
        RootRadius { lo: r.clone(), hi: r, n_max_modulus, precision_bits: DEFAULT_PRECISION, cert }
    }

    pub fn one() -> Self {
        Self::exact(BigRational::one(), 1)
    }

    /// Exact value of `ρ` when it is rational.
    pub fn exact_value(&self) -> Option<BigRational> {
        (self.lo == self.hi).then(|| self.lo.clone())
    }

    /// Exact value of `ρ²` when it is rational.
    pub fn exact_square(&self) -> Option<BigRational> {
        match &self.cert {
            Cert::Zero => Some(BigRational::zero()),
            Cert::Sq(e) => e.exact.clone(),
        }
    }

    pub fn is_exactly(&self, v: i64) -> bool {
        self.exact_value().is_some_and(|x| x == rat(v))
    }

    pub fn midpoint_f64(&self) -> f64 {
        ((&self.lo + &self.hi) / rat(2)).to_f64().unwrap_or(f64::NAN)
    }

    pub fn lo_f64(&self) -> f64 {
        self.lo.to_f64().unwrap_or(f64::NAN)
    }

    pub fn hi_f64(&self) -> f64 {
        self.hi.to_f64().unwrap_or(f64::NAN)
    }

    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    /// Decimal expansion of the midpoint, truncated to the digits the
    /// enclosure supports (at most 30).
    pub fn decimal(&self) -> String {
        if let Some(v) = self.exact_value() {
            if v.is_integer() {
                return v.to_integer().to_string();
            }
        }
        let digits = ((self.precision_bits as f64 * std::f64::consts::LOG10_2) as usize).saturating_sub(2).clamp(6, 30);
        to_decimal(&((&self.lo + &self.hi) / rat(2)), digits)
    }

    /// Tighten to the requested precision.
    pub fn refine(&mut self, bits: u32) -> Result<()> {
        let cap = precision_cap();
        if bits > cap {
            return Err(Error::PrecisionExhausted { bits: cap });
        }
        self.precision_bits = self.precision_bits.max(bits);
        let Cert::Sq(enc) = &mut self.cert else { return Ok(()) };
        let target_bits = self.precision_bits;
        let mut steps = 0u32;
        loop {
            let (lo, hi) = sqrt_bounds(enc, target_bits + 4);
            let scale = if hi > BigRational::one() { hi.clone() } else { BigRational::one() };
            if &hi - &lo <= scale / rat(two_pow(target_bits)) {
                self.lo = lo;
                self.hi = hi;
                return Ok(());
            }
            enc.bisect();
            steps += 1;
            if steps > cap.saturating_mul(2) {
                return Err(Error::PrecisionExhausted { bits: cap });
            }
        }
    }

    /// Exact comparison of two radii.
    pub fn compare(&self, other: &RootRadius) -> Result<Ordering> {
        match (&self.cert, &other.cert) {
            (Cert::Zero, Cert::Zero) => return Ok(Ordering::Equal),
            (Cert::Zero, _) => return Ok(Ordering::Less),
            (_, Cert::Zero) => return Ok(Ordering::Greater),
            _ => {}
        }
        let (Cert::Sq(a0), Cert::Sq(b0)) = (&self.cert, &other.cert) else { unreachable!() };
        let (mut a, mut b) = (a0.clone(), b0.clone());
        if let (Some(x), Some(y)) = (&a.exact, &b.exact) {
            return Ok(x.cmp(y));
        }
        let cap = precision_cap();
        let mut tie_checked = false;
        for _ in 0..cap.saturating_mul(2) {
            if a.hi < b.lo {
                return Ok(Ordering::Less);
            }
            if b.hi < a.lo {
                return Ok(Ordering::Greater);
            }
            if !tie_checked {
                tie_checked = true;
                if shared_root(&a, &b) {
                    return Ok(Ordering::Equal);
                }
            }
            if a.width() >= b.width() {
                a.bisect();
            } else {
                b.bisect();
            }
        }
        Err(Error::Undecided { bits: cap })
    }

    pub fn to_json(&self) -> Value {
        let mut v = json!({
            "lo": crate::jsonfmt::float(self.lo_f64()),
            "hi": crate::jsonfmt::float(self.hi_f64()),
            "decimal": self.decimal(),
            "n_max_modulus": self.n_max_modulus,
            "precision_bits": self.precision_bits,
        });
        if let Some(x) = self.exact_value() {
            v["exact"] = Value::String(x.to_string());
        } else if let Some(sq) = self.exact_square() {
            v["exact_square"] = Value::String(sq.to_string());
        }
        v
    }
}

/// Whether the two enclosed values coincide: some common root of the two
/// polynomials lies in the overlap of the isolating intervals.
fn shared_root(a: &SqEnclosure, b: &SqEnclosure) -> bool {
    let lo = if a.lo > b.lo { &a.lo } else { &b.lo };
    let hi = if a.hi < b.hi { &a.hi } else { &b.hi };
    if lo > hi {
        return false;
    }
    // non-exact enclosures isolate their root in the half-open (lo, hi]
    if let Some(x) = &a.exact {
        return b.poly.eval_rational(x).is_zero() && b.lo < *x && *x <= b.hi;
    }
    if let Some(y) = &b.exact {
        return a.poly.eval_rational(y).is_zero() && a.lo < *y && *y <= a.hi;
    }
    let g = a.poly.gcd(&b.poly);
    if g.is_constant() {
        return false;
    }
    roots_in(&sturm_chain(&g), lo, hi) > 0
}

/// Interval for `ρ` from the current `ρ²` enclosure at `2^-k` granularity.
fn sqrt_bounds(enc: &SqEnclosure, k: u32) -> (BigRational, BigRational) {
    if let Some(r) = &enc.exact {
        if let Some(s) = rational_sqrt(r) {
            return (s.clone(), s);
        }
    }
    (sqrt_lower(&enc.lo, k), sqrt_upper(&enc.hi, k))
}

fn rational_sqrt(r: &BigRational) -> Option<BigRational> {
    if r.is_negative() {
        return None;
    }
    let n = r.numer().sqrt();
    let d = r.denom().sqrt();
    (&n * &n == *r.numer() && &d * &d == *r.denom()).then(|| BigRational::new(n, d))
}

/// A lower bound for `√x` with absolute error at most `2^-k`.
fn sqrt_lower(x: &BigRational, k: u32) -> BigRational {
    if !x.is_positive() {
        return BigRational::zero();
    }
    let scaled = (x * rat(two_pow(2 * k))).floor().to_integer();
    BigRational::new(scaled.sqrt(), two_pow(k))
}

/// An upper bound for `√x` with absolute error at most `2^-k`.
fn sqrt_upper(x: &BigRational, k: u32) -> BigRational {
    if !x.is_positive() {
        return BigRational::zero();
    }
    let scaled = (x * rat(two_pow(2 * k))).ceil().to_integer();
    let mut s = scaled.sqrt();
    if &s * &s < scaled {
        s += 1;
    }
    BigRational::new(s, two_pow(k))
}

/// Sturm chain `p, p', -rem(...)...`, each term divided by its positive
/// content.
pub(crate) fn sturm_chain(p: &IntPoly) -> Vec<IntPoly> {
    let mut chain = vec![p.clone()];
    let d = p.derivative();
    if d.is_zero() {
        return chain;
    }
    chain.push(d);
    loop {
        let n = chain.len();
        let r = -chain[n - 2].pseudo_rem_signed(&chain[n - 1]);
        if r.is_zero() {
            break;
        }
        let c = r.content();
        chain.push(IntPoly::new(r.coeffs().iter().map(|x| x / &c).collect()));
    }
    chain
}

fn sign_changes(chain: &[IntPoly], x: &BigRational) -> usize {
    let mut last = Ordering::Equal;
    let mut changes = 0;
    for p in chain {
        let s = p.sign_at(x.numer(), x.denom());
        if s == Ordering::Equal {
            continue;
        }
        if last != Ordering::Equal && s != last {
            changes += 1;
        }
        last = s;
    }
    changes
}

/// Distinct real roots in `(a, b]` for a squarefree chain head.
pub(crate) fn roots_in(chain: &[IntPoly], a: &BigRational, b: &BigRational) -> usize {
    sign_changes(chain, a).saturating_sub(sign_changes(chain, b))
}

fn cauchy_bound(p: &IntPoly) -> BigRational {
    let lc = p.leading().abs();
    let m = p.coeffs()[..p.degree()].iter().map(BigInt::abs).max().unwrap_or_default();
    rat(1) + BigRational::new(m, lc).ceil()
}

/// Power sums `s_1..s_m` of the roots of `f` by Newton's identities.
fn power_sums(f: &IntPoly, m: usize) -> Vec<BigRational> {
    let d = f.degree();
    let a = |i: usize| rat(f.coeff(i));
    let lc = a(d);
    let mut s = vec![BigRational::zero(); m + 1];
    for k in 1..=m {
        let mut acc = BigRational::zero();
        for i in 1..k.min(d + 1) {
            acc += a(d - i) * &s[k - i];
        }
        if k <= d {
            acc += rat(k as i64) * a(d - k);
        }
        s[k] = -acc / &lc;
    }
    s
}

/// Primitive integer polynomial whose roots are `λ_i λ_j` for `i ≤ j` over
/// the roots of `f`.
pub(crate) fn symmetric_square_poly(f: &IntPoly) -> IntPoly {
    let d = f.degree();
    let dd = d * (d + 1) / 2;
    let s = power_sums(f, 2 * dd);
    let big_s: Vec<BigRational> =
        (0..=dd).map(|k| if k == 0 { BigRational::zero() } else { (&s[k] * &s[k] + &s[2 * k]) / rat(2) }).collect();
    let mut e = vec![BigRational::one()];
    for k in 1..=dd {
        let mut acc = BigRational::zero();
        for i in 1..=k {
            let term = &e[k - i] * &big_s[i];
            if i % 2 == 1 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        e.push(acc / rat(k as i64));
    }
    let mut coeffs = vec![BigRational::zero(); dd + 1];
    for (k, ek) in e.into_iter().enumerate() {
        coeffs[dd - k] = if k % 2 == 0 { ek } else { -ek };
    }
    let lcm = coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    IntPoly::new(coeffs.iter().map(|c| (c * rat(lcm.clone())).to_integer()).collect()).primitive_part()
}

/// Simplest (smallest denominator) rational in `[x, y]`, `0 ≤ x ≤ y`.
fn simplest_between(x: &BigRational, y: &BigRational) -> BigRational {
    let fl = x.floor();
    if fl == *x {
        return fl;
    }
    let next = &fl + rat(1);
    if next <= *y {
        return next;
    }
    let inner = simplest_between(&(y - &fl).recip(), &(x - &fl).recip());
    fl + inner.recip()
}

/// Isolate the largest real root of a squarefree `g` that is known to be
/// positive, and detect whether it is rational.
fn isolate_largest(g: IntPoly) -> SqEnclosure {
    let sturm = Arc::new(sturm_chain(&g));
    let hi = cauchy_bound(&g);
    let mut enc = SqEnclosure { poly: g, sturm, lo: BigRational::zero(), hi, exact: None };
    debug_assert!(roots_in(&enc.sturm, &enc.lo, &enc.hi) >= 1);
    while roots_in(&enc.sturm, &enc.lo, &enc.hi) > 1 {
        enc.bisect();
    }
    // two rationals with denominator ≤ |lc| differ by at least 1/lc²
    let lc = enc.poly.leading().abs();
    let sep = BigRational::new(BigInt::one(), &lc * &lc * 2);
    while enc.width() >= sep {
        enc.bisect();
    }
    let cand = simplest_between(&enc.lo, &enc.hi);
    if cand.denom() <= &lc && cand > enc.lo && enc.poly.eval_rational(&cand).is_zero() {
        enc.lo = cand.clone();
        enc.hi = cand.clone();
        enc.exact = Some(cand);
    }
    enc
}

/// Multiplicity of `ρ²` as a root of the symmetric square polynomial of a
/// squarefree `h`, and the number of real roots of `h` at `±ρ`; the count of
/// roots with modulus `ρ` is `2m - c`.
fn max_modulus_count(h: &IntPoly, enc: &SqEnclosure) -> usize {
    let r = symmetric_square_poly(h);
    let parts = squarefree_decompose(&r).expect("nonzero");
    let (outer_lo, outer_hi, inner_lo, inner_hi) = windows(enc);
    let mut m = 0;
    for (g, i) in parts.factors() {
        let hit = match &enc.exact {
            Some(x) => g.eval_rational(x).is_zero(),
            None => roots_in(&sturm_chain(g), &enc.lo, &enc.hi) > 0,
        };
        if hit {
            m += i;
        }
    }
    let c = match enc.exact.as_ref().and_then(rational_sqrt) {
        Some(rho) => {
            usize::from(h.eval_rational(&rho).is_zero()) + usize::from(h.eval_rational(&-rho).is_zero())
        }
        None => {
            // J = (a, b] with every x in J satisfying x² in the isolating window
            let mut k = 8;
            let (a, b) = loop {
                let a = sqrt_upper(&outer_lo, k);
                let b = sqrt_lower(&outer_hi, k);
                if a <= sqrt_lower(&inner_lo, k) && b >= sqrt_upper(&inner_hi, k) {
                    break (a, b);
                }
                k += 8;
            };
            let pos = roots_in(&sturm_chain(h), &a, &b);
            let neg = roots_in(&sturm_chain(&h.compose(&IntPoly::from_i64s(&[0, -1]))), &a, &b);
            pos + neg
        }
    };
    debug_assert!(2 * m >= c);
    2 * m - c
}

/// Outer isolating window and a strictly nested inner window around `ρ²`.
fn windows(enc: &SqEnclosure) -> (BigRational, BigRational, BigRational, BigRational) {
    match &enc.exact {
        Some(x) => {
            let mut eps = BigRational::new(1.into(), 4.into());
            if *x < &eps * rat(2) {
                eps = x / rat(2);
            }
            while roots_in(&enc.sturm, &(x - &eps), &(x + &eps)) > 1 {
                eps /= rat(2);
            }
            let half = &eps / rat(2);
            (x - &eps, x + &eps, x - &half, x + &half)
        }
        None => {
            let mut inner = enc.clone();
            while inner.lo == enc.lo || inner.hi == enc.hi {
                inner.bisect();
            }
            (enc.lo.clone(), enc.hi.clone(), inner.lo, inner.hi)
        }
    }
}

/// Certified enclosure of the largest root modulus of `f` together with the
/// number of roots (with multiplicity) attaining it.
pub fn root_radius(f: &IntPoly, precision_bits: u32) -> Result<RootRadius> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if f.degree() == 0 {
        return Err(Error::InvalidInput("root radius of a constant polynomial".into()));
    }
    let cap = precision_cap();
    if precision_bits > cap {
        return Err(Error::PrecisionExhausted { bits: cap });
    }
    // strip roots at zero
    let zeros = f.coeffs().iter().take_while(|c| c.is_zero()).count();
    let g = IntPoly::new(f.coeffs()[zeros..].to_vec());
    if g.is_constant() {
        return Ok(RootRadius {
            lo: BigRational::zero(),
            hi: BigRational::zero(),
            n_max_modulus: zeros,
            precision_bits,
            cert: Cert::Zero,
        });
    }
    let parts = squarefree_decompose(&g)?;
    let sqf = parts.factors().iter().fold(IntPoly::one(), |acc, (p, _)| &acc * p);
    let enc = if sqf.degree() == 1 {
        let root = BigRational::new(-sqf.coeff(0), sqf.coeff(1));
        SqEnclosure::exact(&root * &root)
    } else {
        isolate_largest(symmetric_square_poly(&sqf).squarefree_part())
    };
    let mut n_max = 0;
    for (p, mult) in parts.factors() {
        n_max += mult * if p.degree() == 1 {
            let root = BigRational::new(-p.coeff(0), p.coeff(1));
            usize::from(Some(&root * &root) == enc.exact)
        } else {
            max_modulus_count(p, &enc)
        };
    }
    let mut rr = RootRadius {
        lo: BigRational::zero(),
        hi: BigRational::zero(),
        n_max_modulus: n_max,
        precision_bits,
        cert: Cert::Sq(enc),
    };
    rr.refine(precision_bits)?;
    Ok(rr)
}

/// Exact comparison of `ρ(f)` and `ρ(g)`.
pub fn compare_radii(f: &IntPoly, g: &IntPoly) -> Result<Ordering> {
    if f.is_constant() || g.is_constant() {
        return Err(Error::InvalidInput("compare_radii needs nonconstant polynomials".into()));
    }
    let a = root_radius(f, 32)?;
    let b = root_radius(g, 32)?;
    a.compare(&b)
}

/// Truncated decimal expansion of a rational.
pub fn to_decimal(x: &BigRational, digits: usize) -> String {
    let neg = x.is_negative();
    let scaled = (x.abs() * rat(BigInt::from(10).pow(digits as u32))).round().to_integer();
    let mut s = scaled.to_string();
    if s.len() <= digits {
        s = "0".repeat(digits + 1 - s.len()) + &s;
    }
    let (int, frac) = s.split_at(s.len() - digits);
    let mut out = String::new();
    if neg {
        out.push('-');
    }
    out.push_str(int);
    if digits > 0 {
        out.push('.');
        out.push_str(frac);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> IntPoly {
        IntPoly::from_i64s(c)
    }

    #[test]
    fn golden_ratio_enclosure() {
        let r = root_radius(&p(&[-1, -1, 1]), 80).unwrap();
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        assert!(r.lo_f64() <= phi + 1e-15 && r.hi_f64() >= phi - 1e-15);
        assert!(r.width() <= BigRational::new(1.into(), BigInt::from(10).pow(20)));
        assert_eq!(r.n_max_modulus, 1);
        assert!(r.decimal().starts_with("1.6180339887498948482"));
    }

    #[test]
    fn exact_radii() {
        let r = root_radius(&p(&[-3, 1]), 64).unwrap();
        assert_eq!(r.exact_value(), Some(rat(3)));
        assert_eq!(r.n_max_modulus, 1);
        let i = root_radius(&p(&[1, 0, 1]), 64).unwrap();
        assert_eq!(i.exact_value(), Some(rat(1)));
        assert_eq!(i.n_max_modulus, 2);
        let s2 = root_radius(&p(&[-2, 0, 1]), 64).unwrap();
        assert_eq!(s2.exact_value(), None);
        assert_eq!(s2.exact_square(), Some(rat(2)));
        assert_eq!(s2.n_max_modulus, 2);
    }

    #[test]
    fn multiplicities_count() {
        // (T - 2)^2 (T + 2)(T^2 + 4)(T - 1): five roots of modulus 2
        let f = &(&(&p(&[-2, 1]).pow(2) * &p(&[2, 1])) * &p(&[4, 0, 1])) * &p(&[-1, 1]);
        let r = root_radius(&f, 64).unwrap();
        assert_eq!(r.exact_value(), Some(rat(2)));
        assert_eq!(r.n_max_modulus, 5);
        // T^3 - 2: one real root and a conjugate pair, all of modulus 2^(1/3)
        let c = root_radius(&p(&[-2, 0, 0, 1]), 64).unwrap();
        assert_eq!(c.n_max_modulus, 3);
        // T^2 - T - 1 times T^2 + T - 1: roots ±φ, ±1/φ
        let g = &p(&[-1, -1, 1]) * &p(&[-1, 1, 1]);
        assert_eq!(root_radius(&g, 64).unwrap().n_max_modulus, 2);
    }

    #[test]
    fn compare_examples() {
        assert_eq!(compare_radii(&p(&[-1, -1, 1]), &p(&[-2, 1])).unwrap(), Ordering::Less);
        assert_eq!(compare_radii(&p(&[-3, 1]), &p(&[-3, 1])).unwrap(), Ordering::Equal);
        assert_eq!(compare_radii(&p(&[-2, 0, 1]), &p(&[-4, 0, 0, 0, 1])).unwrap(), Ordering::Equal);
        // φ² = φ + 1 is the radius of T^2 - 3T + 1
        assert_eq!(compare_radii(&p(&[1, -3, 1]), &p(&[-1, -1, 1]).pow(1)).unwrap(), Ordering::Greater);
        assert_eq!(compare_radii(&p(&[-1, -1, 1]), &p(&[1, 1, -1])).unwrap(), Ordering::Equal);
    }

    #[test]
    fn zero_roots() {
        let r = root_radius(&p(&[0, 0, 1]), 32).unwrap();
        assert_eq!(r.exact_value(), Some(BigRational::zero()));
        assert_eq!(r.n_max_modulus, 2);
        let s = root_radius(&p(&[0, -3, 1]), 32).unwrap();
        assert_eq!(s.exact_value(), Some(rat(3)));
    }

    #[test]
    fn decimal_formatting() {
        assert_eq!(to_decimal(&BigRational::new(1.into(), 3.into()), 4), "0.3333");
        assert_eq!(to_decimal(&BigRational::new((-5).into(), 2.into()), 2), "-2.50");
    }
}
