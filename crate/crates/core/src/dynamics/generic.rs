//! Exact orbits of rational self-maps of affine space, for the non-monomial
//! examples.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::heights::{ln_bigint, parse_rational};

/// Default ceiling on the total bit size of an orbit point.
pub const DEFAULT_GENERIC_BUDGET_BITS: u64 = 1 << 25;

#[derive(Clone, Debug, PartialEq)]
enum Expr {
    Const(BigRational),
    Var(usize),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i64),
}

impl Expr {
    /// `None` on division by zero.
    fn eval(&self, x: &[BigRational]) -> Option<BigRational> {
        Some(match self {
            Expr::Const(c) => c.clone(),
            Expr::Var(i) => x[*i].clone(),
            Expr::Neg(a) => -a.eval(x)?,
            Expr::Add(a, b) => a.eval(x)? + b.eval(x)?,
            Expr::Sub(a, b) => a.eval(x)? - b.eval(x)?,
            Expr::Mul(a, b) => a.eval(x)? * b.eval(x)?,
            Expr::Div(a, b) => {
                let d = b.eval(x)?;
                if d.is_zero() {
                    return None;
                }
                a.eval(x)? / d
            }
            Expr::Pow(a, k) => {
                let base = a.eval(x)?;
                if *k < 0 && base.is_zero() {
                    return None;
                }
                num_traits::pow::Pow::pow(base, *k as i32)
            }
        })
    }
}

struct Parser<'a> {
    toks: Vec<Tok>,
    pos: usize,
    names: &'a dyn Fn(&str) -> Option<usize>,
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Op(char),
}

fn tokenize(s: &str) -> Result<Vec<Tok>> {
    let mut out = Vec::new();
    let cs: Vec<char> = s.chars().collect();
    let mut i = 0;
    while i < cs.len() {
        let c = cs[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let j = cs[i..].iter().position(|c| !c.is_ascii_digit()).map_or(cs.len(), |k| i + k);
            let n: String = cs[i..j].iter().collect();
            out.push(Tok::Num(n.parse().expect("digits")));
            i = j;
        } else if c.is_alphabetic() || c == '_' {
            let j = cs[i..].iter().position(|c| !(c.is_alphanumeric() || *c == '_')).map_or(cs.len(), |k| i + k);
            out.push(Tok::Ident(cs[i..j].iter().collect()));
            i = j;
        } else if c == '*' && cs.get(i + 1) == Some(&'*') {
            out.push(Tok::Op('^'));
            i += 2;
        } else if "+-*/^()".contains(c) {
            out.push(Tok::Op(c));
            i += 1;
        } else if c == '\u{2212}' {
            out.push(Tok::Op('-'));
            i += 1;
        } else if c == '·' || c == '×' {
            out.push(Tok::Op('*'));
            i += 1;
        } else {
            return Err(Error::Parse(format!("unexpected character '{c}'")));
        }
    }
    Ok(out)
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn eat(&mut self, op: char) -> bool {
        if self.peek() == Some(&Tok::Op(op)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            if self.eat('+') {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat('-') {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat('*') {
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
            } else if self.eat('/') {
                lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?));
            } else if matches!(self.peek(), Some(Tok::Ident(_)) | Some(Tok::Op('('))) {
                // juxtaposition: `2x`, `x y`, `x(y+z)`
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.eat('-') {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        if self.eat('+') {
            return self.unary();
        }
        let base = self.atom()?;
        if self.eat('^') {
            let neg = self.eat('-');
            let Some(Tok::Num(k)) = self.peek().cloned() else {
                return Err(Error::Parse("exponent must be an integer".into()));
            };
            self.pos += 1;
            let k = k.to_i64().filter(|k| *k <= 1 << 20).ok_or_else(|| Error::Parse("exponent too large".into()))?;
            return Ok(Expr::Pow(Box::new(base), if neg { -k } else { k }));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr> {
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok(Expr::Const(BigRational::from_integer(n)))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                (self.names)(&name).map(Expr::Var).ok_or_else(|| Error::Parse(format!("unknown variable '{name}'")))
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return Err(Error::Parse("missing ')'".into()));
                }
                Ok(e)
            }
            other => Err(Error::Parse(format!("unexpected {other:?}"))),
        }
    }
}

/// Split on commas outside parentheses.
fn split_components(s: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut cur = String::new();
    for c in s.chars() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                out.push(std::mem::take(&mut cur));
                continue;
            }
            _ => {}
        }
        cur.push(c);
    }
    out.push(cur);
    out
}

fn strip_outer_parens(s: &str) -> &str {
    let t = s.trim();
    if t.starts_with('(') && t.ends_with(')') {
        let inner = &t[1..t.len() - 1];
        let mut depth = 0i32;
        for c in inner.chars() {
            match c {
                '(' => depth += 1,
                ')' => depth -= 1,
                _ => {}
            }
            if depth < 0 {
                return t;
            }
        }
        return inner;
    }
    t
}

/// Variable names: `x, y, z` (up to three coordinates) or `x1, …, xN`.
fn variable_index(name: &str, arity: usize) -> Option<usize> {
    const SHORT: [&str; 3] = ["x", "y", "z"];
    if arity <= 3 {
        if let Some(i) = SHORT.iter().position(|s| *s == name) {
            return (i < arity).then_some(i);
        }
    }
    let digits = name.strip_prefix('x').or_else(|| name.strip_prefix('X'))?;
    let k: usize = digits.trim_start_matches('_').parse().ok()?;
    (1..=arity).contains(&k).then(|| k - 1)
}

/// A rational self-map of `A^N` over `Q`, given by its coordinate functions.
#[derive(Clone, Debug)]
pub struct GenericMap {
    arity: usize,
    components: Vec<Expr>,
    source: Vec<String>,
    inverse: Option<Box<GenericMap>>,
}

impl PartialEq for GenericMap {
    fn eq(&self, other: &Self) -> bool {
        self.components == other.components
    }
}

impl GenericMap {
    /// `y, z, x + y*z`; the number of components fixes the dimension.
    pub fn parse(s: &str) -> Result<Self> {
        let parts = split_components(strip_outer_parens(s));
        let arity = parts.len();
        if parts.iter().any(|p| p.trim().is_empty()) {
            return Err(Error::Parse("empty coordinate function".into()));
        }
        let names = move |n: &str| variable_index(n, arity);
        let mut components = Vec::with_capacity(arity);
        for part in &parts {
            let mut p = Parser { toks: tokenize(part)?, pos: 0, names: &names };
            let e = p.expr()?;
            if p.pos != p.toks.len() {
                return Err(Error::Parse(format!("trailing input in '{}'", part.trim())));
            }
            components.push(e);
        }
        Ok(GenericMap { arity, components, source: parts.iter().map(|p| p.trim().to_string()).collect(), inverse: None })
    }

    pub fn with_inverse(mut self, inverse: GenericMap) -> Result<Self> {
        if inverse.arity != self.arity {
            return Err(Error::DimensionMismatch { expected: self.arity, found: inverse.arity });
        }
        self.inverse = Some(Box::new(inverse));
        Ok(self)
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn inverse(&self) -> Option<&GenericMap> {
        self.inverse.as_deref()
    }

    /// `None` when the point is in the indeterminacy locus.
    pub fn apply(&self, x: &[BigRational]) -> Option<Vec<BigRational>> {
        self.components.iter().map(|e| e.eval(x)).collect()
    }

    /// Exact orbit `P, F(P), …, F^{n_max}(P)` with the height of each point.
    pub fn orbit(&self, p: &[BigRational], n_max: usize, budget_bits: u64) -> Result<GenericOrbit> {
        if p.len() != self.arity {
            return Err(Error::DimensionMismatch { expected: self.arity, found: p.len() });
        }
        let mut points = vec![p.to_vec()];
        for n in 1..=n_max {
            let next = self.apply(&points[n - 1]).ok_or(Error::IndeterminacyHit { step: n })?;
            let bits: u64 = next.iter().map(|c| c.numer().bits() + c.denom().bits()).sum();
            if bits > budget_bits {
                return Err(Error::BudgetExceeded(format!("orbit point {n} needs {bits} bits, budget is {budget_bits}")));
            }
            points.push(next);
        }
        let max_coordinates: Vec<BigInt> = points.iter().map(|x| affine_height_integer(x)).collect();
        let heights = max_coordinates.iter().map(ln_bigint).collect();
        Ok(GenericOrbit { points, max_coordinates, heights })
    }

    pub fn to_json(&self) -> Value {
        json!({
            "arity": self.arity,
            "components": self.source,
            "inverse": self.inverse.as_ref().map(|i| i.source.clone()),
        })
    }
}

impl fmt::Display for GenericMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.source.join(", "))
    }
}

/// `max(D, |D x_i|)` with `D` the common denominator: `h([1 : x]) = log` of it.
pub fn affine_height_integer(x: &[BigRational]) -> BigInt {
    let d = x.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    x.iter().map(|c| (c.numer() * (&d / c.denom())).abs()).fold(d.clone(), |m, v| if v > m { v } else { m })
}

/// Parse an affine point; unlike torus points, zero coordinates are allowed.
pub fn parse_affine_point(s: &str) -> Result<Vec<BigRational>> {
    let t = s.trim();
    if t.starts_with('{') {
        let v: Value = serde_json::from_str(t).map_err(|e| Error::Parse(e.to_string()))?;
        let arr = v.get("coords").and_then(Value::as_array).ok_or_else(|| Error::Parse("expected coords".into()))?;
        return arr
            .iter()
            .map(|c| match c {
                Value::String(s) => parse_rational(s),
                Value::Number(n) => parse_rational(&n.to_string()),
                _ => Err(Error::Parse(format!("bad coordinate {c}"))),
            })
            .collect();
    }
    strip_outer_parens(t).split(',').map(parse_rational).collect()
}

#[derive(Clone, Debug)]
pub struct GenericOrbit {
    pub points: Vec<Vec<BigRational>>,
    /// Exact integer whose logarithm is `h(F^n(P))`.
    pub max_coordinates: Vec<BigInt>,
    pub heights: Vec<f64>,
}

impl GenericOrbit {
    /// `h_n / δ^n` at the last computed iterate.
    pub fn normalized_last(&self, delta: f64) -> f64 {
        let n = self.heights.len() - 1;
        (self.heights[n].ln() - n as f64 * delta.ln()).exp()
    }

    pub fn to_json(&self, with_points: bool) -> Value {
        let mut v = json!({
            "heights": self.heights.iter().map(|&h| crate::jsonfmt::float(h)).collect::<Vec<_>>(),
            "height_bits": self.max_coordinates.iter().map(|m| m.bits()).collect::<Vec<_>>(),
        });
        if with_points {
            v["points"] = Value::Array(
                self.points.iter().map(|p| Value::Array(p.iter().map(|c| Value::String(c.to_string())).collect())).collect(),
            );
        }
        v
    }
}

/// `ĥ_F(P) + ĥ_{F^{-1}}(P)` for an automorphism of degree `delta`, each side
/// read off at iterate `n`. Needs the inverse map.
pub fn two_sided_height_estimate(f: &GenericMap, p: &[BigRational], n: usize, delta: f64) -> Result<(f64, f64)> {
    let inv = f.inverse().ok_or_else(|| Error::InvalidInput("map has no inverse".into()))?;
    let fwd = f.orbit(p, n, DEFAULT_GENERIC_BUDGET_BITS)?.normalized_last(delta);
    let bwd = inv.orbit(p, n, DEFAULT_GENERIC_BUDGET_BITS)?.normalized_last(delta);
    Ok((fwd, bwd))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(v: &[i64]) -> Vec<BigRational> {
        v.iter().map(|&x| BigRational::from_integer(x.into())).collect()
    }

    #[test]
    fn parse_and_apply() {
        let f = GenericMap::parse("y, z, x + y*z").unwrap();
        assert_eq!(f.arity(), 3);
        let o = f.orbit(&q(&[1, 1, 2]), 3, DEFAULT_GENERIC_BUDGET_BITS).unwrap();
        assert_eq!(o.points[1..], [q(&[1, 2, 3]), q(&[2, 3, 7]), q(&[3, 7, 23])]);
        assert_eq!(o.max_coordinates[1..], [BigInt::from(3), BigInt::from(7), BigInt::from(23)]);

        let g = GenericMap::parse("(x2^2 - x1, x1/2)").unwrap();
        assert_eq!(g.apply(&q(&[1, 3])).unwrap(), vec![BigRational::from_integer(8.into()), BigRational::new(1.into(), 2.into())]);
        let h = GenericMap::parse("2x y - (x+1)^2, x**-1").unwrap();
        assert_eq!(h.apply(&q(&[2, 5])).unwrap(), vec![BigRational::from_integer(11.into()), BigRational::new(1.into(), 2.into())]);
    }

    #[test]
    fn factorial_heights() {
        let f = GenericMap::parse("x*y + x*z, y + z, z").unwrap();
        let o = f.orbit(&q(&[1, 0, 1]), 10, DEFAULT_GENERIC_BUDGET_BITS).unwrap();
        let mut fact = BigInt::one();
        for n in 1..=10 {
            fact *= n;
            assert_eq!(o.max_coordinates[n], fact);
        }
    }

    #[test]
    fn errors() {
        let f = GenericMap::parse("1/(x - 1), y").unwrap();
        assert_eq!(f.orbit(&q(&[1, 1]), 2, 1 << 20).unwrap_err(), Error::IndeterminacyHit { step: 1 });
        assert!(GenericMap::parse("x + w").is_err());
        assert!(GenericMap::parse("x +").is_err());
        assert!(GenericMap::parse("x, ").is_err());
        let sq = GenericMap::parse("x^2").unwrap();
        assert!(matches!(sq.orbit(&q(&[3]), 40, 1 << 16), Err(Error::BudgetExceeded(_))));
    }

    #[test]
    fn identity_is_constant() {
        let f = GenericMap::parse("x, y").unwrap();
        let o = f.orbit(&q(&[4, -9]), 5, 1 << 10).unwrap();
        assert!(o.max_coordinates.iter().all(|m| *m == BigInt::from(9)));
    }
}
