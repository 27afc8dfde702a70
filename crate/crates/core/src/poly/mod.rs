//! Integer polynomials: arithmetic, factorization over `Z`, certified root
//! moduli.

mod factor;
mod intpoly;
mod modp;
mod roots;

use std::fmt;

use num_bigint::BigInt;
use num_traits::One;
use serde_json::{json, Value};

pub use factor::{factor_over_z, squarefree_decompose};
pub use intpoly::{canonical_cmp, IntPoly};
pub use roots::{
    compare_radii, precision_cap, root_radius, to_decimal, RootRadius, DEFAULT_PRECISION, DEFAULT_PRECISION_CAP,
};

/// `content · ∏ f_i^{e_i}` with primitive, positive-leading factors.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FactoredPoly {
    content: BigInt,
    factors: Vec<(IntPoly, usize)>,
}

impl FactoredPoly {
    pub(crate) fn from_parts(content: BigInt, factors: Vec<(IntPoly, usize)>) -> Self {
        FactoredPoly { content, factors }
    }

    pub fn content(&self) -> &BigInt {
        &self.content
    }

    pub fn factors(&self) -> &[(IntPoly, usize)] {
        &self.factors
    }

    pub fn expand(&self) -> IntPoly {
        self.factors
            .iter()
            .fold(IntPoly::constant(self.content.clone()), |acc, (f, e)| &acc * &f.pow(*e as u32))
    }

    pub fn to_json(&self) -> Value {
        json!({
            "content": crate::jsonfmt::int(&self.content),
            "factors": self.factors.iter().map(|(f, e)| json!({
                "poly": f.to_string(),
                "multiplicity": e,
            })).collect::<Vec<_>>(),
        })
    }
}

impl fmt::Display for FactoredPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let unit = self.content.is_one();
        if !unit || self.factors.is_empty() {
            write!(f, "{}", self.content)?;
        }
        for (p, e) in &self.factors {
            write!(f, "({p})")?;
            if *e > 1 {
                write!(f, "^{e}")?;
            }
        }
        Ok(())
    }
}

fn totient(mut n: usize) -> usize {
    let mut result = n;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            while n.is_multiple_of(p) {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

/// The `k` with `f = Φ_k`, if any. Only `k` with `φ(k) = deg f` can occur,
/// and `φ(k) ≥ √(k/2)` bounds the search.
pub fn cyclotomic_index(f: &IntPoly) -> Option<usize> {
    let d = f.degree();
    if d == 0 || !f.is_monic() {
        return None;
    }
    (1..=(2 * d * d).max(6)).filter(|&k| totient(k) == d).find(|&k| IntPoly::cyclotomic(k) == *f)
}

/// Every irreducible factor of the monic `f` is cyclotomic.
pub fn is_cyclotomic_product(f: &IntPoly) -> bool {
    if !f.is_monic() {
        return false;
    }
    match factor_over_z(f) {
        Ok(fp) => fp.factors().iter().all(|(g, _)| cyclotomic_index(g).is_some()),
        Err(_) => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> IntPoly {
        IntPoly::from_i64s(c)
    }

    #[test]
    fn cyclotomic_products() {
        assert!(is_cyclotomic_product(&p(&[1, -2, 1])));
        assert!(is_cyclotomic_product(&p(&[1, 1, 1])));
        assert!(!is_cyclotomic_product(&p(&[-1, -1, 1])));
        assert!(is_cyclotomic_product(&p(&[1, 0, 1])));
        assert!(!is_cyclotomic_product(&p(&[2, 0, 1])));
        assert_eq!(cyclotomic_index(&p(&[1, -1, 1])), Some(6));
    }

    #[test]
    fn factored_display() {
        let f = factor_over_z(&p(&[-1, 0, 0, 0, 1])).unwrap();
        assert_eq!(f.to_string(), "(T - 1)(T + 1)(T^2 + 1)");
        assert_eq!(f.expand(), p(&[-1, 0, 0, 0, 1]));
    }

    #[test]
    fn totients() {
        let t: Vec<usize> = (1..=12).map(totient).collect();
        assert_eq!(t, vec![1, 1, 2, 2, 4, 2, 6, 4, 6, 4, 10, 4]);
    }
}
