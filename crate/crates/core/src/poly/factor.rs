use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::modp::{self, Fp};
use super::{canonical_cmp, FactoredPoly, IntPoly};
use crate::error::{Error, Result};

const CANDIDATE_PRIMES: [u64; 24] =
    [3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97];
const PRIMES_TO_TRY: usize = 5;

/// Yun's squarefree decomposition: `f = content · ∏ g_i^i` with each `g_i`
/// squarefree, primitive, positive leading coefficient, pairwise coprime.
/// Only nontrivial `g_i` are listed, in increasing multiplicity.
pub fn squarefree_decompose(f: &IntPoly) -> Result<FactoredPoly> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let mut content = f.content();
    if f.leading().is_negative() {
        content = -content;
    }
    let prim = f.primitive_part();
    let mut factors = Vec::new();
    if !prim.is_constant() {
        let d = prim.derivative();
        let a0 = prim.gcd(&d);
        let mut b = prim.div_exact(&a0).expect("gcd divides f");
        let mut c = d.div_exact(&a0).expect("gcd divides f'");
        let mut dd = &c - &b.derivative();
        let mut i = 1;
        while !b.is_constant() {
            let a = b.gcd(&dd);
            if !a.is_constant() {
                factors.push((a.primitive_part(), i));
            }
            b = b.div_exact(&a).expect("gcd divides b");
            c = dd.div_exact(&a).expect("gcd divides d");
            dd = &c - &b.derivative();
            i += 1;
        }
    }
    let out = FactoredPoly::from_parts(content, factors);
    debug_assert_eq!(&out.expand(), f);
    Ok(out)
}

/// Complete factorization over `Z`: content, then irreducible primitive
/// factors with multiplicities, sorted by degree then coefficients.
pub fn factor_over_z(f: &IntPoly) -> Result<FactoredPoly> {
    let sqf = squarefree_decompose(f)?;
    let mut factors = Vec::new();
    for (g, mult) in sqf.factors() {
        for h in factor_squarefree_primitive(g) {
            factors.push((h, *mult));
        }
    }
    factors.sort_by(|a, b| canonical_cmp(&a.0, &b.0).then(a.1.cmp(&b.1)));
    let out = FactoredPoly::from_parts(sqf.content().clone(), factors);
    if &out.expand() != f {
        return Err(Error::InvalidInput("factorization failed to multiply back".into()));
    }
    Ok(out)
}

/// Irreducible factors of a squarefree primitive polynomial with positive
/// leading coefficient.
fn factor_squarefree_primitive(g: &IntPoly) -> Vec<IntPoly> {
    if g.degree() <= 1 {
        return vec![g.clone()];
    }
    // strip a root at zero so the monic transform stays small
    if g.coeff(0).is_zero() {
        let t = IntPoly::from_i64s(&[0, 1]);
        let mut out = vec![t.clone()];
        out.extend(factor_squarefree_primitive(&g.div_exact(&t).expect("T divides g")));
        return out;
    }
    let lc = g.leading();
    let n = g.degree();
    // h(T) = lc^(n-1) g(T / lc) is monic: coefficient i is g_i lc^(n-1-i)
    let h = if lc.is_one() {
        g.clone()
    } else {
        let mut coeffs: Vec<BigInt> = (0..n).map(|i| g.coeff(i) * lc.pow((n - 1 - i) as u32)).collect();
        coeffs.push(BigInt::one());
        IntPoly::new(coeffs)
    };
    let monic_factors = zassenhaus_monic(&h);
    let mut out: Vec<IntPoly> = if lc.is_one() {
        monic_factors
    } else {
        let scale = IntPoly::new(vec![BigInt::zero(), lc.clone()]);
        monic_factors.into_iter().map(|f| f.compose(&scale).primitive_part()).collect()
    };
    out.sort_by(canonical_cmp);
    out
}

fn symmetric_mod(x: &BigInt, m: &BigInt) -> BigInt {
    let r = x.mod_floor(m);
    if &r + &r > *m {
        r - m
    } else {
        r
    }
}

fn poly_mod(f: &IntPoly, m: &BigInt) -> IntPoly {
    IntPoly::new(f.coeffs().iter().map(|c| symmetric_mod(c, m)).collect())
}

/// Zassenhaus for a monic squarefree `h` of degree at least 2.
fn zassenhaus_monic(h: &IntPoly) -> Vec<IntPoly> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x7a55_e4a5);
    let mut best: Option<(usize, u64)> = None;
    let mut tried = 0;
    for &p in &CANDIDATE_PRIMES {
        let hp = modp::reduce(h, p);
        if hp.len() != h.degree() + 1 || !modp::is_squarefree(&hp, p) {
            continue;
        }
        let count = modp::factor_count(&hp, p);
        if count == 1 {
            return vec![h.clone()];
        }
        if best.is_none_or(|(c, _)| count < c) {
            best = Some((count, p));
        }
        tried += 1;
        if tried == PRIMES_TO_TRY {
            break;
        }
    }
    let p = match best {
        Some((_, p)) => p,
        None => large_prime_fallback(h),
    };
    let hp = modp::reduce(h, p);
    let mut local = modp::factor_squarefree(&hp, p, &mut rng);
    local.sort();

    // Mignotte: coefficients of any monic factor are at most 2^n ||h||_2
    let norm2: BigInt = h.coeffs().iter().map(|c| c * c).sum();
    let bound = (norm2.sqrt() + 1u32) << h.degree();
    let pb = BigInt::from(p);
    let mut modulus = pb.clone();
    let mut k = 1u32;
    while modulus <= &bound * 2u32 {
        modulus *= &pb;
        k += 1;
    }
    let lifted = hensel_lift(h, &local, p, k);
    recombine(h, lifted, &modulus)
}

/// Deterministic search past the table for a prime keeping `h` squarefree.
fn large_prime_fallback(h: &IntPoly) -> u64 {
    let mut p = 101u64;
    loop {
        if num_prime::nt_funcs::is_prime64(p) {
            let hp = modp::reduce(h, p);
            if hp.len() == h.degree() + 1 && modp::is_squarefree(&hp, p) {
                return p;
            }
        }
        p += 2;
    }
}

/// Lift `h ≡ ∏ local` (mod p) to a factorization modulo `p^k`, splitting the
/// factor list in halves recursively.
fn hensel_lift(h: &IntPoly, local: &[Fp], p: u64, k: u32) -> Vec<IntPoly> {
    let pk = BigInt::from(p).pow(k);
    if local.len() == 1 {
        return vec![poly_mod(h, &pk)];
    }
    let mid = local.len() / 2;
    let u0 = local[..mid].iter().fold(vec![1u64], |acc, f| modp::mul(&acc, f, p));
    let w0 = local[mid..].iter().fold(vec![1u64], |acc, f| modp::mul(&acc, f, p));
    let (u, w) = lift_pair(h, &u0, &w0, p, k);
    let mut out = hensel_lift(&u, &local[..mid], p, k);
    out.extend(hensel_lift(&w, &local[mid..], p, k));
    out
}

/// Linear Hensel lifting of `h ≡ u0·w0 (mod p)` with monic `u0`, `w0` to
/// monic `u`, `w` with `h ≡ u·w (mod p^k)`.
fn lift_pair(h: &IntPoly, u0: &Fp, w0: &Fp, p: u64, k: u32) -> (IntPoly, IntPoly) {
    let (_, t) = modp::bezout(u0, w0, p);
    let pb = BigInt::from(p);
    let mut u = modp::to_int(u0);
    let mut w = modp::to_int(w0);
    let mut pj = pb.clone();
    for _ in 1..k {
        let err = &(h - &(&u * &w));
        let e_int = IntPoly::new(err.coeffs().iter().map(|c| c / &pj).collect());
        debug_assert!(err.coeffs().iter().all(|c| (c % &pj).is_zero()));
        let e = modp::reduce(&e_int, p);
        // δu = (e t) rem u0, δw = (e - w0 δu) / u0
        let du = modp::rem(&modp::mul(&e, &t, p), u0, p);
        let (dw, r) = modp::div_rem(&modp::sub(&e, &modp::mul(w0, &du, p), p), u0, p);
        debug_assert!(r.is_empty());
        u = &u + &modp::to_int(&du).scale(&pj);
        w = &w + &modp::to_int(&dw).scale(&pj);
        pj *= &pb;
        u = poly_mod(&u, &pj);
        w = poly_mod(&w, &pj);
    }
    (u, w)
}

/// Subset recombination of lifted local factors into true factors of `h`.
fn recombine(h: &IntPoly, mut lifted: Vec<IntPoly>, modulus: &BigInt) -> Vec<IntPoly> {
    let mut found = Vec::new();
    let mut rest = h.clone();
    let mut size = 1;
    while 2 * size <= lifted.len() {
        let mut progressed = false;
        let mut subset: Vec<usize> = (0..size).collect();
        'scan: loop {
            let cand = subset.iter().fold(IntPoly::one(), |acc, &i| poly_mod(&(&acc * &lifted[i]), modulus));
            if let Some(q) = rest.div_exact(&cand) {
                found.push(cand);
                rest = q;
                for &i in subset.iter().rev() {
                    lifted.remove(i);
                }
                progressed = true;
                break 'scan;
            }
            if !next_subset(&mut subset, lifted.len()) {
                break;
            }
        }
        if !progressed {
            size += 1;
        }
    }
    if !rest.is_constant() {
        found.push(rest);
    }
    found
}

fn next_subset(s: &mut [usize], n: usize) -> bool {
    let k = s.len();
    for i in (0..k).rev() {
        if s[i] < n - k + i {
            s[i] += 1;
            for j in i + 1..k {
                s[j] = s[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> IntPoly {
        IntPoly::from_i64s(c)
    }

    fn factors(f: &IntPoly) -> Vec<(IntPoly, usize)> {
        factor_over_z(f).unwrap().factors().to_vec()
    }

    #[test]
    fn squarefree_examples() {
        let f = &p(&[-1, 1]).pow(2) * &p(&[2, 1]);
        let d = squarefree_decompose(&f).unwrap();
        assert_eq!(d.factors(), &[(p(&[2, 1]), 1), (p(&[-1, 1]), 2)]);
        let g = squarefree_decompose(&p(&[-1, -1, 1])).unwrap();
        assert_eq!(g.factors(), &[(p(&[-1, -1, 1]), 1)]);
        let t4 = squarefree_decompose(&p(&[0, 0, 0, 0, 1])).unwrap();
        assert_eq!(t4.factors(), &[(p(&[0, 1]), 4)]);
        assert_eq!(squarefree_decompose(&IntPoly::zero()), Err(Error::ZeroPolynomial));
    }

    #[test]
    fn factor_examples() {
        assert_eq!(
            factors(&p(&[-1, 0, 0, 0, 1])),
            vec![(p(&[-1, 1]), 1), (p(&[1, 1]), 1), (p(&[1, 0, 1]), 1)]
        );
        assert_eq!(factors(&p(&[-1, -1, 1])), vec![(p(&[-1, -1, 1]), 1)]);
        assert_eq!(factors(&p(&[6, 0, -5, 0, 1])), vec![(p(&[-3, 0, 1]), 1), (p(&[-2, 0, 1]), 1)]);
    }

    #[test]
    fn factor_with_content_and_leading_coefficient() {
        // -6 (2T + 1)(3T - 2)^2
        let f = (&p(&[1, 2]) * &p(&[-2, 3]).pow(2)).scale(&BigInt::from(-6));
        let fp = factor_over_z(&f).unwrap();
        assert_eq!(fp.content(), &BigInt::from(-6));
        assert_eq!(fp.factors(), &[(p(&[-2, 3]), 2), (p(&[1, 2]), 1)]);
    }

    #[test]
    fn swinnerton_dyer_needs_recombination() {
        // T^4 - 10T^2 + 1 is irreducible over Z but splits modulo every prime
        assert_eq!(factors(&p(&[1, 0, -10, 0, 1])), vec![(p(&[1, 0, -10, 0, 1]), 1)]);
    }

    #[test]
    fn cyclotomic_products() {
        let f = IntPoly::monomial(BigInt::one(), 12) - IntPoly::one();
        let fs = factors(&f);
        assert_eq!(fs.len(), 6);
        let mut expected: Vec<IntPoly> = [1, 2, 3, 4, 6, 12].iter().map(|&k| IntPoly::cyclotomic(k)).collect();
        expected.sort_by(canonical_cmp);
        assert_eq!(fs.into_iter().map(|x| x.0).collect::<Vec<_>>(), expected);
    }
}
