//! Monomial self-maps `φ_A` of the torus: degrees, spectral data and the
//! subgroup carrying the points of canonical height zero.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::heights::{PlaceLogProfile, TorusPoint};
use crate::linalg::{saturate, IntMatrix, Lattice, Subspace};
use crate::par::{self, Execution};
use crate::poly::{factor_over_z, is_cyclotomic_product, root_radius, FactoredPoly, IntPoly, RootRadius, DEFAULT_PRECISION};

/// `φ_A(x)_i = ∏_j x_j^{a_ij}` for an integer matrix with `det A ≠ 0`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct MonomialMap {
    a: IntMatrix,
}

impl MonomialMap {
    pub fn new(a: IntMatrix) -> Result<Self> {
        if !a.is_square() {
            return Err(Error::DimensionMismatch { expected: a.nrows(), found: a.ncols() });
        }
        if a.det()?.is_zero() {
            return Err(Error::SingularMatrix);
        }
        Ok(MonomialMap { a })
    }

    pub fn parse(s: &str) -> Result<Self> {
        Self::new(IntMatrix::parse(s)?)
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.a
    }

    pub fn dim(&self) -> usize {
        self.a.nrows()
    }

    /// `φ_A ∘ φ_B = φ_{AB}`.
    pub fn compose(&self, other: &MonomialMap) -> Result<MonomialMap> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: other.dim() });
        }
        Ok(MonomialMap { a: &self.a * &other.a })
    }

    pub fn power(&self, n: u64) -> MonomialMap {
        MonomialMap { a: self.a.pow(n) }
    }

    pub fn apply(&self, p: &TorusPoint) -> Result<TorusPoint> {
        p.apply_monomial(&self.a)
    }

    pub fn projective_degree(&self) -> BigInt {
        projective_degree(&self.a)
    }

    /// `deg φ^n` for `n = 1..=n_max`; each entry is computed from its own
    /// matrix power, so entries are independent work items.
    pub fn degree_sequence(&self, n_max: usize, exec: Execution) -> Vec<BigInt> {
        par::map_range(exec, n_max, |i| projective_degree(&self.a.pow(i as u64 + 1)))
    }

    /// `δ_φ = ρ(A)` as a certified enclosure.
    pub fn dynamical_degree(&self) -> Result<RootRadius> {
        root_radius(&self.a.charpoly()?, DEFAULT_PRECISION)
    }

    pub fn is_quasi_unipotent(&self) -> bool {
        self.a.charpoly().map(|c| is_cyclotomic_product(&c)).unwrap_or(false)
    }

    pub fn spectral_profile(&self) -> Result<SpectralProfile> {
        SpectralProfile::of(&self.a)
    }

    pub fn zero_height_group(&self) -> Result<ZeroHeightGroup> {
        let profile = self.spectral_profile()?;
        ZeroHeightGroup::from_profile(&self.a, &profile)
    }
}

/// Degree of `φ_A` as a rational self-map of `P^N`: the Laurent monomials
/// `x^{u_i}` on `P^N` share the denominator `∏ x_j^{γ_j}`.
pub fn projective_degree(a: &IntMatrix) -> BigInt {
    let n = a.nrows();
    // column 0 of every u_i is -(row sum); u_0 = 0 contributes nothing
    let mut gamma = vec![BigInt::zero(); n + 1];
    for i in 0..n {
        let row = a.row(i);
        let s: BigInt = row.iter().sum();
        if s > gamma[0] {
            gamma[0] = s;
        }
        for (j, x) in row.iter().enumerate() {
            if -x > gamma[j + 1] {
                gamma[j + 1] = -x;
            }
        }
    }
    gamma.into_iter().sum()
}

/// Whether `φ_B(P)` is the identity point.
pub fn torsion_kernel_check(b: &IntMatrix, p: &TorusPoint) -> Result<bool> {
    let map = MonomialMap::new(b.clone())?;
    Ok(map.apply(p)?.is_identity())
}

/// Jordan data attached to one irreducible factor of the characteristic
/// polynomial. All conjugate roots share it.
#[derive(Clone, Debug)]
pub struct FactorData {
    pub factor: IntPoly,
    pub multiplicity: usize,
    pub radius: RootRadius,
    /// `ρ(f) = ρ(A)`.
    pub is_maximal: bool,
    /// `blocks[k - 1]` is the number of Jordan blocks of size exactly `k` for
    /// each root of the factor.
    pub blocks: Vec<usize>,
}

impl FactorData {
    pub fn largest_block(&self) -> usize {
        self.blocks.iter().rposition(|&c| c > 0).map_or(0, |i| i + 1)
    }

    pub fn blocks_of_size(&self, k: usize) -> usize {
        if k == 0 {
            return 0;
        }
        self.blocks.get(k - 1).copied().unwrap_or(0)
    }
}

#[derive(Clone, Debug)]
pub struct SpectralProfile {
    pub charpoly: IntPoly,
    pub minpoly: IntPoly,
    pub factors: FactoredPoly,
    pub rho: RootRadius,
    pub ell: usize,
    pub r: usize,
    pub r_bar: usize,
    pub jordan: Vec<FactorData>,
    dim: usize,
}

impl SpectralProfile {
    fn of(a: &IntMatrix) -> Result<Self> {
        let n = a.nrows();
        let (charpoly, minpoly) = a.char_min_poly()?;
        let factors = factor_over_z(&charpoly)?;
        let rho = root_radius(&charpoly, DEFAULT_PRECISION)?;
        let mut jordan = Vec::with_capacity(factors.factors().len());
        for (f, mult) in factors.factors() {
            let radius = root_radius(f, DEFAULT_PRECISION)?;
            let is_maximal = radius.compare(&rho)? == Ordering::Equal;
            let blocks = jordan_blocks(a, f, *mult);
            jordan.push(FactorData { factor: f.clone(), multiplicity: *mult, radius, is_maximal, blocks });
        }
        let top = jordan.iter().filter(|d| d.is_maximal).map(FactorData::largest_block).max().unwrap_or(1);
        let ell = top - 1;
        let r = jordan.iter().filter(|d| d.is_maximal).map(|d| d.radius.n_max_modulus * d.blocks_of_size(top)).sum();
        let r_bar = jordan.iter().filter(|d| d.is_maximal).map(|d| d.factor.degree() * d.blocks_of_size(top)).sum();
        Ok(SpectralProfile { charpoly, minpoly, factors, rho, ell, r, r_bar, jordan, dim: n })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn max_factors(&self) -> impl Iterator<Item = &FactorData> {
        self.jordan.iter().filter(|d| d.is_maximal)
    }

    pub fn is_diagonalizable(&self) -> bool {
        self.minpoly.is_squarefree()
    }

    /// `g = ∏_{ρ(f)=ρ(A)} f^ℓ · ∏_{ρ(f)<ρ(A)} f^N`.
    pub fn g_poly(&self) -> IntPoly {
        self.jordan.iter().fold(IntPoly::one(), |acc, d| {
            let e = if d.is_maximal { self.ell } else { self.dim };
            acc * d.factor.pow(e as u32)
        })
    }

    pub fn to_json(&self) -> Value {
        json!({
            "charpoly": self.charpoly.to_string(),
            "minpoly": self.minpoly.to_string(),
            "factors": self.jordan.iter().map(|d| json!({
                "factor": d.factor.to_string(),
                "multiplicity": d.multiplicity,
                "radius": d.radius.to_json(),
                "maximal": d.is_maximal,
                "jordan_blocks": d.blocks,
            })).collect::<Vec<_>>(),
            "delta": self.rho.to_json(),
            "ell": self.ell,
            "r": self.r,
            "r_bar": self.r_bar,
        })
    }
}

/// Block counts per root from `dim ker f(A)^k`.
fn jordan_blocks(a: &IntMatrix, f: &IntPoly, mult: usize) -> Vec<usize> {
    let n = a.nrows();
    let deg = f.degree();
    let fa = a.eval_poly(f);
    // at_least[k] = blocks of size ≥ k + 1 per root
    let mut at_least = Vec::new();
    let mut prev_kernel = 0;
    let mut power = IntMatrix::identity(n);
    for _ in 0..mult {
        power = &power * &fa;
        let kernel = n - power.rank();
        if kernel == prev_kernel {
            break;
        }
        at_least.push((kernel - prev_kernel) / deg);
        prev_kernel = kernel;
        if kernel == mult * deg {
            break;
        }
    }
    (0..at_least.len()).map(|k| at_least[k] - at_least.get(k + 1).copied().unwrap_or(0)).collect()
}

/// The lattice `L_G` of characters cutting out the subgroup that contains every
/// point of canonical height zero (up to torsion).
#[derive(Clone, Debug)]
pub struct ZeroHeightGroup {
    pub lattice: Lattice,
    pub dim_g: usize,
    pub g_poly: IntPoly,
}

impl ZeroHeightGroup {
    fn from_profile(a: &IntMatrix, profile: &SpectralProfile) -> Result<Self> {
        let n = a.nrows();
        if is_cyclotomic_product(&profile.charpoly) {
            return Err(Error::QuasiUnipotent);
        }
        // the kernel of f(A)^N already equals that of f(A)^multiplicity
        let mut g = IntMatrix::identity(n);
        for d in &profile.jordan {
            let e = if d.is_maximal { profile.ell } else { d.multiplicity };
            if e > 0 {
                g = &g * &a.eval_poly(&d.factor).pow(e as u64);
            }
        }
        let rank = g.rank();
        assert_eq!(rank, profile.r_bar, "rank g(A) disagrees with the Jordan count");
        let lattice = saturate(&Subspace::row_space(&g.to_rational()));
        Ok(ZeroHeightGroup { lattice, dim_g: n - rank, g_poly: profile.g_poly() })
    }

    /// `P ∈ G^div`: every relation `e` of `L_G` has `∏ x_i^{e_i} = ±1`.
    pub fn contains_divisible(&self, profile: &PlaceLogProfile) -> bool {
        self.lattice.basis().iter().all(|e| {
            profile.valuations().iter().all(|v| e.iter().zip(v).map(|(x, y)| x * y).sum::<BigInt>().is_zero())
        })
    }

    pub fn to_json(&self) -> Value {
        json!({
            "lattice_basis": self.lattice.to_json(),
            "rank": self.lattice.rank(),
            "dim_G": self.dim_g,
            "g_poly": self.g_poly.to_string(),
        })
    }
}

/// Relative size of `‖A^n‖_∞` against `n^ℓ ρ^n`, used by the growth checks.
pub fn norm_growth_ratio(a: &IntMatrix, n: u64, ell: usize, rho: f64) -> f64 {
    let norm = crate::heights::ln_bigint(&a.pow(n).inf_norm().abs().max(BigInt::from(1)));
    let scale = if n == 0 { 0.0 } else { ell as f64 * (n as f64).ln() + n as f64 * rho.ln() };
    (norm - scale).exp()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> MonomialMap {
        MonomialMap::new(IntMatrix::from_i64(rows)).unwrap()
    }

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn degrees() {
        assert_eq!(m(&[&[0, 1], &[1, 1]]).projective_degree(), BigInt::from(2));
        assert_eq!(m(&[&[-2, 0], &[0, -2]]).projective_degree(), BigInt::from(4));
        assert_eq!(m(&[&[2, 1], &[0, 2]]).projective_degree(), BigInt::from(3));
        let fib = m(&[&[0, 1], &[1, 1]]).degree_sequence(5, Execution::Sequential);
        assert_eq!(fib, ints(&[2, 3, 5, 8, 13]));
        assert_eq!(m(&[&[-2, 0], &[0, -2]]).degree_sequence(4, Execution::Parallel), ints(&[4, 4, 16, 16]));
        assert_eq!(MonomialMap::new(IntMatrix::identity(3)).unwrap().degree_sequence(3, Execution::Parallel), ints(&[1, 1, 1]));
    }

    #[test]
    fn composition() {
        let f = m(&[&[0, 1], &[1, 1]]);
        assert_eq!(f.compose(&f).unwrap(), m(&[&[1, 1], &[1, 2]]));
        let id = m(&[&[2, 1], &[1, 1]]).compose(&m(&[&[1, -1], &[-1, 2]])).unwrap();
        assert!(id.matrix().is_identity());
        assert!(matches!(f.compose(&MonomialMap::new(IntMatrix::identity(3)).unwrap()), Err(Error::DimensionMismatch { .. })));
        assert_eq!(MonomialMap::new(IntMatrix::from_i64(&[&[1, 2], &[2, 4]])), Err(Error::SingularMatrix));
    }

    #[test]
    fn profiles() {
        let p = m(&[&[2, 1], &[0, 2]]).spectral_profile().unwrap();
        assert_eq!((p.ell, p.r, p.r_bar), (1, 1, 1));
        assert!(p.rho.is_exactly(2));
        let p = m(&[&[0, 1], &[1, 1]]).spectral_profile().unwrap();
        assert_eq!((p.ell, p.r, p.r_bar), (0, 1, 2));
        let p = m(&[&[2, 0], &[0, 3]]).spectral_profile().unwrap();
        assert_eq!((p.ell, p.r, p.r_bar), (0, 1, 1));
        let shift = m(&[&[2, 1, 0], &[0, 2, 1], &[0, 0, 2]]).spectral_profile().unwrap();
        assert_eq!(shift.ell, 2);
        assert_eq!(shift.jordan[0].blocks, vec![0, 0, 1]);
    }

    #[test]
    fn zero_height_groups() {
        let z = m(&[&[2, 0], &[0, 3]]).zero_height_group().unwrap();
        assert_eq!(z.lattice.basis(), &[ints(&[0, 1])]);
        assert_eq!(z.dim_g, 1);
        assert_eq!(z.g_poly, IntPoly::from_i64s(&[4, -4, 1]));
        let z = m(&[&[0, 1], &[1, 1]]).zero_height_group().unwrap();
        assert!(z.lattice.is_full());
        assert_eq!(z.dim_g, 0);
        assert_eq!(z.g_poly, IntPoly::one());
        assert!(m(&[&[2, 0], &[0, 2]]).zero_height_group().unwrap().lattice.is_full());
        assert!(matches!(m(&[&[1, 1], &[0, 1]]).zero_height_group(), Err(Error::QuasiUnipotent)));
    }

    #[test]
    fn torsion_and_unipotence() {
        let two = IntMatrix::from_i64(&[&[2, 0], &[0, 2]]);
        assert!(torsion_kernel_check(&two, &TorusPoint::from_i64(&[-1, -1]).unwrap()).unwrap());
        assert!(!torsion_kernel_check(&two, &TorusPoint::from_i64(&[2, 1]).unwrap()).unwrap());
        let b = IntMatrix::from_i64(&[&[1, 1], &[1, 2]]);
        assert!(torsion_kernel_check(&b, &TorusPoint::from_i64(&[1, 1]).unwrap()).unwrap());
        assert!(m(&[&[1, 1], &[0, 1]]).is_quasi_unipotent());
        assert!(!m(&[&[0, 1], &[1, 1]]).is_quasi_unipotent());
        assert!(m(&[&[0, -1], &[1, 0]]).is_quasi_unipotent());
    }
}
