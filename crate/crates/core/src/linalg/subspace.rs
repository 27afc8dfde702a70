use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::matrix::{IntMatrix, RatMatrix};
use crate::error::{Error, Result};

/// A subspace of `Q^n`, stored as the nonzero rows of its reduced row echelon
/// form. The representation is canonical, so `==` is subspace equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Subspace {
    ambient: usize,
    basis: RatMatrix,
}

impl Subspace {
    /// Span of the given row vectors.
    pub fn span(ambient: usize, rows: Vec<Vec<BigRational>>) -> Result<Self> {
        let m = RatMatrix::from_rows(rows, ambient)?;
        Ok(Self::row_space(&m))
    }

    pub fn span_int(ambient: usize, rows: &[Vec<BigInt>]) -> Result<Self> {
        Self::span(
            ambient,
            rows.iter().map(|r| r.iter().cloned().map(BigRational::from_integer).collect()).collect(),
        )
    }

    pub fn row_space(m: &RatMatrix) -> Self {
        let (rref, pivots) = m.rref();
        let rows = (0..pivots.len()).map(|i| rref.row(i).to_vec()).collect();
        Subspace { ambient: m.ncols(), basis: RatMatrix::from_rows(rows, m.ncols()).expect("rows share width") }
    }

    pub fn zero(ambient: usize) -> Self {
        Subspace { ambient, basis: RatMatrix::zeros(0, ambient) }
    }

    pub fn full(ambient: usize) -> Self {
        Self::row_space(&IntMatrix::identity(ambient).to_rational())
    }

    /// `{v : M v = 0}`.
    pub fn kernel(m: &RatMatrix) -> Self {
        let n = m.ncols();
        let (rref, pivots) = m.rref();
        let mut rows = Vec::new();
        for free in (0..n).filter(|c| !pivots.contains(c)) {
            let mut v = vec![BigRational::zero(); n];
            v[free] = BigRational::from_integer(1.into());
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = -rref.get(r, free).clone();
            }
            rows.push(v);
        }
        Self::span(n, rows).expect("kernel vectors have ambient width")
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.nrows()
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    pub fn is_full(&self) -> bool {
        self.dim() == self.ambient
    }

    /// Canonical basis (RREF rows).
    pub fn basis(&self) -> &RatMatrix {
        &self.basis
    }

    pub fn basis_rows(&self) -> Vec<Vec<BigRational>> {
        self.basis.to_rows()
    }

    /// Pivot column of each basis row.
    pub fn pivots(&self) -> Vec<usize> {
        (0..self.dim())
            .map(|i| self.basis.row(i).iter().position(|x| !x.is_zero()).expect("basis rows are nonzero"))
            .collect()
    }

    /// Orthogonal complement under the standard dot product.
    pub fn perp(&self) -> Subspace {
        if self.is_zero() {
            return Self::full(self.ambient);
        }
        Self::kernel(&self.basis)
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        self.check_same(other)?;
        let mut rows = self.basis_rows();
        rows.extend(other.basis_rows());
        Self::span(self.ambient, rows)
    }

    pub fn intersect(&self, other: &Subspace) -> Result<Subspace> {
        Ok(self.perp().sum(&other.perp())?.perp())
    }

    pub fn contains_vec(&self, v: &[BigRational]) -> bool {
        assert_eq!(v.len(), self.ambient);
        // reduce v against the RREF basis; in the span iff the residue is zero
        let mut r = v.to_vec();
        for (i, pc) in self.pivots().into_iter().enumerate() {
            if r[pc].is_zero() {
                continue;
            }
            let f = r[pc].clone();
            for (x, b) in r.iter_mut().zip(self.basis.row(i)) {
                *x -= &f * b;
            }
        }
        r.iter().all(Zero::is_zero)
    }

    pub fn contains(&self, other: &Subspace) -> bool {
        other.basis_rows().iter().all(|v| self.contains_vec(v))
    }

    /// `A·V` for column vectors.
    pub fn image(&self, a: &IntMatrix) -> Result<Subspace> {
        if a.ncols() != self.ambient {
            return Err(Error::DimensionMismatch { expected: self.ambient, found: a.ncols() });
        }
        let at = a.to_rational();
        let rows = self.basis_rows().into_iter().map(|v| apply(&at, &v)).collect();
        Self::span(a.nrows(), rows)
    }

    /// `A⁻¹V = {x : A x ∈ V}`, as the kernel of `(basis of V^⊥)·A`; `A⁻¹`
    /// itself is never formed.
    pub fn preimage(&self, a: &IntMatrix) -> Result<Subspace> {
        if a.nrows() != self.ambient {
            return Err(Error::DimensionMismatch { expected: self.ambient, found: a.nrows() });
        }
        let p = self.perp();
        if p.is_zero() {
            return Ok(Self::full(a.ncols()));
        }
        Ok(Self::kernel(&(p.basis() * &a.to_rational())))
    }

    pub fn is_invariant(&self, a: &IntMatrix) -> bool {
        self.image(a).is_ok_and(|img| self.contains(&img))
    }

    /// Basis rows scaled to primitive integer vectors.
    pub fn integer_basis(&self) -> Vec<Vec<BigInt>> {
        (0..self.dim())
            .map(|i| {
                let row = RatMatrix::from_rows(vec![self.basis.row(i).to_vec()], self.ambient).unwrap();
                let ints = row.clear_denominators().row(0).to_vec();
                let g = ints.iter().fold(BigInt::zero(), |acc, x| num_integer::Integer::gcd(&acc, x));
                ints.into_iter().map(|x| x / &g).collect()
            })
            .collect()
    }

    fn check_same(&self, other: &Subspace) -> Result<()> {
        if self.ambient == other.ambient {
            Ok(())
        } else {
            Err(Error::DimensionMismatch { expected: self.ambient, found: other.ambient })
        }
    }
}

impl std::fmt::Debug for Subspace {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Subspace(dim {} in Q^{}: {:?})", self.dim(), self.ambient, self.basis)
    }
}

fn apply(a: &RatMatrix, v: &[BigRational]) -> Vec<BigRational> {
    (0..a.nrows()).map(|i| a.row(i).iter().zip(v).map(|(x, y)| x * y).sum()).collect()
}

/// Largest `A`-invariant subspace of `S`: iterate `V ← V ∩ A⁻¹V` until it
/// stabilizes (at most `dim S + 1` rounds).
pub fn max_invariant_subspace(a: &IntMatrix, s: &Subspace) -> Result<Subspace> {
    if a.det()?.is_zero() {
        return Err(Error::SingularMatrix);
    }
    let mut v = s.clone();
    for _ in 0..=s.ambient_dim() {
        let next = v.intersect(&v.preimage(a)?)?;
        if next == v {
            return Ok(v);
        }
        v = next;
    }
    unreachable!("dimension decreases strictly until the subspace stabilizes")
}

/// Matrix of `A|_V` in the canonical basis of `V` (column `j` holds the
/// coordinates of `A b_j`).
pub fn restrict_operator(a: &IntMatrix, v: &Subspace) -> Result<RatMatrix> {
    if a.ncols() != v.ambient_dim() || !a.is_square() {
        return Err(Error::DimensionMismatch { expected: v.ambient_dim(), found: a.ncols() });
    }
    let k = v.dim();
    let pivots = v.pivots();
    let at = a.to_rational();
    let basis = v.basis_rows();
    let mut m = RatMatrix::zeros(k, k);
    for (j, b) in basis.iter().enumerate() {
        let w = apply(&at, b);
        // RREF basis has the identity at pivot columns, so the coordinates are read off directly
        let coords: Vec<BigRational> = pivots.iter().map(|&p| w[p].clone()).collect();
        let mut recon = vec![BigRational::zero(); v.ambient_dim()];
        for (c, bi) in coords.iter().zip(&basis) {
            for (x, y) in recon.iter_mut().zip(bi) {
                *x += c * y;
            }
        }
        if recon != w {
            return Err(Error::NotInvariant);
        }
        for (i, c) in coords.into_iter().enumerate() {
            m.set(i, j, c);
        }
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::matrix::integral_charpoly;
    use crate::poly::IntPoly;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    fn sp(rows: &[&[i64]], n: usize) -> Subspace {
        Subspace::span(n, rows.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect()).unwrap()
    }

    #[test]
    fn kernel_examples() {
        assert_eq!(Subspace::kernel(&RatMatrix::from_i64(&[&[1, 1], &[1, 1]])), sp(&[&[1, -1]], 2));
        assert_eq!(Subspace::kernel(&RatMatrix::from_i64(&[&[0, 0], &[0, 0]])), Subspace::full(2));
        assert_eq!(Subspace::kernel(&RatMatrix::from_i64(&[&[0, 0], &[0, 1]])), sp(&[&[1, 0]], 2));
    }

    #[test]
    fn perp_examples() {
        assert_eq!(sp(&[&[1, 0]], 2).perp(), sp(&[&[0, 1]], 2));
        assert_eq!(Subspace::zero(2).perp(), Subspace::full(2));
        assert_eq!(sp(&[&[1, 2]], 2).perp(), sp(&[&[2, -1]], 2));
        assert_eq!(Subspace::full(3).perp(), Subspace::zero(3));
    }

    #[test]
    fn canonical_equality() {
        assert_eq!(sp(&[&[2, 4, 0], &[1, 1, 1]], 3), sp(&[&[0, 2, -2], &[1, 3, -1]], 3));
    }

    #[test]
    fn max_invariant_examples() {
        let a = IntMatrix::from_i64(&[&[2, 0], &[0, 3]]);
        assert_eq!(max_invariant_subspace(&a, &sp(&[&[1, 0]], 2)).unwrap(), sp(&[&[1, 0]], 2));
        assert_eq!(max_invariant_subspace(&a, &sp(&[&[1, 1]], 2)).unwrap(), Subspace::zero(2));
        let b = IntMatrix::from_i64(&[&[1, 2, 0], &[3, -1, 4], &[0, 1, 1]]);
        assert_eq!(max_invariant_subspace(&b, &Subspace::full(3)).unwrap(), Subspace::full(3));
        let sing = IntMatrix::from_i64(&[&[1, 1], &[1, 1]]);
        assert_eq!(max_invariant_subspace(&sing, &Subspace::full(2)), Err(Error::SingularMatrix));
    }

    #[test]
    fn restrict_examples() {
        let a = IntMatrix::from_i64(&[&[2, 1], &[0, 3]]);
        let r = restrict_operator(&a, &sp(&[&[1, 0]], 2)).unwrap();
        assert_eq!(r, RatMatrix::from_i64(&[&[2]]));
        assert_eq!(restrict_operator(&a, &sp(&[&[0, 1]], 2)), Err(Error::NotInvariant));

        let d = IntMatrix::from_i64(&[&[2, 0], &[0, 3]]);
        assert_eq!(restrict_operator(&d, &Subspace::full(2)).unwrap(), d.to_rational());

        let c = IntMatrix::from_i64(&[&[0, 1, 0], &[1, 1, 0], &[0, 0, 3]]);
        let plane = sp(&[&[1, 0, 0], &[0, 1, 0]], 3);
        let r = restrict_operator(&c, &plane).unwrap();
        assert_eq!(integral_charpoly(&r).unwrap(), IntPoly::from_i64s(&[-1, -1, 1]));
    }

    #[test]
    fn preimage_without_inverse() {
        let a = IntMatrix::from_i64(&[&[1, 1], &[0, 1]]);
        let v = sp(&[&[1, 0]], 2);
        assert_eq!(v.preimage(&a).unwrap(), v);
        let w = sp(&[&[0, 1]], 2);
        // A(x, y) = (x + y, y) lies on the y-axis iff x = -y
        assert_eq!(w.preimage(&a).unwrap(), sp(&[&[1, -1]], 2));
    }
}
