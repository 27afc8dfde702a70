use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::matrix::IntMatrix;
use super::subspace::Subspace;
use crate::error::{Error, Result};

/// A sublattice of `Z^n` with its basis in row Hermite normal form.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Lattice {
    ambient: usize,
    basis: Vec<Vec<BigInt>>,
    saturated: bool,
}

impl Lattice {
    /// Lattice generated by arbitrary integer rows; saturation is not assumed.
    pub fn from_generators(ambient: usize, gens: &[Vec<BigInt>]) -> Result<Self> {
        if let Some(g) = gens.iter().find(|g| g.len() != ambient) {
            return Err(Error::DimensionMismatch { expected: ambient, found: g.len() });
        }
        let basis = hermite_normal_form(gens.to_vec(), ambient);
        let saturated = is_saturated_hnf(&basis, ambient);
        Ok(Lattice { ambient, basis, saturated })
    }

    pub fn zero(ambient: usize) -> Self {
        Lattice { ambient, basis: Vec::new(), saturated: true }
    }

    pub fn full(ambient: usize) -> Self {
        let basis = IntMatrix::identity(ambient).to_rows();
        Lattice { ambient, basis, saturated: true }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<BigInt>] {
        &self.basis
    }

    pub fn is_saturated(&self) -> bool {
        self.saturated
    }

    pub fn is_full(&self) -> bool {
        self.rank() == self.ambient
    }

    /// `Q`-span of the lattice.
    pub fn span(&self) -> Subspace {
        Subspace::span_int(self.ambient, &self.basis).expect("basis rows have ambient width")
    }

    pub fn contains(&self, v: &[BigInt]) -> bool {
        // reduce against the echelon basis
        let mut r = v.to_vec();
        for row in &self.basis {
            let pc = row.iter().position(|x| !x.is_zero()).expect("HNF rows are nonzero");
            let (q, rem) = r[pc].div_rem(&row[pc]);
            if !rem.is_zero() {
                return false;
            }
            for (x, b) in r.iter_mut().zip(row) {
                *x -= &q * b;
            }
        }
        r.iter().all(Zero::is_zero)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(
            self.basis
                .iter()
                .map(|r| serde_json::Value::Array(r.iter().map(crate::jsonfmt::int).collect()))
                .collect(),
        )
    }
}

/// `S ∩ Z^n` as a saturated lattice: the integer kernel of an integral basis
/// of `S^⊥`.
pub fn saturate(s: &Subspace) -> Lattice {
    let n = s.ambient_dim();
    let perp = s.perp();
    if perp.is_zero() {
        return Lattice::full(n);
    }
    let m = perp.integer_basis();
    let basis = hermite_normal_form(integer_kernel(&m, n), n);
    debug_assert_eq!(basis.len(), s.dim());
    Lattice { ambient: n, basis, saturated: true }
}

/// Basis of `{x ∈ Z^n : M x = 0}` via unimodular row reduction of `[Mᵀ | I]`.
pub fn integer_kernel(m: &[Vec<BigInt>], n: usize) -> Vec<Vec<BigInt>> {
    let k = m.len();
    // row i of the work matrix: (column i of M) followed by e_i
    let mut w: Vec<Vec<BigInt>> = (0..n)
        .map(|i| {
            let mut row: Vec<BigInt> = m.iter().map(|r| r[i].clone()).collect();
            row.extend((0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }));
            row
        })
        .collect();
    let mut r = 0;
    for c in 0..k {
        loop {
            let Some(p) = (r..n).filter(|&i| !w[i][c].is_zero()).min_by_key(|&i| w[i][c].abs()) else {
                break;
            };
            w.swap(r, p);
            let mut done = true;
            for i in r + 1..n {
                if w[i][c].is_zero() {
                    continue;
                }
                let q = w[i][c].div_floor(&w[r][c]);
                let (head, tail) = w.split_at_mut(i);
                for (x, y) in tail[0].iter_mut().zip(&head[r]) {
                    *x -= &q * y;
                }
                if !w[i][c].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if (r..n).any(|i| !w[i][c].is_zero()) {
            r += 1;
        }
    }
    w.into_iter()
        .filter(|row| row[..k].iter().all(Zero::is_zero))
        .map(|row| row[k..].to_vec())
        .collect()
}

/// Row Hermite normal form: echelon, positive pivots, entries above each
/// pivot reduced into `[0, pivot)`. Zero rows are dropped.
pub fn hermite_normal_form(mut rows: Vec<Vec<BigInt>>, n: usize) -> Vec<Vec<BigInt>> {
    let mut r = 0;
    for c in 0..n {
        if r == rows.len() {
            break;
        }
        loop {
            let Some(p) = (r..rows.len()).filter(|&i| !rows[i][c].is_zero()).min_by_key(|&i| rows[i][c].abs())
            else {
                break;
            };
            rows.swap(r, p);
            let mut done = true;
            for i in r + 1..rows.len() {
                if rows[i][c].is_zero() {
                    continue;
                }
                let q = rows[i][c].div_floor(&rows[r][c]);
                let (head, tail) = rows.split_at_mut(i);
                for (x, y) in tail[0].iter_mut().zip(&head[r]) {
                    *x -= &q * y;
                }
                if !rows[i][c].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if r < rows.len() && !rows[r][c].is_zero() {
            if rows[r][c].is_negative() {
                for x in rows[r].iter_mut() {
                    *x = -x.clone();
                }
            }
            for i in 0..r {
                let q = rows[i][c].div_floor(&rows[r][c]);
                if q.is_zero() {
                    continue;
                }
                let (head, tail) = rows.split_at_mut(r);
                for (x, y) in head[i].iter_mut().zip(&tail[0]) {
                    *x -= &q * y;
                }
            }
            r += 1;
        }
    }
    rows.truncate(r);
    rows
}

fn is_saturated_hnf(basis: &[Vec<BigInt>], n: usize) -> bool {
    let span = Subspace::span_int(n, basis).expect("width checked");
    saturate(&span).basis == basis
}

/// Rational vector as a primitive integer vector (zero stays zero).
pub fn primitive_integer_vector(v: &[BigRational]) -> Vec<BigInt> {
    let lcm = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| (x * BigRational::from_integer(lcm.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return ints;
    }
    ints.into_iter().map(|x| x / &g).collect()
}
