use std::fmt;
use std::ops::{Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::poly::IntPoly;

/// Dense integer matrix, row-major. Most operations expect a square matrix;
/// rectangular matrices appear as lattice generators and kernel inputs.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn from_rows(rows: Vec<Vec<BigInt>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|row| row.len() != c) {
            return Err(Error::DimensionMismatch { expected: c, found: bad.len() });
        }
        Ok(IntMatrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    /// Panics on ragged input; meant for literals in tests and fixtures.
    pub fn from_i64(rows: &[&[i64]]) -> Self {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect())
            .expect("ragged matrix literal")
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = BigInt::one();
        }
        m
    }

    pub fn diagonal(d: &[BigInt]) -> Self {
        let n = d.len();
        let mut m = Self::zeros(n, n);
        for (i, x) in d.iter().enumerate() {
            m.data[i * n + i] = x.clone();
        }
        m
    }

    /// Companion matrix of a monic polynomial (last column holds `-c_i`).
    pub fn companion(p: &IntPoly) -> Result<Self> {
        if !p.is_monic() || p.degree() == 0 {
            return Err(Error::InvalidInput("companion matrix needs a monic nonconstant polynomial".into()));
        }
        let n = p.degree();
        let mut m = Self::zeros(n, n);
        for i in 1..n {
            m.data[i * n + i - 1] = BigInt::one();
        }
        for i in 0..n {
            m.data[i * n + n - 1] = -p.coeff(i);
        }
        Ok(m)
    }

    /// Block-diagonal sum.
    pub fn block_diag(blocks: &[IntMatrix]) -> Self {
        let n: usize = blocks.iter().map(|b| b.rows).sum();
        let c: usize = blocks.iter().map(|b| b.cols).sum();
        let mut m = Self::zeros(n, c);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            for i in 0..b.rows {
                for j in 0..b.cols {
                    m.data[(r0 + i) * c + c0 + j] = b.get(i, j).clone();
                }
            }
            r0 += b.rows;
            c0 += b.cols;
        }
        m
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    /// Side length of a square matrix.
    pub fn dim(&self) -> usize {
        debug_assert!(self.is_square());
        self.rows
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j).clone();
            }
        }
        t
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.rows)
    }

    fn require_square(&self) -> Result<()> {
        if self.is_square() {
            Ok(())
        } else {
            Err(Error::DimensionMismatch { expected: self.rows, found: self.cols })
        }
    }

    pub fn checked_mul(&self, rhs: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch { expected: self.cols, found: rhs.rows });
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    out.data[i * rhs.cols + j] += a * rhs.get(k, j);
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(v.len(), self.cols, "vector length must match column count");
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn scale(&self, k: &BigInt) -> IntMatrix {
        IntMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| x * k).collect() }
    }

    /// `A^n` by binary powering; `A^0 = I`.
    pub fn pow(&self, n: u64) -> IntMatrix {
        assert!(self.is_square(), "matrix power of a non-square matrix");
        let mut result = Self::identity(self.rows);
        let mut base = self.clone();
        let mut e = n;
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

    /// Maximum absolute row sum.
    pub fn inf_norm(&self) -> BigInt {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(BigInt::abs).sum::<BigInt>())
            .max()
            .unwrap_or_default()
    }

    pub fn to_rational(&self) -> RatMatrix {
        RatMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| BigRational::from_integer(x.clone())).collect(),
        }
    }

    /// Determinant by Bareiss fraction-free elimination.
    pub fn det(&self) -> Result<BigInt> {
        self.require_square()?;
        let n = self.rows;
        if n == 0 {
            return Ok(BigInt::one());
        }
        let mut m = self.to_rows();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if m[k][k].is_zero() {
                match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                    Some(i) => {
                        m.swap(k, i);
                        sign = -sign;
                    }
                    None => return Ok(BigInt::zero()),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                    m[i][j] = v / &prev;
                }
            }
            prev = m[k][k].clone();
        }
        Ok(sign * &m[n - 1][n - 1])
    }

    /// Rank by fraction-free elimination (works for rectangular matrices).
    pub fn rank(&self) -> usize {
        let mut m = self.to_rows();
        let (rows, cols) = (self.rows, self.cols);
        let mut prev = BigInt::one();
        let mut r = 0;
        for c in 0..cols {
            let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else { continue };
            m.swap(r, p);
            for i in r + 1..rows {
                for j in c + 1..cols {
                    let v = &m[i][j] * &m[r][c] - &m[i][c] * &m[r][j];
                    m[i][j] = v / &prev;
                }
                m[i][c] = BigInt::zero();
            }
            prev = m[r][c].clone();
            r += 1;
            if r == rows {
                break;
            }
        }
        r
    }

    /// Characteristic polynomial `det(T·I - A)` by Berkowitz's division-free
    /// algorithm.
    pub fn charpoly(&self) -> Result<IntPoly> {
        self.require_square()?;
        Ok(IntPoly::new(berkowitz(&self.to_rows())))
    }

    /// Minimal polynomial: the first linear dependency among `I, A, A², ...`.
    pub fn minpoly(&self) -> Result<IntPoly> {
        self.require_square()?;
        let n = self.rows;
        if n == 0 {
            return Ok(IntPoly::one());
        }
        // columns are vec(A^k), k = 0..=n
        let mut powers = Vec::with_capacity(n + 1);
        let mut p = Self::identity(n);
        for _ in 0..=n {
            let next = &p * self;
            powers.push(p);
            p = next;
        }
        let mut krylov = RatMatrix::zeros(n * n, n + 1);
        for (k, pk) in powers.iter().enumerate() {
            for (idx, x) in pk.data.iter().enumerate() {
                krylov.set(idx, k, BigRational::from_integer(x.clone()));
            }
        }
        let (rref, pivots) = krylov.rref();
        let k = (0..=n).find(|c| !pivots.contains(c)).expect("Cayley-Hamilton bounds the degree");
        let mut coeffs = vec![BigInt::zero(); k + 1];
        coeffs[k] = BigInt::one();
        for (row, &pc) in pivots.iter().enumerate() {
            if pc >= k {
                break;
            }
            let c = rref.get(row, k);
            debug_assert!(c.is_integer(), "minimal polynomial of an integer matrix is integral");
            coeffs[pc] = -c.to_integer();
        }
        Ok(IntPoly::new(coeffs))
    }

    /// `(charpoly, minpoly)`.
    pub fn char_min_poly(&self) -> Result<(IntPoly, IntPoly)> {
        Ok((self.charpoly()?, self.minpoly()?))
    }

    /// Evaluate `p(A)` by Horner's rule.
    pub fn eval_poly(&self, p: &IntPoly) -> IntMatrix {
        assert!(self.is_square());
        let n = self.rows;
        let mut acc = Self::zeros(n, n);
        for c in p.coeffs().iter().rev() {
            acc = &acc * self;
            for i in 0..n {
                acc.data[i * n + i] += c;
            }
        }
        acc
    }

    /// Parse `"0 1; 1 1"` or the JSON form `{"n":2,"rows":[[0,1],[1,1]]}`.
    pub fn parse(s: &str) -> Result<IntMatrix> {
        let s = s.trim().replace('\u{2212}', "-");
        if s.starts_with('{') || s.starts_with('[') {
            let v: Value = serde_json::from_str(&s).map_err(|e| Error::Parse(format!("matrix JSON: {e}")))?;
            return Self::from_json(&v);
        }
        let mut rows = Vec::new();
        for row in s.split(';').map(str::trim) {
            if row.is_empty() {
                continue;
            }
            let parsed: std::result::Result<Vec<BigInt>, _> =
                row.split(|c: char| c.is_whitespace() || c == ',').filter(|t| !t.is_empty()).map(str::parse).collect();
            rows.push(parsed.map_err(|e| Error::Parse(format!("matrix entry in {row:?}: {e}")))?);
        }
        if rows.is_empty() {
            return Err(Error::Parse("empty matrix".into()));
        }
        let m = Self::from_rows(rows)?;
        m.require_square()?;
        Ok(m)
    }

    pub fn from_json(v: &Value) -> Result<IntMatrix> {
        let rows_v = match v {
            Value::Object(o) => o.get("rows").ok_or_else(|| Error::Parse("matrix JSON lacks \"rows\"".into()))?,
            other => other,
        };
        let rows_arr = rows_v.as_array().ok_or_else(|| Error::Parse("\"rows\" must be an array".into()))?;
        let mut rows = Vec::with_capacity(rows_arr.len());
        for r in rows_arr {
            let r = r.as_array().ok_or_else(|| Error::Parse("matrix row must be an array".into()))?;
            rows.push(r.iter().map(json_to_bigint).collect::<Result<Vec<_>>>()?);
        }
        let m = Self::from_rows(rows)?;
        m.require_square()?;
        if let Some(n) = v.get("n").and_then(Value::as_u64) {
            if n as usize != m.rows {
                return Err(Error::DimensionMismatch { expected: n as usize, found: m.rows });
            }
        }
        if m.rows == 0 {
            return Err(Error::Parse("empty matrix".into()));
        }
        Ok(m)
    }

    pub fn to_json(&self) -> Value {
        Value::Array((0..self.rows).map(|i| Value::Array(self.row(i).iter().map(crate::jsonfmt::int).collect())).collect())
    }
}

fn json_to_bigint(v: &Value) -> Result<BigInt> {
    match v {
        Value::Number(n) => n
            .as_i64()
            .map(BigInt::from)
            .ok_or_else(|| Error::Parse(format!("matrix entry {n} is not an integer"))),
        Value::String(s) => s.trim().parse().map_err(|e| Error::Parse(format!("matrix entry {s:?}: {e}"))),
        other => Err(Error::Parse(format!("matrix entry {other} is not an integer"))),
    }
}

/// Berkowitz: coefficients of `det(T·I - A)` in ascending order, using only
/// ring operations.
pub(crate) fn berkowitz<T>(a: &[Vec<T>]) -> Vec<T>
where
    T: Clone + Zero + One + Sub<Output = T> + Mul<Output = T> + Neg<Output = T>,
{
    let n = a.len();
    // highest degree first while building
    let mut vect = vec![T::one()];
    for r in 0..n {
        // Toeplitz column t = [1, -a_rr, -R C, -R M C, ..., -R M^{r-1} C]
        let mut t = Vec::with_capacity(r + 2);
        t.push(T::one());
        t.push(-a[r][r].clone());
        let mut mc: Vec<T> = (0..r).map(|i| a[i][r].clone()).collect();
        for k in 0..r {
            let rc = (0..r).fold(T::zero(), |acc, j| acc + a[r][j].clone() * mc[j].clone());
            t.push(-rc);
            if k + 1 < r {
                mc = (0..r)
                    .map(|i| (0..r).fold(T::zero(), |acc, j| acc + a[i][j].clone() * mc[j].clone()))
                    .collect();
            }
        }
        let mut next = Vec::with_capacity(r + 2);
        for i in 0..r + 2 {
            let mut s = T::zero();
            for (j, vj) in vect.iter().enumerate() {
                if i >= j {
                    s = s + t[i - j].clone() * vj.clone();
                }
            }
            next.push(s);
        }
        vect = next;
    }
    vect.reverse();
    vect
}

impl Mul for &IntMatrix {
    type Output = IntMatrix;
    fn mul(self, rhs: &IntMatrix) -> IntMatrix {
        self.checked_mul(rhs).expect("matrix dimensions must agree")
    }
}

impl Sub for &IntMatrix {
    type Output = IntMatrix;
    fn sub(self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            for (j, x) in self.row(i).iter().enumerate() {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{x}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntMatrix[{self}]")
    }
}

/// Dense rational matrix, row-major; entries are always reduced.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigRational>,
}

impl RatMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RatMatrix { rows, cols, data: vec![BigRational::zero(); rows * cols] }
    }

    pub fn from_rows(rows: Vec<Vec<BigRational>>, cols: usize) -> Result<Self> {
        if let Some(bad) = rows.iter().find(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch { expected: cols, found: bad.len() });
        }
        Ok(RatMatrix { rows: rows.len(), cols, data: rows.into_iter().flatten().collect() })
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        IntMatrix::from_i64(rows).to_rational()
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigRational {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigRational) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[BigRational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<BigRational>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j).clone();
            }
        }
        t
    }

    pub fn checked_mul(&self, rhs: &RatMatrix) -> Result<RatMatrix> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch { expected: self.cols, found: rhs.rows });
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    out.data[i * rhs.cols + j] += a * rhs.get(k, j);
                }
            }
        }
        Ok(out)
    }

    /// Reduced row echelon form and the pivot columns.
    pub fn rref(&self) -> (RatMatrix, Vec<usize>) {
        let mut m = self.to_rows();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !m[i][c].is_zero()) else { continue };
            m.swap(r, p);
            let inv = m[r][c].recip();
            for x in m[r].iter_mut() {
                *x *= &inv;
            }
            let pivot_row = m[r].clone();
            for (i, row) in m.iter_mut().enumerate() {
                if i == r || row[c].is_zero() {
                    continue;
                }
                let f = row[c].clone();
                for (x, p) in row.iter_mut().zip(&pivot_row) {
                    *x -= &f * p;
                }
            }
            pivots.push(c);
            r += 1;
        }
        (RatMatrix { rows: self.rows, cols: self.cols, data: m.into_iter().flatten().collect() }, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Characteristic polynomial over `Q`, ascending coefficients.
    pub fn charpoly(&self) -> Vec<BigRational> {
        assert_eq!(self.rows, self.cols);
        berkowitz(&self.to_rows())
    }

    /// Scale by the least common denominator and return the integer matrix.
    pub fn clear_denominators(&self) -> IntMatrix {
        let lcm = self.data.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| (x * BigRational::from_integer(lcm.clone())).to_integer()).collect(),
        }
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            (0..self.rows).map(|i| Value::Array(self.row(i).iter().map(crate::jsonfmt::rat).collect())).collect(),
        )
    }

    /// Approximate entries as `f64`, for display only.
    pub fn to_f64_rows(&self) -> Vec<Vec<f64>> {
        (0..self.rows).map(|i| self.row(i).iter().map(|x| x.to_f64().unwrap_or(f64::NAN)).collect()).collect()
    }
}

impl Mul for &RatMatrix {
    type Output = RatMatrix;
    fn mul(self, rhs: &RatMatrix) -> RatMatrix {
        self.checked_mul(rhs).expect("matrix dimensions must agree")
    }
}

impl fmt::Debug for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RatMatrix[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            write!(f, "{}", row.join(" "))?;
        }
        write!(f, "]")
    }
}

/// Integer charpoly of a rational matrix whose charpoly is known to be
/// integral (e.g. the restriction of an integer matrix to an invariant
/// subspace).
pub fn integral_charpoly(m: &RatMatrix) -> Result<IntPoly> {
    let cp = m.charpoly();
    let mut out = Vec::with_capacity(cp.len());
    for c in cp {
        if !c.is_integer() {
            return Err(Error::InvalidInput("characteristic polynomial is not integral".into()));
        }
        out.push(c.to_integer());
    }
    Ok(IntPoly::new(out))
}

/// Sign of a big integer as `i8`, used by reports.
pub(crate) fn sign_i8(x: &BigInt) -> i8 {
    if x.is_negative() {
        -1
    } else if x.is_zero() {
        0
    } else {
        1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> IntPoly {
        IntPoly::from_i64s(c)
    }

    #[test]
    fn char_min_poly_examples() {
        let fib = IntMatrix::from_i64(&[&[0, 1], &[1, 1]]);
        assert_eq!(fib.char_min_poly().unwrap(), (p(&[-1, -1, 1]), p(&[-1, -1, 1])));
        let id = IntMatrix::identity(2);
        assert_eq!(id.char_min_poly().unwrap(), (p(&[1, -2, 1]), p(&[-1, 1])));
        let jordan = IntMatrix::from_i64(&[&[2, 1], &[0, 2]]);
        assert_eq!(jordan.char_min_poly().unwrap(), (p(&[4, -4, 1]), p(&[4, -4, 1])));
    }

    #[test]
    fn berkowitz_three_by_three() {
        // det(T - A) for A = [[1,2,3],[4,5,6],[7,8,10]]: T^3 - 16T^2 - 12T + 3
        let a = IntMatrix::from_i64(&[&[1, 2, 3], &[4, 5, 6], &[7, 8, 10]]);
        assert_eq!(a.charpoly().unwrap(), p(&[3, -12, -16, 1]));
        assert_eq!(a.det().unwrap(), BigInt::from(-3));
    }

    #[test]
    fn powers() {
        let fib = IntMatrix::from_i64(&[&[0, 1], &[1, 1]]);
        assert_eq!(fib.pow(5), IntMatrix::from_i64(&[&[3, 5], &[5, 8]]));
        assert_eq!(fib.pow(0), IntMatrix::identity(2));
        let m2 = IntMatrix::identity(2).scale(&BigInt::from(-2));
        assert_eq!(m2.pow(3), IntMatrix::identity(2).scale(&BigInt::from(-8)));
    }

    #[test]
    fn det_and_rank() {
        let a = IntMatrix::from_i64(&[&[0, 1, 2], &[0, 2, 4], &[1, 0, 0]]);
        assert_eq!(a.det().unwrap(), BigInt::zero());
        assert_eq!(a.rank(), 2);
        assert_eq!(IntMatrix::from_i64(&[&[0, 1], &[1, 0]]).det().unwrap(), BigInt::from(-1));
        assert_eq!(IntMatrix::from_i64(&[&[1, 2, 3], &[2, 4, 6]]).rank(), 1);
    }

    #[test]
    fn parse_forms() {
        let a = IntMatrix::parse("0 1; 1 1").unwrap();
        assert_eq!(a, IntMatrix::from_i64(&[&[0, 1], &[1, 1]]));
        let b = IntMatrix::parse(r#"{"n":2,"rows":[[0,1],[1,1]]}"#).unwrap();
        assert_eq!(a, b);
        assert!(IntMatrix::parse("1 2; 3").is_err());
        assert!(IntMatrix::parse("1 2 3; 4 5 6").is_err());
        assert_eq!(a.to_string(), "0 1; 1 1");
    }

    #[test]
    fn companion_and_blocks() {
        let c = IntMatrix::companion(&p(&[-1, -1, 1])).unwrap();
        assert_eq!(c.charpoly().unwrap(), p(&[-1, -1, 1]));
        let b = IntMatrix::block_diag(&[c, IntMatrix::from_i64(&[&[3]])]);
        assert_eq!(b.charpoly().unwrap(), p(&[3, 2, -4, 1]));
    }

    #[test]
    fn eval_poly_cayley_hamilton() {
        let a = IntMatrix::from_i64(&[&[1, 2, 0], &[-1, 3, 1], &[2, 0, 1]]);
        let cp = a.charpoly().unwrap();
        assert_eq!(a.eval_poly(&cp), IntMatrix::zeros(3, 3));
        assert_eq!(a.eval_poly(&a.minpoly().unwrap()), IntMatrix::zeros(3, 3));
    }
}
