//! Exact rational linear algebra.
//!
//! Everything downstream (gradings, cohomology, tableaux) reduces to ranks,
//! kernels and intersections of rational matrices. Elimination always picks
//! the first nonzero entry in a column as pivot, so every basis returned here
//! is reproducible.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Arbitrary precision rational, always kept in lowest terms with positive
/// denominator.
pub type Rational = BigRational;

/// Shorthand for an integer-valued [`Rational`].
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `n / d` as a reduced rational. Panics on `d == 0`.
pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Formats a rational as `"p/q"`, or `"p"` when the denominator is one.
pub fn format_rational(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("malformed rational {input:?}")]
pub struct ParseRationalError {
    pub input: String,
}

/// Parses `"p"` or `"p/q"` (surrounding whitespace allowed).
pub fn parse_rational(s: &str) -> Result<Rational, ParseRationalError> {
    let err = || ParseRationalError { input: s.to_string() };
    let t = s.trim();
    match t.split_once('/') {
        None => BigInt::from_str(t).map(Rational::from_integer).map_err(|_| err()),
        Some((n, d)) => {
            let n = BigInt::from_str(n.trim()).map_err(|_| err())?;
            let d = BigInt::from_str(d.trim()).map_err(|_| err())?;
            if d.is_zero() {
                return Err(err());
            }
            Ok(Rational::new(n, d))
        }
    }
}

/// Serde adapter writing rationals as `"p/q"` strings.
pub mod serde_rational {
    use super::*;
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(q: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(q))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix is singular")]
    Singular,
}

/// Dense row-major rational matrix.
#[derive(Clone, PartialEq, Eq)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl fmt::Debug for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "RatMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(format_rational).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl RatMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RatMatrix { rows, cols, data: vec![Rational::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rational::one());
        }
        m
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<Rational>) -> Result<Self, LinalgError> {
        if data.len() != rows * cols {
            return Err(LinalgError::DimensionMismatch { expected: rows * cols, found: data.len() });
        }
        Ok(RatMatrix { rows, cols, data })
    }

    /// Builds from integer rows. Panics if rows are ragged.
    pub fn from_i64_rows(rows: &[Vec<i64>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged rows");
            data.extend(r.iter().map(|&x| rat(x)));
        }
        RatMatrix { rows: rows.len(), cols, data }
    }

    /// Stacks vectors as rows. All vectors must have length `cols`.
    pub fn from_rows(cols: usize, rows: &[Vec<Rational>]) -> Result<Self, LinalgError> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            if r.len() != cols {
                return Err(LinalgError::DimensionMismatch { expected: cols, found: r.len() });
            }
            data.extend(r.iter().cloned());
        }
        Ok(RatMatrix { rows: rows.len(), cols, data })
    }

    /// Uses vectors as columns.
    pub fn from_columns(rows: usize, columns: &[Vec<Rational>]) -> Result<Self, LinalgError> {
        Ok(Self::from_rows(rows, columns)?.transpose())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Rational {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Rational) {
        self.data[r * self.cols + c] = v;
    }

    pub fn add_at(&mut self, r: usize, c: usize, v: &Rational) {
        self.data[r * self.cols + c] += v;
    }

    pub fn row(&self, r: usize) -> &[Rational] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<Rational> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn entries(&self) -> &[Rational] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &RatMatrix) -> Result<RatMatrix, LinalgError> {
        if self.cols != other.rows {
            return Err(LinalgError::DimensionMismatch { expected: self.cols, found: other.rows });
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.add_at(i, j, &(a * b));
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Result<Vec<Rational>, LinalgError> {
        if v.len() != self.cols {
            return Err(LinalgError::DimensionMismatch { expected: self.cols, found: v.len() });
        }
        Ok((0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .fold(Rational::zero(), |acc, (a, b)| acc + a * b)
            })
            .collect())
    }

    pub fn sub(&self, other: &RatMatrix) -> Result<RatMatrix, LinalgError> {
        self.check_same_shape(other)?;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        Ok(RatMatrix { rows: self.rows, cols: self.cols, data })
    }

    pub fn add(&self, other: &RatMatrix) -> Result<RatMatrix, LinalgError> {
        self.check_same_shape(other)?;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        Ok(RatMatrix { rows: self.rows, cols: self.cols, data })
    }

    pub fn scale(&self, s: &Rational) -> RatMatrix {
        RatMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| a * s).collect() }
    }

    /// `self * other - other * self`.
    pub fn commutator(&self, other: &RatMatrix) -> Result<RatMatrix, LinalgError> {
        self.mul(other)?.sub(&other.mul(self)?)
    }

    fn check_same_shape(&self, other: &RatMatrix) -> Result<(), LinalgError> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(LinalgError::DimensionMismatch {
                expected: self.rows * self.cols,
                found: other.rows * other.cols,
            });
        }
        Ok(())
    }

    /// Reduced row echelon form and the pivot columns.
    pub fn rref(&self) -> (RatMatrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut lead = 0;
        for c in 0..m.cols {
            if lead == m.rows {
                break;
            }
            let Some(p) = (lead..m.rows).find(|&r| !m.get(r, c).is_zero()) else {
                continue;
            };
            m.swap_rows(lead, p);
            let inv = m.get(lead, c).recip();
            for j in c..m.cols {
                let v = m.get(lead, j) * &inv;
                m.set(lead, j, v);
            }
            for r in 0..m.rows {
                if r == lead {
                    continue;
                }
                let f = m.get(r, c).clone();
                if f.is_zero() {
                    continue;
                }
                for j in c..m.cols {
                    let lj = m.get(lead, j);
                    if lj.is_zero() {
                        continue;
                    }
                    let v = m.get(r, j) - &f * lj;
                    m.set(r, j, v);
                }
            }
            pivots.push(c);
            lead += 1;
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    pub fn inverse(&self) -> Result<RatMatrix, LinalgError> {
        if self.rows != self.cols {
            return Err(LinalgError::DimensionMismatch { expected: self.rows, found: self.cols });
        }
        let n = self.rows;
        let mut aug = Self::zeros(n, 2 * n);
        for r in 0..n {
            for c in 0..n {
                aug.set(r, c, self.get(r, c).clone());
            }
            aug.set(r, n + r, Rational::one());
        }
        let (red, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] >= n {
            return Err(LinalgError::Singular);
        }
        let mut inv = Self::zeros(n, n);
        for r in 0..n {
            for c in 0..n {
                inv.set(r, c, red.get(r, n + c).clone());
            }
        }
        Ok(inv)
    }
}

/// Rank over the rationals.
pub fn rank(m: &RatMatrix) -> usize {
    // Eliminate along the shorter side.
    if m.rows > m.cols {
        m.transpose().rref().1.len()
    } else {
        m.rref().1.len()
    }
}

/// Basis of the right null space `{v : m v = 0}`, one vector per free column.
pub fn kernel_basis(m: &RatMatrix) -> Vec<Vec<Rational>> {
    let (red, pivots) = m.rref();
    let mut is_pivot = vec![false; m.cols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    let mut basis = Vec::new();
    for free in (0..m.cols).filter(|&c| !is_pivot[c]) {
        let mut v = vec![Rational::zero(); m.cols];
        v[free] = Rational::one();
        for (r, &p) in pivots.iter().enumerate() {
            v[p] = -red.get(r, free).clone();
        }
        basis.push(v);
    }
    basis
}

fn check_ambient(dim: usize, vectors: &[Vec<Rational>]) -> Result<(), LinalgError> {
    match vectors.iter().find(|v| v.len() != dim) {
        Some(v) => Err(LinalgError::DimensionMismatch { expected: dim, found: v.len() }),
        None => Ok(()),
    }
}

/// Dimension of the span of `vectors` inside an ambient space of size `dim`.
pub fn span_dim(dim: usize, vectors: &[Vec<Rational>]) -> Result<usize, LinalgError> {
    check_ambient(dim, vectors)?;
    if vectors.is_empty() {
        return Ok(0);
    }
    Ok(rank(&RatMatrix::from_rows(dim, vectors)?))
}

/// Echelon basis of the span of `vectors`.
pub fn span_basis(dim: usize, vectors: &[Vec<Rational>]) -> Result<Vec<Vec<Rational>>, LinalgError> {
    check_ambient(dim, vectors)?;
    if vectors.is_empty() {
        return Ok(Vec::new());
    }
    let (red, pivots) = RatMatrix::from_rows(dim, vectors)?.rref();
    Ok((0..pivots.len()).map(|r| red.row(r).to_vec()).collect())
}

/// Indices of a maximal linearly independent subfamily, chosen greedily in order.
pub fn independent_subset(dim: usize, vectors: &[Vec<Rational>]) -> Result<Vec<usize>, LinalgError> {
    check_ambient(dim, vectors)?;
    if vectors.is_empty() {
        return Ok(Vec::new());
    }
    // Pivot columns of the matrix whose columns are the vectors.
    let (_, pivots) = RatMatrix::from_columns(dim, vectors)?.rref();
    Ok(pivots)
}

/// Basis of `span(a) ∩ span(b)`.
///
/// Solves `Σ x_i a_i = Σ y_j b_j` and maps the solutions back through `a`.
pub fn intersect(
    a: &[Vec<Rational>],
    b: &[Vec<Rational>],
) -> Result<Vec<Vec<Rational>>, LinalgError> {
    let dim = match (a.first(), b.first()) {
        (Some(v), _) | (None, Some(v)) => v.len(),
        (None, None) => return Ok(Vec::new()),
    };
    check_ambient(dim, a)?;
    check_ambient(dim, b)?;
    if a.is_empty() || b.is_empty() {
        return Ok(Vec::new());
    }
    let a = span_basis(dim, a)?;
    let b = span_basis(dim, b)?;
    let mut m = RatMatrix::zeros(dim, a.len() + b.len());
    for (j, v) in a.iter().enumerate() {
        for (i, x) in v.iter().enumerate() {
            m.set(i, j, x.clone());
        }
    }
    for (j, v) in b.iter().enumerate() {
        for (i, x) in v.iter().enumerate() {
            m.set(i, a.len() + j, -x.clone());
        }
    }
    let sols = kernel_basis(&m);
    let mut out = Vec::with_capacity(sols.len());
    for s in sols {
        let mut v = vec![Rational::zero(); dim];
        for (coef, av) in s.iter().take(a.len()).zip(&a) {
            if coef.is_zero() {
                continue;
            }
            for (vi, x) in v.iter_mut().zip(av) {
                *vi += coef * x;
            }
        }
        out.push(v);
    }
    Ok(out)
}

/// `ambient_dim - dim span(subspace)`.
pub fn quotient_dim(ambient_dim: usize, subspace: &[Vec<Rational>]) -> Result<usize, LinalgError> {
    if let Some(v) = subspace.iter().find(|v| v.len() > ambient_dim) {
        return Err(LinalgError::DimensionMismatch { expected: ambient_dim, found: v.len() });
    }
    let padded: Vec<Vec<Rational>> = subspace
        .iter()
        .map(|v| {
            let mut w = v.clone();
            w.resize(ambient_dim, Rational::zero());
            w
        })
        .collect();
    Ok(ambient_dim - span_dim(ambient_dim, &padded)?)
}

/// Row space built one vector at a time.
#[derive(Debug, Clone, Default)]
pub struct RowEchelon {
    /// Reduced rows with their pivot column; each pivot entry is 1.
    rows: Vec<(usize, Vec<Rational>)>,
}

impl RowEchelon {
    pub fn new() -> Self {
        RowEchelon::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Adds `v`; returns whether it enlarged the span.
    pub fn insert(&mut self, mut v: Vec<Rational>) -> bool {
        for (p, row) in &self.rows {
            if v[*p].is_zero() {
                continue;
            }
            let c = v[*p].clone();
            for (x, y) in v.iter_mut().zip(row) {
                if !y.is_zero() {
                    *x -= &c * y;
                }
            }
        }
        let Some(p) = v.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = Rational::one() / &v[p];
        for x in v.iter_mut() {
            *x *= &inv;
        }
        self.rows.push((p, v));
        true
    }
}

/// Solves `m x = b` for one particular solution, if any.
pub fn solve(m: &RatMatrix, b: &[Rational]) -> Result<Option<Vec<Rational>>, LinalgError> {
    if b.len() != m.rows {
        return Err(LinalgError::DimensionMismatch { expected: m.rows, found: b.len() });
    }
    let mut aug = RatMatrix::zeros(m.rows, m.cols + 1);
    for r in 0..m.rows {
        for c in 0..m.cols {
            aug.set(r, c, m.get(r, c).clone());
        }
        aug.set(r, m.cols, b[r].clone());
    }
    let (red, pivots) = aug.rref();
    if pivots.last() == Some(&m.cols) {
        return Ok(None);
    }
    let mut x = vec![Rational::zero(); m.cols];
    for (r, &p) in pivots.iter().enumerate() {
        x[p] = red.get(r, m.cols).clone();
    }
    Ok(Some(x))
}

pub fn is_zero_vector(v: &[Rational]) -> bool {
    v.iter().all(Zero::is_zero)
}

/// Nonnegative-integer test used by dominance checks.
pub fn is_nonnegative_integer(q: &Rational) -> bool {
    q.is_integer() && !q.is_negative()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn incremental_echelon() {
        let mut e = RowEchelon::new();
        assert!(e.insert(vec![rat(1), rat(2), rat(0)]));
        assert!(e.insert(vec![rat(0), rat(1), rat(1)]));
        assert!(!e.insert(vec![rat(2), rat(5), rat(1)]));
        assert!(!e.insert(vec![rat(0), rat(0), rat(0)]));
        assert!(e.insert(vec![rat(0), rat(0), rat(3)]));
        assert_eq!(e.rank(), 3);
    }

    fn v(xs: &[i64]) -> Vec<Rational> {
        xs.iter().map(|&x| rat(x)).collect()
    }

    #[test]
    fn rank_examples() {
        assert_eq!(rank(&RatMatrix::identity(2)), 2);
        assert_eq!(rank(&RatMatrix::zeros(3, 4)), 0);
        assert_eq!(rank(&RatMatrix::from_i64_rows(&[vec![1, 2], vec![2, 4]])), 1);
    }

    #[test]
    fn kernel_examples() {
        assert!(kernel_basis(&RatMatrix::identity(3)).is_empty());
        assert_eq!(kernel_basis(&RatMatrix::zeros(2, 3)).len(), 3);
        let m = RatMatrix::from_i64_rows(&[vec![1, 1, 0]]);
        let k = kernel_basis(&m);
        assert_eq!(k.len(), 2);
        for x in &k {
            assert!(is_zero_vector(&m.mul_vec(x).unwrap()));
        }
    }

    #[test]
    fn intersect_examples() {
        let e = |i: usize| {
            let mut x = vec![rat(0); 3];
            x[i] = rat(1);
            x
        };
        let meet = intersect(&[e(0), e(1)], &[e(1), e(2)]).unwrap();
        assert_eq!(meet.len(), 1);
        assert_eq!(span_dim(3, &[meet[0].clone(), e(1)]).unwrap(), 1);

        let x = vec![v(&[1, 2, 3]), v(&[0, 1, -1])];
        assert_eq!(intersect(&x, &x).unwrap().len(), 2);

        let err = intersect(&[v(&[1, 0])], &[v(&[1, 0, 0])]).unwrap_err();
        assert!(matches!(err, LinalgError::DimensionMismatch { .. }));
    }

    #[test]
    fn quotient_examples() {
        assert_eq!(quotient_dim(5, &[v(&[1, 0, 0, 0, 0]), v(&[0, 1, 0, 0, 0])]).unwrap(), 3);
        let basis: Vec<_> = (0..4).map(|i| {
            let mut x = vec![rat(0); 4];
            x[i] = rat(1);
            x
        }).collect();
        assert_eq!(quotient_dim(4, &basis).unwrap(), 0);
        let dep = [v(&[1, 0, 1, 0, 0, 0]), v(&[0, 1, 0, 0, 2, 0]), v(&[1, 1, 1, 0, 2, 0])];
        assert_eq!(quotient_dim(6, &dep).unwrap(), 4);
        assert!(quotient_dim(2, &[v(&[1, 2, 3])]).is_err());
    }

    #[test]
    fn inverse_and_solve() {
        let c = RatMatrix::from_i64_rows(&[vec![2, -1], vec![-1, 2]]);
        let inv = c.inverse().unwrap();
        assert_eq!(inv.get(0, 0), &ratio(2, 3));
        assert_eq!(inv.get(0, 1), &ratio(1, 3));
        assert_eq!(c.mul(&inv).unwrap(), RatMatrix::identity(2));
        assert_eq!(RatMatrix::zeros(2, 2).inverse(), Err(LinalgError::Singular));

        let x = solve(&c, &v(&[1, 1])).unwrap().unwrap();
        assert_eq!(x, v(&[1, 1]));
        let sing = RatMatrix::from_i64_rows(&[vec![1, 1], vec![1, 1]]);
        assert_eq!(solve(&sing, &v(&[1, 2])).unwrap(), None);
    }

    #[test]
    fn rational_strings() {
        assert_eq!(parse_rational("-6/4").unwrap(), ratio(-3, 2));
        assert_eq!(parse_rational(" 7 ").unwrap(), rat(7));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
        assert_eq!(format_rational(&ratio(4, -6)), "-2/3");
        assert_eq!(format_rational(&rat(5)), "5");
    }
}
