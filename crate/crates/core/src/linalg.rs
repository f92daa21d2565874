//! Exact rational matrices and the elimination kernels built on them.
//!
//! Every routine here is exact. Elimination runs fraction-free (Bareiss) on
//! integer rows obtained by clearing each row's denominators, with the first
//! nonzero entry of a column taken as pivot, so results are deterministic.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::poly::IntPolynomial;

/// Arbitrary-precision rational, always kept in lowest terms with a positive
/// denominator.
pub type Rational = BigRational;

/// Dense `f64` matrix used only by the numeric views.
pub type FloatMatrix = nalgebra::DMatrix<f64>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("matrix is singular")]
    Singular,
    #[error("matrix has a non-integer entry at ({row}, {col})")]
    NonInteger { row: usize, col: usize },
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: String, found: String },
}

/// Outcome of an exact linear solve.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Solution {
    Unique(Vec<Rational>),
    NoSolution,
    NonUnique,
}

pub fn rat(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

pub fn int_rat(v: &BigInt) -> Rational {
    Rational::from_integer(v.clone())
}

/// Dense row-major matrix of exact rationals.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl ExactMatrix {
    /// Builds a matrix from row-major entries. Panics if `data.len() != rows * cols`.
    pub fn new(rows: usize, cols: usize, data: Vec<Rational>) -> Self {
        assert_eq!(data.len(), rows * cols, "entry count must equal rows*cols");
        ExactMatrix { rows, cols, data }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        ExactMatrix::new(rows, cols, vec![Rational::zero(); rows * cols])
    }

    pub fn identity(n: usize) -> Self {
        let mut m = ExactMatrix::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = Rational::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Rational) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        ExactMatrix { rows, cols, data }
    }

    /// Builds a matrix from rows of small integers. All rows must have equal length.
    pub fn from_i64_rows<R: AsRef<[i64]>>(rows: &[R]) -> Self {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        ExactMatrix::from_fn(rows.len(), cols, |i, j| {
            let row = rows[i].as_ref();
            assert_eq!(row.len(), cols, "ragged rows");
            rat(row[j])
        })
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged rows");
            data.extend(r);
        }
        ExactMatrix::new(n, cols, data)
    }

    /// Builds a matrix whose columns are the given vectors, all of length `rows`.
    pub fn from_columns(rows: usize, columns: &[Vec<Rational>]) -> Self {
        ExactMatrix::from_fn(rows, columns.len(), |i, j| columns[j][i].clone())
    }

    pub fn column_vector(v: &[Rational]) -> Self {
        ExactMatrix::new(v.len(), 1, v.to_vec())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.data[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Rational> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn entries(&self) -> &[Rational] {
        &self.data
    }

    /// Copy with a single entry replaced.
    pub fn with_entry(&self, i: usize, j: usize, v: Rational) -> Self {
        let mut m = self.clone();
        m.data[i * self.cols + j] = v;
        m
    }

    pub fn transpose(&self) -> Self {
        ExactMatrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    /// Columns `lo..=hi`.
    pub fn columns_range(&self, lo: usize, hi: usize) -> Self {
        assert!(lo <= hi && hi < self.cols, "column range out of bounds");
        ExactMatrix::from_fn(self.rows, hi - lo + 1, |i, j| self.get(i, lo + j).clone())
    }

    /// Rows reordered so that row `i` of `self` lands at position `perm[i]`.
    pub fn permute_rows(&self, perm: &[usize]) -> Self {
        assert_eq!(perm.len(), self.rows);
        let mut data = vec![Rational::zero(); self.data.len()];
        for (i, &p) in perm.iter().enumerate() {
            data[p * self.cols..(p + 1) * self.cols].clone_from_slice(self.row(i));
        }
        ExactMatrix::new(self.rows, self.cols, data)
    }

    pub fn hstack(&self, other: &ExactMatrix) -> Self {
        assert_eq!(self.rows, other.rows);
        ExactMatrix::from_fn(self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols {
                self.get(i, j).clone()
            } else {
                other.get(i, j - self.cols).clone()
            }
        })
    }

    pub fn scale(&self, k: &Rational) -> Self {
        ExactMatrix::new(self.rows, self.cols, self.data.iter().map(|x| x * k).collect())
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn diagonal(&self) -> Vec<Rational> {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i).clone()).collect()
    }

    pub fn trace(&self) -> Rational {
        self.diagonal().into_iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| (i + 1..self.cols).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn is_integer(&self) -> bool {
        self.data.iter().all(|x| x.is_integer())
    }

    /// Integer entries, or the position of the first non-integer.
    pub fn to_integers(&self) -> Result<Vec<Vec<BigInt>>, LinalgError> {
        (0..self.rows)
            .map(|i| {
                (0..self.cols)
                    .map(|j| {
                        let x = self.get(i, j);
                        if x.is_integer() {
                            Ok(x.to_integer())
                        } else {
                            Err(LinalgError::NonInteger { row: i, col: j })
                        }
                    })
                    .collect()
            })
            .collect()
    }

    pub fn to_f64(&self) -> FloatMatrix {
        FloatMatrix::from_fn(self.rows, self.cols, |i, j| to_f64(self.get(i, j)))
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> Rational {
        self.data.iter().map(|x| x.abs()).max().unwrap_or_else(Rational::zero)
    }

    fn integer_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| clear_denominators(self.row(i))).collect()
    }
}

impl fmt::Debug for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ExactMatrix {}x{} ", self.rows, self.cols)?;
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells: Vec<String> = self.data.iter().map(|x| x.to_string()).collect();
        let width = cells.iter().map(String::len).max().unwrap_or(1);
        writeln!(f)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols)
                .map(|j| format!("{:>width$}", cells[i * self.cols + j]))
                .collect();
            writeln!(f, "{}", row.join(" "))?;
        }
        Ok(())
    }
}

impl<'a> Mul<&'a ExactMatrix> for &'a ExactMatrix {
    type Output = ExactMatrix;

    fn mul(self, rhs: &'a ExactMatrix) -> ExactMatrix {
        assert_eq!(self.cols, rhs.rows, "inner dimensions differ");
        let mut data = vec![Rational::zero(); self.rows * rhs.cols];
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if !b.is_zero() {
                        data[i * rhs.cols + j] += a * b;
                    }
                }
            }
        }
        ExactMatrix::new(self.rows, rhs.cols, data)
    }
}

impl<'a> Add<&'a ExactMatrix> for &'a ExactMatrix {
    type Output = ExactMatrix;

    fn add(self, rhs: &'a ExactMatrix) -> ExactMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        ExactMatrix::new(
            self.rows,
            self.cols,
            self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        )
    }
}

impl<'a> Sub<&'a ExactMatrix> for &'a ExactMatrix {
    type Output = ExactMatrix;

    fn sub(self, rhs: &'a ExactMatrix) -> ExactMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        ExactMatrix::new(
            self.rows,
            self.cols,
            self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        )
    }
}

impl Neg for &ExactMatrix {
    type Output = ExactMatrix;

    fn neg(self) -> ExactMatrix {
        ExactMatrix::new(self.rows, self.cols, self.data.iter().map(|x| -x).collect())
    }
}

pub fn to_f64(x: &Rational) -> f64 {
    x.to_f64().unwrap_or_else(|| {
        // ratio of huge integers: scale both down before dividing
        let (n, d) = (x.numer(), x.denom());
        let shift = n.bits().max(d.bits()).saturating_sub(1000);
        let n = (n >> shift).to_f64().unwrap_or(f64::NAN);
        let d = (d >> shift).to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

/// Multiplies a rational row by the lcm of its denominators.
fn clear_denominators(row: &[Rational]) -> Vec<BigInt> {
    let lcm = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    row.iter().map(|x| x.numer() * (&lcm / x.denom())).collect()
}

/// Integer row-echelon form produced by Bareiss elimination.
struct Echelon {
    rows: Vec<Vec<BigInt>>,
    pivots: Vec<usize>,
    swaps: usize,
}

/// Fraction-free elimination over the first `pivot_cols` columns.
fn bareiss(mut rows: Vec<Vec<BigInt>>, pivot_cols: usize) -> Echelon {
    let nrows = rows.len();
    let ncols = rows.first().map_or(0, Vec::len);
    let mut prev = BigInt::one();
    let mut pivots = Vec::new();
    let mut swaps = 0;
    let mut r = 0;
    for c in 0..pivot_cols.min(ncols) {
        if r == nrows {
            break;
        }
        let Some(p) = (r..nrows).find(|&p| !rows[p][c].is_zero()) else {
            continue;
        };
        if p != r {
            rows.swap(p, r);
            swaps += 1;
        }
        let (head, tail) = rows.split_at_mut(r + 1);
        let pivot_row = &head[r];
        let pv = &pivot_row[c];
        for row in tail.iter_mut() {
            let factor = row[c].clone();
            for j in c + 1..ncols {
                let t = pv * &row[j] - &factor * &pivot_row[j];
                let (q, rem) = t.div_rem(&prev);
                debug_assert!(rem.is_zero(), "Bareiss division must be exact");
                row[j] = q;
            }
            row[c] = BigInt::zero();
        }
        prev = pv.clone();
        pivots.push(c);
        r += 1;
    }
    Echelon { rows, pivots, swaps }
}

/// Reduced row-echelon form over the rationals (pivot rows only).
fn rref(m: &ExactMatrix, pivot_cols: usize) -> (Vec<Vec<Rational>>, Vec<usize>) {
    let ech = bareiss(m.integer_rows(), pivot_cols);
    let rank = ech.pivots.len();
    let mut rows: Vec<Vec<Rational>> = ech
        .rows
        .into_iter()
        .take(rank)
        .map(|r| r.into_iter().map(Rational::from_integer).collect())
        .collect();
    for k in (0..rank).rev() {
        let c = ech.pivots[k];
        let inv = rows[k][c].recip();
        for x in rows[k].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = rows[k].clone();
        for row in rows.iter_mut().take(k) {
            let f = row[c].clone();
            if f.is_zero() {
                continue;
            }
            for (x, p) in row.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *x -= &f * p;
                }
            }
        }
    }
    (rows, ech.pivots)
}

/// Exact rank.
pub fn rank(m: &ExactMatrix) -> usize {
    bareiss(m.integer_rows(), m.cols).pivots.len()
}

/// Exact determinant of a square matrix.
pub fn determinant(m: &ExactMatrix) -> Result<Rational, LinalgError> {
    if !m.is_square() {
        return Err(LinalgError::DimensionMismatch {
            expected: "square matrix".into(),
            found: format!("{}x{}", m.rows, m.cols),
        });
    }
    let n = m.rows;
    if n == 0 {
        return Ok(Rational::one());
    }
    let scale: BigInt = (0..n)
        .map(|i| m.row(i).iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom())))
        .product();
    let ech = bareiss(m.integer_rows(), n);
    if ech.pivots.len() < n {
        return Ok(Rational::zero());
    }
    let mut det = ech.rows[n - 1][n - 1].clone();
    if ech.swaps % 2 == 1 {
        det = -det;
    }
    Ok(Rational::new(det, scale))
}

/// Solves `a x = b` exactly.
pub fn solve(a: &ExactMatrix, b: &[Rational]) -> Result<Solution, LinalgError> {
    if a.rows != b.len() {
        return Err(LinalgError::DimensionMismatch {
            expected: format!("{} right-hand side entries", a.rows),
            found: b.len().to_string(),
        });
    }
    let aug = a.hstack(&ExactMatrix::column_vector(b));
    let (rows, pivots) = rref(&aug, aug.cols);
    if pivots.last() == Some(&a.cols) {
        return Ok(Solution::NoSolution);
    }
    if pivots.len() < a.cols {
        return Ok(Solution::NonUnique);
    }
    Ok(Solution::Unique(rows.into_iter().map(|r| r[a.cols].clone()).collect()))
}

/// Exact inverse of a square full-rank matrix.
pub fn inverse(m: &ExactMatrix) -> Result<ExactMatrix, LinalgError> {
    if !m.is_square() {
        return Err(LinalgError::DimensionMismatch {
            expected: "square matrix".into(),
            found: format!("{}x{}", m.rows, m.cols),
        });
    }
    let n = m.rows;
    let aug = m.hstack(&ExactMatrix::identity(n));
    let (rows, pivots) = rref(&aug, n);
    if pivots.len() < n {
        return Err(LinalgError::Singular);
    }
    Ok(ExactMatrix::from_fn(n, n, |i, j| rows[i][n + j].clone()))
}

/// Basis of the right null space, one vector per free column in ascending order.
pub fn kernel_basis(m: &ExactMatrix) -> Vec<Vec<Rational>> {
    let (rows, pivots) = rref(m, m.cols);
    let mut is_pivot = vec![false; m.cols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    (0..m.cols)
        .filter(|&f| !is_pivot[f])
        .map(|f| {
            let mut v = vec![Rational::zero(); m.cols];
            v[f] = Rational::one();
            for (row, &p) in rows.iter().zip(&pivots) {
                v[p] = -row[f].clone();
            }
            v
        })
        .collect()
}

/// Characteristic polynomial `det(xI - a)` of an integer matrix (Faddeev–LeVerrier).
pub fn char_poly(a: &ExactMatrix) -> Result<IntPolynomial, LinalgError> {
    if !a.is_square() {
        return Err(LinalgError::DimensionMismatch {
            expected: "square matrix".into(),
            found: format!("{}x{}", a.rows, a.cols),
        });
    }
    let n = a.rows;
    let ai = a.to_integers()?;
    let mut coeffs = vec![BigInt::zero(); n + 1];
    coeffs[n] = BigInt::one();
    // m holds M_k; M_1 = I
    let mut m: Vec<Vec<BigInt>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect();
    for k in 1..=n {
        let am = int_mat_mul(&ai, &m);
        let tr: BigInt = (0..n).map(|i| am[i][i].clone()).sum();
        let (c, rem) = (-tr).div_rem(&BigInt::from(k));
        debug_assert!(rem.is_zero());
        coeffs[n - k] = c.clone();
        m = am;
        for (i, row) in m.iter_mut().enumerate() {
            row[i] += &c;
        }
    }
    Ok(IntPolynomial::new(coeffs))
}

fn int_mat_mul(a: &[Vec<BigInt>], b: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let n = a.len();
    let p = b.first().map_or(0, Vec::len);
    let mut out = vec![vec![BigInt::zero(); p]; n];
    for i in 0..n {
        for (k, brow) in b.iter().enumerate() {
            let x = &a[i][k];
            if x.is_zero() {
                continue;
            }
            for j in 0..p {
                out[i][j] += x * &brow[j];
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fig31() -> ExactMatrix {
        ExactMatrix::from_i64_rows(&[[0, 1, 0, 0], [1, 0, 1, 1], [0, 1, 0, 1], [0, 1, 1, 0]])
    }

    fn fig31_wv() -> ExactMatrix {
        ExactMatrix::from_i64_rows(&[[1, 1, 3, 5], [1, 3, 5, 13], [1, 2, 5, 10], [1, 2, 5, 10]])
    }

    fn fig31_w1() -> ExactMatrix {
        ExactMatrix::from_i64_rows(&[[1, 0, 1, 0], [0, 1, 0, 3], [0, 0, 1, 1], [0, 0, 1, 1]])
    }

    fn ints(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| rat(x)).collect()
    }

    #[test]
    fn rank_examples() {
        assert_eq!(rank(&ExactMatrix::identity(4)), 4);
        assert_eq!(rank(&fig31_wv()), 3);
        assert_eq!(rank(&ExactMatrix::zeros(3, 2)), 0);
    }

    #[test]
    fn rank_with_skipped_columns() {
        let m = ExactMatrix::from_i64_rows(&[[0, 2, 4, 1], [0, 1, 2, 7], [0, 3, 6, 2]]);
        assert_eq!(rank(&m), 2);
    }

    #[test]
    fn solve_identity_returns_rhs() {
        let b = ints(&[3, -1, 7]);
        assert_eq!(solve(&ExactMatrix::identity(3), &b).unwrap(), Solution::Unique(b));
    }

    #[test]
    fn solve_main_poly_dependence() {
        // fourth column of W^{1} in terms of the first three
        let w = fig31_w1();
        let sol = solve(&w.columns_range(0, 2), &w.column(3)).unwrap();
        assert_eq!(sol, Solution::Unique(ints(&[-1, 3, 1])));
    }

    #[test]
    fn solve_inconsistent_and_underdetermined() {
        let a = ExactMatrix::from_i64_rows(&[[1, 1], [2, 2]]);
        assert_eq!(solve(&a, &ints(&[1, 3])).unwrap(), Solution::NoSolution);
        assert_eq!(solve(&a, &ints(&[1, 2])).unwrap(), Solution::NonUnique);
        assert!(solve(&a, &ints(&[1])).is_err());
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(inverse(&ExactMatrix::identity(3)).unwrap(), ExactMatrix::identity(3));
        let d = ExactMatrix::from_i64_rows(&[[2, 0], [0, 4]]);
        let expected = ExactMatrix::new(
            2,
            2,
            vec![Rational::new(1.into(), 2.into()), rat(0), rat(0), Rational::new(1.into(), 4.into())],
        );
        assert_eq!(inverse(&d).unwrap(), expected);
        assert_eq!(inverse(&fig31_wv()), Err(LinalgError::Singular));
    }

    #[test]
    fn inverse_of_gram_matrix() {
        let w = fig31_w1().columns_range(0, 2);
        let gram = &w.transpose() * &w;
        let inv = inverse(&gram).unwrap();
        assert_eq!(&gram * &inv, ExactMatrix::identity(3));
        assert_eq!(&inv * &gram, ExactMatrix::identity(3));
    }

    #[test]
    fn kernel_examples() {
        assert!(kernel_basis(&ExactMatrix::identity(4)).is_empty());
        let k = kernel_basis(&fig31_wv().transpose());
        assert_eq!(k.len(), 1);
        // proportional to (0, 0, 1, -1)
        let v = &k[0];
        assert!(v[0].is_zero() && v[1].is_zero());
        assert_eq!(v[2], -v[3].clone());
        assert!(!v[2].is_zero());
    }

    #[test]
    fn char_poly_examples() {
        let z = char_poly(&ExactMatrix::zeros(2, 2)).unwrap();
        assert_eq!(z, IntPolynomial::from_i64(&[0, 0, 1]));
        assert_eq!(char_poly(&fig31()).unwrap(), IntPolynomial::from_i64(&[1, -2, -4, 0, 1]));
        let c3 = ExactMatrix::from_i64_rows(&[[0, 1, 1], [1, 0, 1], [1, 1, 0]]);
        assert_eq!(char_poly(&c3).unwrap(), IntPolynomial::from_i64(&[-2, -3, 0, 1]));
        let half = ExactMatrix::new(1, 1, vec![Rational::new(1.into(), 2.into())]);
        assert_eq!(char_poly(&half), Err(LinalgError::NonInteger { row: 0, col: 0 }));
    }

    #[test]
    fn determinant_matches_known_values() {
        assert_eq!(determinant(&fig31()).unwrap(), rat(1));
        assert_eq!(determinant(&fig31_wv()).unwrap(), rat(0));
        let m = ExactMatrix::from_i64_rows(&[[0, 2], [3, 1]]);
        assert_eq!(determinant(&m).unwrap(), rat(-6));
        let half = ExactMatrix::new(1, 1, vec![Rational::new(3.into(), 2.into())]);
        assert_eq!(determinant(&half).unwrap(), Rational::new(3.into(), 2.into()));
    }

    #[test]
    fn permute_rows_places_row_at_image() {
        let m = ExactMatrix::from_i64_rows(&[[1], [2], [3]]);
        let p = m.permute_rows(&[2, 0, 1]);
        assert_eq!(p, ExactMatrix::from_i64_rows(&[[2], [3], [1]]));
    }
}
