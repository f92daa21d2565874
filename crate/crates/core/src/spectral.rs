//! Spectral data recovered from a walk matrix alone: rank, main polynomial,
//! the W-restriction `A_W`, the kernel projector, and a numeric realization
//! `W = E M` of the main eigenvectors and eigenvalues.
//!
//! The exact layer only ever carries the main polynomial; eigenvalues exist
//! here as floats in [`NumericRealization`].

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Graph, VertexSet};
use crate::json::int_value;
use crate::linalg::{self, int_rat, ExactMatrix, FloatMatrix, LinalgError, Rational, Solution};
use crate::poly::IntPolynomial;
use crate::walk::{self, WalkError, WalkMatrix};

/// Root bracketing tolerance for main eigenvalues.
pub const ROOT_TOL: f64 = 1e-10;
/// Relative tolerance for the `W = E M` realization checks.
pub const REALIZATION_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpectralError {
    #[error(transparent)]
    Walk(#[from] WalkError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("columns 0..{rank} of the walk matrix are dependent; not a walk matrix")]
    DependentPrefix { rank: usize },
    #[error("recovered polynomial has non-integer coefficients; not a walk matrix")]
    NonIntegerPolynomial,
    #[error("main eigenvalues not separated at tolerance {tol}")]
    RootsNotSeparated { tol: f64 },
    #[error("numeric realization residual {residual:e} exceeds {limit:e}")]
    RealizationFailed { residual: f64, limit: f64 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpectralSummary {
    pub rank: usize,
    pub main_poly: IntPolynomial,
    pub full_rank: bool,
    /// Present exactly when the walk matrix is invertible; then it equals `main_poly`.
    pub char_poly: Option<IntPolynomial>,
}

/// Floating-point view of `W = E M`: `mu` ascending, `eig_matrix` is `r x n`
/// with rows `mu_i^0 .. mu_i^{n-1}`, `vec_matrix` is `n x r` with the main eigenvectors.
#[derive(Debug, Clone, PartialEq)]
pub struct NumericRealization {
    pub mu: Vec<f64>,
    pub eig_matrix: FloatMatrix,
    pub vec_matrix: FloatMatrix,
    pub tolerance: f64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Restriction {
    pub a_w: ExactMatrix,
}

/// Main polynomial from a column block `[e, Ae, ..., A^k e]` with `k >= rank`.
///
/// Returns `(r, p)` where `A^r e` is the unique combination of the first `r`
/// columns and `p(x) = x^r - f_{r-1} x^{r-1} - ... - f_0`.
pub fn main_poly_from_columns(cols: &ExactMatrix) -> Result<(usize, IntPolynomial), SpectralError> {
    let r = linalg::rank(cols);
    if r == 0 {
        return Err(WalkError::EmptySet.into());
    }
    if r >= cols.cols() {
        return Err(SpectralError::DependentPrefix { rank: r });
    }
    let prefix = cols.columns_range(0, r - 1);
    match linalg::solve(&prefix, &cols.column(r))? {
        Solution::Unique(f) => {
            let mut coeffs = Vec::with_capacity(r + 1);
            for x in f {
                if !x.is_integer() {
                    return Err(SpectralError::NonIntegerPolynomial);
                }
                coeffs.push(-x.to_integer());
            }
            coeffs.push(BigInt::one());
            Ok((r, IntPolynomial::new(coeffs)))
        }
        _ => Err(SpectralError::DependentPrefix { rank: r }),
    }
}

/// Characteristic polynomial of an invertible walk matrix from its walk numbers:
/// solves `(W_[0,n-2]^T W_[0,n-2]) c = -(n_n, ..., n_{2n-2})` with `c_{n-1} = 0`.
pub fn char_poly_from_hankel(w: &WalkMatrix) -> Result<IntPolynomial, SpectralError> {
    let n = w.order();
    let nums = w.walk_numbers();
    let mut coeffs = vec![BigInt::zero(); n + 1];
    coeffs[n] = BigInt::one();
    if n > 1 {
        let head = w.columns(0, n - 2);
        let gram = &head.transpose() * &head;
        let rhs: Vec<Rational> = (n..=2 * n - 2).map(|k| -nums[k].clone()).collect();
        match linalg::solve(&gram, &rhs)? {
            Solution::Unique(c) => {
                for (k, x) in c.into_iter().enumerate() {
                    if !x.is_integer() {
                        return Err(SpectralError::NonIntegerPolynomial);
                    }
                    coeffs[k] = x.to_integer();
                }
            }
            _ => return Err(LinalgError::Singular.into()),
        }
    }
    Ok(IntPolynomial::new(coeffs))
}

pub fn summarize(w: &WalkMatrix) -> Result<SpectralSummary, SpectralError> {
    let n = w.order();
    let r = linalg::rank(w.matrix());
    if r == n {
        let head = w.matrix();
        if n > 1 && linalg::rank(&head.columns_range(0, n - 2)) != n - 1 {
            return Err(SpectralError::DependentPrefix { rank: n });
        }
        let cp = char_poly_from_hankel(w)?;
        return Ok(SpectralSummary { rank: n, main_poly: cp.clone(), full_rank: true, char_poly: Some(cp) });
    }
    let (r2, main_poly) = main_poly_from_columns(&w.columns(0, r))?;
    if r2 != r {
        return Err(SpectralError::DependentPrefix { rank: r });
    }
    Ok(SpectralSummary { rank: r, main_poly, full_rank: false, char_poly: None })
}

pub fn spectral_summary(g: &Graph, s: &VertexSet) -> Result<SpectralSummary, SpectralError> {
    summarize(&walk::walk_matrix(g, s)?)
}

/// `W_[0,upto]`, continuing past column `n-1` with the main-polynomial recurrence.
pub fn extend_columns(w: &WalkMatrix, main_poly: &IntPolynomial, upto: usize) -> ExactMatrix {
    let n = w.order();
    let r = main_poly.degree();
    let mut cols: Vec<Vec<Rational>> = (0..n.min(upto + 1)).map(|k| w.matrix().column(k)).collect();
    let m: Vec<Rational> = main_poly.coeffs().iter().map(int_rat).collect();
    for k in n..=upto {
        let mut next = vec![Rational::zero(); n];
        for (j, mj) in m.iter().enumerate().take(r) {
            if mj.is_zero() {
                continue;
            }
            for (x, c) in next.iter_mut().zip(&cols[k - r + j]) {
                *x -= mj * c;
            }
        }
        cols.push(next);
    }
    ExactMatrix::from_columns(n, &cols)
}

/// `W^† = (W_[0,r-1]^T W_[0,r-1])^{-1} W_[0,r-1]^T`.
pub fn pseudo_inverse(w: &WalkMatrix, r: usize) -> Result<ExactMatrix, SpectralError> {
    let head = w.columns(0, r - 1);
    let ht = head.transpose();
    Ok(&linalg::inverse(&(&ht * &head))? * &ht)
}

/// Exact pieces shared by the restriction, the projector and reconstruction.
#[derive(Debug, Clone)]
pub struct Decomposition {
    pub summary: SpectralSummary,
    /// `W_[1,r] W^†`, which equals `A_W`.
    pub a_w: ExactMatrix,
    /// `I - W_[0,r-1] W^†`, the orthogonal projector onto `ker W^T`.
    pub projector: ExactMatrix,
}

pub fn decompose(w: &WalkMatrix) -> Result<Decomposition, SpectralError> {
    let summary = summarize(w)?;
    let r = summary.rank;
    let n = w.order();
    let dagger = pseudo_inverse(w, r)?;
    let shifted = extend_columns(w, &summary.main_poly, r).columns_range(1, r);
    let a_w = &shifted * &dagger;
    let projector = &ExactMatrix::identity(n) - &(&w.columns(0, r - 1) * &dagger);
    Ok(Decomposition { summary, a_w, projector })
}

pub fn restriction_of(w: &WalkMatrix) -> Result<Restriction, SpectralError> {
    Ok(Restriction { a_w: decompose(w)?.a_w })
}

pub fn restriction(g: &Graph, s: &VertexSet) -> Result<Restriction, SpectralError> {
    restriction_of(&walk::walk_matrix(g, s)?)
}

pub fn kernel_projector_of(w: &WalkMatrix) -> Result<ExactMatrix, SpectralError> {
    let r = linalg::rank(w.matrix());
    let n = w.order();
    let dagger = pseudo_inverse(w, r)?;
    Ok(&ExactMatrix::identity(n) - &(&w.columns(0, r - 1) * &dagger))
}

pub fn kernel_projector(g: &Graph, s: &VertexSet) -> Result<ExactMatrix, SpectralError> {
    kernel_projector_of(&walk::walk_matrix(g, s)?)
}

/// Numeric `E` and `M` from the walk matrix, with `mu` the ascending real roots
/// of the main polynomial bracketed to `tol`.
pub fn realize(w: &WalkMatrix, tol: f64) -> Result<NumericRealization, SpectralError> {
    let summary = summarize(w)?;
    let r = summary.rank;
    let n = w.order();
    let mu = summary.main_poly.real_roots(tol);
    if mu.len() != r || mu.windows(2).any(|p| p[1] - p[0] <= tol) {
        return Err(SpectralError::RootsNotSeparated { tol });
    }
    let eig_matrix = DMatrix::from_fn(r, n, |i, k| mu[i].powi(k as i32));
    // Scale column k by s^{-k} before solving so the Vandermonde block stays bounded.
    let s = mu.iter().fold(1.0f64, |acc, m| acc.max(m.abs()));
    let wf = w.matrix().to_f64();
    let w_scaled = DMatrix::from_fn(n, r, |i, k| wf[(i, k)] / s.powi(k as i32));
    let m_scaled = DMatrix::from_fn(r, r, |i, k| mu[i].powi(k as i32) / s.powi(k as i32));
    let lu = m_scaled.transpose().lu();
    let vec_t = lu
        .solve(&w_scaled.transpose())
        .ok_or(SpectralError::RootsNotSeparated { tol })?;
    let real = NumericRealization { mu, eig_matrix, vec_matrix: vec_t.transpose(), tolerance: tol };
    let residual = real.relative_residual(&wf);
    if residual > REALIZATION_TOL {
        return Err(SpectralError::RealizationFailed { residual, limit: REALIZATION_TOL });
    }
    Ok(real)
}

pub fn main_eigen_realize(g: &Graph, s: &VertexSet, tol: f64) -> Result<NumericRealization, SpectralError> {
    realize(&walk::walk_matrix(g, s)?, tol)
}

impl NumericRealization {
    /// `max |E M - W| / max |W|`.
    pub fn relative_residual(&self, w: &FloatMatrix) -> f64 {
        let em = &self.vec_matrix * &self.eig_matrix;
        let scale = w.amax().max(1.0);
        (em - w).amax() / scale
    }

    /// `max |sum_i e_i - e|`.
    pub fn decomposition_error(&self, e: &[f64]) -> f64 {
        let sums = self.vec_matrix.column_sum();
        sums.iter().zip(e).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    }

    /// `max_i |A e_i - mu_i e_i|`, relative to the largest eigenvector entry.
    pub fn eigen_residual(&self, a: &FloatMatrix) -> f64 {
        let scale = self.vec_matrix.amax().max(1.0);
        (0..self.mu.len())
            .map(|i| {
                let col = self.vec_matrix.column(i);
                (a * col - col * self.mu[i]).amax()
            })
            .fold(0.0, f64::max)
            / scale
    }

    /// `det(M_[0,r-1])^2`, which is the discriminant of the main polynomial.
    pub fn det_squared(&self) -> f64 {
        let r = self.mu.len();
        let mut d = 1.0;
        for i in 0..r {
            for j in i + 1..r {
                d *= (self.mu[j] - self.mu[i]).powi(2);
            }
        }
        d
    }
}

/// JSON form of a spectral summary; integers beyond 53 bits render as strings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralJson {
    pub rank: usize,
    pub main_poly: Vec<serde_json::Value>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub char_poly: Option<Vec<serde_json::Value>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub mu: Option<Vec<f64>>,
}

impl SpectralSummary {
    pub fn to_json(&self, realization: Option<&NumericRealization>) -> SpectralJson {
        let coeffs = |p: &IntPolynomial| p.coeffs().iter().map(int_value).collect();
        SpectralJson {
            rank: self.rank,
            main_poly: coeffs(&self.main_poly),
            char_poly: self.char_poly.as_ref().map(coeffs),
            mu: realization.map(|r| r.mu.clone()),
        }
    }
}
