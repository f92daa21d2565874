//! Walk matrices `W^S = [e, Ae, ..., A^{n-1}e]`, their column slices and the
//! Hankel walk-count matrix.
//!
//! Columns are produced by neighbour summation, never by matrix powers:
//! column `k+1` at vertex `v` is the sum of column `k` over the neighbours of `v`.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Graph, VertexSet};
use crate::linalg::{int_rat, ExactMatrix, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WalkError {
    #[error("vertex set is empty")]
    EmptySet,
    #[error("vertex sets are not disjoint")]
    NotDisjoint,
    #[error("order mismatch: graph has {graph} vertices, set is over {set}")]
    OrderMismatch { graph: usize, set: usize },
    #[error("invalid column range [{lo}, {hi}]")]
    InvalidRange { lo: usize, hi: usize },
    #[error("invalid walk matrix: {0}")]
    Invalid(String),
}

/// The walk matrix of some graph for a vertex set `S`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WalkMatrix {
    w: ExactMatrix,
    set: VertexSet,
}

/// Columns `A^lo e, ..., A^hi e`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WalkSlice {
    pub lo: usize,
    pub hi: usize,
    pub m: ExactMatrix,
}

fn check_set(g: &Graph, s: &VertexSet) -> Result<(), WalkError> {
    if s.order() != g.order() {
        return Err(WalkError::OrderMismatch { graph: g.order(), set: s.order() });
    }
    if s.is_empty() {
        return Err(WalkError::EmptySet);
    }
    Ok(())
}

/// Integer columns `A^0 e .. A^{count-1} e` by repeated neighbour summation.
pub fn walk_columns(g: &Graph, s: &VertexSet, count: usize) -> Vec<Vec<BigInt>> {
    let n = g.order();
    let mut cols: Vec<Vec<BigInt>> = Vec::with_capacity(count);
    if count == 0 {
        return cols;
    }
    cols.push((0..n).map(|v| if s.contains(v) { BigInt::one() } else { BigInt::zero() }).collect());
    for k in 1..count {
        let prev = &cols[k - 1];
        let next = (0..n)
            .map(|v| g.neighbors(v).iter().map(|&u| &prev[u]).sum())
            .collect();
        cols.push(next);
    }
    cols
}

fn matrix_from_int_columns(n: usize, cols: &[Vec<BigInt>]) -> ExactMatrix {
    ExactMatrix::from_fn(n, cols.len(), |i, j| int_rat(&cols[j][i]))
}

pub fn walk_matrix(g: &Graph, s: &VertexSet) -> Result<WalkMatrix, WalkError> {
    check_set(g, s)?;
    let n = g.order();
    let cols = walk_columns(g, s, n);
    Ok(WalkMatrix { w: matrix_from_int_columns(n, &cols), set: s.clone() })
}

pub fn slice(g: &Graph, s: &VertexSet, lo: usize, hi: usize) -> Result<WalkSlice, WalkError> {
    check_set(g, s)?;
    if lo > hi {
        return Err(WalkError::InvalidRange { lo, hi });
    }
    let cols = walk_columns(g, s, hi + 1);
    Ok(WalkSlice { lo, hi, m: matrix_from_int_columns(g.order(), &cols[lo..]) })
}

/// `A * lower == upper` exactly, where `upper` should be `lower` shifted by one column.
pub fn shift_holds(a: &ExactMatrix, lower: &WalkSlice, upper: &WalkSlice) -> bool {
    upper.lo == lower.lo + 1 && upper.hi == lower.hi + 1 && a * &lower.m == upper.m
}

/// `A W_[i,j] = W_[i+1,j+1]`.
pub fn shift_identity_check(g: &Graph, s: &VertexSet, lo: usize, hi: usize) -> Result<bool, WalkError> {
    let lower = slice(g, s, lo, hi)?;
    let upper = slice(g, s, lo + 1, hi + 1)?;
    Ok(shift_holds(&g.adjacency_matrix(), &lower, &upper))
}

/// `W^S + W^T = W^{S ∪ T}` for disjoint `S`, `T`.
pub fn additivity_check(g: &Graph, s: &VertexSet, t: &VertexSet) -> Result<bool, WalkError> {
    check_set(g, s)?;
    check_set(g, t)?;
    if !s.is_disjoint(t) {
        return Err(WalkError::NotDisjoint);
    }
    let ws = walk_matrix(g, s)?;
    let wt = walk_matrix(g, t)?;
    let wu = walk_matrix(g, &s.union(t))?;
    Ok(&ws.w + &wt.w == wu.w)
}

/// `(W_[i,j])^T W_[i,j]`, whose `(p, q)` entry counts `(2i+p+q)`-walks with both ends in `S`.
pub fn hankel_matrix(g: &Graph, s: &VertexSet, lo: usize, hi: usize) -> Result<ExactMatrix, WalkError> {
    if lo >= hi {
        return Err(WalkError::InvalidRange { lo, hi });
    }
    let sl = slice(g, s, lo, hi)?;
    Ok(&sl.m.transpose() * &sl.m)
}

/// True iff the square matrix is constant along every anti-diagonal.
pub fn is_hankel(m: &ExactMatrix) -> bool {
    (0..m.rows()).all(|p| {
        (0..m.cols()).all(|q| p == 0 || q + 1 == m.cols() || m.get(p, q) == m.get(p - 1, q + 1))
    })
}

impl WalkMatrix {
    /// Validates a bare matrix as a walk matrix: square, non-negative integer
    /// entries, first column a non-zero 0/1 vector. The set is read from column 0.
    pub fn from_matrix(w: ExactMatrix) -> Result<WalkMatrix, WalkError> {
        if !w.is_square() || w.rows() == 0 {
            return Err(WalkError::Invalid(format!("expected a non-empty square matrix, got {}x{}", w.rows(), w.cols())));
        }
        if let Some(x) = w.entries().iter().find(|x| !x.is_integer() || x.is_negative()) {
            return Err(WalkError::Invalid(format!("entry {x} is not a non-negative integer")));
        }
        let set = VertexSet::from_characteristic(&w.column(0))
            .ok_or_else(|| WalkError::Invalid("first column is not a 0/1 vector".into()))?;
        if set.is_empty() {
            return Err(WalkError::EmptySet);
        }
        Ok(WalkMatrix { w, set })
    }

    pub fn order(&self) -> usize {
        self.w.rows()
    }

    pub fn matrix(&self) -> &ExactMatrix {
        &self.w
    }

    pub fn set(&self) -> &VertexSet {
        &self.set
    }

    /// `W_[lo,hi]` for `hi < n`.
    pub fn columns(&self, lo: usize, hi: usize) -> ExactMatrix {
        self.w.columns_range(lo, hi)
    }

    /// Walk numbers `n_0 .. n_{2n-2}` (walks with both ends in `S`), read off `W^T W`.
    pub fn walk_numbers(&self) -> Vec<Rational> {
        let h = &self.w.transpose() * &self.w;
        let n = self.order();
        (0..2 * n - 1)
            .map(|k| if k < n { h.get(0, k).clone() } else { h.get(k - n + 1, n - 1).clone() })
            .collect()
    }

    pub fn to_json(&self) -> WalkMatrixJson {
        WalkMatrixJson {
            n: self.order(),
            set: self.set.one_based(),
            columns: (0..self.order())
                .map(|j| self.w.column(j).iter().map(|x| x.to_string()).collect())
                .collect(),
        }
    }

    pub fn from_json(doc: &WalkMatrixJson) -> Result<WalkMatrix, WalkError> {
        let n = doc.n;
        if doc.columns.len() != n || doc.columns.iter().any(|c| c.len() != n) {
            return Err(WalkError::Invalid(format!("expected {n} columns of length {n}")));
        }
        let cols: Vec<Vec<Rational>> = doc
            .columns
            .iter()
            .map(|c| c.iter().map(|s| parse_rational(s)).collect::<Result<_, _>>())
            .collect::<Result<_, _>>()?;
        let wm = WalkMatrix::from_matrix(ExactMatrix::from_columns(n, &cols))?;
        let declared = VertexSet::from_one_based(n, &doc.set).map_err(|e| WalkError::Invalid(e.to_string()))?;
        if declared != wm.set {
            return Err(WalkError::Invalid("declared set disagrees with column 0".into()));
        }
        Ok(wm)
    }

    /// Plain text: optional `# set: i,j,k` header (1-based), then `n` rows of `n` integers.
    pub fn parse_text(text: &str) -> Result<WalkMatrix, WalkError> {
        let mut declared: Option<Vec<usize>> = None;
        let mut rows = Vec::new();
        for line in text.lines() {
            let line = line.trim();
            if let Some(rest) = line.strip_prefix('#') {
                if let Some(list) = rest.trim().strip_prefix("set:") {
                    let labels = list
                        .split(',')
                        .map(|t| t.trim().parse::<usize>())
                        .collect::<Result<Vec<_>, _>>()
                        .map_err(|_| WalkError::Invalid(format!("bad set header `{line}`")))?;
                    declared = Some(labels);
                }
                continue;
            }
            if line.is_empty() {
                continue;
            }
            let row = line
                .split_whitespace()
                .map(parse_rational)
                .collect::<Result<Vec<_>, _>>()?;
            rows.push(row);
        }
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(WalkError::Invalid("walk matrix text must be square".into()));
        }
        let wm = WalkMatrix::from_matrix(ExactMatrix::from_rows(rows))?;
        if let Some(labels) = declared {
            let s = VertexSet::from_one_based(n, &labels).map_err(|e| WalkError::Invalid(e.to_string()))?;
            if s != wm.set {
                return Err(WalkError::Invalid("declared set disagrees with column 0".into()));
            }
        }
        Ok(wm)
    }

    pub fn to_text(&self) -> String {
        let set: Vec<String> = self.set.one_based().iter().map(ToString::to_string).collect();
        let mut s = format!("# set: {}\n", set.join(","));
        for i in 0..self.order() {
            let row: Vec<String> = self.w.row(i).iter().map(ToString::to_string).collect();
            s.push_str(&row.join(" "));
            s.push('\n');
        }
        s
    }
}

fn parse_rational(s: &str) -> Result<Rational, WalkError> {
    let bad = || WalkError::Invalid(format!("bad number `{s}`"));
    match s.split_once('/') {
        Some((a, b)) => {
            let d: BigInt = b.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(a.trim().parse().map_err(|_| bad())?, d))
        }
        None => Ok(Rational::from_integer(s.trim().parse().map_err(|_| bad())?)),
    }
}

/// JSON form: integers rendered as decimal strings so arbitrary precision survives.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WalkMatrixJson {
    pub n: usize,
    pub set: Vec<usize>,
    pub columns: Vec<Vec<String>>,
}
