//! Lexicographic row order of walk matrices, walk equivalence, and
//! isomorphism certificates derived from two lex forms.
//!
//! A certificate permutation `g` maps vertex `i` of the first graph to
//! vertex `g[i]` of the second. It is checked edge by edge and on the vertex
//! sets before it is returned.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Graph, VertexSet};
use crate::linalg::{self, ExactMatrix};
use crate::spectral::{self, SpectralError};
use crate::walk::{self, WalkError, WalkMatrix};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CanonicalError {
    #[error("order mismatch: {0} vs {1} vertices")]
    OrderMismatch(usize, usize),
    #[error(transparent)]
    Walk(#[from] WalkError),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
    #[error("walk matrices equal: {walk_equal}, sets and restrictions equal: {restriction_equal}")]
    TheoremViolation { walk_equal: bool, restriction_equal: bool },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LexForm {
    /// Rows of `W` in descending lexicographic order.
    pub matrix: ExactMatrix,
    /// `perm[i]` is the position of input row `i` in `matrix`.
    pub perm: Vec<usize>,
    /// Input row indices of every run of two or more equal rows, in sorted order.
    pub ties: Vec<Vec<usize>>,
}

fn cmp_rows(w: &ExactMatrix, a: usize, b: usize) -> Ordering {
    (0..w.cols())
        .map(|k| w.get(a, k).cmp(w.get(b, k)))
        .find(|o| o.is_ne())
        .unwrap_or(Ordering::Equal)
}

/// Descending lex order; equal rows keep their input order.
pub fn lex_form_of(w: &ExactMatrix) -> LexForm {
    let n = w.rows();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| cmp_rows(w, b, a));
    let mut perm = vec![0; n];
    for (pos, &i) in order.iter().enumerate() {
        perm[i] = pos;
    }
    let mut ties = Vec::new();
    let mut start = 0;
    for end in 1..=n {
        if end == n || cmp_rows(w, order[start], order[end]).is_ne() {
            if end - start > 1 {
                ties.push(order[start..end].to_vec());
            }
            start = end;
        }
    }
    LexForm { matrix: w.permute_rows(&perm), perm, ties }
}

pub fn lex_form(w: &WalkMatrix) -> LexForm {
    lex_form_of(w.matrix())
}

pub fn walk_equivalent(w1: &WalkMatrix, w2: &WalkMatrix) -> bool {
    w1.order() == w2.order() && lex_form(w1).matrix == lex_form(w2).matrix
}

/// Cycle notation over labels `v1..vn`, each cycle led by its smallest vertex,
/// fixed points included, e.g. `(v1,v4,v3)(v2)`.
pub fn cycle_notation(perm: &[usize]) -> String {
    let mut seen = vec![false; perm.len()];
    let mut out = String::new();
    for start in 0..perm.len() {
        if seen[start] {
            continue;
        }
        let mut cycle = Vec::new();
        let mut v = start;
        while !seen[v] {
            seen[v] = true;
            cycle.push(format!("v{}", v + 1));
            v = perm[v];
        }
        out.push('(');
        out.push_str(&cycle.join(","));
        out.push(')');
    }
    out
}

pub fn invert(perm: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; perm.len()];
    for (i, &p) in perm.iter().enumerate() {
        inv[p] = i;
    }
    inv
}

pub fn one_based(perm: &[usize]) -> Vec<usize> {
    perm.iter().map(|p| p + 1).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InconclusiveReason {
    /// Walk-equivalent below rank `n-1`, where walk equivalence does not imply isomorphism.
    RankTooLow,
    /// Walk-equivalent at rank `n-1` or more but the derived relabelling failed.
    CandidateFailed,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IsoCertificate {
    Isomorphic(Vec<usize>),
    IsomorphicPair(Vec<usize>, Vec<usize>),
    /// No isomorphism maps the first set onto the second.
    NotIsomorphic,
    Inconclusive(InconclusiveReason),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateJson {
    pub verdict: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub permutation: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub permutation2: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub reason: Option<InconclusiveReason>,
}

impl IsoCertificate {
    pub fn is_isomorphic(&self) -> bool {
        matches!(self, IsoCertificate::Isomorphic(_) | IsoCertificate::IsomorphicPair(..))
    }

    pub fn to_json(&self) -> CertificateJson {
        let mut doc = CertificateJson { verdict: String::new(), permutation: None, permutation2: None, reason: None };
        match self {
            IsoCertificate::Isomorphic(p) => {
                doc.verdict = "isomorphic".into();
                doc.permutation = Some(one_based(p));
            }
            IsoCertificate::IsomorphicPair(p, q) => {
                doc.verdict = "isomorphic_pair".into();
                doc.permutation = Some(one_based(p));
                doc.permutation2 = Some(one_based(q));
            }
            IsoCertificate::NotIsomorphic => doc.verdict = "not_isomorphic".into(),
            IsoCertificate::Inconclusive(r) => {
                doc.verdict = "inconclusive".into();
                doc.reason = Some(*r);
            }
        }
        doc
    }
}

/// True iff `perm` is an isomorphism `g1 -> g2` carrying `s1` onto `s2`.
pub fn is_isomorphism(g1: &Graph, s1: &VertexSet, g2: &Graph, s2: &VertexSet, perm: &[usize]) -> bool {
    g1.order() == g2.order()
        && perm.len() == g1.order()
        && g1.edge_count() == g2.edge_count()
        && g1.edges().iter().all(|&(u, v)| g2.has_edge(perm[u], perm[v]))
        && s1.len() == s2.len()
        && s1.members().iter().all(|&v| s2.contains(perm[v]))
}

/// Certificate for an isomorphism `g1 -> g2` mapping `s1` onto `s2`.
///
/// Different lex forms give `NotIsomorphic` at every rank. Equal lex forms
/// give the relabelling `g = (h2)^{-1} h1` (and, with one pair of repeated
/// rows, `g` composed with that swap); every candidate is verified.
pub fn certify_isomorphism(
    g1: &Graph,
    s1: &VertexSet,
    g2: &Graph,
    s2: &VertexSet,
) -> Result<IsoCertificate, CanonicalError> {
    if g1.order() != g2.order() {
        return Err(CanonicalError::OrderMismatch(g1.order(), g2.order()));
    }
    let n = g1.order();
    let w1 = walk::walk_matrix(g1, s1)?;
    let w2 = walk::walk_matrix(g2, s2)?;
    let l1 = lex_form(&w1);
    let l2 = lex_form(&w2);
    if l1.matrix != l2.matrix {
        return Ok(IsoCertificate::NotIsomorphic);
    }
    let inv2 = invert(&l2.perm);
    let g: Vec<usize> = (0..n).map(|i| inv2[l1.perm[i]]).collect();
    let mut candidates = vec![g.clone()];
    if let [pair] = l1.ties.as_slice() {
        if let [a, b] = pair.as_slice() {
            let mut swapped = g;
            swapped.swap(*a, *b);
            candidates.push(swapped);
        }
    }
    let mut verified: Vec<Vec<usize>> =
        candidates.into_iter().filter(|p| is_isomorphism(g1, s1, g2, s2, p)).collect();
    let high_rank = linalg::rank(w1.matrix()) + 1 >= n;
    Ok(match verified.len() {
        0 if high_rank => IsoCertificate::Inconclusive(InconclusiveReason::CandidateFailed),
        0 => IsoCertificate::Inconclusive(InconclusiveReason::RankTooLow),
        1 => IsoCertificate::Isomorphic(verified.remove(0)),
        _ => {
            let q = verified.pop().expect("two candidates");
            IsoCertificate::IsomorphicPair(verified.pop().expect("two candidates"), q)
        }
    })
}

/// Automorphism of `g` carrying `s1` onto `s2`.
pub fn certify_set_automorphism(g: &Graph, s1: &VertexSet, s2: &VertexSet) -> Result<IsoCertificate, CanonicalError> {
    certify_isomorphism(g, s1, g, s2)
}

/// `W^{s1} = W^{s2}` iff `s1 = s2` and the W-restrictions agree; returns the
/// common value and fails if the two sides disagree.
pub fn restriction_equivalence_check(
    g1: &Graph,
    s1: &VertexSet,
    g2: &Graph,
    s2: &VertexSet,
) -> Result<bool, CanonicalError> {
    if g1.order() != g2.order() {
        return Err(CanonicalError::OrderMismatch(g1.order(), g2.order()));
    }
    let w1 = walk::walk_matrix(g1, s1)?;
    let w2 = walk::walk_matrix(g2, s2)?;
    let walk_equal = w1.matrix() == w2.matrix();
    let restriction_equal =
        s1 == s2 && spectral::restriction_of(&w1)?.a_w == spectral::restriction_of(&w2)?.a_w;
    if walk_equal == restriction_equal {
        Ok(walk_equal)
    } else {
        Err(CanonicalError::TheoremViolation { walk_equal, restriction_equal })
    }
}
