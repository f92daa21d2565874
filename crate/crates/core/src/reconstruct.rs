//! Recovering the adjacency matrix from a walk matrix of rank `n`, `n-1` or `n-2`.
//!
//! Every route ends in [`verify_candidate`]: a candidate is only returned once
//! its own walk matrix reproduces the input exactly.
//!
//! Notation used below: `W_r = W_[0,r-1]`, `W^† = (W_r^T W_r)^{-1} W_r^T`,
//! `B0 = W_[1,r] W^†` (the W-restriction) and `P = I - W_r W^†` (projector onto
//! `ker W^T`). Then `A = B0 + Σ λ_j f_j f_j^T` over the non-main eigenpairs.
//!
//! For rank `n-2` write the main polynomial as `x^{n-2} + a1 x^{n-3} + a2 x^{n-4} + ...`
//! and `d = 4(a2 + m) - 3 a1^2`. With `f1, f2` the non-main eigenvectors,
//! `A - B0 - (a1/2) P = (√d/2)(f2 f2^T - f1 f1^T)`. The right side is a
//! symmetric, traceless operator on the plane `ker W^T` whose square is
//! `(d/4) P`; the left side is rational. So for a rational kernel basis `K`
//! (`n x 2`, Gram matrix `G = K^T K`) the correction is `K C K^T` with `C`
//! rational symmetric, `tr(CG) = 0` and `det C = -d / (4 det G)`. The zero
//! diagonal of `A` gives linear equations in the two free parameters of `C`;
//! combined with the (negative definite) determinant condition this leaves at
//! most two rational solutions.

use nalgebra::DVector;
use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::Graph;
use crate::linalg::{self, rat, to_f64, ExactMatrix, LinalgError, Rational, Solution};
use crate::spectral::{self, SpectralError};
use crate::walk::{self, WalkMatrix};

/// Coordinate filter and rounding tolerance of the floating-point rank `n-2` route.
pub const NUMERIC_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ReconstructError {
    #[error(transparent)]
    Spectral(#[from] SpectralError),
    #[error("walk matrix has rank {found}, this route needs rank {expected}")]
    WrongRank { expected: usize, found: usize },
    #[error("recovered matrix is not the adjacency matrix of a graph with this walk matrix")]
    CandidateNotGraph,
    #[error("edge count required when the walk matrix is not the standard one")]
    MissingEdgeCount,
    #[error("negative discriminant {0}: inconsistent walk matrix")]
    NegativeDiscriminant(BigInt),
}

impl From<LinalgError> for ReconstructError {
    fn from(e: LinalgError) -> Self {
        ReconstructError::Spectral(e.into())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum UndeterminedReason {
    RankTooLow,
    NoValidCandidate,
    MissingEdgeCount,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ReconstructionResult {
    Unique(Graph),
    Pair(Graph, Graph),
    Undetermined(UndeterminedReason),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReconstructionInput {
    pub w: WalkMatrix,
    pub edge_count_hint: Option<usize>,
}

impl ReconstructionInput {
    pub fn new(w: WalkMatrix) -> Self {
        ReconstructionInput { w, edge_count_hint: None }
    }

    pub fn with_edges(w: WalkMatrix, m: usize) -> Self {
        ReconstructionInput { w, edge_count_hint: Some(m) }
    }
}

impl ReconstructionResult {
    pub fn graphs(&self) -> Vec<&Graph> {
        match self {
            ReconstructionResult::Unique(g) => vec![g],
            ReconstructionResult::Pair(g, h) => vec![g, h],
            ReconstructionResult::Undetermined(_) => Vec::new(),
        }
    }

    fn from_candidates(mut graphs: Vec<Graph>) -> Self {
        graphs.sort_by_key(Graph::to_graph6);
        graphs.dedup();
        match graphs.len() {
            0 => ReconstructionResult::Undetermined(UndeterminedReason::NoValidCandidate),
            1 => ReconstructionResult::Unique(graphs.remove(0)),
            2 => {
                let h = graphs.pop().expect("two graphs");
                ReconstructionResult::Pair(graphs.pop().expect("two graphs"), h)
            }
            k => unreachable!("at most two candidates by construction, found {k}"),
        }
    }

    pub fn to_json(&self) -> ReconstructionJson {
        let (status, reason) = match self {
            ReconstructionResult::Unique(_) => ("unique", None),
            ReconstructionResult::Pair(..) => ("pair", None),
            ReconstructionResult::Undetermined(r) => ("undetermined", Some(*r)),
        };
        ReconstructionJson {
            status: status.into(),
            graphs: self.graphs().iter().map(|g| g.to_graph6()).collect(),
            reason,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReconstructionJson {
    pub status: String,
    pub graphs: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub reason: Option<UndeterminedReason>,
}

/// True iff `a` is a 0/1 symmetric zero-diagonal matrix whose graph has walk matrix `w`.
pub fn verify_candidate(a: &ExactMatrix, w: &WalkMatrix) -> bool {
    if a.rows() != w.order() {
        return false;
    }
    match Graph::from_adjacency(a) {
        Ok(g) => walk::walk_matrix(&g, w.set()).is_ok_and(|w2| &w2 == w),
        Err(_) => false,
    }
}

fn accept(a: &ExactMatrix, w: &WalkMatrix) -> Result<Graph, ReconstructError> {
    if verify_candidate(a, w) {
        Ok(Graph::from_adjacency(a).expect("verified adjacency"))
    } else {
        Err(ReconstructError::CandidateNotGraph)
    }
}

pub fn reconstruct(input: &ReconstructionInput) -> ReconstructionResult {
    let w = &input.w;
    let n = w.order();
    let r = linalg::rank(w.matrix());
    let single = |res: Result<Graph, ReconstructError>| match res {
        Ok(g) => ReconstructionResult::Unique(g),
        Err(_) => ReconstructionResult::Undetermined(UndeterminedReason::NoValidCandidate),
    };
    if r == n {
        single(full_rank(w))
    } else if r + 1 == n {
        single(corank_one(w))
    } else if r + 2 == n {
        match corank_two(w, input.edge_count_hint) {
            Ok(res) => res,
            Err(ReconstructError::MissingEdgeCount) => {
                ReconstructionResult::Undetermined(UndeterminedReason::MissingEdgeCount)
            }
            Err(_) => ReconstructionResult::Undetermined(UndeterminedReason::NoValidCandidate),
        }
    } else {
        ReconstructionResult::Undetermined(UndeterminedReason::RankTooLow)
    }
}

fn require_rank(w: &WalkMatrix, expected: usize) -> Result<(), ReconstructError> {
    let found = linalg::rank(w.matrix());
    if found == expected {
        Ok(())
    } else {
        Err(ReconstructError::WrongRank { expected, found })
    }
}

/// Invertible `W`: `A = W_[1,n] W^{-1}`, where `A^n e` comes from the
/// characteristic polynomial recovered through the walk numbers.
pub fn rank_n(w: &WalkMatrix) -> Result<Graph, ReconstructError> {
    require_rank(w, w.order())?;
    full_rank(w)
}

fn full_rank(w: &WalkMatrix) -> Result<Graph, ReconstructError> {
    let n = w.order();
    let summary = spectral::summarize(w)?;
    let shifted = spectral::extend_columns(w, &summary.main_poly, n).columns_range(1, n);
    let a = &shifted * &linalg::inverse(w.matrix())?;
    accept(&a, w)
}

/// Rank `n-1`: `A = B0 + λ P` with the single non-main eigenvalue
/// `λ = -(sum of main eigenvalues) = a1`.
pub fn rank_n1(w: &WalkMatrix) -> Result<Graph, ReconstructError> {
    require_rank(w, w.order().wrapping_sub(1))?;
    corank_one(w)
}

fn corank_one(w: &WalkMatrix) -> Result<Graph, ReconstructError> {
    let n = w.order();
    let dec = spectral::decompose(w)?;
    let lambda = non_main_eigenvalue(&dec.summary.main_poly, n);
    let a = &dec.a_w + &dec.projector.scale(&Rational::from_integer(lambda));
    accept(&a, w)
}

/// The eigenvalue completing the trace-zero spectrum of a rank `n-1` walk matrix.
pub fn non_main_eigenvalue(main_poly: &crate::poly::IntPolynomial, n: usize) -> BigInt {
    main_poly.coeff(n - 2)
}

/// Edge count: the hint if given, otherwise half the degree sum when `S = V`.
fn edge_count(w: &WalkMatrix, hint: Option<usize>) -> Result<BigInt, ReconstructError> {
    if let Some(m) = hint {
        return Ok(BigInt::from(m));
    }
    if !w.set().is_all() {
        return Err(ReconstructError::MissingEdgeCount);
    }
    let degree_sum: Rational = w.matrix().column(1).into_iter().sum();
    Ok((degree_sum / rat(2)).to_integer())
}

/// Main-polynomial coefficients `(a1, a2)` and the discriminant `d` of the
/// two non-main eigenvalues.
pub fn non_main_discriminant(
    main_poly: &crate::poly::IntPolynomial,
    n: usize,
    m: &BigInt,
) -> (BigInt, BigInt, BigInt) {
    let r = n - 2;
    let a1 = main_poly.coeff(r - 1);
    let a2 = if r >= 2 { main_poly.coeff(r - 2) } else { BigInt::zero() };
    let d = BigInt::from(4) * (&a2 + m) - BigInt::from(3) * &a1 * &a1;
    (a1, a2, d)
}

/// Rank `n-2`, exact: returns every graph (at most two) with walk matrix `w`
/// and `m` edges.
pub fn rank_n2(w: &WalkMatrix, edge_hint: Option<usize>) -> Result<ReconstructionResult, ReconstructError> {
    require_rank(w, w.order().wrapping_sub(2))?;
    corank_two(w, edge_hint)
}

fn corank_two(w: &WalkMatrix, edge_hint: Option<usize>) -> Result<ReconstructionResult, ReconstructError> {
    let n = w.order();
    let m = edge_count(w, edge_hint)?;
    let dec = spectral::decompose(w)?;
    let (a1, _, d) = non_main_discriminant(&dec.summary.main_poly, n, &m);
    if d.is_negative() {
        return Err(ReconstructError::NegativeDiscriminant(d));
    }
    let base = &dec.a_w + &dec.projector.scale(&Rational::new(a1, BigInt::from(2)));

    let kernel = linalg::kernel_basis(&w.matrix().transpose());
    debug_assert_eq!(kernel.len(), 2);
    let k = ExactMatrix::from_columns(n, &kernel);
    let gram = &k.transpose() * &k;
    let (g11, g12, g22) = (gram.get(0, 0), gram.get(0, 1), gram.get(1, 1));
    let det_g = g11 * g22 - g12 * g12;
    // C = (c11, c12, c22) with c11 g11 + 2 c12 g12 + c22 g22 = 0
    let trace_form = ExactMatrix::new(1, 3, vec![g11.clone(), g12 * rat(2), g22.clone()]);
    let basis = linalg::kernel_basis(&trace_form);
    let diag_of = |c: &[Rational]| -> Vec<Rational> {
        (0..n)
            .map(|i| {
                let (u, v) = (k.get(i, 0), k.get(i, 1));
                &c[0] * u * u + &c[1] * rat(2) * u * v + &c[2] * v * v
            })
            .collect()
    };
    let d1 = diag_of(&basis[0]);
    let d2 = diag_of(&basis[1]);
    let target: Vec<Rational> = base.diagonal().into_iter().map(|x| -x).collect();
    let det_target = -Rational::from_integer(d) / (det_g * rat(4));
    let system = ExactMatrix::from_fn(n, 2, |i, j| if j == 0 { d1[i].clone() } else { d2[i].clone() });
    let combine = |x: &Rational, y: &Rational| -> [Rational; 3] {
        [
            x * &basis[0][0] + y * &basis[1][0],
            x * &basis[0][1] + y * &basis[1][1],
            x * &basis[0][2] + y * &basis[1][2],
        ]
    };
    let det_c = |c: &[Rational; 3]| &c[0] * &c[2] - &c[1] * &c[1];

    let mut params: Vec<(Rational, Rational)> = Vec::new();
    match linalg::solve(&system, &target)? {
        Solution::Unique(xy) => {
            if det_c(&combine(&xy[0], &xy[1])) == det_target {
                params.push((xy[0].clone(), xy[1].clone()));
            }
        }
        Solution::NoSolution => {}
        Solution::NonUnique => {
            // consistent rank-1 system: a line of solutions meeting the conic
            let i = (0..n)
                .find(|&i| !(d1[i].is_zero() && d2[i].is_zero()))
                .ok_or(ReconstructError::CandidateNotGraph)?;
            let (x0, y0) = if !d1[i].is_zero() {
                (&target[i] / &d1[i], Rational::zero())
            } else {
                (Rational::zero(), &target[i] / &d2[i])
            };
            let dir = linalg::kernel_basis(&system).remove(0);
            let c0 = combine(&x0, &y0);
            let cd = combine(&dir[0], &dir[1]);
            let qa = det_c(&cd);
            let qb = &c0[0] * &cd[2] + &cd[0] * &c0[2] - &c0[1] * &cd[1] * rat(2);
            let qc = det_c(&c0) - &det_target;
            for t in rational_quadratic_roots(&qa, &qb, &qc) {
                params.push((&x0 + &t * &dir[0], &y0 + &t * &dir[1]));
            }
        }
    }

    let mut graphs = Vec::new();
    for (x, y) in params {
        let c = combine(&x, &y);
        let cm = ExactMatrix::new(2, 2, vec![c[0].clone(), c[1].clone(), c[1].clone(), c[2].clone()]);
        let a = &base + &(&(&k * &cm) * &k.transpose());
        if let Ok(g) = accept(&a, w) {
            graphs.push(g);
        }
    }
    Ok(ReconstructionResult::from_candidates(graphs))
}

/// Rational roots of `a t^2 + b t + c` (`a != 0`).
fn rational_quadratic_roots(a: &Rational, b: &Rational, c: &Rational) -> Vec<Rational> {
    if a.is_zero() {
        return if b.is_zero() { Vec::new() } else { vec![-c / b] };
    }
    let disc = b * b - a * c * rat(4);
    if disc.is_negative() {
        return Vec::new();
    }
    let Some(root) = rational_sqrt(&disc) else {
        return Vec::new();
    };
    let two_a = a * rat(2);
    let mut roots = vec![(-b - &root) / &two_a, (-b + &root) / &two_a];
    roots.dedup();
    roots
}

fn rational_sqrt(x: &Rational) -> Option<Rational> {
    let (n, d) = (x.numer(), x.denom());
    let (rn, rd) = (n.sqrt(), d.sqrt());
    (&rn * &rn == *n && &rd * &rd == *d).then(|| Rational::new(rn, rd))
}

/// Rank `n-2` through floating point: eigenvalues from the discriminant,
/// `f` expanded over an orthonormal kernel basis and fitted to the squared
/// coordinates `q_i`, candidates rounded and verified exactly. Can miss
/// candidates under round-off, never returns a wrong one.
pub fn rank_n2_numeric(w: &WalkMatrix, edge_hint: Option<usize>) -> Result<ReconstructionResult, ReconstructError> {
    let n = w.order();
    require_rank(w, n.wrapping_sub(2))?;
    let m = edge_count(w, edge_hint)?;
    let dec = spectral::decompose(w)?;
    let (a1, _, d) = non_main_discriminant(&dec.summary.main_poly, n, &m);
    if d.is_negative() {
        return Err(ReconstructError::NegativeDiscriminant(d));
    }
    if d.is_zero() {
        // repeated non-main eigenvalue a1/2: exact
        let a = &dec.a_w + &dec.projector.scale(&Rational::new(a1, BigInt::from(2)));
        return Ok(ReconstructionResult::from_candidates(accept(&a, w).into_iter().collect()));
    }
    let sqrt_d = d.to_f64().unwrap_or(f64::INFINITY).sqrt();
    let lambda_low = (a1.to_f64().unwrap_or(f64::NAN) - sqrt_d) / 2.0;
    let gap = sqrt_d;
    let b = dec.a_w.to_f64() + dec.projector.to_f64() * lambda_low;
    let q: Vec<f64> = (0..n).map(|i| -b[(i, i)] / gap).collect();
    if q.iter().any(|&x| x < -NUMERIC_TOL) {
        return Ok(ReconstructionResult::Undetermined(UndeterminedReason::NoValidCandidate));
    }

    let kernel = linalg::kernel_basis(&w.matrix().transpose());
    let u = DVector::from_iterator(n, kernel[0].iter().map(to_f64)).normalize();
    let v0 = DVector::from_iterator(n, kernel[1].iter().map(to_f64));
    let v = (&v0 - &u * u.dot(&v0)).normalize();

    let big: Vec<usize> = (0..n).filter(|&i| q[i] > NUMERIC_TOL).collect();
    let mut coeffs: Vec<(f64, f64)> = Vec::new();
    let best_pair = big
        .iter()
        .flat_map(|&i| big.iter().filter(move |&&j| j > i).map(move |&j| (i, j)))
        .map(|(i, j)| ((u[i] * v[j] - u[j] * v[i]).abs(), i, j))
        .max_by(|x, y| x.0.total_cmp(&y.0));
    match best_pair {
        Some((det, i, j)) if det > NUMERIC_TOL => {
            let (fi, fj) = (q[i].sqrt(), q[j].sqrt());
            for sj in [1.0, -1.0] {
                // solve alpha u + beta v = f on coordinates i, j
                let rhs_j = sj * fj;
                let den = u[i] * v[j] - u[j] * v[i];
                let alpha = (fi * v[j] - rhs_j * v[i]) / den;
                let beta = (u[i] * rhs_j - u[j] * fi) / den;
                coeffs.push((alpha, beta));
            }
        }
        _ => {
            // f vanishes on some coordinate: that fixes its direction in the plane
            if let Some(kz) = (0..n)
                .filter(|&i| q[i] <= NUMERIC_TOL)
                .max_by(|&a, &b| (u[a].hypot(v[a])).total_cmp(&u[b].hypot(v[b])))
            {
                let norm = u[kz].hypot(v[kz]);
                if norm > NUMERIC_TOL {
                    coeffs.push((v[kz] / norm, -u[kz] / norm));
                }
            }
        }
    }

    let mut graphs = Vec::new();
    for (alpha, beta) in coeffs {
        let f = &u * alpha + &v * beta;
        let fits = (f.norm() - 1.0).abs() < NUMERIC_TOL.sqrt()
            && (0..n).all(|i| (f[i] * f[i] - q[i].max(0.0)).abs() < NUMERIC_TOL.sqrt());
        if !fits {
            continue;
        }
        let a = &b + (&f * f.transpose()) * gap;
        let rounded = ExactMatrix::from_fn(n, n, |i, j| rat(a[(i, j)].round() as i64));
        if (0..n).all(|i| (0..n).all(|j| (a[(i, j)] - a[(i, j)].round()).abs() < NUMERIC_TOL)) {
            if let Ok(g) = accept(&rounded, w) {
                graphs.push(g);
            }
        }
    }
    Ok(ReconstructionResult::from_candidates(graphs))
}
