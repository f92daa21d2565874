mod common;

use common::*;
use num_bigint::BigInt;
use walkmat::canonical::{self, InconclusiveReason, IsoCertificate};
use walkmat::linalg::{self, rat};
use walkmat::oracle::{self, EIGEN_TOL};
use walkmat::reconstruct::{self, ReconstructionInput, ReconstructionResult, UndeterminedReason};
use walkmat::spectral;
use walkmat::walk::{self, WalkMatrix};
use walkmat::{Graph, IntPolynomial, VertexSet};

fn wm(g: &Graph, s: &VertexSet) -> WalkMatrix {
    walk::walk_matrix(g, s).unwrap()
}

#[test]
fn fig31_walk_matrices_and_polynomials() {
    let g = fig31();
    let cases = [
        (VertexSet::all(4), FIG31_WV, 3),
        (one_based(4, &[1]), FIG31_W1, 3),
        (one_based(4, &[2]), FIG31_W2, 3),
        (one_based(4, &[3]), FIG31_W3, 4),
        (one_based(4, &[4]), FIG31_W4, 4),
    ];
    for (s, printed, rank) in cases {
        let w = wm(&g, &s);
        assert_eq!(w.matrix(), &matrix(&printed));
        assert_eq!(linalg::rank(w.matrix()), rank);
        let sum = spectral::summarize(&w).unwrap();
        assert_eq!(sum.main_poly.degree(), rank);
        assert!(sum.main_poly.divides(&linalg::char_poly(&g.adjacency_matrix()).unwrap()));
    }
}

#[test]
fn fig31_rational_root_is_the_non_main_eigenvalue() {
    let w = wm(&fig31(), &VertexSet::all(4));
    let sum = spectral::summarize(&w).unwrap();
    assert_eq!(reconstruct::non_main_eigenvalue(&sum.main_poly, 4), BigInt::from(-1));
    let cp = char_poly_by_interpolation(&fig31());
    assert_eq!(cp, sum.main_poly.mul(&IntPolynomial::from_i64(&[1, 1])));
}

#[test]
fn appendix_pair_regenerates_w() {
    let w = walk(&APP83_W);
    let a1 = matrix(&APP83_A1);
    assert!(reconstruct::verify_candidate(&a1, &w));
    assert!(reconstruct::verify_candidate(&matrix(&APP83_A2), &w));
    let flipped = a1.with_entry(0, 1, rat(1)).with_entry(1, 0, rat(1));
    assert!(!reconstruct::verify_candidate(&flipped, &w));
    let g1 = Graph::from_adjacency(&a1).unwrap();
    let g2 = Graph::from_adjacency(&matrix(&APP83_A2)).unwrap();
    assert_eq!(g1.edge_count(), 10);
    assert!(oracle::brute_force_isomorphic(&g1, &g2).unwrap().is_some());
    // the pair is everything the walk matrix admits
    let all = oracle::realizations(&w, 100).unwrap();
    let mut expected = vec![g1.to_graph6(), g2.to_graph6()];
    expected.sort();
    let mut got: Vec<String> = all.iter().map(Graph::to_graph6).collect();
    got.sort();
    assert_eq!(got, expected);
}

#[test]
fn fig84a_is_rank_too_low() {
    let w = walk(&FIG84A_W);
    assert_eq!(linalg::rank(w.matrix()), 4);
    assert_eq!(
        reconstruct::reconstruct(&ReconstructionInput::new(w.clone())),
        ReconstructionResult::Undetermined(UndeterminedReason::RankTooLow)
    );
    let reps = realization_classes(&w);
    assert_eq!(reps.len(), 2, "two isomorphism classes realize the printed matrix");
    assert!(oracle::brute_force_isomorphic(&reps[0], &reps[1]).unwrap().is_none());
    let v = VertexSet::all(7);
    assert_eq!(
        canonical::certify_isomorphism(&reps[0], &v, &reps[1], &v).unwrap(),
        IsoCertificate::Inconclusive(InconclusiveReason::RankTooLow)
    );
}

#[test]
fn fig84b_contains_a_complementary_pair() {
    let w = walk(&FIG84B_W);
    assert_eq!(linalg::rank(w.matrix()), 5);
    let reps = realization_classes(&w);
    let pair = reps.iter().enumerate().find_map(|(i, g)| {
        reps.iter()
            .skip(i + 1)
            .find(|h| oracle::brute_force_isomorphic(h, &g.complement()).unwrap().is_some())
            .map(|h| (g.clone(), h.clone()))
    });
    let (g, h) = pair.expect("complementary realizations");
    assert!(oracle::brute_force_isomorphic(&g, &h).unwrap().is_none());
    let v = VertexSet::all(9);
    assert!(canonical::walk_equivalent(&wm(&g, &v), &wm(&h, &v)));
    assert_eq!(
        canonical::certify_isomorphism(&g, &v, &h, &v).unwrap(),
        IsoCertificate::Inconclusive(InconclusiveReason::RankTooLow)
    );
}

fn realization_classes(w: &WalkMatrix) -> Vec<Graph> {
    let mut reps = std::collections::BTreeMap::new();
    for g in oracle::realizations(w, 10_000).unwrap() {
        reps.entry(oracle::canonical_code(&g)).or_insert(g);
    }
    reps.into_values().collect()
}

#[test]
fn exhaustive_sweep_flags_the_rank_four_pair() {
    let rep = oracle::exhaustive_roundtrip(7).unwrap();
    assert_eq!(rep.classes, 1044);
    assert!(rep.failures.is_empty(), "{:?}", rep.failures);
    for g in realization_classes(&walk(&FIG84A_W)) {
        let code = oracle::canonical_graph(&g).to_graph6();
        let rec = rep.records.iter().find(|r| r.graph6 == code).expect("class present");
        assert_eq!(rec.rank, 4);
        assert_eq!(rec.outcome, "undetermined");
        assert!(rec.walk_equivalent_classes >= 1);
    }
}

#[test]
fn exhaustive_sweep_small_orders() {
    let counts: Vec<usize> = (1..=6).map(|n| oracle::exhaustive_roundtrip(n).unwrap().classes).collect();
    assert_eq!(counts, vec![1, 2, 4, 11, 34, 156]);
    for n in 1..=6 {
        assert!(oracle::exhaustive_roundtrip(n).unwrap().failures.is_empty());
    }
}

#[test]
fn regular_graphs_have_one_main_eigenvalue() {
    let c7 = Graph::from_edges(7, &(0..7).map(|i| (i, (i + 1) % 7)).collect::<Vec<_>>()).unwrap();
    let v = VertexSet::all(7);
    assert_eq!(oracle::main_eigen_count(&c7, &v, EIGEN_TOL), 1);
    let sum = spectral::summarize(&wm(&c7, &v)).unwrap();
    assert_eq!(sum.main_poly, IntPolynomial::from_i64(&[-2, 1]));
}

#[test]
fn two_triangles_and_hexagon_are_walk_equivalent() {
    let two_triangles = Graph::from_edges(6, &[(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)]).unwrap();
    let hexagon = Graph::from_edges(6, &(0..6).map(|i| (i, (i + 1) % 6)).collect::<Vec<_>>()).unwrap();
    let v = VertexSet::all(6);
    let lf = canonical::lex_form(&wm(&hexagon, &v));
    for i in 0..6 {
        assert_eq!(lf.matrix.row(i), matrix(&[&[1, 2, 4, 8, 16, 32]]).row(0));
    }
    assert!(canonical::walk_equivalent(&wm(&two_triangles, &v), &wm(&hexagon, &v)));
}

/// Rank `n-2` instances whose two non-main eigenvalues coincide reconstruct uniquely.
#[test]
fn repeated_non_main_eigenvalue_is_unique() {
    let mut found = 0;
    for n in 4..=7 {
        for g in oracle::graph_classes(n).unwrap() {
            let w = wm(&g, &VertexSet::all(n));
            if linalg::rank(w.matrix()) + 2 != n {
                continue;
            }
            let sum = spectral::summarize(&w).unwrap();
            let (_, _, d) = reconstruct::non_main_discriminant(&sum.main_poly, n, &BigInt::from(g.edge_count()));
            assert!(d >= BigInt::from(0));
            if d == BigInt::from(0) {
                found += 1;
                let res = reconstruct::reconstruct(&ReconstructionInput::new(w.clone()));
                assert_eq!(res, ReconstructionResult::Unique(g.clone()), "{}", g.to_graph6());
                assert_eq!(reconstruct::rank_n2_numeric(&w, None).unwrap(), res);
            }
        }
    }
    assert!(found > 0, "no repeated non-main eigenvalue instance found");
}
