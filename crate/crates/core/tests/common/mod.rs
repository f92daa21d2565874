//! Shared fixtures and test-side oracles.
#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use walkmat::linalg::ExactMatrix;
use walkmat::walk::WalkMatrix;
use walkmat::{Graph, IntPolynomial, VertexSet};

pub fn fig31() -> Graph {
    Graph::from_edge_list(4, &[(1, 2), (2, 3), (2, 4), (3, 4)]).unwrap()
}

pub fn one_based(n: usize, labels: &[usize]) -> VertexSet {
    VertexSet::from_one_based(n, labels).unwrap()
}

pub fn matrix(rows: &[&[i64]]) -> ExactMatrix {
    let v: Vec<Vec<i64>> = rows.iter().map(|r| r.to_vec()).collect();
    ExactMatrix::from_i64_rows(&v)
}

pub fn walk(rows: &[&[i64]]) -> WalkMatrix {
    WalkMatrix::from_matrix(matrix(rows)).unwrap()
}

pub const FIG31_WV: [&[i64]; 4] = [&[1, 1, 3, 5], &[1, 3, 5, 13], &[1, 2, 5, 10], &[1, 2, 5, 10]];
pub const FIG31_W1: [&[i64]; 4] = [&[1, 0, 1, 0], &[0, 1, 0, 3], &[0, 0, 1, 1], &[0, 0, 1, 1]];
pub const FIG31_W2: [&[i64]; 4] = [&[0, 1, 0, 3], &[1, 0, 3, 2], &[0, 1, 1, 4], &[0, 1, 1, 4]];
pub const FIG31_W3: [&[i64]; 4] = [&[0, 0, 1, 1], &[0, 1, 1, 4], &[1, 0, 2, 2], &[0, 1, 1, 3]];
pub const FIG31_W4: [&[i64]; 4] = [&[0, 0, 1, 1], &[0, 1, 1, 4], &[0, 1, 1, 3], &[1, 0, 2, 2]];

pub const APP83_A1: [&[i64]; 8] = [
    &[0, 0, 0, 1, 1, 0, 1, 0],
    &[0, 0, 1, 0, 1, 0, 0, 1],
    &[0, 1, 0, 0, 1, 1, 0, 0],
    &[1, 0, 0, 0, 0, 1, 0, 0],
    &[1, 1, 1, 0, 0, 0, 1, 0],
    &[0, 0, 1, 1, 0, 0, 0, 0],
    &[1, 0, 0, 0, 1, 0, 0, 0],
    &[0, 1, 0, 0, 0, 0, 0, 0],
];
pub const APP83_A2: [&[i64]; 8] = [
    &[0, 0, 1, 0, 1, 0, 0, 1],
    &[0, 0, 0, 1, 1, 0, 1, 0],
    &[1, 0, 0, 0, 1, 1, 0, 0],
    &[0, 1, 0, 0, 0, 1, 0, 0],
    &[1, 1, 1, 0, 0, 0, 1, 0],
    &[0, 0, 1, 1, 0, 0, 0, 0],
    &[0, 1, 0, 0, 1, 0, 0, 0],
    &[1, 0, 0, 0, 0, 0, 0, 0],
];
pub const APP83_W: [&[i64]; 8] = [
    &[1, 3, 8, 23, 64, 181, 506, 1425],
    &[1, 3, 8, 23, 64, 181, 506, 1425],
    &[1, 3, 9, 24, 69, 190, 539, 1502],
    &[1, 2, 5, 13, 37, 101, 287, 797],
    &[1, 4, 11, 32, 89, 252, 705, 1984],
    &[1, 2, 5, 14, 37, 106, 291, 826],
    &[1, 2, 7, 19, 55, 153, 433, 1211],
    &[1, 1, 3, 8, 23, 64, 181, 506],
];
pub const FIG84A_W: [&[i64]; 7] = [
    &[1, 4, 11, 35, 104, 318, 960],
    &[1, 3, 9, 27, 82, 248, 752],
    &[1, 2, 7, 20, 62, 186, 566],
    &[1, 2, 8, 22, 70, 208, 636],
    &[1, 2, 7, 20, 62, 186, 566],
    &[1, 3, 9, 27, 82, 248, 752],
    &[1, 4, 11, 35, 104, 318, 960],
];
pub const FIG84B_W: [&[i64]; 9] = [
    &[1, 4, 18, 72, 300, 1222, 5028, 20586, 84480],
    &[1, 4, 16, 67, 272, 1121, 4586, 18827, 77162],
    &[1, 5, 20, 83, 339, 1393, 5707, 23413, 95989],
    &[1, 5, 20, 83, 339, 1393, 5707, 23413, 95989],
    &[1, 4, 16, 67, 272, 1121, 4586, 18827, 77162],
    &[1, 3, 13, 52, 215, 878, 3607, 14778, 60625],
    &[1, 4, 16, 65, 267, 1093, 4485, 18385, 75403],
    &[1, 4, 16, 65, 267, 1093, 4485, 18385, 75403],
    &[1, 3, 13, 52, 215, 878, 3607, 14778, 60625],
];

/// Determinant of an integer matrix by fraction-free elimination in `i128`.
pub fn det_i128(mut m: Vec<Vec<i128>>) -> i128 {
    let n = m.len();
    let mut sign = 1;
    let mut prev = 1i128;
    for k in 0..n {
        if m[k][k] == 0 {
            match (k + 1..n).find(|&i| m[i][k] != 0) {
                Some(i) => {
                    m.swap(i, k);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
            }
            m[i][k] = 0;
        }
        prev = m[k][k];
    }
    if n == 0 {
        1
    } else {
        sign * m[n - 1][n - 1]
    }
}

/// `det(xI - A)` interpolated from its values at `x = 0..n`.
pub fn char_poly_by_interpolation(g: &Graph) -> IntPolynomial {
    let n = g.order();
    let points: Vec<i128> = (0..=n as i128).collect();
    let values: Vec<BigRational> = points
        .iter()
        .map(|&x| {
            let m: Vec<Vec<i128>> = (0..n)
                .map(|i| (0..n).map(|j| if i == j { x } else if g.has_edge(i, j) { -1 } else { 0 }).collect())
                .collect();
            BigRational::from_integer(BigInt::from(det_i128(m)))
        })
        .collect();
    // Newton divided differences, then expand into the monomial basis
    let mut coef = values.clone();
    for level in 1..=n {
        for i in (level..=n).rev() {
            let den = BigRational::from_integer(BigInt::from(points[i] - points[i - level]));
            coef[i] = (&coef[i] - &coef[i - 1]) / den;
        }
    }
    let mut poly: Vec<BigRational> = vec![BigRational::zero(); n + 1];
    for k in (0..=n).rev() {
        // poly = poly * (x - points[k]) + coef[k]
        let mut next = vec![BigRational::zero(); n + 1];
        for (d, c) in poly.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if d < n {
                next[d + 1] += c;
            }
            next[d] -= c * BigRational::from_integer(BigInt::from(points[k]));
        }
        next[0] += &coef[k];
        poly = next;
    }
    assert!(poly.iter().all(|c| c.is_integer()));
    assert!(poly[n].is_one());
    IntPolynomial::new(poly.into_iter().map(|c| c.to_integer()).collect())
}
