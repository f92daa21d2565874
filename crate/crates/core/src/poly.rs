//! Integer polynomials (ascending coefficients) plus the small amount of
//! rational polynomial arithmetic needed for division tests and real-root
//! isolation.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::linalg::{int_rat, to_f64, Rational};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>,
}

impl IntPolynomial {
    /// Builds a polynomial from ascending coefficients; trailing zeros are dropped.
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        IntPolynomial { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        IntPolynomial::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        IntPolynomial { coeffs: Vec::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// Coefficient of `x^i` (zero past the degree).
    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn leading(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(One::is_one)
    }

    pub fn mul(&self, other: &IntPolynomial) -> IntPolynomial {
        if self.is_zero() || other.is_zero() {
            return IntPolynomial::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPolynomial::new(out)
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.coeffs
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * x + int_rat(c))
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * x + to_f64(&int_rat(c)))
    }

    /// True iff `self` divides `other` exactly over the rationals.
    pub fn divides(&self, other: &IntPolynomial) -> bool {
        assert!(!self.is_zero(), "division by the zero polynomial");
        let (_, rem) = RatPoly::from_int(other).div_rem(&RatPoly::from_int(self));
        rem.is_zero()
    }

    /// Real roots in ascending order, assuming every real root is simple.
    ///
    /// Roots are isolated exactly with a Sturm sequence, then bisected until
    /// the bracket is below `tol` (relative to `max(1, |root|)`).
    pub fn real_roots(&self, tol: f64) -> Vec<f64> {
        if self.degree() == 0 {
            return Vec::new();
        }
        let p = RatPoly::from_int(self);
        let chain = sturm_chain(&p);
        let bound = p.cauchy_bound();
        let lo = -bound.clone() - Rational::one();
        let hi = bound + Rational::one();
        let mut brackets = Vec::new();
        isolate(&chain, lo, hi, &mut brackets);
        brackets
            .into_iter()
            .map(|(a, b)| refine(&p, a, b, tol))
            .collect()
    }
}

impl fmt::Debug for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntPolynomial({self})")
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let a = c.abs();
            match (i, a.is_one()) {
                (0, _) => write!(f, "{a}")?,
                (1, true) => write!(f, "x")?,
                (1, false) => write!(f, "{a}x")?,
                (_, true) => write!(f, "x^{i}")?,
                (_, false) => write!(f, "{a}x^{i}")?,
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
struct RatPoly(Vec<Rational>);

impl RatPoly {
    fn from_int(p: &IntPolynomial) -> Self {
        RatPoly(p.coeffs.iter().map(int_rat).collect())
    }

    fn trimmed(mut v: Vec<Rational>) -> Self {
        while v.last().is_some_and(Zero::is_zero) {
            v.pop();
        }
        RatPoly(v)
    }

    fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    fn degree(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    fn derivative(&self) -> RatPoly {
        RatPoly::trimmed(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * Rational::from_integer(BigInt::from(i)))
                .collect(),
        )
    }

    fn eval(&self, x: &Rational) -> Rational {
        self.0.iter().rev().fold(Rational::zero(), |acc, c| acc * x + c)
    }

    fn div_rem(&self, d: &RatPoly) -> (RatPoly, RatPoly) {
        let mut rem = self.0.clone();
        if rem.len() < d.0.len() {
            return (RatPoly(Vec::new()), RatPoly::trimmed(rem));
        }
        let lead = d.0.last().expect("nonzero divisor").clone();
        let mut quot = vec![Rational::zero(); rem.len() - d.0.len() + 1];
        for k in (0..quot.len()).rev() {
            let c = &rem[k + d.degree()] / &lead;
            if !c.is_zero() {
                for (j, dj) in d.0.iter().enumerate() {
                    rem[k + j] -= &c * dj;
                }
            }
            quot[k] = c;
        }
        rem.truncate(d.degree());
        (RatPoly::trimmed(quot), RatPoly::trimmed(rem))
    }

    fn cauchy_bound(&self) -> Rational {
        let lead = self.0.last().expect("nonzero polynomial").abs();
        let max = self.0[..self.degree()]
            .iter()
            .map(|c| c.abs() / &lead)
            .max()
            .unwrap_or_else(Rational::zero);
        Rational::one() + max
    }
}

fn sturm_chain(p: &RatPoly) -> Vec<RatPoly> {
    let mut chain = vec![p.clone(), p.derivative()];
    loop {
        let n = chain.len();
        if chain[n - 1].is_zero() {
            chain.pop();
            break;
        }
        let (_, r) = chain[n - 2].div_rem(&chain[n - 1]);
        if r.is_zero() {
            break;
        }
        chain.push(RatPoly(r.0.into_iter().map(|c| -c).collect()));
    }
    chain
}

fn sign_changes(chain: &[RatPoly], x: &Rational) -> usize {
    let signs: Vec<i8> = chain
        .iter()
        .map(|q| {
            let v = q.eval(x);
            if v.is_zero() {
                0
            } else if v.is_positive() {
                1
            } else {
                -1
            }
        })
        .filter(|&s| s != 0)
        .collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

/// Splits `(lo, hi]` until each piece holds at most one root; neither endpoint is a root.
fn isolate(chain: &[RatPoly], lo: Rational, hi: Rational, out: &mut Vec<(Rational, Rational)>) {
    let count = sign_changes(chain, &lo) - sign_changes(chain, &hi);
    match count {
        0 => {}
        1 => out.push((lo, hi)),
        _ => {
            let two = Rational::from_integer(BigInt::from(2));
            let mut mid = (&lo + &hi) / &two;
            let mut nudge = (&hi - &lo) / Rational::from_integer(BigInt::from(1024));
            while chain[0].eval(&mid).is_zero() {
                mid += &nudge;
                nudge /= &two;
            }
            isolate(chain, lo, mid.clone(), out);
            isolate(chain, mid, hi, out);
        }
    }
}

fn refine(p: &RatPoly, mut lo: Rational, mut hi: Rational, tol: f64) -> f64 {
    let two = Rational::from_integer(BigInt::from(2));
    let sign_lo = p.eval(&lo).is_positive();
    for _ in 0..200 {
        let mid = (&lo + &hi) / &two;
        let v = p.eval(&mid);
        if v.is_zero() {
            return to_f64(&mid);
        }
        if v.is_positive() == sign_lo {
            lo = mid;
        } else {
            hi = mid;
        }
        let width = to_f64(&(&hi - &lo));
        let scale = to_f64(&lo).abs().max(1.0);
        if width <= tol * scale && width <= 1e-15 * scale {
            break;
        }
    }
    to_f64(&((lo + hi) / two))
}
