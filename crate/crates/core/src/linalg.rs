//! Small exact linear algebra: Gaussian elimination and Fourier-Motzkin
//! elimination over the rationals.

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::Rational;

/// Solve the square system `m x = rhs` by elimination with rational pivots.
pub fn solve(m: &[Vec<Rational>], rhs: &[Rational]) -> Result<Vec<Rational>> {
    let n = m.len();
    if rhs.len() != n || m.iter().any(|r| r.len() != n) {
        return Err(Error::InvalidArgument("system is not square".into()));
    }
    let mut a: Vec<Vec<Rational>> = m
        .iter()
        .zip(rhs)
        .map(|(row, r)| row.iter().cloned().chain(std::iter::once(r.clone())).collect())
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero()).ok_or(Error::Singular)?;
        a.swap(col, pivot);
        let inv = a[col][col].recip();
        for x in a[col].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = a[col].clone();
        for (r, row) in a.iter_mut().enumerate() {
            if r != col && !row[col].is_zero() {
                let f = row[col].clone();
                for (x, p) in row[col..].iter_mut().zip(&pivot_row[col..]) {
                    *x -= p * &f;
                }
            }
        }
    }
    Ok(a.into_iter().map(|row| row[n].clone()).collect())
}

pub fn determinant(m: &[Vec<Rational>]) -> Rational {
    let n = m.len();
    let mut a: Vec<Vec<Rational>> = m.to_vec();
    let mut det = Rational::one();
    for col in 0..n {
        let Some(pivot) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return Rational::zero();
        };
        if pivot != col {
            a.swap(col, pivot);
            det = -det;
        }
        det *= &a[col][col];
        let (top, rest) = a.split_at_mut(col + 1);
        let pivot_row = &top[col];
        for row in rest {
            if !row[col].is_zero() {
                let f = &row[col] / &pivot_row[col];
                for (x, p) in row[col..].iter_mut().zip(&pivot_row[col..]) {
                    *x -= p * &f;
                }
            }
        }
    }
    det
}

/// `coeffs · x >= rhs`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Inequality {
    pub coeffs: Vec<Rational>,
    pub rhs: Rational,
}

impl Inequality {
    pub fn new(coeffs: Vec<Rational>, rhs: Rational) -> Self {
        Self { coeffs, rhs }
    }

    pub fn holds(&self, x: &[Rational]) -> bool {
        let lhs: Rational = self.coeffs.iter().zip(x).map(|(a, b)| a * b).sum();
        lhs >= self.rhs
    }
}

/// A point satisfying every inequality, or `None` if the system is
/// infeasible. Variables are eliminated in index order; each is then chosen
/// in the middle of its feasible interval given the later ones.
pub fn fourier_motzkin(ineqs: &[Inequality], dim: usize) -> Option<Vec<Rational>> {
    let mut stages: Vec<Vec<Inequality>> = vec![normalize(ineqs.to_vec(), dim)];
    for k in 0..dim {
        let cur = stages.last().expect("nonempty");
        let (mut pos, mut neg, mut next) = (Vec::new(), Vec::new(), Vec::new());
        for q in cur {
            if q.coeffs[k].is_positive() {
                pos.push(q);
            } else if q.coeffs[k].is_negative() {
                neg.push(q);
            } else {
                next.push(q.clone());
            }
        }
        for p in &pos {
            for q in &neg {
                // scale so that the k-th coefficients cancel
                let fp = -&q.coeffs[k];
                let fq = p.coeffs[k].clone();
                let coeffs = p.coeffs.iter().zip(&q.coeffs).map(|(a, b)| a * &fp + b * &fq).collect();
                next.push(Inequality::new(coeffs, &p.rhs * &fp + &q.rhs * &fq));
            }
        }
        stages.push(normalize(next, dim));
    }
    if stages[dim].iter().any(|q| q.rhs.is_positive()) {
        return None;
    }
    let mut x = vec![Rational::zero(); dim];
    for k in (0..dim).rev() {
        let mut lo: Option<Rational> = None;
        let mut hi: Option<Rational> = None;
        for q in &stages[k] {
            let a = &q.coeffs[k];
            if a.is_zero() {
                continue;
            }
            let rest: Rational = (k + 1..dim).map(|j| &q.coeffs[j] * &x[j]).sum();
            let bound = (&q.rhs - rest) / a;
            if a.is_positive() {
                if lo.as_ref().is_none_or(|l| &bound > l) {
                    lo = Some(bound);
                }
            } else if hi.as_ref().is_none_or(|h| &bound < h) {
                hi = Some(bound);
            }
        }
        let one = Rational::one();
        x[k] = match (lo, hi) {
            (Some(l), Some(h)) => (l + h) / Rational::from_integer(2.into()),
            (Some(l), None) => l + one,
            (None, Some(h)) => h - one,
            (None, None) => Rational::zero(),
        };
    }
    Some(x)
}

/// Scale each row so its first nonzero coefficient has absolute value one,
/// then keep only the tightest right-hand side per direction.
fn normalize(rows: Vec<Inequality>, dim: usize) -> Vec<Inequality> {
    let mut best: BTreeMap<Vec<Rational>, Rational> = BTreeMap::new();
    let mut trivial: Option<Rational> = None;
    for q in rows {
        match q.coeffs.iter().find(|c| !c.is_zero()) {
            None => {
                if trivial.as_ref().is_none_or(|t| &q.rhs > t) {
                    trivial = Some(q.rhs);
                }
            }
            Some(lead) => {
                let s = lead.abs().recip();
                let coeffs: Vec<Rational> = q.coeffs.iter().map(|c| c * &s).collect();
                let rhs = q.rhs * s;
                let e = best.entry(coeffs).or_insert_with(|| rhs.clone());
                if rhs > *e {
                    *e = rhs;
                }
            }
        }
    }
    let mut out: Vec<Inequality> = best.into_iter().map(|(c, r)| Inequality::new(c, r)).collect();
    if let Some(t) = trivial {
        out.push(Inequality::new(vec![Rational::zero(); dim], t));
    }
    out
}
