//! Closed-form families: the surfaces `T(a1, a2, a3, a4)` with two cyclic
//! singularities, weighted hypersurface volumes, and the effective lower
//! bound on volumes.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive};

use crate::error::{Error, Result};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TSurface {
    pub a: [i64; 4],
    pub big_a: BigInt,
    pub b1: BigInt,
    pub b2: BigInt,
    /// `A² / (B1 B2)`.
    pub k2: Rational,
    /// `K` is ample exactly when `A > 0`.
    pub ample: bool,
}

/// The polynomial `A` at arbitrary rational arguments.
pub fn t_polynomial_a(a: &[Rational; 4]) -> Rational {
    let [a1, a2, a3, a4] = a;
    let three = Rational::from_integer(3.into());
    a1 * a2 * a3 * a4 - a2 * a3 * a4 - a1 * a3 * a4 - a1 * a2 * a4 - a1 * a2 * a3
        + a1 * a2
        + a2 * a3
        + a3 * a4
        + a1 * a4
        - a1
        - a2
        - a3
        - a4
        + three
}

fn poly_b1(a: &[BigInt; 4]) -> BigInt {
    let [a1, a2, a3, a4] = a;
    a1 * a2 * a3 * a4 - a1 * a3 * a4 - a1 * a2 * a3 + a2 * a3 + a1 * a4 - a1 - a3 + 1
}

fn poly_b2(a: &[BigInt; 4]) -> BigInt {
    let [a1, a2, a3, a4] = a;
    a1 * a2 * a3 * a4 - a2 * a3 * a4 - a1 * a2 * a4 + a1 * a2 + a3 * a4 - a2 - a4 + 1
}

fn check(a: [i64; 4]) -> Result<()> {
    if a.iter().any(|&x| x < 2) {
        return Err(Error::InvalidArgument(format!("{a:?}: every entry must be at least 2")));
    }
    Ok(())
}

pub fn t_surface(a: [i64; 4]) -> Result<TSurface> {
    check(a)?;
    let big = a.map(BigInt::from);
    let ar = a.map(|x| Rational::from_integer(x.into()));
    let big_a = t_polynomial_a(&ar).to_integer();
    let b1 = poly_b1(&big);
    let b2 = poly_b2(&big);
    let k2 = Rational::new(&big_a * &big_a, &b1 * &b2);
    Ok(TSurface {
        a,
        ample: big_a.is_positive(),
        big_a,
        b1,
        b2,
        k2,
    })
}

/// `[2*(a4-1), a3, a1, 2*(a2-1)]` and `[2*(a3-1), a2, a4, 2*(a1-1)]`, where
/// `2*k` stands for `k` copies of 2.
pub fn t_surface_chains(a: [i64; 4]) -> Result<[Vec<i64>; 2]> {
    check(a)?;
    let twos = |k: i64| std::iter::repeat_n(2, (k - 1) as usize);
    let [a1, a2, a3, a4] = a;
    let c1 = twos(a4).chain([a3, a1]).chain(twos(a2)).collect();
    let c2 = twos(a3).chain([a2, a4]).chain(twos(a1)).collect();
    Ok([c1, c2])
}

/// Smallest rotation, used as the representative of a cyclic class.
pub fn rotation_class(a: [i64; 4]) -> [i64; 4] {
    (0..4)
        .map(|r| std::array::from_fn(|i| a[(i + r) % 4]))
        .min()
        .expect("four rotations")
}

/// Quadruples with entries in `2..=cap` and `A > 0` that are minimal in the
/// product order, one representative per cyclic rotation class, sorted.
pub fn t_enumerate_minimal(cap: i64) -> Vec<[i64; 4]> {
    let positive = |q: [i64; 4]| t_surface(q).map(|t| t.ample).unwrap_or(false);
    let mut out = std::collections::BTreeSet::new();
    for a1 in 2..=cap {
        for a2 in 2..=cap {
            for a3 in 2..=cap {
                for a4 in 2..=cap {
                    let q = [a1, a2, a3, a4];
                    if !positive(q) {
                        continue;
                    }
                    // A > 0 is preserved when any entry grows, so checking
                    // single decrements suffices
                    let minimal = (0..4).all(|i| {
                        let mut p = q;
                        p[i] -= 1;
                        p[i] < 2 || !positive(p)
                    });
                    if minimal {
                        out.insert(rotation_class(q));
                    }
                }
            }
        }
    }
    out.into_iter().collect()
}

/// `d (d - Σ w)² / Π w`.
pub fn weighted_hypersurface_k2(d: i64, w: &[i64]) -> Result<Rational> {
    if d <= 0 || w.is_empty() || w.iter().any(|&x| x <= 0) {
        return Err(Error::InvalidArgument("degree and weights must be positive".into()));
    }
    let s: i64 = w.iter().sum();
    let prod = w.iter().fold(BigInt::one(), |acc, &x| acc * x);
    let e = BigInt::from(d - s);
    Ok(Rational::new(BigInt::from(d) * &e * &e, prod))
}

/// `log10` of `1 / (l (2l)^N)` with `l = ceil(1/delta)` and
/// `N = 128 l^5 + 4 l`. Only the final logarithm is inexact.
pub fn effective_lower_bound_log10(delta: &Rational) -> Result<f64> {
    if !delta.is_positive() {
        return Err(Error::InvalidArgument("delta must be positive".into()));
    }
    let inv = delta.recip();
    let l: BigInt = inv.numer().div_ceil(inv.denom());
    let n: BigInt = BigInt::from(128) * l.pow(5) + BigInt::from(4) * &l;
    let lf = l.to_f64().ok_or(Error::Overflow)?;
    let nf = n.to_f64().ok_or(Error::Overflow)?;
    Ok(-(lf.log10() + nf * (2.0 * lf).log10()))
}

/// The exact exponent `N` of the bound for a given `delta`.
pub fn effective_bound_exponent(delta: &Rational) -> Result<BigInt> {
    if !delta.is_positive() {
        return Err(Error::InvalidArgument("delta must be positive".into()));
    }
    let inv = delta.recip();
    let l: BigInt = inv.numer().div_ceil(inv.denom());
    Ok(BigInt::from(128) * l.pow(5) + BigInt::from(4) * &l)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};
    use crate::singularity::chain_determinant;
    use num_traits::Zero;

    #[test]
    fn record_t_surface() {
        let t = t_surface([2, 2, 4, 10]).unwrap();
        assert_eq!(t.big_a, 1.into());
        assert_eq!((t.b1.clone(), t.b2.clone()), (87.into(), 73.into()));
        assert_eq!(t.k2, frac(1, 6351));
        assert!(t.ample);
        assert!(!t_surface([3, 3, 3, 3]).unwrap().ample);
        assert_eq!(t_surface([2, 2, 4, 9]).unwrap().big_a, 0.into());
        assert!(t_surface([1, 2, 3, 4]).is_err());
    }

    #[test]
    fn chains_have_determinants_b1_b2() {
        for a in [[2, 2, 4, 10], [2, 2, 2, 2], [3, 3, 3, 3]] {
            let t = t_surface(a).unwrap();
            let [c1, c2] = t_surface_chains(a).unwrap();
            let mut dets = [chain_determinant(&c1), chain_determinant(&c2)];
            dets.sort();
            let mut want = [t.b1, t.b2];
            want.sort();
            assert_eq!(dets, want);
        }
        assert_eq!(
            t_surface_chains([2, 2, 4, 10]).unwrap()[0],
            vec![2, 2, 2, 2, 2, 2, 2, 2, 2, 4, 2, 2]
        );
    }

    #[test]
    fn rational_critical_point() {
        assert!(t_polynomial_a(&[int(2), int(3), frac(11, 2), int(3)]).is_zero());
    }

    #[test]
    fn hypersurfaces() {
        assert_eq!(
            weighted_hypersurface_k2(159, &[49, 61, 37, 11]).unwrap(),
            frac(159, 1216523)
        );
        assert_eq!(weighted_hypersurface_k2(10, &[1, 2, 3, 4]).unwrap(), int(0));
        assert_eq!(weighted_hypersurface_k2(7, &[1, 1, 2, 4]).unwrap(), frac(7, 8));
        assert!(weighted_hypersurface_k2(7, &[0, 1]).is_err());
    }

    #[test]
    fn lower_bound() {
        let v = effective_lower_bound_log10(&int(1)).unwrap();
        assert!((v + 132.0 * 2f64.log10()).abs() < 1e-9);
        let v = effective_lower_bound_log10(&frac(1, 2)).unwrap();
        assert!((v + (2f64.log10() + 4104.0 * 4f64.log10())).abs() < 1e-9);
        let v = effective_lower_bound_log10(&frac(1, 42)).unwrap();
        assert!((-3.23e10..=-3.21e10).contains(&v));
        assert_eq!(
            effective_bound_exponent(&frac(2, 3)).unwrap(),
            BigInt::from(128 * 32 + 8)
        );
        assert!(effective_lower_bound_log10(&int(0)).is_err());
    }
}
