//! Exact rational numbers and the `p` / `p/q` text form used by the file
//! formats and the command line.

use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::Error;

pub type Rational = BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn frac(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn parse_rational(token: &str) -> Result<Rational, Error> {
    let bad = || Error::InvalidArgument(format!("`{token}` is not a rational number"));
    match token.split_once('/') {
        Some((p, q)) => {
            let p = BigInt::from_str(p.trim()).map_err(|_| bad())?;
            let q = BigInt::from_str(q.trim()).map_err(|_| bad())?;
            if q.is_zero() {
                return Err(Error::InvalidArgument(format!("`{token}` has a zero denominator")));
            }
            Ok(Rational::new(p, q))
        }
        None => BigInt::from_str(token.trim())
            .map(Rational::from_integer)
            .map_err(|_| bad()),
    }
}

/// `p` for integers, `p/q` otherwise.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}
