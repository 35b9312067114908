//! Exact arithmetic substrate.
//!
//! Big rationals are backed by `num_rational::BigRational`, which keeps
//! values in lowest terms with a positive denominator. Truncated power
//! series are generic over the coefficient ring so the same log/exp code
//! serves rational coefficients (fitting) and polynomial coefficients
//! (symbolic extraction of the node polynomials).

mod poly;
mod series;

pub use poly::MultiPoly4;
pub use series::TruncSeries;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Exact rational number: always in lowest terms, denominator > 0.
pub type BigRat = BigRational;

/// Coefficient ring for [`TruncSeries`].
///
/// Beyond the ring operations, series log/exp need exact division by the
/// positive integers that arise from integrating term by term.
pub trait Coeff:
    Clone
    + PartialEq
    + Zero
    + One
    + std::ops::Neg<Output = Self>
    + std::ops::Sub<Output = Self>
{
    /// Exact division by a nonzero natural number.
    fn div_nat(&self, n: u64) -> Self;
}

impl Coeff for BigRat {
    fn div_nat(&self, n: u64) -> Self {
        assert!(n != 0, "division by zero");
        self / BigRat::from_integer(BigInt::from(n))
    }
}

/// Rational `n/d` from machine integers.
pub fn rat(n: i64, d: i64) -> BigRat {
    BigRat::new(BigInt::from(n), BigInt::from(d))
}

/// Rational from an integer.
pub fn rat_int(n: i64) -> BigRat {
    BigRat::from_integer(BigInt::from(n))
}

/// Canonical `"num/den"` rendering, e.g. `"3/1"`, `"-9/2"`.
pub fn rat_to_string(r: &BigRat) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parse the `"num/den"` form produced by [`rat_to_string`]; a bare
/// integer is accepted as well.
pub fn rat_from_string(s: &str) -> Result<BigRat> {
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let num: BigInt = num
        .trim()
        .parse()
        .map_err(|_| Error::domain(format!("invalid rational numerator in {s:?}")))?;
    let den: BigInt = den
        .trim()
        .parse()
        .map_err(|_| Error::domain(format!("invalid rational denominator in {s:?}")))?;
    if den.is_zero() || den.is_negative() {
        return Err(Error::domain(format!(
            "rational denominator must be positive in {s:?}"
        )));
    }
    Ok(BigRat::new(num, den))
}

/// Binomial coefficient with the convention `C(n, k) = 0` for `k > n`.
pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}
