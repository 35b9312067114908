//! Truncated univariate power series over a generic coefficient ring.
//!
//! A series of order `D` stores the coefficients of `x^0 .. x^D`; all
//! arithmetic discards terms beyond `x^D`.

use super::Coeff;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct TruncSeries<T: Coeff> {
    coeffs: Vec<T>,
}

impl<T: Coeff> TruncSeries<T> {
    /// The zero series of the given order.
    pub fn zero(order: usize) -> Self {
        TruncSeries {
            coeffs: vec![T::zero(); order + 1],
        }
    }

    /// The constant series 1.
    pub fn one(order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = T::one();
        s
    }

    /// Series from explicit coefficients `c_0 .. c_D`; the order is
    /// `coeffs.len() - 1`.
    pub fn from_coeffs(coeffs: Vec<T>) -> Self {
        assert!(!coeffs.is_empty(), "a series stores at least c_0");
        TruncSeries { coeffs }
    }

    /// The monomial `c * x^j`.
    pub fn monomial(c: T, j: usize, order: usize) -> Self {
        let mut s = Self::zero(order);
        if j <= order {
            s.coeffs[j] = c;
        }
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Coefficient of `x^j` (zero beyond the order).
    pub fn get(&self, j: usize) -> T {
        self.coeffs.get(j).cloned().unwrap_or_else(T::zero)
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    fn check_same_order(&self, other: &Self) {
        assert_eq!(
            self.order(),
            other.order(),
            "series arithmetic requires equal truncation orders"
        );
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check_same_order(other);
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a.clone() + b.clone())
            .collect();
        TruncSeries { coeffs }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.check_same_order(other);
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a.clone() - b.clone())
            .collect();
        TruncSeries { coeffs }
    }

    pub fn neg(&self) -> Self {
        TruncSeries {
            coeffs: self.coeffs.iter().map(|c| -c.clone()).collect(),
        }
    }

    /// Truncated product.
    pub fn mul(&self, other: &Self) -> Self {
        self.check_same_order(other);
        let order = self.order();
        let mut coeffs = vec![T::zero(); order + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if i + j > order {
                    break;
                }
                if b.is_zero() {
                    continue;
                }
                coeffs[i + j] = coeffs[i + j].clone() + a.clone() * b.clone();
            }
        }
        TruncSeries { coeffs }
    }

    pub fn scale(&self, c: &T) -> Self {
        TruncSeries {
            coeffs: self.coeffs.iter().map(|a| a.clone() * c.clone()).collect(),
        }
    }

    /// `log(self)` truncated at the series order.
    ///
    /// Requires constant term 1; the result has constant term 0.
    pub fn log(&self) -> Result<Self> {
        if !self.coeffs[0].is_one() {
            return Err(Error::domain(
                "series log requires constant term 1",
            ));
        }
        let order = self.order();
        let mut u = self.clone();
        u.coeffs[0] = T::zero();
        // log(1+u) = sum_{k>=1} (-1)^{k+1} u^k / k
        let mut acc = Self::zero(order);
        let mut power = u.clone();
        for k in 1..=order as u64 {
            let term = power.div_nat_all(k);
            acc = if k % 2 == 1 { acc.add(&term) } else { acc.sub(&term) };
            if k < order as u64 {
                power = power.mul(&u);
            }
        }
        Ok(acc)
    }

    /// `exp(self)` truncated at the series order.
    ///
    /// Requires constant term 0; the result has constant term 1.
    pub fn exp(&self) -> Result<Self> {
        if !self.coeffs[0].is_zero() {
            return Err(Error::domain(
                "series exp requires constant term 0",
            ));
        }
        let order = self.order();
        // exp(s) = sum_k s^k / k!, built as term_k = term_{k-1} * s / k.
        let mut acc = Self::one(order);
        let mut term = Self::one(order);
        for k in 1..=order as u64 {
            term = term.mul(self).div_nat_all(k);
            acc = acc.add(&term);
        }
        Ok(acc)
    }

    fn div_nat_all(&self, n: u64) -> Self {
        TruncSeries {
            coeffs: self.coeffs.iter().map(|c| c.div_nat(n)).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::{rat, rat_int, BigRat};

    fn series(vals: &[(i64, i64)]) -> TruncSeries<BigRat> {
        TruncSeries::from_coeffs(vals.iter().map(|&(n, d)| rat(n, d)).collect())
    }

    #[test]
    fn log_of_one_plus_x() {
        // 1 + x at order 3 -> x - x^2/2 + x^3/3
        let s = series(&[(1, 1), (1, 1), (0, 1), (0, 1)]);
        let expected = series(&[(0, 1), (1, 1), (-1, 2), (1, 3)]);
        assert_eq!(s.log().unwrap(), expected);
    }

    #[test]
    fn log_of_identity_is_zero() {
        let s = TruncSeries::<BigRat>::one(5);
        assert!(s.log().unwrap().is_zero());
    }

    #[test]
    fn exp_of_x() {
        // x at order 3 -> 1 + x + x^2/2 + x^3/6
        let s = TruncSeries::monomial(rat_int(1), 1, 3);
        let expected = series(&[(1, 1), (1, 1), (1, 2), (1, 6)]);
        assert_eq!(s.exp().unwrap(), expected);
    }

    #[test]
    fn exp_of_zero_is_one() {
        let s = TruncSeries::<BigRat>::zero(4);
        assert_eq!(s.exp().unwrap(), TruncSeries::one(4));
    }

    #[test]
    fn exp_group_law() {
        // exp(x) * exp(-x) = 1 at order 6
        let x = TruncSeries::monomial(rat_int(1), 1, 6);
        let prod = x.exp().unwrap().mul(&x.neg().exp().unwrap());
        assert_eq!(prod, TruncSeries::one(6));
    }

    #[test]
    fn log_inverts_exp() {
        // t = 2x + 7x^2 at order 4
        let t = series(&[(0, 1), (2, 1), (7, 1), (0, 1), (0, 1)]);
        assert_eq!(t.exp().unwrap().log().unwrap(), t);
    }

    #[test]
    fn preconditions_are_enforced() {
        let s = series(&[(2, 1), (1, 1)]);
        assert!(s.log().is_err());
        assert!(s.exp().is_err());
    }
}
