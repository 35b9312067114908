//! Sparse polynomials in the four Chern variables.
//!
//! Variables are `w1 = L^2`, `w2 = L.K`, `w3 = K^2`, `w4 = c2`. Terms are
//! keyed by exponent quadruple in a `BTreeMap`, so iteration (and hence
//! serialization) is in ascending lexicographic order. No zero
//! coefficients are stored.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::{rat_from_string, rat_to_string, BigRat, Coeff};
use crate::error::Result;

#[derive(Clone, Debug, PartialEq, Default)]
pub struct MultiPoly4 {
    terms: BTreeMap<[u32; 4], BigRat>,
}

/// JSON form of a single term, e.g. `{"exps":[1,0,0,0],"coef":"3/1"}`.
#[derive(Serialize, Deserialize)]
pub struct PolyTerm {
    pub exps: [u32; 4],
    pub coef: String,
}

impl MultiPoly4 {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn constant(c: BigRat) -> Self {
        let mut p = Self::new();
        p.add_term([0, 0, 0, 0], c);
        p
    }

    /// The variable `w_{i+1}` for `i` in `0..4`.
    pub fn var(i: usize) -> Self {
        assert!(i < 4, "variable index out of range");
        let mut exps = [0u32; 4];
        exps[i] = 1;
        let mut p = Self::new();
        p.add_term(exps, BigRat::one());
        p
    }

    fn add_term(&mut self, exps: [u32; 4], c: BigRat) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(exps).or_insert_with(BigRat::zero);
        *entry = entry.clone() + c;
        if entry.is_zero() {
            self.terms.remove(&exps);
        }
    }

    pub fn coefficient(&self, exps: &[u32; 4]) -> BigRat {
        self.terms.get(exps).cloned().unwrap_or_else(BigRat::zero)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|e| e.iter().sum::<u32>())
            .max()
            .unwrap_or(0)
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn scale(&self, c: &BigRat) -> Self {
        if c.is_zero() {
            return Self::new();
        }
        MultiPoly4 {
            terms: self
                .terms
                .iter()
                .map(|(e, a)| (*e, a * c))
                .collect(),
        }
    }

    /// Exact evaluation at a rational point.
    pub fn eval(&self, point: &[BigRat; 4]) -> BigRat {
        let mut acc = BigRat::zero();
        for (exps, c) in &self.terms {
            let mut term = c.clone();
            for (i, &e) in exps.iter().enumerate() {
                for _ in 0..e {
                    term = term * point[i].clone();
                }
            }
            acc = acc + term;
        }
        acc
    }

    /// Terms in ascending lexicographic exponent order, as serializable
    /// records.
    pub fn to_terms(&self) -> Vec<PolyTerm> {
        self.terms
            .iter()
            .map(|(e, c)| PolyTerm {
                exps: *e,
                coef: rat_to_string(c),
            })
            .collect()
    }

    pub fn from_terms(terms: &[PolyTerm]) -> Result<Self> {
        let mut p = Self::new();
        for t in terms {
            p.add_term(t.exps, rat_from_string(&t.coef)?);
        }
        Ok(p)
    }
}

impl Zero for MultiPoly4 {
    fn zero() -> Self {
        Self::new()
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl One for MultiPoly4 {
    fn one() -> Self {
        Self::constant(BigRat::one())
    }
    fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .get(&[0, 0, 0, 0])
                .map_or(false, |c| c.is_one())
    }
}

impl Add for MultiPoly4 {
    type Output = MultiPoly4;
    fn add(mut self, rhs: MultiPoly4) -> MultiPoly4 {
        for (e, c) in rhs.terms {
            self.add_term(e, c);
        }
        self
    }
}

impl Sub for MultiPoly4 {
    type Output = MultiPoly4;
    fn sub(mut self, rhs: MultiPoly4) -> MultiPoly4 {
        for (e, c) in rhs.terms {
            self.add_term(e, -c);
        }
        self
    }
}

impl Neg for MultiPoly4 {
    type Output = MultiPoly4;
    fn neg(self) -> MultiPoly4 {
        MultiPoly4 {
            terms: self.terms.into_iter().map(|(e, c)| (e, -c)).collect(),
        }
    }
}

impl Mul for MultiPoly4 {
    type Output = MultiPoly4;
    fn mul(self, rhs: MultiPoly4) -> MultiPoly4 {
        let mut out = MultiPoly4::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let exps = [
                    ea[0] + eb[0],
                    ea[1] + eb[1],
                    ea[2] + eb[2],
                    ea[3] + eb[3],
                ];
                out.add_term(exps, ca * cb);
            }
        }
        out
    }
}

impl Coeff for MultiPoly4 {
    fn div_nat(&self, n: u64) -> Self {
        assert!(n != 0, "division by zero");
        let d = BigRat::from_integer(n.into());
        MultiPoly4 {
            terms: self.terms.iter().map(|(e, c)| (*e, c / &d)).collect(),
        }
    }
}

impl fmt::Display for MultiPoly4 {
    /// Compact rendering in descending exponent order, e.g. `3w1+2w2+w4`
    /// or `9/2w1^2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (exps, c) in self.terms.iter().rev() {
            let negative = c < &BigRat::zero();
            let abs = if negative { -c.clone() } else { c.clone() };
            if first {
                if negative {
                    write!(f, "-")?;
                }
                first = false;
            } else {
                write!(f, "{}", if negative { "-" } else { "+" })?;
            }
            let monomial: String = exps
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| {
                    if e == 1 {
                        format!("w{}", i + 1)
                    } else {
                        format!("w{}^{}", i + 1, e)
                    }
                })
                .collect();
            let coef = if abs.is_integer() {
                abs.numer().to_string()
            } else {
                format!("{}/{}", abs.numer(), abs.denom())
            };
            if monomial.is_empty() {
                write!(f, "{coef}")?;
            } else if abs.is_one() {
                write!(f, "{monomial}")?;
            } else {
                write!(f, "{coef}{monomial}")?;
            }
        }
        Ok(())
    }
}
