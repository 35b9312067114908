//! Memoized exact recursion for Severi degrees on the quadric
//! `P^1 x P^1` (the Hirzebruch surface `F_0`).
//!
//! A curve of class `(m, n)` meets the fixed `(1,0)`-ruling `L0` in `n`
//! points; tangency profiles are kept against `L0`. Breaking off that
//! ruling leaves class `(m-1, n)` with the tangency budget still `n`,
//! because the ruling has self-intersection 0; the cogenus bookkeeping is
//! `delta' = delta + |beta' - beta| - n`. Every recursion edge consumes
//! exactly one point condition.

use std::sync::atomic::{AtomicU64, Ordering};

use dashmap::DashMap;
use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::severi_plane::TangencyProfile;

/// Key of one quadric Severi degree, with `I(alpha) + I(beta) = n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadricKey {
    m: u32,
    n: u32,
    delta: u32,
    alpha: TangencyProfile,
    beta: TangencyProfile,
}

impl QuadricKey {
    pub fn new(
        m: u32,
        n: u32,
        delta: u32,
        alpha: TangencyProfile,
        beta: TangencyProfile,
    ) -> Result<Self> {
        let budget = alpha.weight() + beta.weight();
        if budget != n as u64 {
            return Err(Error::domain(format!(
                "tangency budget violated: I(alpha) + I(beta) = {budget} but n = {n}"
            )));
        }
        Ok(QuadricKey { m, n, delta, alpha, beta })
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn delta(&self) -> u32 {
        self.delta
    }

    pub fn alpha(&self) -> &TangencyProfile {
        &self.alpha
    }

    pub fn beta(&self) -> &TangencyProfile {
        &self.beta
    }

    /// Number of free point conditions:
    /// `(mn + m + n) - delta - I(alpha) - I(beta) + |beta|`.
    pub fn point_count(&self) -> i64 {
        let (m, n) = (self.m as i64, self.n as i64);
        m * n + m + n - self.delta as i64 - self.alpha.weight() as i64
            - self.beta.weight() as i64
            + self.beta.size() as i64
    }

    /// Cache key string, e.g. `f0|2|2|1||2`.
    pub fn to_cache_key(&self) -> String {
        format!(
            "f0|{}|{}|{}|{}|{}",
            self.m,
            self.n,
            self.delta,
            self.alpha.to_compact_string(),
            self.beta.to_compact_string()
        )
    }
}

/// Maximum node count of a reduced `(m, n)` curve, attained by the grid
/// of rulings: `p_a + (components - 1) = (mn - m - n + 1) + (m + n) - 1`.
pub fn delta_max(m: u32, n: u32) -> u32 {
    m * n
}

#[derive(Default)]
pub struct QuadricEngine {
    memo: DashMap<QuadricKey, BigInt>,
    expansions: AtomicU64,
}

impl QuadricEngine {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn expansions(&self) -> u64 {
        self.expansions.load(Ordering::Relaxed)
    }

    pub fn preload(&self, key: QuadricKey, value: BigInt) {
        self.memo.entry(key).or_insert(value);
    }

    pub fn lookup(&self, key: &QuadricKey) -> Option<BigInt> {
        self.memo.get(key).map(|v| v.clone())
    }

    pub fn snapshot(&self) -> Vec<(String, BigInt)> {
        let mut rows: Vec<(String, BigInt)> = self
            .memo
            .iter()
            .map(|e| (e.key().to_cache_key(), e.value().clone()))
            .collect();
        rows.sort();
        rows
    }

    /// `N^{(m,n),delta}(alpha, beta)`.
    pub fn severi(&self, key: &QuadricKey) -> Result<BigInt> {
        // (i) impossible cogenus; (ii) negative point count.
        if key.delta > delta_max(key.m, key.n) {
            return Ok(BigInt::zero());
        }
        let pc = key.point_count();
        if pc < 0 {
            return Ok(BigInt::zero());
        }
        // (iii) m = 0: the only members of |(0, n)| are unions of n fibers
        // transverse to the fixed ruling; distinct fibers are disjoint.
        if key.m == 0 {
            let ok = key.delta == 0
                && key.alpha.supported_in_order_one()
                && key.beta.supported_in_order_one();
            return Ok(BigInt::from(u32::from(ok)));
        }
        // (iv) n = 0: unions of fibers parallel to the fixed ruling; the
        // budget forces alpha = beta = 0.
        if key.n == 0 {
            let ok = key.delta == 0 && key.alpha.is_empty() && key.beta.is_empty();
            return Ok(BigInt::from(u32::from(ok)));
        }
        if let Some(v) = self.memo.get(key) {
            return Ok(v.clone());
        }
        if pc == 0 {
            return Err(Error::UnsupportedRecursionState(format!(
                "(m, n) = ({}, {}), delta = {}, alpha = {}, beta = {} has no free point condition",
                key.m, key.n, key.delta, key.alpha, key.beta
            )));
        }
        self.expansions.fetch_add(1, Ordering::Relaxed);
        let mut total = BigInt::zero();

        // A moving contact of order k becomes fixed.
        for k in 1..=key.beta.max_order() {
            if let Some(beta) = key.beta.with_removed(k) {
                let child = QuadricKey {
                    m: key.m,
                    n: key.n,
                    delta: key.delta,
                    alpha: key.alpha.with_added(k),
                    beta,
                };
                debug_assert_eq!(child.point_count(), pc - 1);
                total += BigInt::from(k as u64) * self.severi(&child)?;
            }
        }

        // The fixed (1,0)-ruling splits off; class (m-1, n) remains and
        // the tangency budget stays n.
        let n = key.n as i64;
        for alpha_sub in key.alpha.subprofiles() {
            let rem = n - alpha_sub.weight() as i64 - key.beta.weight() as i64;
            if rem < 0 {
                continue;
            }
            for gamma in TangencyProfile::profiles_of_weight(rem as u64) {
                let delta_child = key.delta as i64 + gamma.size() as i64 - n;
                if delta_child < 0 {
                    continue;
                }
                let beta_child = key.beta.plus(&gamma);
                let mut coeff = key.alpha.binomial_product(&alpha_sub);
                coeff *= beta_child.binomial_product(&key.beta);
                for k in 1..=gamma.max_order() {
                    coeff *= BigInt::from(k as u64).pow(gamma.get(k));
                }
                let child = QuadricKey {
                    m: key.m - 1,
                    n: key.n,
                    delta: delta_child as u32,
                    alpha: alpha_sub.clone(),
                    beta: beta_child,
                };
                debug_assert_eq!(child.point_count(), pc - 1);
                total += coeff * self.severi(&child)?;
            }
        }

        Ok(self
            .memo
            .entry(key.clone())
            .or_insert(total)
            .value()
            .clone())
    }

    /// Severi degree of bidegree `(m, n)`: all `n` contacts with the fixed
    /// ruling transverse and moving.
    pub fn severi_simple(&self, m: u32, n: u32, delta: u32) -> Result<BigInt> {
        let key = QuadricKey::new(
            m,
            n,
            delta,
            TangencyProfile::empty(),
            TangencyProfile::transverse(n),
        )?;
        self.severi(&key)
    }

    pub fn table(
        &self,
        m_max: u32,
        n_max: u32,
        delta_max: u32,
    ) -> Result<Vec<((u32, u32), Vec<BigInt>)>> {
        let mut rows = Vec::new();
        for m in 0..=m_max {
            for n in 0..=n_max {
                let mut row = Vec::new();
                for delta in 0..=delta_max {
                    row.push(self.severi_simple(m, n, delta)?);
                }
                rows.push(((m, n), row));
            }
        }
        Ok(rows)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn n(m: u32, nn: u32, delta: u32) -> BigInt {
        QuadricEngine::new().severi_simple(m, nn, delta).unwrap()
    }

    #[test]
    fn point_count_examples() {
        let k = QuadricKey::new(
            1,
            1,
            0,
            TangencyProfile::empty(),
            TangencyProfile::transverse(1),
        )
        .unwrap();
        assert_eq!(k.point_count(), 3);
        let k = QuadricKey::new(
            2,
            2,
            1,
            TangencyProfile::empty(),
            TangencyProfile::transverse(2),
        )
        .unwrap();
        assert_eq!(k.point_count(), 7);
        let k = QuadricKey::new(
            0,
            3,
            0,
            TangencyProfile::transverse(3),
            TangencyProfile::empty(),
        )
        .unwrap();
        assert_eq!(k.point_count(), 0);
    }

    #[test]
    fn smooth_counts_are_one() {
        for m in 0..=5 {
            for nn in 0..=5 {
                assert_eq!(n(m, nn, 0), BigInt::from(1), "(m, n) = ({m}, {nn})");
            }
        }
    }

    #[test]
    fn hand_enumerable_counts() {
        // nodal (1,1) through 2 points: one ruling of each family, 2 ways
        // to assign the points
        assert_eq!(n(1, 1, 1), BigInt::from(2));
        // nodal (2,1) through 4 points: (1,0) + (1,1) splits, C(4,3) = 4
        assert_eq!(n(2, 1, 1), BigInt::from(4));
        assert_eq!(n(1, 2, 1), BigInt::from(4));
        // 4-nodal (2,2): grids of 2 + 2 rulings through 4 points, C(4,2) = 6
        assert_eq!(n(2, 2, 4), BigInt::from(6));
    }

    #[test]
    fn nodal_counts_match_pencil_formula() {
        // 3L^2 + 2L.K + c2 = 6mn - 4m - 4n + 4 on the quadric
        for m in 1..=4i64 {
            for nn in 1..=4i64 {
                let expect = 6 * m * nn - 4 * m - 4 * nn + 4;
                assert_eq!(
                    n(m as u32, nn as u32, 1),
                    BigInt::from(expect),
                    "(m, n) = ({m}, {nn})"
                );
            }
        }
    }

    #[test]
    fn swap_symmetry() {
        // strongest internal check: the recursion distinguishes the two
        // rulings, the counts must not
        let engine = QuadricEngine::new();
        for m in 0..=4 {
            for nn in 0..=m {
                for delta in 0..=4 {
                    assert_eq!(
                        engine.severi_simple(m, nn, delta).unwrap(),
                        engine.severi_simple(nn, m, delta).unwrap(),
                        "(m, n, delta) = ({m}, {nn}, {delta})"
                    );
                }
            }
        }
    }

    #[test]
    fn impossible_cogenus_is_zero() {
        assert_eq!(n(1, 1, 2), BigInt::from(0));
        assert_eq!(n(2, 0, 1), BigInt::from(0));
    }

    #[test]
    fn ruling_base_cases() {
        // (0, n) with an order-2 fixed contact needs a doubled fiber: zero
        let engine = QuadricEngine::new();
        let key = QuadricKey::new(
            0,
            2,
            0,
            TangencyProfile::new(vec![0, 1]),
            TangencyProfile::empty(),
        )
        .unwrap();
        assert_eq!(engine.severi(&key).unwrap(), BigInt::from(0));
        let key = QuadricKey::new(
            0,
            2,
            0,
            TangencyProfile::transverse(1),
            TangencyProfile::transverse(1),
        )
        .unwrap();
        assert_eq!(engine.severi(&key).unwrap(), BigInt::from(1));
    }

    #[test]
    fn budget_violation_is_rejected() {
        assert!(QuadricKey::new(
            2,
            2,
            0,
            TangencyProfile::empty(),
            TangencyProfile::transverse(1)
        )
        .is_err());
    }
}
