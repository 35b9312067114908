//! Memoized exact recursion for generalized plane Severi degrees
//! `N^{d,delta}(alpha, beta)`: the number of reduced degree-`d` plane
//! curves with `delta` nodes, `alpha` fixed and `beta` moving contact
//! conditions against a fixed line, through the appropriate number of
//! general points.
//!
//! The recursion degenerates against the fixed line: either a moving
//! contact becomes fixed (same degree), or the line splits off and a
//! degree-`d-1` curve remains with adjusted contact profiles and cogenus
//! `delta' = delta + |beta' - beta| + 1 - d`. Every recursion edge
//! consumes exactly one point condition.

use std::sync::atomic::{AtomicU64, Ordering};

use dashmap::DashMap;
use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exactmath::binomial;

/// Finitely supported sequence of contact multiplicities: entry `k-1`
/// counts the contact points of order `k` with the fixed line. Trailing
/// zeros are trimmed, so the representation is canonical.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TangencyProfile {
    mults: Vec<u32>,
}

impl TangencyProfile {
    pub fn new(mut mults: Vec<u32>) -> Self {
        while mults.last() == Some(&0) {
            mults.pop();
        }
        TangencyProfile { mults }
    }

    pub fn empty() -> Self {
        Self::default()
    }

    /// `count` transverse contacts: the profile `(count)`.
    pub fn transverse(count: u32) -> Self {
        Self::new(vec![count])
    }

    pub fn is_empty(&self) -> bool {
        self.mults.is_empty()
    }

    /// `I(alpha) = sum k * a_k`, the contact-order budget used.
    pub fn weight(&self) -> u64 {
        self.mults
            .iter()
            .enumerate()
            .map(|(i, &a)| (i as u64 + 1) * a as u64)
            .sum()
    }

    /// `|alpha| = sum a_k`, the number of contact points.
    pub fn size(&self) -> u64 {
        self.mults.iter().map(|&a| a as u64).sum()
    }

    /// Multiplicity of contact order `k` (1-indexed).
    pub fn get(&self, k: usize) -> u32 {
        assert!(k >= 1, "contact orders are 1-indexed");
        self.mults.get(k - 1).copied().unwrap_or(0)
    }

    pub fn max_order(&self) -> usize {
        self.mults.len()
    }

    /// Profile with one extra contact of order `k`.
    pub fn with_added(&self, k: usize) -> Self {
        let mut mults = self.mults.clone();
        if mults.len() < k {
            mults.resize(k, 0);
        }
        mults[k - 1] += 1;
        Self::new(mults)
    }

    /// Profile with one contact of order `k` removed, if present.
    pub fn with_removed(&self, k: usize) -> Option<Self> {
        if self.get(k) == 0 {
            return None;
        }
        let mut mults = self.mults.clone();
        mults[k - 1] -= 1;
        Some(Self::new(mults))
    }

    pub fn plus(&self, other: &Self) -> Self {
        let len = self.mults.len().max(other.mults.len());
        let mults = (1..=len)
            .map(|k| self.get(k) + other.get(k))
            .collect();
        Self::new(mults)
    }

    /// True when only order-1 contacts appear.
    pub fn supported_in_order_one(&self) -> bool {
        self.mults.len() <= 1
    }

    /// All subprofiles `a' <= a` componentwise (including empty and self).
    pub fn subprofiles(&self) -> Vec<Self> {
        let mut out = vec![Self::empty()];
        for (i, &cap) in self.mults.iter().enumerate() {
            let k = i + 1;
            let mut next = Vec::with_capacity(out.len() * (cap as usize + 1));
            for base in &out {
                for c in 0..=cap {
                    let mut p = base.clone();
                    if c > 0 {
                        let mut mults = p.mults;
                        mults.resize(k, 0);
                        mults[k - 1] = c;
                        p = Self::new(mults);
                    }
                    next.push(p);
                }
            }
            out = next;
        }
        out
    }

    /// All profiles of weight exactly `w` (partitions of `w` recorded by
    /// part multiplicities).
    pub fn profiles_of_weight(w: u64) -> Vec<Self> {
        fn rec(remaining: u64, max_part: u64, acc: &mut Vec<u32>, out: &mut Vec<TangencyProfile>) {
            if remaining == 0 {
                out.push(TangencyProfile::new(acc.clone()));
                return;
            }
            for part in (1..=max_part.min(remaining)).rev() {
                acc.resize(acc.len().max(part as usize), 0);
                acc[part as usize - 1] += 1;
                rec(remaining - part, part, acc, out);
                acc[part as usize - 1] -= 1;
                while acc.last() == Some(&0) {
                    acc.pop();
                }
            }
        }
        let mut out = Vec::new();
        rec(w, w, &mut Vec::new(), &mut out);
        out
    }

    /// `prod_k C(self_k, other_k)`, zero when `other` is not a subprofile.
    pub fn binomial_product(&self, other: &Self) -> BigInt {
        let len = self.mults.len().max(other.mults.len());
        let mut acc = BigInt::from(1);
        for k in 1..=len {
            acc *= binomial(self.get(k) as u64, other.get(k) as u64);
            if acc.is_zero() {
                break;
            }
        }
        acc
    }

    /// Render as comma-joined multiplicities; the empty profile is `""`.
    pub fn to_compact_string(&self) -> String {
        self.mults
            .iter()
            .map(|a| a.to_string())
            .collect::<Vec<_>>()
            .join(",")
    }

    pub fn parse(text: &str) -> Result<Self> {
        let text = text.trim();
        if text.is_empty() {
            return Ok(Self::empty());
        }
        let mut mults = Vec::new();
        for part in text.split(',') {
            let a: u32 = part.trim().parse().map_err(|_| {
                Error::domain(format!("invalid tangency profile entry {part:?}"))
            })?;
            mults.push(a);
        }
        Ok(Self::new(mults))
    }
}

impl std::fmt::Display for TangencyProfile {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({})", self.to_compact_string())
    }
}

/// Key of one generalized plane Severi degree: degree, cogenus, fixed
/// profile `alpha`, moving profile `beta`, with `I(alpha) + I(beta) = d`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PlaneKey {
    d: u32,
    delta: u32,
    alpha: TangencyProfile,
    beta: TangencyProfile,
}

impl PlaneKey {
    pub fn new(d: u32, delta: u32, alpha: TangencyProfile, beta: TangencyProfile) -> Result<Self> {
        if d < 1 {
            return Err(Error::domain("plane Severi degrees require d >= 1"));
        }
        let budget = alpha.weight() + beta.weight();
        if budget != d as u64 {
            return Err(Error::domain(format!(
                "tangency budget violated: I(alpha) + I(beta) = {budget} but d = {d}"
            )));
        }
        Ok(PlaneKey { d, delta, alpha, beta })
    }

    pub fn d(&self) -> u32 {
        self.d
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
    /// `d(d+3)/2 - delta - I(alpha) - I(beta) + |beta|`. May be negative;
    /// callers treat negative as empty.
    pub fn point_count(&self) -> i64 {
        let d = self.d as i64;
        d * (d + 3) / 2 - self.delta as i64 - self.alpha.weight() as i64
            - self.beta.weight() as i64
            + self.beta.size() as i64
    }

    /// Cache key string, e.g. `p2|3|1||3`.
    pub fn to_cache_key(&self) -> String {
        format!(
            "p2|{}|{}|{}|{}",
            self.d,
            self.delta,
            self.alpha.to_compact_string(),
            self.beta.to_compact_string()
        )
    }
}

/// Maximum node count of a reduced degree-`d` curve:
/// `p_a + (components - 1) <= (d-1)(d-2)/2 + (d-1) = d(d-1)/2`.
pub fn delta_max(d: u32) -> u32 {
    d * (d - 1) / 2
}

/// Memoized evaluator. Values are canonical, so concurrent insertion is
/// idempotent; lookups may race freely.
#[derive(Default)]
pub struct PlaneEngine {
    memo: DashMap<PlaneKey, BigInt>,
    expansions: AtomicU64,
}

impl PlaneEngine {
    pub fn new() -> Self {
        Self::default()
    }

    /// Number of keys evaluated by actually expanding the recursion (as
    /// opposed to memo or cache hits).
    pub fn expansions(&self) -> u64 {
        self.expansions.load(Ordering::Relaxed)
    }

    /// Insert an externally computed value (cache priming).
    pub fn preload(&self, key: PlaneKey, value: BigInt) {
        self.memo.entry(key).or_insert(value);
    }

    pub fn lookup(&self, key: &PlaneKey) -> Option<BigInt> {
        self.memo.get(key).map(|v| v.clone())
    }

    /// Snapshot of the memo store, sorted for deterministic output.
    pub fn snapshot(&self) -> Vec<(String, BigInt)> {
        let mut rows: Vec<(String, BigInt)> = self
            .memo
            .iter()
            .map(|e| (e.key().to_cache_key(), e.value().clone()))
            .collect();
        rows.sort();
        rows
    }

    /// `N^{d,delta}(alpha, beta)`.
    pub fn severi(&self, key: &PlaneKey) -> Result<BigInt> {
        // Guards (i) and (ii): impossible cogenus, or negative point count.
        if key.delta > delta_max(key.d) {
            return Ok(BigInt::zero());
        }
        let pc = key.point_count();
        if pc < 0 {
            return Ok(BigInt::zero());
        }
        // Base (iii): the only degree-1 curve is a line, which is smooth.
        if key.d == 1 {
            return Ok(BigInt::from(u32::from(key.delta == 0)));
        }
        if let Some(v) = self.memo.get(key) {
            return Ok(v.clone());
        }
        // (iv) the recursion consumes a point condition.
        if pc == 0 {
            return Err(Error::UnsupportedRecursionState(format!(
                "d = {}, delta = {}, alpha = {}, beta = {} has no free point condition",
                key.d, key.delta, key.alpha, key.beta
            )));
        }
        self.expansions.fetch_add(1, Ordering::Relaxed);
        let mut total = BigInt::zero();

        // A moving contact of order k becomes fixed.
        for k in 1..=key.beta.max_order() {
            if let Some(beta) = key.beta.with_removed(k) {
                let child = PlaneKey {
                    d: key.d,
                    delta: key.delta,
                    alpha: key.alpha.with_added(k),
                    beta,
                };
                debug_assert_eq!(child.point_count(), pc - 1);
                total += BigInt::from(k as u64) * self.severi(&child)?;
            }
        }

        // The fixed line splits off; a degree d-1 curve remains.
        let d = key.d as i64;
        for alpha_sub in key.alpha.subprofiles() {
            let rem = (d - 1) - alpha_sub.weight() as i64 - key.beta.weight() as i64;
            if rem < 0 {
                continue;
            }
            for gamma in TangencyProfile::profiles_of_weight(rem as u64) {
                let delta_child = key.delta as i64 + gamma.size() as i64 + 1 - d;
                if delta_child < 0 {
                    continue;
                }
                let beta_child = key.beta.plus(&gamma);
                let mut coeff = key.alpha.binomial_product(&alpha_sub);
                coeff *= beta_child.binomial_product(&key.beta);
                for k in 1..=gamma.max_order() {
                    coeff *= BigInt::from(k as u64).pow(gamma.get(k));
                }
                let child = PlaneKey {
                    d: key.d - 1,
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

    /// Classical Severi degree: all `d` line intersections transverse and
    /// moving (`alpha` empty, `beta = (d)`).
    pub fn severi_simple(&self, d: u32, delta: u32) -> Result<BigInt> {
        let key = PlaneKey::new(
            d,
            delta,
            TangencyProfile::empty(),
            TangencyProfile::transverse(d),
        )?;
        self.severi(&key)
    }

    /// All `severi_simple(d, delta)` for `d <= d_max`, `delta <= delta_max`,
    /// over one shared memo store.
    pub fn table(&self, d_max: u32, delta_max: u32) -> Result<Vec<(u32, Vec<BigInt>)>> {
        let mut rows = Vec::new();
        for d in 1..=d_max {
            let mut row = Vec::new();
            for delta in 0..=delta_max {
                row.push(self.severi_simple(d, delta)?);
            }
            rows.push((d, row));
        }
        Ok(rows)
    }
}
