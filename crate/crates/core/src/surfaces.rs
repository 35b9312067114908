//! Picard-lattice models of the three rational surface families: the
//! plane `P^2`, the Hirzebruch surfaces `F_e`, and the classical del Pezzo
//! surfaces `X_r` (blowups of the plane at `r <= 6` general points).
//!
//! Divisor classes are integer vectors in a fixed basis per family:
//! `P^2`: `(H)`; `F_e`: `(F, E)` with ruling `F` and section `E` of
//! self-intersection `-e`; `X_r`: `(H, E_1, .., E_r)`. The complementary
//! section `G = eF + E` of `F_e` gives the `(p, m)` coordinates
//! (`L = pF + mG`, so `p = n - em`) used by the threshold predicates; the
//! `(F, E)` vector is the canonical storage basis and `(p, m)` a derived
//! view.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SurfaceModel {
    P2,
    Hirzebruch { e: u32 },
    DelPezzo { r: u32 },
}

/// Divisor class as an integer vector in the surface's fixed basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DivisorClass {
    pub coords: Vec<i64>,
}

/// The Chern quadruple `(L^2, L.K, K^2, c2)` that all universal counts
/// depend on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChernData {
    pub l2: i64,
    pub lk: i64,
    pub k2: i64,
    pub c2: i64,
}

impl DivisorClass {
    pub fn new(coords: Vec<i64>) -> Self {
        DivisorClass { coords }
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }

    pub fn add(&self, other: &Self) -> Self {
        DivisorClass::new(
            self.coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    pub fn sub(&self, other: &Self) -> Self {
        DivisorClass::new(
            self.coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a - b)
                .collect(),
        )
    }

    pub fn scale(&self, k: i64) -> Self {
        DivisorClass::new(self.coords.iter().map(|a| a * k).collect())
    }
}

impl SurfaceModel {
    pub fn p2() -> Self {
        SurfaceModel::P2
    }

    pub fn hirzebruch(e: u32) -> Self {
        SurfaceModel::Hirzebruch { e }
    }

    /// Classical del Pezzo only: `-K` very ample requires `r <= 6`.
    pub fn del_pezzo(r: u32) -> Result<Self> {
        if r > 6 {
            return Err(Error::domain(format!(
                "del Pezzo model requires r <= 6 (got r = {r})"
            )));
        }
        Ok(SurfaceModel::DelPezzo { r })
    }

    pub fn picard_rank(&self) -> usize {
        match self {
            SurfaceModel::P2 => 1,
            SurfaceModel::Hirzebruch { .. } => 2,
            SurfaceModel::DelPezzo { r } => 1 + *r as usize,
        }
    }

    /// Topological Euler number `c2`.
    pub fn c2(&self) -> i64 {
        match self {
            SurfaceModel::P2 => 3,
            SurfaceModel::Hirzebruch { .. } => 4,
            SurfaceModel::DelPezzo { r } => 3 + *r as i64,
        }
    }

    pub fn name(&self) -> String {
        match self {
            SurfaceModel::P2 => "P2".to_string(),
            SurfaceModel::Hirzebruch { e } => format!("F{e}"),
            SurfaceModel::DelPezzo { r } => format!("X{r}"),
        }
    }

    fn check_class(&self, class: &DivisorClass) -> Result<()> {
        if class.coords.len() != self.picard_rank() {
            return Err(Error::domain(format!(
                "class has {} coordinates but {} has Picard rank {}",
                class.coords.len(),
                self.name(),
                self.picard_rank()
            )));
        }
        Ok(())
    }

    /// Symmetric intersection pairing on the Picard lattice.
    pub fn intersect(&self, a: &DivisorClass, b: &DivisorClass) -> Result<i64> {
        self.check_class(a)?;
        self.check_class(b)?;
        let (a, b) = (&a.coords, &b.coords);
        Ok(match self {
            SurfaceModel::P2 => a[0] * b[0],
            // Gram matrix in the (F, E) basis: F^2 = 0, F.E = 1, E^2 = -e.
            SurfaceModel::Hirzebruch { e } => {
                a[0] * b[1] + a[1] * b[0] - (*e as i64) * a[1] * b[1]
            }
            // H^2 = 1, E_i^2 = -1, all cross terms zero.
            SurfaceModel::DelPezzo { .. } => {
                a[0] * b[0] - a.iter().zip(b).skip(1).map(|(x, y)| x * y).sum::<i64>()
            }
        })
    }

    /// The canonical class `K`; satisfies `K^2 = 12 - c2` in every model.
    pub fn canonical_class(&self) -> DivisorClass {
        match self {
            SurfaceModel::P2 => DivisorClass::new(vec![-3]),
            SurfaceModel::Hirzebruch { e } => {
                DivisorClass::new(vec![-(*e as i64) - 2, -2])
            }
            SurfaceModel::DelPezzo { r } => {
                let mut coords = vec![1i64; 1 + *r as usize];
                coords[0] = -3;
                DivisorClass::new(coords)
            }
        }
    }

    pub fn chern_data(&self, class: &DivisorClass) -> Result<ChernData> {
        let k = self.canonical_class();
        Ok(ChernData {
            l2: self.intersect(class, class)?,
            lk: self.intersect(class, &k)?,
            k2: self.intersect(&k, &k)?,
            c2: self.c2(),
        })
    }

    /// Riemann-Roch value `D.(D-K)/2`, the dimension of `|D|` whenever the
    /// vanishing conditions hold.
    pub fn riemann_roch(&self, class: &DivisorClass) -> Result<i64> {
        let k = self.canonical_class();
        let num = self.intersect(class, class)? - self.intersect(class, &k)?;
        debug_assert!(num % 2 == 0, "D.(D-K) is always even");
        Ok(num / 2)
    }

    /// `dim |L|` in the effective regime of each family.
    ///
    /// `P^2`: `d >= 0`; `F_e`: `m >= 0` and `p = n - em >= 0`; `X_r`: the
    /// Riemann-Roch value must be nonnegative. Outside the regime the
    /// family rule is named in the error.
    pub fn dim_linear_system(&self, class: &DivisorClass) -> Result<i64> {
        self.check_class(class)?;
        match self {
            SurfaceModel::P2 => {
                let d = class.coords[0];
                if d < 0 {
                    return Err(Error::domain(format!(
                        "P2 rule violated: need d >= 0 (got d = {d})"
                    )));
                }
                Ok(d * (d + 3) / 2)
            }
            SurfaceModel::Hirzebruch { e } => {
                let (p, m) = self.fe_pm_view(class)?;
                if m < 0 || p < 0 {
                    return Err(Error::domain(format!(
                        "F{e} rule violated: need m >= 0 and p = n - em >= 0 \
                         (got p = {p}, m = {m})"
                    )));
                }
                let e = *e as i64;
                let dim = p * m + p + m + m * e * (1 + m) / 2;
                debug_assert_eq!(dim, self.riemann_roch(class).unwrap());
                Ok(dim)
            }
            SurfaceModel::DelPezzo { r } => {
                let rr = self.riemann_roch(class)?;
                if rr < 0 {
                    return Err(Error::domain(format!(
                        "X{r} rule violated: Riemann-Roch value {rr} < 0 \
                         (empty system has dimension -1)"
                    )));
                }
                Ok(rr)
            }
        }
    }

    /// Arithmetic genus `p_a = L.(L+K)/2 + 1`.
    pub fn arithmetic_genus(&self, class: &DivisorClass) -> Result<i64> {
        let k = self.canonical_class();
        let num = self.intersect(class, class)? + self.intersect(class, &k)?;
        debug_assert!(num % 2 == 0);
        Ok(num / 2 + 1)
    }

    /// `dim |L| - delta`, the expected dimension of the cogenus-delta
    /// Severi variety.
    pub fn expected_severi_dim(&self, class: &DivisorClass, delta: u32) -> Result<i64> {
        Ok(self.dim_linear_system(class)? - delta as i64)
    }

    /// All classes with `G^2 = -1` and `K.G = -1`, by exhaustive bounded
    /// lattice search. Supported on `X_r` and on `F_1`.
    pub fn minus_one_classes(&self) -> Result<Vec<DivisorClass>> {
        match self {
            SurfaceModel::DelPezzo { r } => Ok(self.minus_one_search(*r, 3, 2)),
            SurfaceModel::Hirzebruch { e: 1 } => {
                // In the (F, E) basis: m(2n - m) = -1 and 2n + m = 1.
                let mut found = Vec::new();
                for n in -3i64..=3 {
                    for m in -3i64..=3 {
                        if m * (2 * n - m) == -1 && 2 * n + m == 1 {
                            found.push(DivisorClass::new(vec![n, m]));
                        }
                    }
                }
                Ok(found)
            }
            _ => Err(Error::domain(format!(
                "minus-one classes are only enumerated on X_r and F_1 (got {})",
                self.name()
            ))),
        }
    }

    /// Bounded search for `-1`-classes on `X_r`; `b0`/`bi` bound the `H`
    /// and `E_i` coordinates. Every solution must lie strictly inside the
    /// box, so enlarging the bounds cannot add classes.
    pub(crate) fn minus_one_search(&self, r: u32, b0: i64, bi: i64) -> Vec<DivisorClass> {
        let r = r as usize;
        let mut found = Vec::new();
        let mut coords = vec![0i64; 1 + r];
        let k = self.canonical_class();
        let mut stack = vec![(0usize, -b0)];
        // Depth-first over the coordinate box.
        while let Some((idx, val)) = stack.pop() {
            let bound = if idx == 0 { b0 } else { bi };
            if val > bound {
                continue;
            }
            stack.push((idx, val + 1));
            coords[idx] = val;
            if idx + 1 <= r {
                stack.push((idx + 1, -bi));
                continue;
            }
            let class = DivisorClass::new(coords.clone());
            let self_int = self.intersect(&class, &class).unwrap();
            let k_int = self.intersect(&class, &k).unwrap();
            if self_int == -1 && k_int == -1 {
                assert!(
                    coords[0].abs() < b0 && coords[1..].iter().all(|c| c.abs() < bi),
                    "-1-class found on the search boundary shell; bounds too small"
                );
                found.push(class);
            }
        }
        found.sort_by(|a, b| a.coords.cmp(&b.coords));
        found
    }

    /// Effectivity proxy on `X_r`: Riemann-Roch value `>= 0` and
    /// `-K.D > 0`, or `D = 0`. Exact effectivity would need cone
    /// machinery; callers relying on this must flag their output.
    pub fn proxy_effective(&self, class: &DivisorClass) -> Result<bool> {
        self.check_class(class)?;
        if class.is_zero() {
            return Ok(true);
        }
        let k = self.canonical_class();
        Ok(self.riemann_roch(class)? >= 0 && self.intersect(class, &k)? < 0)
    }

    /// The `(p, m)` view of an `F_e` class `nF + mE`, with `p = n - em`.
    pub fn fe_pm_view(&self, class: &DivisorClass) -> Result<(i64, i64)> {
        match self {
            SurfaceModel::Hirzebruch { e } => {
                self.check_class(class)?;
                let (n, m) = (class.coords[0], class.coords[1]);
                Ok((n - (*e as i64) * m, m))
            }
            _ => Err(Error::domain("the (p, m) view only exists on F_e")),
        }
    }

    /// Class constructors per family.
    pub fn class_p2(d: i64) -> DivisorClass {
        DivisorClass::new(vec![d])
    }

    /// `F_e` class from `(F, E)` coordinates `nF + mE`.
    pub fn class_fe(n: i64, m: i64) -> DivisorClass {
        DivisorClass::new(vec![n, m])
    }

    /// `F_e` class from `(F, G)` coordinates `pF + mG`.
    pub fn class_fg(&self, p: i64, m: i64) -> Result<DivisorClass> {
        match self {
            SurfaceModel::Hirzebruch { e } => {
                Ok(DivisorClass::new(vec![p + (*e as i64) * m, m]))
            }
            _ => Err(Error::domain("the (p, m) coordinates only exist on F_e")),
        }
    }

    /// Parse a class string in the family's interface syntax:
    /// `P^2`: `d`; `F_e`: `p,m` (or `n,m` when `fe_basis` is set);
    /// `X_r`: `a0;a1,...,ar` or a multiple of the canonical class such
    /// as `-2K`.
    pub fn parse_class(&self, text: &str, fe_basis: bool) -> Result<DivisorClass> {
        let text = text.trim();
        let bad = |msg: &str| Error::domain(format!("cannot parse class {text:?}: {msg}"));
        match self {
            SurfaceModel::P2 => {
                let d: i64 = text.parse().map_err(|_| bad("expected an integer d"))?;
                Ok(Self::class_p2(d))
            }
            SurfaceModel::Hirzebruch { .. } => {
                let (a, b) = text
                    .split_once(',')
                    .ok_or_else(|| bad("expected two comma-separated integers"))?;
                let a: i64 = a.trim().parse().map_err(|_| bad("bad first integer"))?;
                let b: i64 = b.trim().parse().map_err(|_| bad("bad second integer"))?;
                if fe_basis {
                    Ok(Self::class_fe(a, b))
                } else {
                    self.class_fg(a, b)
                }
            }
            SurfaceModel::DelPezzo { r } => {
                if let Some(mult) = text.strip_suffix('K') {
                    let c: i64 = match mult {
                        "" => 1,
                        "-" => -1,
                        other => other.parse().map_err(|_| bad("bad multiple of K"))?,
                    };
                    return Ok(self.canonical_class().scale(c));
                }
                let (a0, rest) = text
                    .split_once(';')
                    .ok_or_else(|| bad("expected a0;a1,...,ar or a multiple of K"))?;
                let mut coords = vec![a0
                    .trim()
                    .parse::<i64>()
                    .map_err(|_| bad("bad a0 coordinate"))?];
                if !rest.trim().is_empty() {
                    for part in rest.split(',') {
                        coords.push(
                            part.trim()
                                .parse::<i64>()
                                .map_err(|_| bad("bad E_i coordinate"))?,
                        );
                    }
                }
                if coords.len() != 1 + *r as usize {
                    return Err(bad(&format!(
                        "expected {} coordinates for X{r}",
                        1 + r
                    )));
                }
                Ok(DivisorClass::new(coords))
            }
        }
    }

    /// Human-readable class rendering in the storage basis.
    pub fn class_to_string(&self, class: &DivisorClass) -> String {
        match self {
            SurfaceModel::P2 => format!("{}H", class.coords[0]),
            SurfaceModel::Hirzebruch { .. } => {
                format!("{}F+{}E", class.coords[0], class.coords[1])
            }
            SurfaceModel::DelPezzo { .. } => {
                let tail: Vec<String> =
                    class.coords[1..].iter().map(|c| c.to_string()).collect();
                format!("{};{}", class.coords[0], tail.join(","))
            }
        }
    }
}
