//! Reconstruction of the universal node polynomials `G_delta` from
//! computed Severi degrees, and verification of the counts against them.
//!
//! The generating series of the counts packages multiplicatively: for
//! each admissible `(S, L)` the log of `sum_delta N_delta x^delta` is the
//! linear form `L^2 a1(x) + L.K a2(x) + K^2 a3(x) + c2 a4(x)` in four
//! universal power series. Fitting the `a_i` is exact linear algebra over
//! the rationals, one 4-unknown system per order. With more than four
//! inputs the system is overdetermined and must be exactly consistent;
//! an inconsistency is reported loudly, never absorbed, because it is the
//! designated detector for recursion or packaging bugs.
//!
//! The plane and quadric Chern quadruples span a rank-4 space of linear
//! forms (asserted at runtime, not assumed) but lie on a 2-parameter
//! family of surfaces, which could not pin a general degree-delta
//! polynomial in four variables; the exponential packaging is what makes
//! four series enough.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde_json::json;

use crate::error::{Error, Result};
use crate::exactmath::{rat_from_string, rat_int, rat_to_string, BigRat, MultiPoly4, TruncSeries};
use crate::severi_plane::PlaneEngine;
use crate::severi_quadric::QuadricEngine;
use crate::surfaces::{ChernData, SurfaceModel};
use crate::thresholds::{hirzebruch_report, p2_bounds, P2Bounds, ThresholdReport, Verdict};

/// A surface-and-class admissible as a fit input: `P^2` with `O(d)`, or
/// the quadric with a bidegree.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FitSource {
    P2 { d: u32 },
    F0 { m: u32, n: u32 },
}

impl FitSource {
    pub fn chern(&self) -> ChernData {
        match self {
            FitSource::P2 { d } => {
                let s = SurfaceModel::p2();
                s.chern_data(&SurfaceModel::class_p2(*d as i64)).unwrap()
            }
            FitSource::F0 { m, n } => {
                let s = SurfaceModel::hirzebruch(0);
                s.chern_data(&SurfaceModel::class_fe(*n as i64, *m as i64))
                    .unwrap()
            }
        }
    }

    /// True when the threshold predicates certify equality with the
    /// universal polynomial at this cogenus.
    pub fn certified(&self, delta: u32) -> bool {
        match self {
            FitSource::P2 { d } => *d >= p2_bounds(delta).goettsche_d_min,
            FitSource::F0 { m, n } => {
                hirzebruch_report(0, *m, *n, delta).verdict == Verdict::PlusHolds
            }
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        let text = text.trim();
        if let Some(d) = text.strip_prefix("p2:") {
            let d = d
                .trim()
                .parse()
                .map_err(|_| Error::domain(format!("bad fit input {text:?}")))?;
            return Ok(FitSource::P2 { d });
        }
        if let Some(mn) = text.strip_prefix("f0:") {
            let (m, n) = mn
                .split_once('x')
                .ok_or_else(|| Error::domain(format!("bad fit input {text:?}, want f0:MxN")))?;
            let m = m
                .trim()
                .parse()
                .map_err(|_| Error::domain(format!("bad fit input {text:?}")))?;
            let n = n
                .trim()
                .parse()
                .map_err(|_| Error::domain(format!("bad fit input {text:?}")))?;
            return Ok(FitSource::F0 { m, n });
        }
        Err(Error::domain(format!(
            "bad fit input {text:?}: expected p2:D or f0:MxN"
        )))
    }
}

impl std::fmt::Display for FitSource {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            FitSource::P2 { d } => write!(f, "p2:{d}"),
            FitSource::F0 { m, n } => write!(f, "f0:{m}x{n}"),
        }
    }
}

/// Severi degrees `N_0 .. N_D` of one source, with its Chern data.
#[derive(Clone, Debug)]
pub struct FitInput {
    pub source: FitSource,
    pub chern: ChernData,
    pub degrees: Vec<BigInt>,
    pub certified: bool,
}

/// Compute the degree list for a source, refusing inputs that fail their
/// threshold certificate unless `force` is set (forced inputs are flagged
/// in the result).
pub fn severi_series(
    source: FitSource,
    order: usize,
    plane: &PlaneEngine,
    quadric: &QuadricEngine,
    force: bool,
) -> Result<FitInput> {
    let uncertified: Vec<u32> = (0..=order as u32)
        .filter(|&delta| !source.certified(delta))
        .collect();
    if !uncertified.is_empty() && !force {
        return Err(Error::domain(format!(
            "input {source} refused: threshold certificate fails at delta = {uncertified:?} \
             (use force to override)"
        )));
    }
    let mut degrees = Vec::with_capacity(order + 1);
    for delta in 0..=order as u32 {
        let v = match source {
            FitSource::P2 { d } => plane.severi_simple(d, delta)?,
            FitSource::F0 { m, n } => quadric.severi_simple(m, n, delta)?,
        };
        degrees.push(v);
    }
    if !degrees[0].is_one() {
        return Err(Error::UniversalityViolation(format!(
            "input {source} has N_0 = {} instead of 1",
            degrees[0]
        )));
    }
    Ok(FitInput {
        source,
        chern: source.chern(),
        degrees,
        certified: uncertified.is_empty(),
    })
}

/// The default input set for a fit of the given order: three consecutive
/// plane degrees starting at the threshold for `order`, plus one
/// certified quadric bidegree.
pub fn default_sources(order: usize) -> Vec<FitSource> {
    let d0 = (order as u32).div_ceil(2) + 1;
    let m = (order as u32).div_ceil(2).max(1);
    vec![
        FitSource::P2 { d: d0 },
        FitSource::P2 { d: d0 + 1 },
        FitSource::P2 { d: d0 + 2 },
        FitSource::F0 { m, n: m },
    ]
}

/// The four fitted series `a1 .. a4`, each with zero constant term.
#[derive(Clone, Debug)]
pub struct UniversalSeries {
    order: usize,
    a: [TruncSeries<BigRat>; 4],
    /// The inputs the fit was computed from, for provenance in the JSON
    /// output (not part of equality).
    inputs: Vec<(String, bool)>,
}

impl PartialEq for UniversalSeries {
    fn eq(&self, other: &Self) -> bool {
        self.order == other.order && self.a == other.a
    }
}

impl UniversalSeries {
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn series(&self, i: usize) -> &TruncSeries<BigRat> {
        &self.a[i]
    }

    pub fn to_json(&self) -> serde_json::Value {
        let arr = |s: &TruncSeries<BigRat>| -> Vec<String> {
            s.coeffs().iter().map(rat_to_string).collect()
        };
        json!({
            "order": self.order,
            "inputs": self.inputs.iter().map(|(s, certified)| json!({
                "source": s,
                "certified": certified,
            })).collect::<Vec<_>>(),
            "a1": arr(&self.a[0]),
            "a2": arr(&self.a[1]),
            "a3": arr(&self.a[2]),
            "a4": arr(&self.a[3]),
        })
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let order = v["order"]
            .as_u64()
            .ok_or_else(|| Error::domain("universal series JSON: missing order"))? as usize;
        let parse_series = |key: &str| -> Result<TruncSeries<BigRat>> {
            let arr = v[key]
                .as_array()
                .ok_or_else(|| Error::domain(format!("universal series JSON: missing {key}")))?;
            if arr.len() != order + 1 {
                return Err(Error::domain(format!(
                    "universal series JSON: {key} has {} coefficients, want {}",
                    arr.len(),
                    order + 1
                )));
            }
            let coeffs: Result<Vec<BigRat>> = arr
                .iter()
                .map(|c| {
                    rat_from_string(c.as_str().ok_or_else(|| {
                        Error::domain("universal series JSON: coefficient is not a string")
                    })?)
                })
                .collect();
            let s = TruncSeries::from_coeffs(coeffs?);
            if !s.get(0).is_zero() {
                return Err(Error::domain(format!(
                    "universal series JSON: {key} has nonzero constant term"
                )));
            }
            Ok(s)
        };
        let inputs = v["inputs"]
            .as_array()
            .map(|arr| {
                arr.iter()
                    .filter_map(|i| {
                        Some((
                            i["source"].as_str()?.to_string(),
                            i["certified"].as_bool().unwrap_or(true),
                        ))
                    })
                    .collect()
            })
            .unwrap_or_default();
        Ok(UniversalSeries {
            order,
            a: [
                parse_series("a1")?,
                parse_series("a2")?,
                parse_series("a3")?,
                parse_series("a4")?,
            ],
            inputs,
        })
    }

    /// The universal polynomial `G_delta`: coefficient of `x^delta` in
    /// `exp(w1 a1 + w2 a2 + w3 a3 + w4 a4)`.
    pub fn goettsche_polynomial(&self, delta: usize) -> Result<MultiPoly4> {
        if delta > self.order {
            return Err(Error::domain(format!(
                "G_{delta} needs a fit of order >= {delta} (have {})",
                self.order
            )));
        }
        let mut coeffs = vec![MultiPoly4::zero(); delta + 1];
        for (j, slot) in coeffs.iter_mut().enumerate().skip(1) {
            let mut sum = MultiPoly4::zero();
            for i in 0..4 {
                sum = sum + MultiPoly4::var(i).scale(&self.a[i].get(j));
            }
            *slot = sum;
        }
        let exp = TruncSeries::from_coeffs(coeffs).exp()?;
        Ok(exp.get(delta))
    }

    /// Exact evaluation of `G_delta` at Chern data; the result must be an
    /// integer.
    pub fn evaluate(&self, delta: usize, chern: &ChernData) -> Result<BigInt> {
        let poly = self.goettsche_polynomial(delta)?;
        let point = [
            rat_int(chern.l2),
            rat_int(chern.lk),
            rat_int(chern.k2),
            rat_int(chern.c2),
        ];
        let value = poly.eval(&point);
        if !value.is_integer() {
            return Err(Error::NonInteger(format!(
                "G_{delta} at {chern:?} is {} (not an integer)",
                rat_to_string(&value)
            )));
        }
        Ok(value.to_integer())
    }
}

/// Fit the four universal series from at least four inputs by exact
/// linear algebra, order by order.
pub fn fit_universal(order: usize, inputs: &[FitInput]) -> Result<UniversalSeries> {
    if inputs.len() < 4 {
        return Err(Error::RankDeficient(format!(
            "need at least 4 fit inputs, got {}",
            inputs.len()
        )));
    }
    let matrix: Vec<[BigRat; 4]> = inputs
        .iter()
        .map(|i| {
            [
                rat_int(i.chern.l2),
                rat_int(i.chern.lk),
                rat_int(i.chern.k2),
                rat_int(i.chern.c2),
            ]
        })
        .collect();
    if rank(&matrix) < 4 {
        return Err(Error::RankDeficient(
            "Chern quadruples of the fit inputs do not span rank 4".to_string(),
        ));
    }

    let mut logs = Vec::with_capacity(inputs.len());
    for input in inputs {
        if input.degrees.len() < order + 1 {
            return Err(Error::domain(format!(
                "input {} carries {} degrees, fit order {order} needs {}",
                input.source,
                input.degrees.len(),
                order + 1
            )));
        }
        if !input.degrees[0].is_one() {
            return Err(Error::UniversalityViolation(format!(
                "input {} has N_0 != 1",
                input.source
            )));
        }
        let coeffs: Vec<BigRat> = input.degrees[..=order]
            .iter()
            .map(|n| BigRat::from_integer(n.clone()))
            .collect();
        logs.push(TruncSeries::from_coeffs(coeffs).log()?);
    }

    let mut columns: [Vec<BigRat>; 4] = std::array::from_fn(|_| vec![BigRat::zero()]);
    for j in 1..=order {
        let rhs: Vec<BigRat> = logs.iter().map(|l| l.get(j)).collect();
        let x = solve_consistent(&matrix, &rhs, j)?;
        for i in 0..4 {
            columns[i].push(x[i].clone());
        }
    }

    Ok(UniversalSeries {
        order,
        a: columns.map(TruncSeries::from_coeffs),
        inputs: inputs
            .iter()
            .map(|i| (i.source.to_string(), i.certified))
            .collect(),
    })
}

fn rank(matrix: &[[BigRat; 4]]) -> usize {
    let mut m: Vec<Vec<BigRat>> = matrix.iter().map(|r| r.to_vec()).collect();
    let mut rank = 0;
    for col in 0..4 {
        let Some(pivot) = (rank..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, pivot);
        let lead = m[rank][col].clone();
        for r in 0..m.len() {
            if r != rank && !m[r][col].is_zero() {
                let factor = &m[r][col] / &lead;
                for c in col..4 {
                    let sub = &factor * &m[rank][c];
                    m[r][c] = &m[r][c] - sub;
                }
            }
        }
        rank += 1;
        if rank == 4 {
            break;
        }
    }
    rank
}

/// Solve the (possibly overdetermined) system `matrix * x = rhs` exactly.
/// The caller has checked rank 4; any leftover inconsistency means the
/// inputs do not satisfy a single universal linear form.
fn solve_consistent(matrix: &[[BigRat; 4]], rhs: &[BigRat], order_j: usize) -> Result<[BigRat; 4]> {
    let n = matrix.len();
    let mut m: Vec<Vec<BigRat>> = (0..n)
        .map(|r| {
            let mut row = matrix[r].to_vec();
            row.push(rhs[r].clone());
            row
        })
        .collect();
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut next_row = 0;
    for col in 0..4 {
        let Some(pivot) = (next_row..n).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(next_row, pivot);
        let lead = m[next_row][col].clone();
        for r in 0..n {
            if r != next_row && !m[r][col].is_zero() {
                let factor = &m[r][col] / &lead;
                for c in col..=4 {
                    let sub = &factor * &m[next_row][c];
                    m[r][c] = &m[r][c] - sub;
                }
            }
        }
        pivots.push((next_row, col));
        next_row += 1;
    }
    if pivots.len() < 4 {
        return Err(Error::RankDeficient(
            "fit matrix lost rank during elimination".to_string(),
        ));
    }
    for r in next_row..n {
        if !m[r][4].is_zero() {
            return Err(Error::UniversalityViolation(format!(
                "overdetermined fit is inconsistent at order x^{order_j}; \
                 the inputs do not satisfy one universal linear form"
            )));
        }
    }
    let mut x: [BigRat; 4] = std::array::from_fn(|_| BigRat::zero());
    for (row, col) in pivots {
        x[col] = &m[row][4] / &m[row][col];
    }
    Ok(x)
}

/// Result of checking one `(surface, class, delta)` against the fitted
/// polynomial.
#[derive(Clone, Debug)]
pub struct VerifyRecord {
    pub source: FitSource,
    pub delta: u32,
    pub recursion_value: BigInt,
    pub g_value: BigInt,
    pub matches: bool,
    pub predicted: Predicted,
}

/// Threshold prediction attached to a verification record.
#[derive(Clone, Debug)]
pub enum Predicted {
    P2 { bounds: P2Bounds, certified: bool },
    F0 { report: ThresholdReport },
}

impl VerifyRecord {
    pub fn to_json(&self) -> serde_json::Value {
        let (surface, class) = match self.source {
            FitSource::P2 { d } => ("p2", json!({ "d": d })),
            FitSource::F0 { m, n } => ("f0", json!({ "m": m, "n": n })),
        };
        let predicted = match &self.predicted {
            Predicted::P2 { bounds, certified } => json!({
                "goettsche_d_min": bounds.goettsche_d_min,
                "kst_d_min": bounds.kst_d_min,
                "certified": certified,
            }),
            Predicted::F0 { report } => serde_json::to_value(report).unwrap(),
        };
        json!({
            "surface": surface,
            "class": class,
            "delta": self.delta,
            "recursion_value": self.recursion_value.to_string(),
            "g_value": self.g_value.to_string(),
            "match": self.matches,
            "predicted": predicted,
        })
    }
}

/// Compare the recursion value with the fitted polynomial value, exactly.
pub fn verify_equality(
    series: &UniversalSeries,
    source: FitSource,
    delta: u32,
    plane: &PlaneEngine,
    quadric: &QuadricEngine,
) -> Result<VerifyRecord> {
    if delta as usize > series.order() {
        return Err(Error::domain(format!(
            "delta = {delta} exceeds the fitted order {}",
            series.order()
        )));
    }
    let recursion_value = match source {
        FitSource::P2 { d } => plane.severi_simple(d, delta)?,
        FitSource::F0 { m, n } => quadric.severi_simple(m, n, delta)?,
    };
    let g_value = series.evaluate(delta as usize, &source.chern())?;
    let predicted = match source {
        FitSource::P2 { d } => Predicted::P2 {
            bounds: p2_bounds(delta),
            certified: d >= p2_bounds(delta).goettsche_d_min,
        },
        FitSource::F0 { m, n } => Predicted::F0 {
            report: hirzebruch_report(0, m, n, delta),
        },
    };
    Ok(VerifyRecord {
        source,
        delta,
        matches: recursion_value == g_value,
        recursion_value,
        g_value,
        predicted,
    })
}

/// Convenience: compute the inputs and fit in one step.
pub fn fit_from_sources(
    order: usize,
    sources: &[FitSource],
    plane: &PlaneEngine,
    quadric: &QuadricEngine,
    force: bool,
) -> Result<UniversalSeries> {
    let inputs: Result<Vec<FitInput>> = sources
        .iter()
        .map(|&s| severi_series(s, order, plane, quadric, force))
        .collect();
    fit_universal(order, &inputs?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::rat;

    fn engines() -> (PlaneEngine, QuadricEngine) {
        (PlaneEngine::new(), QuadricEngine::new())
    }

    fn fit(order: usize) -> UniversalSeries {
        let (plane, quadric) = engines();
        fit_from_sources(order, &default_sources(order), &plane, &quadric, false).unwrap()
    }

    fn pencil_polynomial() -> MultiPoly4 {
        MultiPoly4::var(0).scale(&rat_int(3))
            + MultiPoly4::var(1).scale(&rat_int(2))
            + MultiPoly4::var(3)
    }

    #[test]
    fn fit_order_one_gives_pencil_polynomial() {
        let u = fit(1);
        assert_eq!(u.goettsche_polynomial(1).unwrap(), pencil_polynomial());
        assert_eq!(u.goettsche_polynomial(0).unwrap(), MultiPoly4::one());
    }

    #[test]
    fn fit_order_zero_is_trivial() {
        let u = fit(0);
        for i in 0..4 {
            assert!(u.series(i).is_zero());
        }
        assert_eq!(u.goettsche_polynomial(0).unwrap(), MultiPoly4::one());
    }

    #[test]
    fn alternative_input_sets_agree() {
        let (plane, quadric) = engines();
        let u_default = fit(2);
        let alt = [
            FitSource::P2 { d: 5 },
            FitSource::P2 { d: 6 },
            FitSource::P2 { d: 7 },
            FitSource::F0 { m: 2, n: 3 },
            FitSource::F0 { m: 3, n: 3 },
        ];
        let u_alt = fit_from_sources(2, &alt, &plane, &quadric, false).unwrap();
        assert_eq!(u_default, u_alt);
    }

    #[test]
    fn evaluate_examples() {
        let u = fit(1);
        let p2 = SurfaceModel::p2();
        let c1 = p2.chern_data(&SurfaceModel::class_p2(1)).unwrap();
        assert_eq!(u.evaluate(1, &c1).unwrap(), BigInt::zero());
        let c4 = p2.chern_data(&SurfaceModel::class_p2(4)).unwrap();
        assert_eq!(u.evaluate(1, &c4).unwrap(), BigInt::from(27));
        assert_eq!(u.evaluate(0, &c4).unwrap(), BigInt::one());
    }

    #[test]
    fn goettsche_polynomial_structure() {
        let u = fit(3);
        // w1^2 coefficient of G_2 comes only from the a1 term squared
        let g2 = u.goettsche_polynomial(2).unwrap();
        assert_eq!(g2.coefficient(&[2, 0, 0, 0]), rat(9, 2));
        for delta in 0..=3usize {
            let g = u.goettsche_polynomial(delta).unwrap();
            assert_eq!(g.total_degree(), delta as u32);
            // leading pure-w1 coefficient is 3^delta / delta!
            let mut exps = [0u32; 4];
            exps[0] = delta as u32;
            let mut expect = rat_int(1);
            for k in 1..=delta as i64 {
                expect = expect * rat(3, k);
            }
            assert_eq!(g.coefficient(&exps), expect);
        }
    }

    #[test]
    fn second_polynomial_matches_classical_form() {
        // G_2 = G_1^2/2 - (42 w1 + 39 w2 + 6 w3 + 7 w4)/2, the classical
        // second node polynomial
        let u = fit(2);
        let g1 = u.goettsche_polynomial(1).unwrap();
        let correction = MultiPoly4::var(0).scale(&rat_int(42))
            + MultiPoly4::var(1).scale(&rat_int(39))
            + MultiPoly4::var(2).scale(&rat_int(6))
            + MultiPoly4::var(3).scale(&rat_int(7));
        let expected = (g1.clone() * g1 - correction).scale(&rat(1, 2));
        assert_eq!(u.goettsche_polynomial(2).unwrap(), expected);
    }

    #[test]
    fn evaluation_is_integral_on_every_model() {
        let u = fit(6);
        let mut cherns = Vec::new();
        let p2 = SurfaceModel::p2();
        for d in 0..=6i64 {
            cherns.push(p2.chern_data(&SurfaceModel::class_p2(d)).unwrap());
        }
        for e in 0..=3u32 {
            let s = SurfaceModel::hirzebruch(e);
            for p in 0..=3i64 {
                for m in 0..=3i64 {
                    let l = s.class_fg(p, m).unwrap();
                    cherns.push(s.chern_data(&l).unwrap());
                }
            }
        }
        for r in 0..=6u32 {
            let s = SurfaceModel::del_pezzo(r).unwrap();
            for k_mult in [-1i64, -2] {
                let l = s.canonical_class().scale(k_mult);
                cherns.push(s.chern_data(&l).unwrap());
            }
        }
        for chern in &cherns {
            for delta in 0..=6usize {
                // evaluate() errors on a non-integer value
                u.evaluate(delta, chern).unwrap();
            }
        }
    }

    #[test]
    fn verify_matches_inside_threshold() {
        let (plane, quadric) = engines();
        let u = fit(3);
        let rec = verify_equality(&u, FitSource::P2 { d: 5 }, 3, &plane, &quadric).unwrap();
        assert!(rec.matches);
        let rec = verify_equality(&u, FitSource::P2 { d: 2 }, 3, &plane, &quadric).unwrap();
        assert!(!rec.matches);
        assert_eq!(rec.recursion_value, BigInt::zero());
        let rec = verify_equality(&u, FitSource::F0 { m: 3, n: 3 }, 2, &plane, &quadric).unwrap();
        assert!(rec.matches);
    }

    #[test]
    fn severi_series_examples() {
        let (plane, quadric) = engines();
        let input = severi_series(FitSource::P2 { d: 3 }, 1, &plane, &quadric, false).unwrap();
        assert_eq!(input.chern, ChernData { l2: 9, lk: -9, k2: 9, c2: 3 });
        assert_eq!(input.degrees, vec![BigInt::from(1), BigInt::from(12)]);
        assert!(input.certified);

        let input =
            severi_series(FitSource::F0 { m: 2, n: 2 }, 1, &plane, &quadric, false).unwrap();
        assert_eq!(input.chern, ChernData { l2: 8, lk: -8, k2: 8, c2: 4 });
        assert_eq!(input.degrees, vec![BigInt::from(1), BigInt::from(12)]);
    }

    #[test]
    fn refused_input_without_force() {
        let (plane, quadric) = engines();
        let err = severi_series(FitSource::P2 { d: 2 }, 3, &plane, &quadric, false).unwrap_err();
        assert!(err.to_string().contains("refused"));
        let forced = severi_series(FitSource::P2 { d: 2 }, 3, &plane, &quadric, true).unwrap();
        assert!(!forced.certified);
    }

    #[test]
    fn rank_deficiency_detected() {
        let (plane, quadric) = engines();
        // all-plane inputs span only rank 3
        let sources = [
            FitSource::P2 { d: 4 },
            FitSource::P2 { d: 5 },
            FitSource::P2 { d: 6 },
            FitSource::P2 { d: 7 },
        ];
        let err = fit_from_sources(2, &sources, &plane, &quadric, false).unwrap_err();
        assert!(matches!(err, Error::RankDeficient(_)));
    }

    #[test]
    fn tampered_input_trips_universality_detector() {
        let (plane, quadric) = engines();
        let mut inputs: Vec<FitInput> = [
            FitSource::P2 { d: 4 },
            FitSource::P2 { d: 5 },
            FitSource::P2 { d: 6 },
            FitSource::F0 { m: 2, n: 2 },
            FitSource::F0 { m: 2, n: 3 },
        ]
        .iter()
        .map(|&s| severi_series(s, 2, &plane, &quadric, false).unwrap())
        .collect();
        inputs[4].degrees[2] += 1;
        let err = fit_universal(2, &inputs).unwrap_err();
        assert!(matches!(err, Error::UniversalityViolation(_)));
    }

    #[test]
    fn series_json_round_trip() {
        let u = fit(2);
        let js = u.to_json();
        let back = UniversalSeries::from_json(&js).unwrap();
        assert_eq!(u, back);
        assert_eq!(js["a1"][1], serde_json::json!("3/1"));
    }

    #[test]
    fn parse_sources() {
        assert_eq!(FitSource::parse("p2:5").unwrap(), FitSource::P2 { d: 5 });
        assert_eq!(
            FitSource::parse("f0:2x3").unwrap(),
            FitSource::F0 { m: 2, n: 3 }
        );
        assert!(FitSource::parse("x3:1").is_err());
        assert!(FitSource::parse("f0:2,3").is_err());
    }
}
