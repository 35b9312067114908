//! `severi` — exact Severi degrees, threshold certificates, and universal
//! node polynomials on the command line.
//!
//! Exit codes: 0 success, 1 usage or I/O, 2 domain error, 3 internal
//! consistency violation (unsupported recursion state, universality
//! violation, integrality failure, cache integrity).

mod cache;

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::json;

use severi_core::error::Error as CoreError;
use severi_core::severi_plane::{PlaneEngine, PlaneKey, TangencyProfile};
use severi_core::severi_quadric::QuadricKey;
use severi_core::severi_quadric::QuadricEngine;
use severi_core::surfaces::SurfaceModel;
use severi_core::thresholds::{delpezzo_report, hirzebruch_report, p2_bounds, ThresholdReport};
use severi_core::universal::{self, FitSource, UniversalSeries};

use cache::CacheStore;

#[derive(Parser)]
#[command(name = "severi", version, about = "Exact Severi degree toolkit")]
struct Cli {
    /// Emit machine-readable JSON where a human format is the default.
    #[arg(long, global = true)]
    json: bool,

    /// Directory for the persistent memo cache (JSON lines).
    #[arg(long, global = true, env = "SEVERI_CACHE")]
    cache_dir: Option<PathBuf>,

    /// Print evaluation statistics to stderr.
    #[arg(long, global = true)]
    stats: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute one Severi degree.
    Severi {
        #[command(subcommand)]
        target: SeveriTarget,
    },
    /// Tabulate Severi degrees over a range, sharing one memo store.
    Table {
        #[command(subcommand)]
        target: TableTarget,
    },
    /// Threshold predicates and codimension certificates.
    Threshold {
        #[command(subcommand)]
        target: ThresholdTarget,
    },
    /// Fit the universal series from computed Severi degrees.
    Fit {
        /// Highest cogenus to fit.
        #[arg(long)]
        delta_max: usize,
        /// Comma-separated inputs, e.g. `p2:4,p2:5,p2:6,f0:3x3`.
        #[arg(long)]
        inputs: Option<String>,
        /// Write the fitted series JSON to this file.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Accept inputs that fail their threshold certificate (flagged).
        #[arg(long)]
        force: bool,
    },
    /// Compare a recursion value against the fitted polynomial.
    Verify {
        /// `p2` or `f0`.
        #[arg(long)]
        surface: String,
        /// `d` for the plane, `m,n` for the quadric.
        #[arg(long, allow_hyphen_values = true)]
        class: String,
        #[arg(long)]
        delta: u32,
        /// Universal series JSON written by `fit --out`.
        #[arg(long)]
        series: PathBuf,
    },
    /// Print surface model facts: K, c2, -1-classes, dim|L|.
    Audit {
        #[command(subcommand)]
        target: AuditTarget,
    },
}

#[derive(Subcommand)]
enum SeveriTarget {
    /// Plane curves of degree d.
    P2 {
        #[arg(long)]
        d: u32,
        #[arg(long)]
        delta: u32,
        /// Fixed tangency profile, comma-joined multiplicities.
        #[arg(long)]
        alpha: Option<String>,
        /// Moving tangency profile; defaults to all contacts transverse.
        #[arg(long)]
        beta: Option<String>,
    },
    /// Curves of bidegree (m, n) on the quadric.
    F0 {
        #[arg(long)]
        m: u32,
        #[arg(long)]
        n: u32,
        #[arg(long)]
        delta: u32,
        #[arg(long)]
        alpha: Option<String>,
        #[arg(long)]
        beta: Option<String>,
    },
}

#[derive(Subcommand)]
enum TableTarget {
    P2 {
        #[arg(long)]
        d_max: u32,
        #[arg(long)]
        delta_max: u32,
    },
    F0 {
        #[arg(long)]
        m_max: u32,
        #[arg(long)]
        n_max: u32,
        #[arg(long)]
        delta_max: u32,
    },
}

#[derive(Subcommand)]
enum ThresholdTarget {
    /// Degree thresholds on the plane.
    P2 {
        #[arg(long)]
        delta: u32,
    },
    /// Certificates for F_e in the (p, m) class coordinates.
    Hirzebruch {
        #[arg(long)]
        e: u32,
        #[arg(long)]
        m: u32,
        /// F-coefficient in the (F, G) basis.
        #[arg(long, conflicts_with = "n")]
        p: Option<u32>,
        /// F-coefficient in the (F, E) basis; converted via p = n - em.
        #[arg(long)]
        n: Option<u32>,
        #[arg(long)]
        delta: u32,
        /// Render certificates with their formulas instead of JSON.
        #[arg(long)]
        explain: bool,
    },
    /// Certificates for a del Pezzo surface X_r.
    Delpezzo {
        #[arg(long)]
        r: u32,
        /// `a0;a1,...,ar` or a multiple of K such as `-2K`.
        #[arg(long, allow_hyphen_values = true)]
        class: String,
        #[arg(long)]
        delta: u32,
        #[arg(long)]
        explain: bool,
    },
}

#[derive(Subcommand)]
enum AuditTarget {
    P2 {
        #[arg(long, allow_hyphen_values = true)]
        class: Option<String>,
    },
    Hirzebruch {
        #[arg(long)]
        e: u32,
        /// `p,m` by default, `n,m` with --basis fe.
        #[arg(long, allow_hyphen_values = true)]
        class: Option<String>,
        #[arg(long)]
        basis: Option<String>,
    },
    Delpezzo {
        #[arg(long)]
        r: u32,
        #[arg(long, allow_hyphen_values = true)]
        class: Option<String>,
    },
}

enum CliError {
    Usage(String),
    Core(CoreError),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Core(e) => {
                if e.is_internal() {
                    3
                } else {
                    2
                }
            }
        }
    }

    fn message(&self) -> String {
        match self {
            CliError::Usage(m) => m.clone(),
            CliError::Core(e) => e.to_string(),
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        CliError::Core(e)
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };

    let plane = PlaneEngine::new();
    let quadric = QuadricEngine::new();

    let mut store = None;
    if let Some(dir) = &cli.cache_dir {
        match CacheStore::load(dir, &plane, &quadric) {
            Ok(s) => store = Some(s),
            Err(msg) => {
                eprintln!("error: {msg}");
                return ExitCode::from(3);
            }
        }
    }

    let result = run(&cli, &plane, &quadric);
    let code = match result {
        Ok(()) => {
            if let Some(store) = store.as_mut() {
                if let Err(e) = store.append_new(&plane, &quadric) {
                    eprintln!("warning: cache write failed: {e}");
                }
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.exit_code())
        }
    };
    if cli.stats {
        let (loaded, appended) = store
            .as_ref()
            .map_or((0, 0), |s| (s.loaded_count, s.appended_count));
        eprintln!(
            "stats: plane_expansions={} quadric_expansions={} cache_loaded={} cache_appended={}",
            plane.expansions(),
            quadric.expansions(),
            loaded,
            appended
        );
    }
    code
}

fn run(cli: &Cli, plane: &PlaneEngine, quadric: &QuadricEngine) -> Result<(), CliError> {
    match &cli.command {
        Command::Severi { target } => cmd_severi(target, cli.json, plane, quadric),
        Command::Table { target } => cmd_table(target, cli.json, plane, quadric),
        Command::Threshold { target } => cmd_threshold(target, cli.json),
        Command::Fit {
            delta_max,
            inputs,
            out,
            force,
        } => cmd_fit(*delta_max, inputs.as_deref(), out.as_deref(), *force, cli.json, plane, quadric),
        Command::Verify {
            surface,
            class,
            delta,
            series,
        } => cmd_verify(surface, class, *delta, series, plane, quadric),
        Command::Audit { target } => cmd_audit(target, cli.json),
    }
}

fn parse_profile(text: Option<&str>) -> Result<Option<TangencyProfile>, CliError> {
    match text {
        None => Ok(None),
        Some(t) => Ok(Some(TangencyProfile::parse(t)?)),
    }
}

/// Default the profiles: missing alpha is empty, missing beta makes the
/// remaining contact budget transverse and moving.
fn resolve_profiles(
    budget: u32,
    alpha: Option<TangencyProfile>,
    beta: Option<TangencyProfile>,
) -> (TangencyProfile, TangencyProfile) {
    let alpha = alpha.unwrap_or_else(TangencyProfile::empty);
    let beta = beta.unwrap_or_else(|| {
        let used = alpha.weight().min(budget as u64) as u32;
        TangencyProfile::transverse(budget - used)
    });
    (alpha, beta)
}

fn cmd_severi(
    target: &SeveriTarget,
    as_json: bool,
    plane: &PlaneEngine,
    quadric: &QuadricEngine,
) -> Result<(), CliError> {
    match target {
        SeveriTarget::P2 { d, delta, alpha, beta } => {
            let (alpha, beta) = resolve_profiles(
                *d,
                parse_profile(alpha.as_deref())?,
                parse_profile(beta.as_deref())?,
            );
            let key = PlaneKey::new(*d, *delta, alpha.clone(), beta.clone())?;
            let value = plane.severi(&key)?;
            if as_json {
                println!(
                    "{}",
                    json!({
                        "surface": "p2",
                        "class": { "d": d },
                        "delta": delta,
                        "alpha": alpha.to_compact_string(),
                        "beta": beta.to_compact_string(),
                        "value": value.to_string(),
                    })
                );
            } else {
                println!("{value}");
            }
        }
        SeveriTarget::F0 { m, n, delta, alpha, beta } => {
            let (alpha, beta) = resolve_profiles(
                *n,
                parse_profile(alpha.as_deref())?,
                parse_profile(beta.as_deref())?,
            );
            let key = QuadricKey::new(*m, *n, *delta, alpha.clone(), beta.clone())?;
            let value = quadric.severi(&key)?;
            if as_json {
                println!(
                    "{}",
                    json!({
                        "surface": "f0",
                        "class": { "m": m, "n": n },
                        "delta": delta,
                        "alpha": alpha.to_compact_string(),
                        "beta": beta.to_compact_string(),
                        "value": value.to_string(),
                    })
                );
            } else {
                println!("{value}");
            }
        }
    }
    Ok(())
}

fn cmd_table(
    target: &TableTarget,
    as_json: bool,
    plane: &PlaneEngine,
    quadric: &QuadricEngine,
) -> Result<(), CliError> {
    match target {
        TableTarget::P2 { d_max, delta_max } => {
            let rows = plane.table(*d_max, *delta_max)?;
            if as_json {
                let rows: Vec<_> = rows
                    .iter()
                    .map(|(d, vals)| {
                        json!({
                            "d": d,
                            "values": vals.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
                        })
                    })
                    .collect();
                println!(
                    "{}",
                    json!({ "surface": "p2", "d_max": d_max, "delta_max": delta_max, "rows": rows })
                );
            } else {
                for (d, vals) in rows {
                    let vals: Vec<String> = vals.iter().map(|v| v.to_string()).collect();
                    println!("d={d}: {}", vals.join(" "));
                }
            }
        }
        TableTarget::F0 { m_max, n_max, delta_max } => {
            let rows = quadric.table(*m_max, *n_max, *delta_max)?;
            if as_json {
                let rows: Vec<_> = rows
                    .iter()
                    .map(|((m, n), vals)| {
                        json!({
                            "m": m,
                            "n": n,
                            "values": vals.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
                        })
                    })
                    .collect();
                println!(
                    "{}",
                    json!({
                        "surface": "f0",
                        "m_max": m_max,
                        "n_max": n_max,
                        "delta_max": delta_max,
                        "rows": rows,
                    })
                );
            } else {
                for ((m, n), vals) in rows {
                    let vals: Vec<String> = vals.iter().map(|v| v.to_string()).collect();
                    println!("m={m} n={n}: {}", vals.join(" "));
                }
            }
        }
    }
    Ok(())
}

fn render_report(report: &ThresholdReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "surface: {}", report.surface);
    let _ = writeln!(out, "class: {}", report.class);
    let _ = writeln!(out, "delta: {}", report.delta);
    let verdict = serde_json::to_value(report.verdict).unwrap();
    let _ = writeln!(out, "verdict: {}", verdict.as_str().unwrap());
    let _ = writeln!(out, "degree formula holds: {}", report.degree_formula_holds);
    for cert in &report.certificates {
        let codim = cert
            .codim
            .map_or("inf".to_string(), |c| c.to_string());
        let _ = writeln!(out, "certificate: {}: codim {}  [{}]", cert.stratum, codim, cert.source);
    }
    let effectivity = serde_json::to_value(report.flags.effectivity).unwrap();
    let _ = writeln!(out, "effectivity: {}", effectivity.as_str().unwrap());
    if let Some(cs) = &report.component_structure {
        let _ = writeln!(
            out,
            "component structure: E-stratum codim {}, other components codim {}",
            cs.e_stratum_codim, cs.other_components_codim
        );
    }
    out
}

fn cmd_threshold(target: &ThresholdTarget, _as_json: bool) -> Result<(), CliError> {
    match target {
        ThresholdTarget::P2 { delta } => {
            let bounds = p2_bounds(*delta);
            println!("{}", serde_json::to_string(&bounds).expect("serializes"));
        }
        ThresholdTarget::Hirzebruch { e, m, p, n, delta, explain } => {
            let p = match (p, n) {
                (Some(p), _) => *p,
                (None, Some(n)) => {
                    let em = (*e as i64) * (*m as i64);
                    let p = *n as i64 - em;
                    if p < 0 {
                        return Err(CliError::Core(CoreError::domain(format!(
                            "n = {n} gives p = n - em = {p} < 0"
                        ))));
                    }
                    p as u32
                }
                (None, None) => {
                    return Err(CliError::Usage(
                        "threshold hirzebruch requires --p or --n".to_string(),
                    ))
                }
            };
            let report = hirzebruch_report(*e, *m, p, *delta);
            if *explain {
                print!("{}", render_report(&report));
            } else {
                println!("{}", serde_json::to_string(&report).expect("serializes"));
            }
        }
        ThresholdTarget::Delpezzo { r, class, delta, explain } => {
            let surface = SurfaceModel::del_pezzo(*r)?;
            let class = surface.parse_class(class, false)?;
            let report = delpezzo_report(&surface, &class, *delta)?;
            if *explain {
                print!("{}", render_report(&report));
            } else {
                println!("{}", serde_json::to_string(&report).expect("serializes"));
            }
        }
    }
    Ok(())
}

fn cmd_fit(
    delta_max: usize,
    inputs: Option<&str>,
    out: Option<&std::path::Path>,
    force: bool,
    as_json: bool,
    plane: &PlaneEngine,
    quadric: &QuadricEngine,
) -> Result<(), CliError> {
    let sources = match inputs {
        Some(text) => {
            let sources: Result<Vec<FitSource>, CoreError> =
                text.split(',').map(FitSource::parse).collect();
            sources?
        }
        None => universal::default_sources(delta_max),
    };
    let series = universal::fit_from_sources(delta_max, &sources, plane, quadric, force)?;
    let series_json = series.to_json();
    if let Some(path) = out {
        let text = serde_json::to_string(&series_json).expect("serializes");
        std::fs::write(path, text + "\n")
            .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display())))?;
    }
    let mut polys = Vec::new();
    for delta in 0..=delta_max {
        polys.push(series.goettsche_polynomial(delta)?);
    }
    if as_json {
        let polys: Vec<_> = polys
            .iter()
            .enumerate()
            .map(|(delta, poly)| {
                json!({
                    "delta": delta,
                    "poly": poly.to_string(),
                    "terms": serde_json::to_value(poly.to_terms()).expect("serializes"),
                })
            })
            .collect();
        println!("{}", json!({ "series": series_json, "polynomials": polys }));
    } else {
        let inputs: Vec<String> = sources.iter().map(|s| s.to_string()).collect();
        println!("order: {delta_max}");
        println!("inputs: {}", inputs.join(" "));
        for (delta, poly) in polys.iter().enumerate() {
            println!("G_{delta} = {poly}");
        }
    }
    Ok(())
}

fn cmd_verify(
    surface: &str,
    class: &str,
    delta: u32,
    series_path: &std::path::Path,
    plane: &PlaneEngine,
    quadric: &QuadricEngine,
) -> Result<(), CliError> {
    let text = std::fs::read_to_string(series_path)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", series_path.display())))?;
    let value: serde_json::Value = serde_json::from_str(&text)
        .map_err(|e| CliError::Usage(format!("bad series file: {e}")))?;
    let series = UniversalSeries::from_json(&value)?;
    let source = match surface {
        "p2" => FitSource::P2 {
            d: class
                .trim()
                .parse()
                .map_err(|_| CliError::Usage(format!("bad plane class {class:?}")))?,
        },
        "f0" => {
            let (m, n) = class
                .split_once(',')
                .ok_or_else(|| CliError::Usage(format!("bad quadric class {class:?}, want m,n")))?;
            FitSource::F0 {
                m: m.trim()
                    .parse()
                    .map_err(|_| CliError::Usage(format!("bad quadric class {class:?}")))?,
                n: n.trim()
                    .parse()
                    .map_err(|_| CliError::Usage(format!("bad quadric class {class:?}")))?,
            }
        }
        other => {
            return Err(CliError::Usage(format!(
                "unknown surface {other:?}: expected p2 or f0"
            )))
        }
    };
    let record = universal::verify_equality(&series, source, delta, plane, quadric)?;
    println!("{}", record.to_json());
    Ok(())
}

fn class_facts(surface: &SurfaceModel, class: &severi_core::surfaces::DivisorClass) -> serde_json::Value {
    let chern = surface.chern_data(class).expect("rank checked");
    let dim = surface.dim_linear_system(class).ok();
    let dim_json = match (surface, dim) {
        (_, Some(d)) => json!(d),
        // empty by the family rule (plane) or by the Riemann-Roch proxy
        (SurfaceModel::P2 | SurfaceModel::DelPezzo { .. }, None) => json!(-1),
        // outside the closed-form regime nothing is claimed
        (SurfaceModel::Hirzebruch { .. }, None) => serde_json::Value::Null,
    };
    json!({
        "coords": class.coords,
        "display": surface.class_to_string(class),
        "l2": chern.l2,
        "lk": chern.lk,
        "chern": serde_json::to_value(chern).expect("serializes"),
        "p_a": surface.arithmetic_genus(class).expect("rank checked"),
        "dim_linear_system": dim_json,
    })
}

fn cmd_audit(target: &AuditTarget, as_json: bool) -> Result<(), CliError> {
    let (surface, class) = match target {
        AuditTarget::P2 { class } => {
            let s = SurfaceModel::p2();
            let c = class
                .as_deref()
                .map(|c| s.parse_class(c, false))
                .transpose()?;
            (s, c)
        }
        AuditTarget::Hirzebruch { e, class, basis } => {
            let s = SurfaceModel::hirzebruch(*e);
            let fe_basis = match basis.as_deref() {
                None => false,
                Some("fe") => true,
                Some("fg") => false,
                Some(other) => {
                    return Err(CliError::Usage(format!(
                        "unknown basis {other:?}: expected fe or fg"
                    )))
                }
            };
            let c = class
                .as_deref()
                .map(|c| s.parse_class(c, fe_basis))
                .transpose()?;
            (s, c)
        }
        AuditTarget::Delpezzo { r, class } => {
            let s = SurfaceModel::del_pezzo(*r)?;
            let c = class
                .as_deref()
                .map(|c| s.parse_class(c, false))
                .transpose()?;
            (s, c)
        }
    };

    let k = surface.canonical_class();
    let k2 = surface.intersect(&k, &k).expect("canonical class fits");
    let minus_one = surface.minus_one_classes().ok();
    let mut facts = json!({
        "surface": surface.name(),
        "picard_rank": surface.picard_rank(),
        "c2": surface.c2(),
        "k": k.coords,
        "k2": k2,
    });
    if let Some(classes) = &minus_one {
        facts["minus_one_count"] = json!(classes.len());
        facts["minus_one_classes"] = json!(classes
            .iter()
            .map(|c| c.coords.clone())
            .collect::<Vec<_>>());
    }
    if let Some(class) = &class {
        facts["class"] = class_facts(&surface, class);
    }

    if as_json {
        println!("{facts}");
    } else {
        println!("surface: {}", surface.name());
        println!("picard rank: {}", surface.picard_rank());
        println!("c2: {}", surface.c2());
        println!("K: {}", surface.class_to_string(&k));
        println!("K^2: {k2}");
        if let Some(classes) = &minus_one {
            println!("-1-classes: {}", classes.len());
            for c in classes {
                println!("  {}", surface.class_to_string(c));
            }
        }
        if let Some(class) = &class {
            let f = class_facts(&surface, class);
            println!("class: {}", f["display"].as_str().unwrap());
            println!("L^2: {}  L.K: {}  p_a: {}", f["l2"], f["lk"], f["p_a"]);
            println!("dim|L|: {}", f["dim_linear_system"]);
        }
    }
    Ok(())
}
