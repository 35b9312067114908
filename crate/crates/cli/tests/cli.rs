//! End-to-end behavior of the `severi` binary: output shapes, exit
//! codes, determinism, and the persistent cache.

use std::path::Path;
use std::process::{Command, Output};

fn severi(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_severi"))
        .args(args)
        .env_remove("SEVERI_CACHE")
        .output()
        .expect("binary runs")
}

fn severi_in(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_severi"))
        .args(args)
        .env_remove("SEVERI_CACHE")
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).to_string()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).to_string()
}

#[test]
fn severi_p2_plain_and_json() {
    let out = severi(&["severi", "p2", "--d", "3", "--delta", "1"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "12\n");

    let out = severi(&["severi", "f0", "--m", "2", "--n", "2", "--delta", "1", "--json"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["value"], "12");
    assert_eq!(v["surface"], "f0");
}

#[test]
fn severi_with_profiles() {
    let out = severi(&[
        "severi", "p2", "--d", "2", "--delta", "1", "--alpha", "2", "--beta", "",
    ]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "2\n");
}

#[test]
fn exit_codes() {
    // domain error: d = 0
    let out = severi(&["severi", "p2", "--d", "0", "--delta", "0"]);
    assert_eq!(out.status.code(), Some(2));
    // usage error: unknown flag
    let out = severi(&["severi", "p2", "--bogus"]);
    assert_eq!(out.status.code(), Some(1));
    // budget violation: alpha + beta do not sum to d
    let out = severi(&[
        "severi", "p2", "--d", "3", "--delta", "0", "--alpha", "1", "--beta", "1",
    ]);
    assert_eq!(out.status.code(), Some(2));
    // rank-deficient fit inputs
    let out = severi(&["fit", "--delta-max", "1", "--inputs", "p2:2,p2:3,p2:4,p2:5"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn table_output_is_sorted_and_deterministic() {
    let args = ["table", "p2", "--d-max", "4", "--delta-max", "2"];
    let one = severi(&args);
    let two = severi(&args);
    assert!(one.status.success());
    assert_eq!(one.stdout, two.stdout);
    let text = stdout(&one);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "d=1: 1 0 0");
    assert_eq!(lines[3], "d=4: 1 27 225");
}

#[test]
fn threshold_reports() {
    let out = severi(&["threshold", "p2", "--delta", "3"]);
    assert_eq!(stdout(&out), "{\"goettsche_d_min\":3,\"kst_d_min\":3}\n");

    let out = severi(&[
        "threshold", "hirzebruch", "--e", "1", "--m", "2", "--p", "1", "--delta", "2",
    ]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["verdict"], "plus_holds");
    assert_eq!(v["component_structure"]["e_stratum_codim"], 2);

    // the (e, n, m) form converts p = n - em
    let out2 = severi(&[
        "threshold", "hirzebruch", "--e", "1", "--m", "2", "--n", "3", "--delta", "2",
    ]);
    assert_eq!(out.stdout, out2.stdout);

    let out = severi(&[
        "threshold", "delpezzo", "--r", "6", "--class", "-2K", "--delta", "2",
    ]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["verdict"], "plus_holds");
    assert_eq!(v["flags"]["effectivity"], "proxy");

    // verdict is data: exit 0 even when the predicate fails
    let out = severi(&[
        "threshold", "delpezzo", "--r", "6", "--class", "-2K", "--delta", "3",
    ]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["verdict"], "fails");

    let out = severi(&[
        "threshold", "hirzebruch", "--e", "1", "--m", "2", "--p", "1", "--delta", "1",
        "--explain",
    ]);
    let text = stdout(&out);
    assert!(text.contains("certificate: E component: codim 2"));
    assert!(text.contains("eps(a,b)"));
}

#[test]
fn fit_verify_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let series = dir.path().join("u.json");
    let out = severi(&[
        "fit", "--delta-max", "1", "--out", series.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("G_1 = 3w1+2w2+w4"));

    let out = severi(&[
        "verify", "--surface", "p2", "--class", "5", "--delta", "1",
        "--series", series.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["match"], true);
    assert_eq!(v["recursion_value"], "48");
    assert_eq!(v["g_value"], "48");

    let out = severi(&[
        "verify", "--surface", "f0", "--class", "2,2", "--delta", "1",
        "--series", series.to_str().unwrap(),
    ]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["match"], true);

    // missing file is a usage error
    let out = severi(&[
        "verify", "--surface", "p2", "--class", "5", "--delta", "1",
        "--series", dir.path().join("nope.json").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn fit_refuses_uncertified_inputs_unless_forced() {
    let out = severi(&["fit", "--delta-max", "3", "--inputs", "p2:2,p2:4,p2:5,f0:2x2"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("refused"));

    let out = severi(&[
        "fit", "--delta-max", "3", "--inputs", "p2:2,p2:4,p2:5,f0:2x2", "--force", "--json",
    ]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["series"]["inputs"][0]["certified"], false);
    assert_eq!(v["series"]["inputs"][1]["certified"], true);
}

#[test]
fn audit_facts() {
    let out = severi(&["audit", "delpezzo", "--r", "6", "--class", "-2K", "--json"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["k2"], 3);
    assert_eq!(v["c2"], 9);
    assert_eq!(v["minus_one_count"], 27);
    assert_eq!(v["class"]["dim_linear_system"], 9);

    let out = severi(&["audit", "p2", "--class", "3"]);
    let text = stdout(&out);
    assert!(text.contains("K: -3H"));
    assert!(text.contains("dim|L|: 9"));
}

#[test]
fn cache_round_trip_and_stats() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache");
    let args = [
        "severi", "p2", "--d", "7", "--delta", "4", "--stats",
        "--cache-dir", cache.to_str().unwrap(),
    ];
    let cold = severi(&args);
    assert!(cold.status.success());
    let cold_stats = stderr(&cold);
    let cold_exp = parse_stat(&cold_stats, "plane_expansions");
    assert!(cold_exp > 0, "cold run expands: {cold_stats}");
    assert!(cache.join("severi_cache.jsonl").exists());

    let warm = severi(&args);
    assert!(warm.status.success());
    assert_eq!(cold.stdout, warm.stdout, "cache must not change results");
    let warm_stats = stderr(&warm);
    let warm_exp = parse_stat(&warm_stats, "plane_expansions");
    assert!(
        warm_exp < cold_exp,
        "warm run must expand strictly less: {warm_stats}"
    );
    assert!(parse_stat(&warm_stats, "cache_loaded") > 0);
    // nothing new to append on the warm run
    assert_eq!(parse_stat(&warm_stats, "cache_appended"), 0);
}

fn parse_stat(text: &str, key: &str) -> u64 {
    let line = text
        .lines()
        .find(|l| l.starts_with("stats:"))
        .unwrap_or_else(|| panic!("no stats line in {text:?}"));
    line.split_whitespace()
        .find_map(|tok| tok.strip_prefix(&format!("{key}=")))
        .unwrap_or_else(|| panic!("no {key} in {line:?}"))
        .parse()
        .unwrap()
}

#[test]
fn corrupted_cache_lines_are_skipped_with_warning() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("severi_cache.jsonl");
    std::fs::write(
        &file,
        "not json at all\n{\"key\":\"p2|9|9|bad|key\",\"value\":\"3\"}\n{\"key\":\"p2|1|0||1\",\"value\":\"-4\"}\n",
    )
    .unwrap();
    let out = severi(&[
        "severi", "p2", "--d", "2", "--delta", "1",
        "--cache-dir", dir.path().to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "3\n");
    let warnings = stderr(&out);
    assert_eq!(warnings.matches("warning:").count(), 3, "{warnings}");
}

#[test]
fn duplicate_key_value_mismatch_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("severi_cache.jsonl");
    std::fs::write(
        &file,
        "{\"key\":\"p2|2|1||2\",\"value\":\"3\"}\n{\"key\":\"p2|2|1||2\",\"value\":\"4\"}\n",
    )
    .unwrap();
    let out = severi(&[
        "severi", "p2", "--d", "2", "--delta", "1",
        "--cache-dir", dir.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stderr(&out).contains("conflicting values"));
}

#[test]
fn byte_identical_reruns() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        vec!["severi", "f0", "--m", "3", "--n", "3", "--delta", "3", "--json"],
        vec!["threshold", "hirzebruch", "--e", "2", "--m", "3", "--p", "1", "--delta", "4"],
        vec!["fit", "--delta-max", "2", "--json"],
        vec!["table", "f0", "--m-max", "2", "--n-max", "2", "--delta-max", "2", "--json"],
        vec!["audit", "hirzebruch", "--e", "1", "--class", "1,2", "--json"],
    ] {
        let one = severi_in(dir.path(), &args);
        let two = severi_in(dir.path(), &args);
        assert!(one.status.success(), "{args:?}: {}", stderr(&one));
        assert_eq!(one.stdout, two.stdout, "{args:?}");
    }
}
