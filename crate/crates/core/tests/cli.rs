use std::fs;

use pipoly::cli::{run, EXIT_ERROR, EXIT_MISMATCH, EXIT_OK};
use pipoly::prime_engine::PrimeCountCache;

fn pipoly(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run(
        std::iter::once("pipoly").chain(args.iter().copied()),
        &mut out,
        &mut err,
    );
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

/// `Σ_{p^m ≤ x} log p` and the number of prime powers, by trial division.
fn psi_by_trial_division(x: u64) -> (f64, usize) {
    let logs: Vec<f64> = (2..=x)
        .filter_map(|n| {
            let p = (2..=n).find(|d| n % d == 0).unwrap();
            let mut m = n;
            while m % p == 0 {
                m /= p;
            }
            (m == 1).then(|| (p as f64).ln())
        })
        .collect();
    (logs.iter().sum(), logs.len())
}

#[test]
fn pi_at_powers_of_ten() {
    for (x, pi) in [("1e3", "168"), ("1e6", "78498"), ("1e9", "50847534")] {
        let (code, out, _) = pipoly(&["pi", "--x", x]);
        assert_eq!(code, EXIT_OK);
        assert_eq!(out.trim(), pi);
    }
}

#[test]
fn psi_csv_matches_trial_division() {
    let (code, out, _) = pipoly(&["psi", "--x", "1000"]);
    assert_eq!(code, EXIT_OK);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("x,psi,theta,term_count"));
    let fields: Vec<&str> = lines.next().unwrap().split(',').collect();
    let (psi, count) = psi_by_trial_division(1000);
    assert_eq!(fields[0], "1000");
    assert!((fields[1].parse::<f64>().unwrap() - psi).abs() < 1e-9);
    assert_eq!(fields[3].parse::<usize>().unwrap(), count);
}

#[test]
fn family_and_expression_agree() {
    let (_, native, _) = pipoly(&["eval", "--family", "G", "--x", "1e6"]);
    let (_, dsl, _) = pipoly(&[
        "eval",
        "--expr",
        "pi(x)^2 - e*x/log(x)*pi(x/e)",
        "--x",
        "1e6",
    ]);
    assert_eq!(native, dsl);
    assert!(native.starts_with('-'));
}

#[test]
fn spec_file_input() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("l.spec");
    fs::write(
        &path,
        "sum(k, 1, n, pi(x/k))^2 - e*x/log(x)*sum(k, 1, n, pi(x/(e*k)))\n",
    )
    .unwrap();
    let (code, from_file, _) = pipoly(&[
        "eval",
        "--spec-file",
        path.to_str().unwrap(),
        "--n",
        "5",
        "--x",
        "1e4",
    ]);
    assert_eq!(code, EXIT_OK);
    let (_, native, _) = pipoly(&["eval", "--family", "L", "--n", "5", "--x", "1e4"]);
    assert_eq!(from_file, native);
}

#[test]
fn hassani_reports_both_inequalities() {
    let (code, out, _) = pipoly(&["eval", "--family", "hassani", "--x", "1e6", "--terms"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("lower < middle: true"));
    assert!(out.contains("middle < upper: true"));
}

#[test]
fn scan_csv_shape() {
    let (code, out, err) = pipoly(&[
        "scan", "--family", "K", "--from", "1e4", "--to", "1e7", "--points", "4",
    ]);
    assert_eq!(code, EXIT_OK);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "x,value,sign");
    assert_eq!(lines[1..5].iter().filter(|l| l.ends_with(",1")).count(), 4);
    assert!(out.contains("# monotone=increasing"));
    assert!(!out.contains(" ms"), "timing belongs on stderr");
    assert!(err.contains("ms"));
}

#[test]
fn table_markdown_golden() {
    let (code, out, _) = pipoly(&["table", "--id", "1", "--format", "markdown", "--cap", "1e8"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out, include_str!("golden/table1_1e8.md"));
}

#[test]
fn table_mismatch_exit_code() {
    let (code, _, err) = pipoly(&["--tolerance", "1e-20", "table", "--id", "2", "--cap", "1e5"]);
    assert_eq!(code, EXIT_MISMATCH);
    assert!(err.contains("mismatch"));
}

#[test]
fn figure_samples() {
    let (code, out, _) = pipoly(&["figure", "--id", "4", "--points", "5"]);
    assert_eq!(code, EXIT_OK);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "x,value");
    assert_eq!(lines.len(), 6);
    assert!(lines[1].starts_with("20000,-"));
    assert!(lines[5].starts_with("100000,-"));
}

#[test]
fn check_suites_pass() {
    for suite in ["psi", "residual", "cosign"] {
        let (code, out, _) = pipoly(&["--psi-cap", "1e8", "check", "--suite", suite]);
        assert_eq!(code, EXIT_OK, "{suite}: {out}");
        assert!(out.lines().last().unwrap().starts_with("PASS"));
    }
}

#[test]
fn usage_errors() {
    let (code, _, err) = pipoly(&["eval", "--expr", "pi(x^", "--x", "1e4"]);
    assert_eq!(code, EXIT_ERROR);
    assert!(err.contains("column 6"), "{err}");
    let (code, _, _) = pipoly(&["eval", "--family", "Q", "--x", "1e4"]);
    assert_eq!(code, EXIT_ERROR);
    let (code, _, _) = pipoly(&["eval", "--family", "H", "--expr", "x", "--x", "1e4"]);
    assert_eq!(code, EXIT_ERROR);
    let (code, _, err) = pipoly(&["--pi-cap", "1e6", "pi", "--x", "1e7"]);
    assert_eq!(code, EXIT_ERROR);
    assert!(!err.is_empty());
}

#[test]
fn cache_persists_between_runs() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("pi.cache");
    let p = path.to_str().unwrap();
    let (code, first, _) = pipoly(&["--cache", p, "pi", "--x", "123456789"]);
    assert_eq!(code, EXIT_OK);
    let cache = PrimeCountCache::open(&path).unwrap();
    assert_eq!(cache.get(123_456_789), first.trim().parse().ok());
    let (_, second, _) = pipoly(&["--cache", p, "pi", "--x", "123456789"]);
    assert_eq!(first, second);
}

#[test]
fn config_file_sets_defaults() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("pipoly.conf");
    fs::write(&path, "# tight caps\npi_cap = 1e5\n").unwrap();
    let (code, _, _) = pipoly(&["--config", path.to_str().unwrap(), "pi", "--x", "1e6"]);
    assert_eq!(code, EXIT_ERROR);
    let (code, out, _) = pipoly(&["--config", path.to_str().unwrap(), "pi", "--x", "1e5"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out.trim(), "9592");
}
