//! The acceptance gate: each criterion of the build contract runs at
//! its stated scope, prints one pass/fail line, and must finish inside
//! its wall-clock budget. Failure probabilities of the randomized
//! equalities are below 1e-15 per trial at the default prime.

use mshuffle_core::suites::{run_suite, CheckStatus, Report, RunConfig};
use std::time::Instant;

fn run(suite: &str) -> (Report, f64) {
    let cfg = RunConfig { suite: suite.into(), ..RunConfig::sweep() };
    let started = Instant::now();
    let report = run_suite(&cfg).expect("suite runs");
    (report, started.elapsed().as_secs_f64())
}

fn assert_criterion(
    label: &str,
    suite: &str,
    id_filter: Option<&[&str]>,
    budget_s: f64,
) {
    let (report, elapsed) = run(suite);
    let relevant: Vec<_> = report
        .checks
        .iter()
        .filter(|c| {
            id_filter
                .map(|prefixes| prefixes.iter().any(|p| c.id.contains(p)))
                .unwrap_or(true)
        })
        .collect();
    assert!(!relevant.is_empty(), "criterion {label}: no checks matched");
    let failures: Vec<_> = relevant
        .iter()
        .filter(|c| !matches!(c.status, CheckStatus::Pass | CheckStatus::PassConjectural))
        .collect();
    let pass = failures.is_empty();
    let conjectural = relevant
        .iter()
        .any(|c| matches!(c.status, CheckStatus::PassConjectural));
    let verdict = if pass {
        if conjectural {
            "pass (super cases conjecture-supported)"
        } else {
            "pass"
        }
    } else {
        "FAIL"
    };
    println!(
        "criterion {label:<38} {verdict} ({elapsed:.2} s < {budget_s:.0} s, {} checks)",
        relevant.len()
    );
    assert!(pass, "criterion {label} failed: {failures:#?}");
    assert!(
        elapsed < budget_s,
        "criterion {label} blew its budget: {elapsed:.2} s >= {budget_s} s"
    );
}

#[test]
fn criterion_01_r_matrix_identities() {
    assert_criterion("01 r-matrix identities", "rmatrix", None, 5.0);
}

#[test]
fn criterion_02_shuffle_form_equivalence() {
    assert_criterion(
        "02 shuffle form equivalence",
        "shuffle",
        Some(&["forms-agree", "associativity", "unit-laws"]),
        30.0,
    );
}

#[test]
fn criterion_03_wheel_suite() {
    assert_criterion("03 wheel factorizations", "wheel", None, 60.0);
}

#[test]
fn criterion_04_trace_map_suite() {
    assert_criterion("04 trace-map identities", "psi", None, 120.0);
}

#[test]
fn criterion_05_trace_identity() {
    assert_criterion("05 split-trace identity", "appendix-a", None, 60.0);
}

#[test]
fn criterion_06_alpha_closed_form() {
    assert_criterion("06 evaluation closed form", "appendix-b", None, 120.0);
}

#[test]
fn criterion_07_commuting_family() {
    assert_criterion(
        "07 commuting family",
        "commuting",
        Some(&[
            "family-commutes",
            "recursion-split",
            "alpha-normalization",
            "diagonal-series-exponential",
            "diagonal-products",
        ]),
        300.0,
    );
}

#[test]
fn criterion_08_trace_vs_exponential() {
    assert_criterion("08 trace vs shuffle exponential", "theorem-1-1", None, 600.0);
}

#[test]
fn criterion_09_trace_map_series() {
    assert_criterion(
        "09 trace-map series and projections",
        "commuting",
        Some(&[
            "trace-series-power-sum-form",
            "trace-series-s-form",
            "projected-line-series",
            "projected-line-reproduces-trace",
            "pair-insertion-identity",
            "s-trace-formula",
            "factor-chain",
            "q-binomial-steps",
            "twist-expansion",
        ]),
        600.0,
    );
}

#[test]
fn criterion_10_lattice_cross_check() {
    assert_criterion("10 lattice cross-check", "lattice", None, 300.0);
}

/// The long-running variant: the enumeration-to-trace comparison at
/// lattice size 3 (run with `cargo test -- --ignored`).
#[test]
#[ignore]
fn criterion_10_extended_lattice() {
    let cfg = RunConfig { suite: "lattice".into(), extended: true, ..RunConfig::sweep() };
    let started = Instant::now();
    let report = run_suite(&cfg).expect("suite runs");
    let elapsed = started.elapsed().as_secs_f64();
    let pass = report.all_passed();
    println!("criterion 10-extended lattice (size 3)    {} ({elapsed:.2} s)", if pass { "pass" } else { "FAIL" });
    assert!(pass, "{:#?}", report.checks);
}
