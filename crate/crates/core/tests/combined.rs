mod common;

use std::os::unix::fs::PermissionsExt;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use fpsat::harness::combined::{run_combined, CombinedConfig, CombinedVerdict, Source};
use fpsat::portfolio::PortfolioConfig;

use common::corpus_dir;

fn stub(dir: &Path, name: &str, body: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, format!("#!/bin/sh\n{body}\n")).unwrap();
    std::fs::set_permissions(&p, std::fs::Permissions::from_mode(0o755)).unwrap();
    p.display().to_string()
}

fn config(external: String, max_evals: u64, timeout_s: u64) -> CombinedConfig {
    let mut portfolio = PortfolioConfig::default();
    portfolio.optimizer.max_evals = max_evals;
    CombinedConfig {
        portfolio,
        external,
        timeout: Duration::from_secs(timeout_s),
    }
}

fn instance(name: &str) -> PathBuf {
    corpus_dir().join(name)
}

#[test]
fn portfolio_sat_preempts_slow_external() {
    let dir = tempfile::tempdir().unwrap();
    let ext = stub(dir.path(), "slow_sat", "sleep 10\necho sat");
    let t0 = Instant::now();
    let out = run_combined(&instance("sat_quadratic_chain.smt2"), &config(ext, 1_000_000, 60)).unwrap();
    assert_eq!((out.verdict, out.source), (CombinedVerdict::Sat, Source::Portfolio));
    assert!(out.model.is_some());
    assert!(t0.elapsed() < Duration::from_secs(5), "external was not terminated");
}

#[test]
fn external_unsat_is_accepted() {
    let dir = tempfile::tempdir().unwrap();
    let ext = stub(dir.path(), "fast_unsat", "echo unsat");
    let out = run_combined(&instance("unsat_disjoint_bounds.smt2"), &config(ext, u64::MAX, 60)).unwrap();
    assert_eq!((out.verdict, out.source), (CombinedVerdict::Unsat, Source::External));
    assert!(out.wall_time < Duration::from_secs(5));
}

#[test]
fn crash_falls_back_to_portfolio() {
    let dir = tempfile::tempdir().unwrap();
    let ext = stub(dir.path(), "crash", "kill -SEGV $$");
    let out = run_combined(&instance("unsat_abs_negative.smt2"), &config(ext.clone(), 20_000, 60)).unwrap();
    assert_eq!((out.verdict, out.source), (CombinedVerdict::Unknown, Source::Portfolio));
    assert!(out.external_crashed);
    assert!(out.notes.iter().any(|n| n.contains("crashed")), "{:?}", out.notes);

    let out = run_combined(&instance("sat_ite_abs.smt2"), &config(ext, 1_000_000, 60)).unwrap();
    assert_eq!((out.verdict, out.source), (CombinedVerdict::Sat, Source::Portfolio));
}

#[test]
fn both_sides_timing_out() {
    let dir = tempfile::tempdir().unwrap();
    let ext = stub(dir.path(), "hang", "sleep 30\necho sat");
    let t0 = Instant::now();
    let out = run_combined(&instance("unsat_square_negative.smt2"), &config(ext, u64::MAX, 1)).unwrap();
    assert_eq!(out.verdict, CombinedVerdict::Timeout);
    assert!(t0.elapsed() < Duration::from_secs(5));
}

#[test]
fn external_unknown_waits_for_portfolio() {
    let dir = tempfile::tempdir().unwrap();
    let ext = stub(dir.path(), "shrug", "echo unknown");
    let out = run_combined(&instance("sat_division.smt2"), &config(ext.clone(), 1_000_000, 60)).unwrap();
    assert_eq!((out.verdict, out.source), (CombinedVerdict::Sat, Source::Portfolio));
    let out = run_combined(&instance("unsat_lt_irreflexive.smt2"), &config(ext, 10_000, 60)).unwrap();
    assert_eq!(out.verdict, CombinedVerdict::Unknown);
    assert!(!out.external_crashed);
}
