//! Sequential benchmark runs over a directory of `.smt2` files.
//!
//! CSV columns are fixed: `file, verdict, wall_time_s, winner, evals`.
//! With repeated runs every (run, file) pair is one row, runs in order.

use std::fmt::{self, Write as _};
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use serde::Serialize;

use super::{HarnessError, Problem};
use crate::optimize::{splitmix64_next, Algorithm};
use crate::portfolio::{InstanceId, PortfolioConfig, Verdict};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum BenchVerdict {
    Sat,
    Unknown,
    Error,
    Timeout,
}

impl fmt::Display for BenchVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BenchVerdict::Sat => "SAT",
            BenchVerdict::Unknown => "UNKNOWN",
            BenchVerdict::Error => "ERROR",
            BenchVerdict::Timeout => "TIMEOUT",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRecord {
    pub file: PathBuf,
    pub verdict: BenchVerdict,
    pub wall_time_s: f64,
    pub winner: Option<InstanceId>,
    pub evals: u64,
    /// Diagnostic for ERROR records.
    pub message: Option<String>,
}

#[derive(Serialize)]
struct CsvRow<'a> {
    file: String,
    verdict: BenchVerdict,
    wall_time_s: f64,
    winner: &'a str,
    evals: u64,
}

#[derive(Debug, Clone)]
pub struct BenchConfig {
    pub portfolio: PortfolioConfig,
    /// Per-file wall timeout.
    pub timeout: Duration,
    pub repeat: usize,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            portfolio: PortfolioConfig::default(),
            timeout: Duration::from_secs(600),
            repeat: 1,
        }
    }
}

/// Sorted `.smt2` files directly inside `dir`.
pub fn list_instances(dir: &Path) -> Result<Vec<PathBuf>, HarnessError> {
    let io_err = |source| HarnessError::Io {
        path: dir.to_path_buf(),
        source,
    };
    let mut files = Vec::new();
    for entry in std::fs::read_dir(dir).map_err(io_err)? {
        let path = entry.map_err(io_err)?.path();
        if path.is_file() && path.extension().is_some_and(|e| e == "smt2") {
            files.push(path);
        }
    }
    files.sort();
    Ok(files)
}

/// Solves one file under the bench timeout. Never fails: problems become ERROR records.
pub fn bench_file(path: &Path, portfolio: &PortfolioConfig, timeout: Duration) -> BenchRecord {
    let started = Instant::now();
    let mut cfg = portfolio.clone();
    cfg.wall_timeout = Some(cfg.wall_timeout.map_or(timeout, |t| t.min(timeout)));
    let result = Problem::load(path).and_then(|p| p.solve(&cfg));
    let wall_time_s = started.elapsed().as_secs_f64();
    match result {
        Ok(out) => BenchRecord {
            file: path.to_path_buf(),
            verdict: match out.verdict {
                Verdict::Sat(_) => BenchVerdict::Sat,
                Verdict::Unknown if out.timed_out => BenchVerdict::Timeout,
                Verdict::Unknown => BenchVerdict::Unknown,
            },
            wall_time_s,
            winner: out.winner,
            evals: out.total_evals(),
            message: None,
        },
        Err(e) => BenchRecord {
            file: path.to_path_buf(),
            verdict: BenchVerdict::Error,
            wall_time_s,
            winner: None,
            evals: 0,
            message: Some(e.to_string()),
        },
    }
}

/// Seed for repetition `run`; run 0 keeps the configured seed.
pub fn run_seed(seed: u64, run: usize) -> u64 {
    if run == 0 {
        seed
    } else {
        splitmix64_next(seed.wrapping_add(run as u64)).0
    }
}

/// Runs every instance in `dir`, `cfg.repeat` times.
pub fn run_bench(dir: &Path, cfg: &BenchConfig) -> Result<Vec<BenchRecord>, HarnessError> {
    let files = list_instances(dir)?;
    if files.is_empty() {
        log::warn!("no .smt2 files in {}", dir.display());
    }
    let mut records = Vec::with_capacity(files.len() * cfg.repeat.max(1));
    for run in 0..cfg.repeat.max(1) {
        let mut pcfg = cfg.portfolio.clone();
        pcfg.seed = run_seed(cfg.portfolio.seed, run);
        for f in &files {
            let rec = bench_file(f, &pcfg, cfg.timeout);
            log::info!("run {run} {}: {} in {:.3}s", f.display(), rec.verdict, rec.wall_time_s);
            records.push(rec);
        }
    }
    Ok(records)
}

pub fn write_csv<W: std::io::Write>(records: &[BenchRecord], out: W) -> Result<(), csv::Error> {
    let mut w = csv::Writer::from_writer(out);
    for r in records {
        let winner = r.winner.map(|w| w.to_string()).unwrap_or_default();
        w.serialize(CsvRow {
            file: r.file.display().to_string(),
            verdict: r.verdict,
            wall_time_s: r.wall_time_s,
            winner: &winner,
            evals: r.evals,
        })?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchSummary {
    pub sat: usize,
    pub unknown: usize,
    pub timeout: usize,
    pub error: usize,
    /// Total SAT wall time divided by the SAT count.
    pub avg_sat_time_s: Option<f64>,
    /// Total wall time of all non-error records divided by their count.
    pub avg_time_s: Option<f64>,
}

pub fn summarize(records: &[BenchRecord]) -> BenchSummary {
    let count = |v| records.iter().filter(|r| r.verdict == v).count();
    let mean = |it: Vec<f64>| (!it.is_empty()).then(|| it.iter().sum::<f64>() / it.len() as f64);
    BenchSummary {
        sat: count(BenchVerdict::Sat),
        unknown: count(BenchVerdict::Unknown),
        timeout: count(BenchVerdict::Timeout),
        error: count(BenchVerdict::Error),
        avg_sat_time_s: mean(
            records
                .iter()
                .filter(|r| r.verdict == BenchVerdict::Sat)
                .map(|r| r.wall_time_s)
                .collect(),
        ),
        avg_time_s: mean(
            records
                .iter()
                .filter(|r| r.verdict != BenchVerdict::Error)
                .map(|r| r.wall_time_s)
                .collect(),
        ),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FinderShare {
    pub algorithm: Algorithm,
    pub wins: usize,
    pub percent: f64,
}

/// Share of SAT records won by each algorithm.
pub fn first_finder_shares(records: &[BenchRecord]) -> Vec<FinderShare> {
    let sat: Vec<_> = records.iter().filter_map(|r| r.winner).collect();
    Algorithm::ALL
        .iter()
        .map(|&a| {
            let wins = sat.iter().filter(|w| w.algorithm == a).count();
            FinderShare {
                algorithm: a,
                wins,
                percent: if sat.is_empty() {
                    0.0
                } else {
                    100.0 * wins as f64 / sat.len() as f64
                },
            }
        })
        .collect()
}

fn fmt_secs(v: Option<f64>) -> String {
    v.map_or_else(|| "-".to_string(), |s| format!("{s:.3}"))
}

/// Per-configuration result table: counts and average runtimes.
pub fn render_summary(label: &str, s: &BenchSummary) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:<24} {:>5} {:>8} {:>8} {:>6} {:>12} {:>12}",
        "solver", "SAT", "UNKNOWN", "TIMEOUT", "ERROR", "avg SAT (s)", "avg all (s)"
    );
    let _ = writeln!(
        out,
        "{:<24} {:>5} {:>8} {:>8} {:>6} {:>12} {:>12}",
        label,
        s.sat,
        s.unknown,
        s.timeout,
        s.error,
        fmt_secs(s.avg_sat_time_s),
        fmt_secs(s.avg_time_s)
    );
    out
}

/// First-finder table: which algorithm produced each SAT verdict.
pub fn render_shares(label: &str, shares: &[FinderShare]) -> String {
    let mut out = String::new();
    let _ = write!(out, "{:<24}", "fastest optimizer");
    for s in shares {
        let _ = write!(out, " {:>8}", s.algorithm.short_name());
    }
    out.push('\n');
    let _ = write!(out, "{label:<24}");
    for s in shares {
        let _ = write!(out, " {:>7.1}%", s.percent);
    }
    out.push('\n');
    out
}

/// Short description of a portfolio, e.g. `BH×1+CRS2×1+ISRES×1`.
pub fn portfolio_label(cfg: &PortfolioConfig) -> String {
    cfg.instances
        .iter()
        .filter(|(_, c)| *c > 0)
        .map(|(a, c)| format!("{a}x{c}"))
        .collect::<Vec<_>>()
        .join("+")
}
