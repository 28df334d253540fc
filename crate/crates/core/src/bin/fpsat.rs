use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use fpsat::harness::bench::{
    first_finder_shares, portfolio_label, render_shares, render_summary, run_bench, summarize, write_csv, BenchConfig,
};
use fpsat::harness::combined::{run_combined, CombinedConfig, CombinedVerdict};
use fpsat::harness::{HarnessError, Problem};
use fpsat::objective::render_objective_source;
use fpsat::optimize::Algorithm;
use fpsat::portfolio::{PortfolioConfig, Verdict};

#[derive(Parser)]
#[command(name = "fpsat", version, about = "Floating-point satisfiability by parallel global optimization")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Solve one SMT-LIB file; prints sat or unknown.
    Solve {
        file: PathBuf,
        #[command(flatten)]
        portfolio: PortfolioArgs,
        /// Wall-clock limit in seconds.
        #[arg(long)]
        timeout: Option<f64>,
        /// Print the model after `sat`.
        #[arg(long)]
        model: bool,
        /// Print run statistics as JSON on stderr.
        #[arg(long)]
        stats_json: bool,
        /// Print the normalized clause set and exit.
        #[arg(long)]
        dump_cnf: bool,
        /// Print the objective as C source and exit.
        #[arg(long)]
        emit_source: bool,
    },
    /// Solve every .smt2 file in a directory and print result tables.
    Bench {
        dir: PathBuf,
        #[command(flatten)]
        portfolio: PortfolioArgs,
        /// Per-file wall-clock limit in seconds.
        #[arg(long, default_value_t = 600.0)]
        timeout: f64,
        /// Number of runs over the directory, each with a different seed.
        #[arg(long, default_value_t = 1)]
        repeat: usize,
        /// Write per-file records here.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Race the portfolio against an external solver command.
    Combined {
        file: PathBuf,
        /// Solver command; the file path is appended.
        #[arg(long)]
        external: String,
        #[command(flatten)]
        portfolio: PortfolioArgs,
        #[arg(long, default_value_t = 600.0)]
        timeout: f64,
        #[arg(long)]
        model: bool,
    },
}

#[derive(Args)]
struct PortfolioArgs {
    /// Basin-hopping instances.
    #[arg(long, default_value_t = 1)]
    bh: usize,
    /// CRS2 instances.
    #[arg(long, default_value_t = 1)]
    crs2: usize,
    /// ISRES instances.
    #[arg(long, default_value_t = 1)]
    isres: usize,
    /// Evaluation budget per instance.
    #[arg(long, default_value_t = 1_000_000)]
    max_evals: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, num_args = 2, value_names = ["LO", "HI"], allow_negative_numbers = true)]
    start_range: Option<Vec<f64>>,
    /// Search box for CRS2 and ISRES.
    #[arg(long, num_args = 2, value_names = ["LO", "HI"], allow_negative_numbers = true)]
    bounds: Option<Vec<f64>>,
}

impl PortfolioArgs {
    fn config(&self) -> PortfolioConfig {
        let mut cfg = PortfolioConfig {
            instances: vec![
                (Algorithm::BasinHopping, self.bh),
                (Algorithm::Crs2, self.crs2),
                (Algorithm::Isres, self.isres),
            ],
            seed: self.seed,
            ..Default::default()
        };
        cfg.optimizer.max_evals = self.max_evals;
        if let Some(r) = &self.start_range {
            cfg.optimizer.start_range = (r[0], r[1]);
        }
        if let Some(b) = &self.bounds {
            cfg.optimizer.bounds = (b[0], b[1]);
        }
        cfg
    }
}

fn secs(s: f64) -> Result<Duration, HarnessError> {
    Duration::try_from_secs_f64(s).map_err(|_| {
        HarnessError::Io {
            path: PathBuf::from("--timeout"),
            source: std::io::Error::new(std::io::ErrorKind::InvalidInput, format!("invalid timeout {s}")),
        }
    })
}

fn run(cli: Cli) -> Result<ExitCode, HarnessError> {
    match cli.command {
        Cmd::Solve {
            file,
            portfolio,
            timeout,
            model,
            stats_json,
            dump_cnf,
            emit_source,
        } => {
            let problem = Problem::load(&file)?;
            if dump_cnf {
                println!("{}", problem.clauses.to_sexpr());
                return Ok(ExitCode::SUCCESS);
            }
            if emit_source {
                print!("{}", render_objective_source(&problem.program));
                return Ok(ExitCode::SUCCESS);
            }
            let mut cfg = portfolio.config();
            cfg.wall_timeout = timeout.map(secs).transpose()?;
            let out = problem.solve(&cfg)?;
            println!("{}", out.verdict);
            if let (true, Verdict::Sat(m)) = (model, &out.verdict) {
                print!("{m}");
            }
            if stats_json {
                let stats = json!({
                    "verdict": out.verdict.to_string(),
                    "winner": out.winner.map(|w| w.to_string()),
                    "wall_time_s": out.wall_time.as_secs_f64(),
                    "timed_out": out.timed_out,
                    "total_evals": out.total_evals(),
                    "instances": out.instances,
                });
                eprintln!("{stats}");
            }
            Ok(if out.verdict.is_sat() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        Cmd::Bench {
            dir,
            portfolio,
            timeout,
            repeat,
            csv,
        } => {
            let cfg = BenchConfig {
                portfolio: portfolio.config(),
                timeout: secs(timeout)?,
                repeat,
            };
            let records = run_bench(&dir, &cfg)?;
            if let Some(path) = csv {
                let f = std::fs::File::create(&path).map_err(|source| HarnessError::Io {
                    path: path.clone(),
                    source,
                })?;
                write_csv(&records, f).map_err(|e| HarnessError::Io {
                    path,
                    source: e.into(),
                })?;
            }
            for r in &records {
                if let Some(msg) = &r.message {
                    eprintln!("{}: {msg}", r.file.display());
                }
            }
            let label = portfolio_label(&cfg.portfolio);
            println!("{}", render_summary(&label, &summarize(&records)));
            println!("{}", render_shares(&label, &first_finder_shares(&records)));
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Combined {
            file,
            external,
            portfolio,
            timeout,
            model,
        } => {
            let cfg = CombinedConfig {
                portfolio: portfolio.config(),
                external,
                timeout: secs(timeout)?,
            };
            let out = run_combined(&file, &cfg)?;
            println!("{}", out.verdict);
            if let (true, Some(m)) = (model, &out.model) {
                print!("{m}");
            }
            let source = serde_json::to_value(out.source).unwrap_or_default();
            eprintln!("; source: {} ({:.3}s)", source.as_str().unwrap_or("?"), out.wall_time.as_secs_f64());
            for n in &out.notes {
                eprintln!("; {n}");
            }
            Ok(match out.verdict {
                CombinedVerdict::Sat | CombinedVerdict::Unsat => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            })
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
