//! Parallel race of optimizer instances on one objective.
//!
//! Every instance runs on its own thread with its own generator and start
//! point. The first instance to evaluate the objective to exactly zero
//! claims the result slot and raises the shared stop token; the others
//! notice it before their next evaluation.

use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{mpsc, OnceLock};
use std::thread;
use std::time::{Duration, Instant};

use serde::Serialize;
use thiserror::Error;

use crate::fp::FpValue;
use crate::objective::{semantic_eval, ObjectiveError, ObjectiveProgram};
use crate::optimize::{Algorithm, ConfigError, Objective, OptimizerConfig, StopToken, Termination, Xoshiro256Plus};
use crate::smtlib::{TermRef, Var};

#[derive(Debug, Error)]
pub enum PortfolioError {
    #[error("invalid configuration: {0}")]
    Config(#[from] ConfigError),
    #[error("portfolio has no optimizer instances")]
    NoInstances,
    #[error(transparent)]
    Objective(#[from] ObjectiveError),
    /// A zero of the objective that does not satisfy the formula.
    #[error("zero-valued point {point:?} does not satisfy the formula (objective {objective})")]
    VerificationFailure { point: Vec<f64>, objective: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct PortfolioConfig {
    /// Instance counts per algorithm, launched in this order.
    pub instances: Vec<(Algorithm, usize)>,
    /// Per-instance budget, bounds, start range, and algorithm settings.
    pub optimizer: OptimizerConfig,
    pub seed: u64,
    pub wall_timeout: Option<Duration>,
}

impl Default for PortfolioConfig {
    fn default() -> Self {
        PortfolioConfig {
            instances: Algorithm::ALL.iter().map(|&a| (a, 1)).collect(),
            optimizer: OptimizerConfig::default(),
            seed: 0,
            wall_timeout: None,
        }
    }
}

impl PortfolioConfig {
    pub fn single(algorithm: Algorithm, seed: u64) -> Self {
        PortfolioConfig {
            instances: vec![(algorithm, 1)],
            seed,
            ..Default::default()
        }
    }

    pub fn instance_count(&self) -> usize {
        self.instances.iter().map(|&(_, c)| c).sum()
    }

    pub fn validate(&self) -> Result<(), PortfolioError> {
        self.optimizer.validate()?;
        if self.instance_count() == 0 {
            return Err(PortfolioError::NoInstances);
        }
        Ok(())
    }

    /// Flattened `(algorithm, per-algorithm index)` list.
    fn roster(&self) -> Vec<(Algorithm, usize)> {
        self.instances
            .iter()
            .flat_map(|&(a, c)| (0..c).map(move |i| (a, i)))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModelEntry {
    pub name: String,
    pub value: FpValue,
}

/// Satisfying assignment at declared widths, in variable order.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Model {
    pub entries: Vec<ModelEntry>,
}

impl Model {
    /// Input vector for the objective and the semantic evaluator.
    pub fn to_vector(&self) -> Vec<f64> {
        self.entries.iter().map(|e| e.value.to_f64()).collect()
    }

    pub fn get(&self, name: &str) -> Option<FpValue> {
        self.entries.iter().find(|e| e.name == name).map(|e| e.value)
    }
}

impl fmt::Display for Model {
    /// One `define-fun` per variable, values as bit-exact `to_fp` literals.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for e in &self.entries {
            writeln!(
                f,
                "(define-fun {} () {} {})",
                crate::smtlib::quote_symbol(&e.name),
                e.value.width(),
                e.value.to_smtlib()
            )?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Sat(Model),
    Unknown,
}

impl Verdict {
    pub fn is_sat(&self) -> bool {
        matches!(self, Verdict::Sat(_))
    }

    pub fn model(&self) -> Option<&Model> {
        match self {
            Verdict::Sat(m) => Some(m),
            Verdict::Unknown => None,
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Sat(_) => "sat",
            Verdict::Unknown => "unknown",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct InstanceId {
    pub algorithm: Algorithm,
    /// Index among instances of the same algorithm.
    pub index: usize,
}

impl fmt::Display for InstanceId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}#{}", self.algorithm, self.index)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InstanceStats {
    pub id: InstanceId,
    pub evals: u64,
    pub best_value: f64,
    pub terminated_by: Termination,
    pub wall_time_s: f64,
    /// Evaluations that completed after another instance had already won.
    pub evals_after_win: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveOutcome {
    pub verdict: Verdict,
    pub winner: Option<InstanceId>,
    pub instances: Vec<InstanceStats>,
    pub wall_time: Duration,
    pub timed_out: bool,
}

impl SolveOutcome {
    /// Sum of per-instance evaluation counts.
    pub fn total_evals(&self) -> u64 {
        self.instances.iter().map(|s| s.evals).sum()
    }
}

/// Uniform start vector in `range`.
pub fn random_start(dim: usize, rng: &mut Xoshiro256Plus, (lo, hi): (f64, f64)) -> Vec<f64> {
    (0..dim).map(|_| rng.uniform(lo, hi)).collect()
}

/// Builds a model from an optimizer point; binary32 slots are narrowed.
pub fn extract_model(x: &[f64], vars: &[Var]) -> Result<Model, ObjectiveError> {
    if x.len() != vars.len() {
        return Err(ObjectiveError::DimensionMismatch {
            expected: vars.len(),
            got: x.len(),
        });
    }
    let entries = vars
        .iter()
        .map(|v| ModelEntry {
            name: v.name.clone(),
            value: FpValue::from_f64_rounded(v.width, x[v.index]),
        })
        .collect();
    Ok(Model { entries })
}

/// Semantic check of `model` against the unnormalized formula.
pub fn verify_model(formula: &TermRef, model: &Model) -> Result<bool, ObjectiveError> {
    semantic_eval(formula, &model.to_vector())
}

struct Race<'a> {
    program: &'a ObjectiveProgram,
    stop: &'a StopToken,
    winner: &'a OnceLock<(usize, Vec<f64>)>,
}

/// Objective view for one instance: counts evaluations and claims the win.
struct Entrant<'a> {
    race: &'a Race<'a>,
    slot: usize,
    evals: AtomicU64,
    after_win: AtomicU64,
}

impl Objective for Entrant<'_> {
    fn dimension(&self) -> usize {
        self.race.program.dimension()
    }

    fn value(&self, x: &[f64]) -> f64 {
        let v = self.race.program.value(x);
        self.evals.fetch_add(1, Ordering::Relaxed);
        let mut won = false;
        if v == 0.0 && self.race.winner.set((self.slot, x.to_vec())).is_ok() {
            self.race.stop.stop();
            won = true;
        }
        if !won && self.race.stop.is_stopped() {
            self.after_win.fetch_add(1, Ordering::Relaxed);
        }
        v
    }
}

/// Races the configured instances on `program`, compiled from `formula`.
pub fn solve(formula: &TermRef, program: &ObjectiveProgram, cfg: &PortfolioConfig) -> Result<SolveOutcome, PortfolioError> {
    solve_with_stop(formula, program, cfg, &StopToken::new())
}

/// [`solve`] with a caller-owned stop token; raising it ends the race as
/// UNKNOWN unless a zero was already found.
pub fn solve_with_stop(
    formula: &TermRef,
    program: &ObjectiveProgram,
    cfg: &PortfolioConfig,
    stop: &StopToken,
) -> Result<SolveOutcome, PortfolioError> {
    cfg.validate()?;
    let started = Instant::now();
    let roster = cfg.roster();

    if program.dimension() == 0 {
        let v = program.evaluate(&[])?;
        let verdict = if v == 0.0 {
            let model = Model::default();
            if !verify_model(formula, &model)? {
                return Err(PortfolioError::VerificationFailure {
                    point: Vec::new(),
                    objective: v,
                });
            }
            Verdict::Sat(model)
        } else {
            Verdict::Unknown
        };
        let (algorithm, index) = roster[0];
        let id = InstanceId { algorithm, index };
        return Ok(SolveOutcome {
            winner: verdict.is_sat().then_some(id),
            verdict,
            instances: vec![InstanceStats {
                id,
                evals: 1,
                best_value: v,
                terminated_by: if v == 0.0 {
                    Termination::ZeroFound
                } else {
                    Termination::Converged
                },
                wall_time_s: started.elapsed().as_secs_f64(),
                evals_after_win: 0,
            }],
            wall_time: started.elapsed(),
            timed_out: false,
        });
    }

    let winner = OnceLock::new();
    let race = Race {
        program,
        stop,
        winner: &winner,
    };
    let entrants: Vec<Entrant> = (0..roster.len())
        .map(|slot| Entrant {
            race: &race,
            slot,
            evals: AtomicU64::new(0),
            after_win: AtomicU64::new(0),
        })
        .collect();
    let mut results: Vec<Option<(Termination, f64, f64)>> = vec![None; roster.len()];
    let mut timed_out = false;

    thread::scope(|scope| {
        let (tx, rx) = mpsc::channel();
        for (slot, (&(algorithm, _), entrant)) in roster.iter().zip(&entrants).enumerate() {
            let tx = tx.clone();
            let opt = &cfg.optimizer;
            scope.spawn(move || {
                let t0 = Instant::now();
                let mut rng = Xoshiro256Plus::for_instance(cfg.seed, slot as u64);
                let x0 = random_start(entrant.dimension(), &mut rng, opt.start_range);
                let out = algorithm.run(entrant, &x0, opt, &mut rng, stop);
                let _ = tx.send((slot, out.terminated_by, out.best_value, t0.elapsed().as_secs_f64()));
            });
        }
        drop(tx);
        let deadline = cfg.wall_timeout.map(|t| started + t);
        let mut pending = roster.len();
        while pending > 0 {
            let msg = match deadline {
                Some(d) => match rx.recv_timeout(d.saturating_duration_since(Instant::now())) {
                    Ok(m) => Some(m),
                    Err(mpsc::RecvTimeoutError::Timeout) => {
                        if !stop.is_stopped() {
                            timed_out = winner.get().is_none();
                            stop.stop();
                        }
                        rx.recv().ok()
                    }
                    Err(mpsc::RecvTimeoutError::Disconnected) => None,
                },
                None => rx.recv().ok(),
            };
            let Some((slot, how, best, secs)) = msg else { break };
            results[slot] = Some((how, best, secs));
            pending -= 1;
        }
    });

    let instances: Vec<InstanceStats> = roster
        .iter()
        .zip(&entrants)
        .zip(results)
        .map(|((&(algorithm, index), e), r)| {
            let (terminated_by, best_value, wall_time_s) = r.expect("every worker reports");
            InstanceStats {
                id: InstanceId { algorithm, index },
                evals: e.evals.load(Ordering::Relaxed),
                best_value,
                terminated_by,
                wall_time_s,
                evals_after_win: e.after_win.load(Ordering::Relaxed),
            }
        })
        .collect();

    let (verdict, winner_id) = match winner.into_inner() {
        Some((slot, point)) => {
            let model = extract_model(&point, program.vars())?;
            let objective = program.evaluate(&model.to_vector())?;
            if objective != 0.0 || !verify_model(formula, &model)? {
                return Err(PortfolioError::VerificationFailure { point, objective });
            }
            (Verdict::Sat(model), Some(instances[slot].id))
        }
        None => (Verdict::Unknown, None),
    };
    log::debug!("portfolio finished: {verdict} winner={winner_id:?}");
    Ok(SolveOutcome {
        verdict,
        winner: winner_id,
        instances,
        wall_time: started.elapsed(),
        timed_out,
    })
}
