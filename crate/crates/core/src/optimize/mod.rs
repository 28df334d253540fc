//! Derivative-free stochastic minimizers under a shared evaluation budget.
//!
//! Every optimizer evaluates the objective only through a [`Tracker`], which
//! enforces the budget (never more than `max_evals` evaluations), polls the
//! stop token before each evaluation, and ends the run as soon as an
//! evaluation returns exactly zero.

mod basin;
mod crs2;
mod isres;
mod powell;
pub mod rng;

use std::fmt;
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

pub use basin::basin_hopping;
pub use crs2::crs2_minimize;
pub use isres::isres_minimize;
pub use powell::powell_minimize;
pub use rng::{splitmix64_next, Xoshiro256Plus};

use crate::objective::ObjectiveProgram;

/// Something the optimizers can minimize.
pub trait Objective: Sync {
    fn dimension(&self) -> usize;
    fn value(&self, x: &[f64]) -> f64;
}

impl Objective for ObjectiveProgram {
    fn dimension(&self) -> usize {
        ObjectiveProgram::dimension(self)
    }

    fn value(&self, x: &[f64]) -> f64 {
        self.evaluate(x).expect("optimizer passes full-length vectors")
    }
}

/// Adapts a closure into an [`Objective`].
pub struct FnObjective<F> {
    dim: usize,
    f: F,
}

impl<F: Fn(&[f64]) -> f64 + Sync> FnObjective<F> {
    pub fn new(dim: usize, f: F) -> Self {
        FnObjective { dim, f }
    }
}

impl<F: Fn(&[f64]) -> f64 + Sync> Objective for FnObjective<F> {
    fn dimension(&self) -> usize {
        self.dim
    }

    fn value(&self, x: &[f64]) -> f64 {
        (self.f)(x)
    }
}

/// Shared cancellation flag.
#[derive(Debug, Clone, Default)]
pub struct StopToken(Arc<AtomicBool>);

impl StopToken {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn stop(&self) {
        self.0.store(true, Ordering::Release);
    }

    pub fn is_stopped(&self) -> bool {
        self.0.load(Ordering::Acquire)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Termination {
    ZeroFound,
    BudgetExhausted,
    Cancelled,
    /// Local search stopped making progress (Powell only).
    Converged,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptOutcome {
    pub best_x: Vec<f64>,
    /// Lowest value seen; `+inf` if nothing was evaluated.
    pub best_value: f64,
    pub evals_used: u64,
    pub terminated_by: Termination,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BasinHoppingConfig {
    pub step_size: f64,
    pub temperature: f64,
    pub powell_tolerance: f64,
    /// Powell iteration cap; `None` means 100 times the dimension.
    pub powell_max_iters: Option<usize>,
    /// Iterations between step-size adjustments.
    pub adapt_interval: usize,
}

impl Default for BasinHoppingConfig {
    fn default() -> Self {
        BasinHoppingConfig {
            step_size: 0.5,
            temperature: 1.0,
            powell_tolerance: 1e-8,
            powell_max_iters: None,
            adapt_interval: 50,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Crs2Config {
    /// Population is `population_factor * (n + 1)` unless overridden.
    pub population_factor: usize,
    pub population: Option<usize>,
}

impl Default for Crs2Config {
    fn default() -> Self {
        Crs2Config {
            population_factor: 10,
            population: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IsresConfig {
    /// Offspring count λ is `population_factor * (n + 1)`.
    pub population_factor: usize,
    /// Parent count μ; `None` means λ / 7 rounded.
    pub survivors: Option<usize>,
    /// Probability of ranking by objective when penalties differ.
    pub ranking_probability: f64,
}

impl Default for IsresConfig {
    fn default() -> Self {
        IsresConfig {
            population_factor: 20,
            survivors: None,
            ranking_probability: 0.45,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptimizerConfig {
    pub max_evals: u64,
    /// Search box `[lo, hi]` applied to every dimension (CRS2, ISRES).
    pub bounds: (f64, f64),
    /// Range for random start points.
    pub start_range: (f64, f64),
    pub bh: BasinHoppingConfig,
    pub crs2: Crs2Config,
    pub isres: IsresConfig,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        OptimizerConfig {
            max_evals: 1_000_000,
            bounds: (-1e9, 1e9),
            start_range: (-0.5, 0.5),
            bh: BasinHoppingConfig::default(),
            crs2: Crs2Config::default(),
            isres: IsresConfig::default(),
        }
    }
}

#[derive(Debug, Clone, Error, PartialEq)]
pub enum ConfigError {
    #[error("max_evals must be positive")]
    ZeroBudget,
    #[error("invalid range [{0}, {1}]: need finite lo < hi")]
    BadRange(f64, f64),
}

fn check_range((lo, hi): (f64, f64)) -> Result<(), ConfigError> {
    if lo.is_finite() && hi.is_finite() && lo < hi {
        Ok(())
    } else {
        Err(ConfigError::BadRange(lo, hi))
    }
}

impl OptimizerConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.max_evals == 0 {
            return Err(ConfigError::ZeroBudget);
        }
        check_range(self.bounds)?;
        check_range(self.start_range)
    }
}

/// Why a run stopped early.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Halt {
    Zero,
    Budget,
    Cancelled,
}

impl From<Halt> for Termination {
    fn from(h: Halt) -> Self {
        match h {
            Halt::Zero => Termination::ZeroFound,
            Halt::Budget => Termination::BudgetExhausted,
            Halt::Cancelled => Termination::Cancelled,
        }
    }
}

/// Budgeted, cancellable access to an objective with a running best.
pub(crate) struct Tracker<'a> {
    f: &'a dyn Objective,
    stop: &'a StopToken,
    max_evals: u64,
    evals: u64,
    best_x: Vec<f64>,
    best_value: f64,
}

impl<'a> Tracker<'a> {
    pub fn new(f: &'a dyn Objective, max_evals: u64, stop: &'a StopToken, start: &[f64]) -> Self {
        Tracker {
            f,
            stop,
            max_evals,
            evals: 0,
            best_x: start.to_vec(),
            best_value: f64::INFINITY,
        }
    }

    /// Evaluates `x`; NaN results are reported as `+inf`.
    pub fn eval(&mut self, x: &[f64]) -> Result<f64, Halt> {
        debug_assert!(x.iter().all(|v| !v.is_nan()), "optimizer produced a NaN coordinate");
        if self.stop.is_stopped() {
            return Err(Halt::Cancelled);
        }
        if self.evals >= self.max_evals {
            return Err(Halt::Budget);
        }
        self.evals += 1;
        let mut v = self.f.value(x);
        if v.is_nan() {
            v = f64::INFINITY;
        }
        if v < self.best_value {
            self.best_value = v;
            self.best_x.clear();
            self.best_x.extend_from_slice(x);
        }
        if v == 0.0 {
            return Err(Halt::Zero);
        }
        Ok(v)
    }

    pub fn finish(self, how: Termination) -> OptOutcome {
        OptOutcome {
            best_x: self.best_x,
            best_value: self.best_value,
            evals_used: self.evals,
            terminated_by: how,
        }
    }
}

/// Runs `body` and folds its early exit into an outcome.
pub(crate) fn run_tracked<'a>(
    mut tracker: Tracker<'a>,
    body: impl FnOnce(&mut Tracker<'a>) -> Result<Termination, Halt>,
) -> OptOutcome {
    let how = match body(&mut tracker) {
        Ok(t) => t,
        Err(h) => h.into(),
    };
    tracker.finish(how)
}

pub(crate) fn clamp_into(x: &mut [f64], (lo, hi): (f64, f64)) {
    for v in x {
        *v = if v.is_nan() { lo } else { v.clamp(lo, hi) };
    }
}

/// Optimizer family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Algorithm {
    #[serde(rename = "BH")]
    BasinHopping,
    #[serde(rename = "CRS2")]
    Crs2,
    #[serde(rename = "ISRES")]
    Isres,
}

impl Algorithm {
    pub const ALL: [Algorithm; 3] = [Algorithm::BasinHopping, Algorithm::Crs2, Algorithm::Isres];

    pub fn short_name(self) -> &'static str {
        match self {
            Algorithm::BasinHopping => "BH",
            Algorithm::Crs2 => "CRS2",
            Algorithm::Isres => "ISRES",
        }
    }

    /// Runs this optimizer from `x0`.
    pub fn run(
        self,
        f: &dyn Objective,
        x0: &[f64],
        cfg: &OptimizerConfig,
        rng: &mut Xoshiro256Plus,
        stop: &StopToken,
    ) -> OptOutcome {
        match self {
            Algorithm::BasinHopping => basin_hopping(f, x0, cfg, rng, stop),
            Algorithm::Crs2 => crs2_minimize(f, x0, cfg, rng, stop),
            Algorithm::Isres => isres_minimize(f, x0, cfg, rng, stop),
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.short_name())
    }
}


#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tracker_enforces_budget_and_zero_exit() {
        let f = FnObjective::new(1, |x: &[f64]| x[0].abs());
        let stop = StopToken::new();
        let mut t = Tracker::new(&f, 2, &stop, &[5.0]);
        assert_eq!(t.eval(&[3.0]), Ok(3.0));
        assert_eq!(t.eval(&[2.0]), Ok(2.0));
        assert_eq!(t.eval(&[1.0]), Err(Halt::Budget));
        let out = t.finish(Termination::BudgetExhausted);
        assert_eq!((out.best_x, out.best_value, out.evals_used), (vec![2.0], 2.0, 2));

        let mut t = Tracker::new(&f, 10, &stop, &[5.0]);
        assert_eq!(t.eval(&[0.0]), Err(Halt::Zero));
        assert_eq!(t.finish(Termination::ZeroFound).best_value, 0.0);
    }

    #[test]
    fn tracker_polls_stop_before_evaluating() {
        let f = FnObjective::new(1, |x: &[f64]| x[0].abs());
        let stop = StopToken::new();
        stop.stop();
        let mut t = Tracker::new(&f, 10, &stop, &[5.0]);
        assert_eq!(t.eval(&[1.0]), Err(Halt::Cancelled));
        assert_eq!(t.finish(Termination::Cancelled).evals_used, 0);
    }

    #[test]
    fn config_validation() {
        let mut c = OptimizerConfig::default();
        assert!(c.validate().is_ok());
        c.max_evals = 0;
        assert_eq!(c.validate(), Err(ConfigError::ZeroBudget));
        c.max_evals = 1;
        c.bounds = (1.0, -1.0);
        assert!(matches!(c.validate(), Err(ConfigError::BadRange(..))));
    }
}
