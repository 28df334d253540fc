//! File-level plumbing: loading problems, benchmark runs, and the race
//! against an external solver.

pub mod bench;
pub mod combined;

use std::io;
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::normalize::{normalize, ClauseSet, NormalizeError, DEFAULT_CLAUSE_CAP};
use crate::objective::{compile_objective, ObjectiveError, ObjectiveProgram};
use crate::portfolio::{solve, PortfolioConfig, PortfolioError, SolveOutcome};
use crate::smtlib::{expand_definitions, parse_script, FrontendError, Script, TermRef};

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("{0}")]
    Frontend(#[from] FrontendError),
    #[error("{0}")]
    Normalize(#[from] NormalizeError),
    #[error("{0}")]
    Objective(#[from] ObjectiveError),
    #[error("{0}")]
    Portfolio(#[from] PortfolioError),
    #[error("failed to start external solver: {0}")]
    Spawn(io::Error),
}

/// A parsed script together with everything derived from it.
pub struct Problem {
    pub script: Script,
    /// Assertions with definitions inlined, before normalization.
    pub formula: TermRef,
    pub clauses: ClauseSet,
    pub program: ObjectiveProgram,
}

impl Problem {
    pub fn from_text(text: &str) -> Result<Self, HarnessError> {
        let script = parse_script(text)?;
        for w in &script.warnings {
            log::warn!("{w}");
        }
        let expanded = expand_definitions(&script)?;
        let clauses = normalize(&expanded.formula, DEFAULT_CLAUSE_CAP)?;
        let program = compile_objective(&clauses, &expanded.vars)?;
        Ok(Problem {
            script,
            formula: expanded.formula,
            clauses,
            program,
        })
    }

    pub fn load(path: &Path) -> Result<Self, HarnessError> {
        let text = std::fs::read_to_string(path).map_err(|source| HarnessError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_text(&text)
    }

    pub fn solve(&self, cfg: &PortfolioConfig) -> Result<SolveOutcome, HarnessError> {
        Ok(solve(&self.formula, &self.program, cfg)?)
    }
}
