//! Objective construction, evaluation, and the semantic oracle.

mod distance;
mod program;
mod render;
mod semantic;

pub use distance::{atom_distance, atom_distance_at, theta, theta_at};
pub use program::{compile_objective, ObjectiveProgram};
pub use render::render_objective_source;
pub use semantic::{semantic_eval, semantic_eval_with};

use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum ObjectiveError {
    #[error("unbound variable '{name}'")]
    UnboundVariable { name: String },
    #[error("assignment has {got} coordinates, objective expects {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("formula is not Bool-sorted")]
    NotBoolean,
}
