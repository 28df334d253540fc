//! SMT-LIB2 frontend for the supported QF_FP subset.

mod expand;
mod literal;
mod parse;
pub mod sexpr;
mod term;

pub use expand::{expand_definitions, Expanded};
pub use literal::decode_fp_literal;
pub use parse::{parse_script, DefBody, Definition, Script};
pub use sexpr::Pos;
pub(crate) use term::quote_symbol;
pub use term::{ArithOp, Call, CmpOp, Param, Sort, Term, TermRef, Var};

use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum FrontendError {
    #[error("{pos}: syntax error: {msg}")]
    Syntax { pos: Pos, msg: String },
    #[error("{pos}: unsupported logic '{logic}'")]
    UnsupportedLogic { pos: Pos, logic: String },
    #[error("{pos}: unsupported sort '{sort}'")]
    UnsupportedSort { pos: Pos, sort: String },
    #[error("{pos}: unsupported operation '{op}'")]
    UnsupportedOperation { pos: Pos, op: String },
    #[error("{pos}: unsupported rounding mode '{mode}' (only RNE is supported)")]
    UnsupportedRoundingMode { pos: Pos, mode: String },
    #[error("{pos}: sort error: {msg}")]
    SortError { pos: Pos, msg: String },
    #[error("{pos}: width mismatch: {msg}")]
    WidthMismatch { pos: Pos, msg: String },
    #[error("{pos}: unknown symbol '{name}'")]
    UnknownSymbol { pos: Pos, name: String },
    #[error("{pos}: recursive definition of '{name}'")]
    RecursiveDefinition { pos: Pos, name: String },
    #[error("script contains no assertions")]
    NoAssertions,
}
