//! Floating-point satisfiability through parallel global optimization.
//!
//! A QF_FP script is parsed, normalized into CNF over comparison atoms, and
//! compiled into a non-negative objective whose exact zeros are precisely
//! the satisfying assignments. A portfolio of stochastic optimizers then
//! races to find such a zero; a zero found is a model, a zero not found is
//! `unknown`.

pub mod fp;
pub mod smtlib;
pub mod normalize;
pub mod objective;
pub mod optimize;
pub mod portfolio;
pub mod harness;
