//! Ground-truth IEEE 754 evaluation of formulas.
//!
//! Walks the term tree directly and shares no code with the compiled
//! objective, so the two can be checked against each other.

use std::collections::HashMap;
use std::sync::Arc;

use super::ObjectiveError;
use crate::smtlib::{DefBody, Definition, Term, TermRef};

#[derive(Clone, Copy)]
enum Val {
    Bool(bool),
    Fp(f64),
}

impl Val {
    fn bool(self) -> bool {
        match self {
            Val::Bool(b) => b,
            Val::Fp(_) => unreachable!("well-sorted term"),
        }
    }

    fn fp(self) -> f64 {
        match self {
            Val::Fp(v) => v,
            Val::Bool(_) => unreachable!("well-sorted term"),
        }
    }
}

struct Eval<'a> {
    x: &'a [f64],
    defs: &'a [Definition],
}

impl Eval<'_> {
    fn eval(&self, t: &TermRef, params: &[Val], memo: &mut HashMap<*const Term, Val>) -> Result<Val, ObjectiveError> {
        if let Some(v) = memo.get(&Arc::as_ptr(t)) {
            return Ok(*v);
        }
        let v = match &**t {
            Term::Bool(b) => Val::Bool(*b),
            Term::Not(a) => Val::Bool(!self.eval(a, params, memo)?.bool()),
            Term::And(xs) => {
                let mut acc = true;
                for x in xs {
                    acc &= self.eval(x, params, memo)?.bool();
                }
                Val::Bool(acc)
            }
            Term::Or(xs) => {
                let mut acc = false;
                for x in xs {
                    acc |= self.eval(x, params, memo)?.bool();
                }
                Val::Bool(acc)
            }
            Term::Compare(op, a, b) => {
                let a = self.eval(a, params, memo)?.fp();
                let b = self.eval(b, params, memo)?.fp();
                Val::Bool(op.holds(a, b))
            }
            Term::Const(c) => Val::Fp(c.to_f64()),
            Term::Var(v) => {
                let raw = *self.x.get(v.index).ok_or_else(|| ObjectiveError::UnboundVariable {
                    name: v.name.clone(),
                })?;
                Val::Fp(v.width.narrow(raw))
            }
            Term::Arith(op, xs) => {
                let width = t.width().expect("fp term");
                let a = self.eval(&xs[0], params, memo)?.fp();
                let b = match xs.get(1) {
                    Some(b) => self.eval(b, params, memo)?.fp(),
                    None => 0.0,
                };
                Val::Fp(op.apply(width, a, b))
            }
            Term::Ite(c, a, b) => {
                if self.eval(c, params, memo)?.bool() {
                    self.eval(a, params, memo)?
                } else {
                    self.eval(b, params, memo)?
                }
            }
            Term::Param(p) => *params.get(p.index).ok_or_else(|| ObjectiveError::UnboundVariable {
                name: p.name.clone(),
            })?,
            Term::Call(c) => {
                let def = self
                    .defs
                    .iter()
                    .find(|d| d.name == c.name)
                    .ok_or_else(|| ObjectiveError::UnboundVariable { name: c.name.clone() })?;
                let DefBody::Term(body) = &def.body else {
                    return Err(ObjectiveError::UnboundVariable { name: c.name.clone() });
                };
                let args = c
                    .args
                    .iter()
                    .map(|a| self.eval(a, params, memo))
                    .collect::<Result<Vec<_>, _>>()?;
                self.eval(body, &args, &mut HashMap::new())?
            }
        };
        // Terms under a parameter frame are only reused within that frame.
        memo.insert(Arc::as_ptr(t), v);
        Ok(v)
    }
}

/// Evaluates a definition-free Bool term at `x` (indexed by variable
/// declaration order; binary32 slots are narrowed with RNE).
pub fn semantic_eval(formula: &TermRef, x: &[f64]) -> Result<bool, ObjectiveError> {
    semantic_eval_with(formula, &[], x)
}

/// Like [`semantic_eval`], applying user definitions as functions instead of
/// requiring them to be inlined first.
pub fn semantic_eval_with(formula: &TermRef, defs: &[Definition], x: &[f64]) -> Result<bool, ObjectiveError> {
    let e = Eval { x, defs };
    match e.eval(formula, &[], &mut HashMap::new())? {
        Val::Bool(b) => Ok(b),
        Val::Fp(_) => Err(ObjectiveError::NotBoolean),
    }
}
