use std::collections::HashMap;
use std::sync::Arc;

use super::{Call, DefBody, FrontendError, Pos, Script, Term, TermRef, Var};

/// A definition-free formula with its ordered free variables.
#[derive(Debug, Clone, PartialEq)]
pub struct Expanded {
    /// Conjunction of all assertions (the assertion itself when there is one).
    pub formula: TermRef,
    pub vars: Vec<Var>,
}

struct Expander<'s> {
    script: &'s Script,
    by_name: HashMap<&'s str, usize>,
    /// Expanded bodies of nullary definitions, shared across uses.
    constants: HashMap<usize, TermRef>,
    in_progress: Vec<usize>,
}

/// Inlines every defined function and constant.
pub fn expand_definitions(script: &Script) -> Result<Expanded, FrontendError> {
    let mut ex = Expander {
        script,
        by_name: script
            .definitions
            .iter()
            .enumerate()
            .map(|(i, d)| (d.name.as_str(), i))
            .collect(),
        constants: HashMap::new(),
        in_progress: Vec::new(),
    };
    let mut assertions = Vec::with_capacity(script.assertions.len());
    let mut memo = HashMap::new();
    for a in &script.assertions {
        assertions.push(ex.expand(a, &[], &mut memo)?);
    }
    let formula = if assertions.len() == 1 {
        assertions.pop().unwrap()
    } else {
        Arc::new(Term::And(assertions))
    };
    Ok(Expanded {
        formula,
        vars: script.declared.clone(),
    })
}

impl<'s> Expander<'s> {
    fn expand(
        &mut self,
        t: &TermRef,
        args: &[TermRef],
        memo: &mut HashMap<*const Term, TermRef>,
    ) -> Result<TermRef, FrontendError> {
        let key = Arc::as_ptr(t);
        if let Some(done) = memo.get(&key) {
            return Ok(done.clone());
        }
        let out = match &**t {
            Term::Bool(_) | Term::Const(_) | Term::Var(_) => t.clone(),
            Term::Param(p) => args.get(p.index).cloned().ok_or_else(|| FrontendError::UnknownSymbol {
                pos: Pos::default(),
                name: p.name.clone(),
            })?,
            Term::Not(a) => Arc::new(Term::Not(self.expand(a, args, memo)?)),
            Term::And(xs) => Arc::new(Term::And(self.expand_all(xs, args, memo)?)),
            Term::Or(xs) => Arc::new(Term::Or(self.expand_all(xs, args, memo)?)),
            Term::Compare(op, a, b) => Arc::new(Term::Compare(
                *op,
                self.expand(a, args, memo)?,
                self.expand(b, args, memo)?,
            )),
            Term::Arith(op, xs) => Arc::new(Term::Arith(*op, self.expand_all(xs, args, memo)?)),
            Term::Ite(c, a, b) => Arc::new(Term::Ite(
                self.expand(c, args, memo)?,
                self.expand(a, args, memo)?,
                self.expand(b, args, memo)?,
            )),
            Term::Call(call) => self.call(call, args, memo)?,
        };
        memo.insert(key, out.clone());
        Ok(out)
    }

    fn expand_all(
        &mut self,
        xs: &[TermRef],
        args: &[TermRef],
        memo: &mut HashMap<*const Term, TermRef>,
    ) -> Result<Vec<TermRef>, FrontendError> {
        xs.iter().map(|x| self.expand(x, args, memo)).collect()
    }

    fn call(
        &mut self,
        call: &Call,
        args: &[TermRef],
        memo: &mut HashMap<*const Term, TermRef>,
    ) -> Result<TermRef, FrontendError> {
        let Some(&idx) = self.by_name.get(call.name.as_str()) else {
            return Err(FrontendError::UnknownSymbol {
                pos: Pos::default(),
                name: call.name.clone(),
            });
        };
        if self.in_progress.contains(&idx) {
            return Err(FrontendError::RecursiveDefinition {
                pos: Pos::default(),
                name: call.name.clone(),
            });
        }
        if let Some(done) = self.constants.get(&idx) {
            return Ok(done.clone());
        }
        let def = &self.script.definitions[idx];
        let DefBody::Term(body) = &def.body else {
            return Err(FrontendError::SortError {
                pos: Pos::default(),
                msg: format!("rounding mode '{}' used as a term", call.name),
            });
        };
        if def.params.len() != call.args.len() {
            return Err(FrontendError::SortError {
                pos: Pos::default(),
                msg: format!("'{}' expects {} arguments", call.name, def.params.len()),
            });
        }
        let actuals = self.expand_all(&call.args, args, memo)?;
        self.in_progress.push(idx);
        let out = self.expand(body, &actuals, &mut HashMap::new());
        self.in_progress.pop();
        let out = out?;
        if def.params.is_empty() {
            self.constants.insert(idx, out.clone());
        }
        Ok(out)
    }
}
