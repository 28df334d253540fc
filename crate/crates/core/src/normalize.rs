//! Negation-free CNF over comparison atoms.
//!
//! Negation never flips a comparison operator: `not (a < b)` differs from
//! `a >= b` when an operand is NaN. A negation reaching an atom is recorded
//! in [`Atom::negated`] instead.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::fp::FpValue;
use crate::smtlib::{CmpOp, Term, TermRef};

/// Default cap on the number of clauses the distribution may produce.
pub const DEFAULT_CLAUSE_CAP: usize = 1_000_000;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum NormalizeError {
    #[error("CNF conversion would exceed {limit} clauses")]
    CnfBlowup { limit: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Atom {
    pub op: CmpOp,
    pub negated: bool,
    pub lhs: TermRef,
    pub rhs: TermRef,
}

impl Atom {
    /// The atom as a Bool term (`not` wrapped when negated).
    pub fn to_term(&self) -> TermRef {
        let cmp = Arc::new(Term::Compare(self.op, self.lhs.clone(), self.rhs.clone()));
        if self.negated {
            Arc::new(Term::Not(cmp))
        } else {
            cmp
        }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_term().to_smtlib())
    }
}

/// Negation normal form with negations absorbed into atoms.
#[derive(Debug, Clone, PartialEq)]
pub enum Nnf {
    Const(bool),
    Atom(Atom),
    And(Vec<Nnf>),
    Or(Vec<Nnf>),
}

/// Conjunction of disjunctions of atoms.
///
/// `clauses == []` is the constant true formula and a clause list holding an
/// empty clause is the constant false formula; otherwise no clause is empty.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ClauseSet {
    pub clauses: Vec<Vec<Atom>>,
}

impl ClauseSet {
    pub fn is_trivially_true(&self) -> bool {
        self.clauses.is_empty()
    }

    pub fn is_trivially_false(&self) -> bool {
        self.clauses.iter().any(Vec::is_empty)
    }

    pub fn to_nnf(&self) -> Nnf {
        Nnf::And(
            self.clauses
                .iter()
                .map(|c| Nnf::Or(c.iter().cloned().map(Nnf::Atom).collect()))
                .collect(),
        )
    }

    /// The clause set as an ordinary Bool term.
    pub fn to_term(&self) -> TermRef {
        Arc::new(Term::And(
            self.clauses
                .iter()
                .map(|c| Arc::new(Term::Or(c.iter().map(Atom::to_term).collect())))
                .collect(),
        ))
    }

    /// S-expression dump, one clause per line.
    pub fn to_sexpr(&self) -> String {
        let mut out = String::from("(clauses");
        for c in &self.clauses {
            out.push_str("\n  (clause");
            for a in c {
                out.push(' ');
                out.push_str(&a.to_string());
            }
            out.push(')');
        }
        out.push(')');
        out
    }
}

/// Moves every negation down to the atoms.
///
/// `formula` must be Bool-sorted and definition-free. If-then-else
/// conditions inside FP subterms are left as they are: they are evaluated
/// as plain Booleans and carry no distance.
pub fn push_negations(formula: &Term) -> Nnf {
    push(formula, false)
}

fn push(t: &Term, neg: bool) -> Nnf {
    match t {
        Term::Bool(b) => Nnf::Const(*b != neg),
        Term::Not(a) => push(a, !neg),
        Term::And(xs) | Term::Or(xs) => {
            let parts = xs.iter().map(|x| push(x, neg)).collect();
            match (t, neg) {
                (Term::And(_), false) | (Term::Or(_), true) => Nnf::And(parts),
                _ => Nnf::Or(parts),
            }
        }
        Term::Compare(op, a, b) => Nnf::Atom(Atom {
            op: *op,
            negated: neg,
            lhs: a.clone(),
            rhs: b.clone(),
        }),
        other => panic!("push_negations on non-Boolean term {other}"),
    }
}

/// Distributes disjunctions over conjunctions.
///
/// Clause and literal order follow the source left to right; repeated
/// atoms within a clause are dropped.
pub fn to_cnf(nnf: &Nnf, cap: usize) -> Result<ClauseSet, NormalizeError> {
    let clauses = cnf(nnf, cap)?;
    Ok(ClauseSet { clauses })
}

fn false_clauses() -> Vec<Vec<Atom>> {
    vec![Vec::new()]
}

fn cnf(n: &Nnf, cap: usize) -> Result<Vec<Vec<Atom>>, NormalizeError> {
    match n {
        Nnf::Const(true) => Ok(Vec::new()),
        Nnf::Const(false) => Ok(false_clauses()),
        Nnf::Atom(a) => Ok(vec![vec![a.clone()]]),
        Nnf::And(xs) => {
            let mut out = Vec::new();
            for x in xs {
                let part = cnf(x, cap)?;
                if part.iter().any(Vec::is_empty) {
                    return Ok(false_clauses());
                }
                out.extend(part);
                if out.len() > cap {
                    return Err(NormalizeError::CnfBlowup { limit: cap });
                }
            }
            Ok(out)
        }
        Nnf::Or(xs) => {
            let mut acc = false_clauses();
            for x in xs {
                let part = cnf(x, cap)?;
                if part.is_empty() {
                    return Ok(Vec::new());
                }
                if acc.len().saturating_mul(part.len()) > cap {
                    return Err(NormalizeError::CnfBlowup { limit: cap });
                }
                let mut next = Vec::with_capacity(acc.len() * part.len());
                for left in &acc {
                    for right in &part {
                        let mut clause = left.clone();
                        for atom in right {
                            if !clause.contains(atom) {
                                clause.push(atom.clone());
                            }
                        }
                        next.push(clause);
                    }
                }
                acc = next;
            }
            Ok(acc)
        }
    }
}

/// Folds constant subterms and Boolean identities.
pub fn simplify(formula: &TermRef) -> TermRef {
    simp(formula, &mut HashMap::new())
}

fn simp(t: &TermRef, memo: &mut HashMap<*const Term, TermRef>) -> TermRef {
    if let Some(done) = memo.get(&Arc::as_ptr(t)) {
        return done.clone();
    }
    let out = match &**t {
        Term::Bool(_) | Term::Const(_) | Term::Var(_) | Term::Param(_) => t.clone(),
        Term::Call(c) => {
            let args = c.args.iter().map(|a| simp(a, memo)).collect();
            Arc::new(Term::Call(crate::smtlib::Call { args, ..c.clone() }))
        }
        Term::Not(a) => {
            let a = simp(a, memo);
            match &*a {
                Term::Bool(b) => Arc::new(Term::Bool(!b)),
                _ => Arc::new(Term::Not(a)),
            }
        }
        Term::And(xs) | Term::Or(xs) => {
            let is_and = matches!(&**t, Term::And(_));
            // `absorbing` short-circuits the connective, `neutral` is dropped
            let absorbing = !is_and;
            let mut kept = Vec::with_capacity(xs.len());
            let mut short = false;
            for x in xs {
                let x = simp(x, memo);
                match &*x {
                    Term::Bool(b) if *b == absorbing => {
                        short = true;
                        break;
                    }
                    Term::Bool(_) => {}
                    _ => kept.push(x),
                }
            }
            if short {
                Arc::new(Term::Bool(absorbing))
            } else if kept.is_empty() {
                Arc::new(Term::Bool(is_and))
            } else if kept.len() == 1 {
                kept.pop().unwrap()
            } else if is_and {
                Arc::new(Term::And(kept))
            } else {
                Arc::new(Term::Or(kept))
            }
        }
        Term::Compare(op, a, b) => {
            let (a, b) = (simp(a, memo), simp(b, memo));
            match (&*a, &*b) {
                (Term::Const(x), Term::Const(y)) => Arc::new(Term::Bool(op.holds(x.to_f64(), y.to_f64()))),
                _ => Arc::new(Term::Compare(*op, a, b)),
            }
        }
        Term::Arith(op, xs) => {
            let xs: Vec<TermRef> = xs.iter().map(|x| simp(x, memo)).collect();
            let consts: Option<Vec<f64>> = xs
                .iter()
                .map(|x| match &**x {
                    Term::Const(c) => Some(c.to_f64()),
                    _ => None,
                })
                .collect();
            match consts {
                Some(vals) => {
                    let width = t.width().expect("fp term");
                    let v = op.apply(width, vals[0], vals.get(1).copied().unwrap_or(0.0));
                    Arc::new(Term::Const(FpValue::from_f64_rounded(width, v)))
                }
                None => Arc::new(Term::Arith(*op, xs)),
            }
        }
        Term::Ite(c, a, b) => {
            let c = simp(c, memo);
            match &*c {
                Term::Bool(true) => simp(a, memo),
                Term::Bool(false) => simp(b, memo),
                _ => Arc::new(Term::Ite(c, simp(a, memo), simp(b, memo))),
            }
        }
    };
    memo.insert(Arc::as_ptr(t), out.clone());
    out
}

/// simplify, push_negations and to_cnf in sequence.
pub fn normalize(formula: &TermRef, cap: usize) -> Result<ClauseSet, NormalizeError> {
    let simplified = simplify(formula);
    to_cnf(&push_negations(&simplified), cap)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fp::Width;
    use crate::smtlib::{expand_definitions, parse_script, Var};

    fn var(i: usize) -> TermRef {
        Arc::new(Term::Var(Var {
            index: i,
            name: format!("v{i}"),
            width: Width::Binary64,
        }))
    }

    fn cmp(op: CmpOp, a: usize, b: usize) -> TermRef {
        Arc::new(Term::Compare(op, var(a), var(b)))
    }

    fn atom(op: CmpOp, negated: bool, a: usize, b: usize) -> Atom {
        Atom {
            op,
            negated,
            lhs: var(a),
            rhs: var(b),
        }
    }

    #[test]
    fn negation_sets_the_flag() {
        let t = Term::Not(cmp(CmpOp::Lt, 0, 1));
        assert_eq!(push_negations(&t), Nnf::Atom(atom(CmpOp::Lt, true, 0, 1)));
        let t = Term::Not(Arc::new(Term::Not(cmp(CmpOp::Eq, 0, 1))));
        assert_eq!(push_negations(&t), Nnf::Atom(atom(CmpOp::Eq, false, 0, 1)));
    }

    #[test]
    fn de_morgan() {
        let t = Term::Not(Arc::new(Term::And(vec![cmp(CmpOp::Lt, 0, 1), cmp(CmpOp::Gt, 1, 2)])));
        assert_eq!(
            push_negations(&t),
            Nnf::Or(vec![
                Nnf::Atom(atom(CmpOp::Lt, true, 0, 1)),
                Nnf::Atom(atom(CmpOp::Gt, true, 1, 2)),
            ])
        );
    }

    #[test]
    fn distribution() {
        let a = atom(CmpOp::Lt, false, 0, 1);
        let b = atom(CmpOp::Leq, false, 1, 2);
        let c = atom(CmpOp::Eq, true, 2, 3);
        let n = Nnf::Or(vec![
            Nnf::Atom(a.clone()),
            Nnf::And(vec![Nnf::Atom(b.clone()), Nnf::Atom(c.clone())]),
        ]);
        let cs = to_cnf(&n, DEFAULT_CLAUSE_CAP).unwrap();
        assert_eq!(cs.clauses, vec![vec![a.clone(), b], vec![a.clone(), c]]);
        let single = to_cnf(&Nnf::Atom(a.clone()), DEFAULT_CLAUSE_CAP).unwrap();
        assert_eq!(single.clauses, vec![vec![a]]);
    }

    #[test]
    fn duplicates_within_a_clause_are_dropped() {
        let a = atom(CmpOp::Lt, false, 0, 1);
        let n = Nnf::Or(vec![Nnf::Atom(a.clone()), Nnf::Atom(a.clone())]);
        assert_eq!(to_cnf(&n, 10).unwrap().clauses, vec![vec![a]]);
    }

    #[test]
    fn blowup_is_capped() {
        let pair = |i| Nnf::And(vec![Nnf::Atom(atom(CmpOp::Lt, false, i, i + 1)), Nnf::Atom(atom(CmpOp::Gt, false, i, i + 1))]);
        let n = Nnf::Or((0..12).map(pair).collect());
        assert_eq!(to_cnf(&n, 1000), Err(NormalizeError::CnfBlowup { limit: 1000 }));
        assert_eq!(to_cnf(&n, 4096).unwrap().clauses.len(), 4096);
    }

    #[test]
    fn quadratic_is_one_unit_clause() {
        let s = parse_script(include_str!("../corpus/sat_quadratic_chain.smt2")).unwrap();
        let f = expand_definitions(&s).unwrap().formula;
        let cs = normalize(&f, DEFAULT_CLAUSE_CAP).unwrap();
        assert_eq!(cs.clauses.len(), 1);
        assert_eq!(cs.clauses[0].len(), 1);
        let a = &cs.clauses[0][0];
        assert_eq!((a.op, a.negated), (CmpOp::Geq, false));
        assert!(matches!(&*a.rhs, Term::Const(v) if v.to_f64() == -2.0));
    }

    #[test]
    fn simplify_folds() {
        let one = Arc::new(Term::Const(FpValue::from_f64(1.0)));
        let sum = Arc::new(Term::Arith(crate::smtlib::ArithOp::Add, vec![one.clone(), one.clone()]));
        assert_eq!(*simplify(&sum), Term::Const(FpValue::from_f64(2.0)));

        let p = cmp(CmpOp::Lt, 0, 1);
        let and = Arc::new(Term::And(vec![p.clone(), Arc::new(Term::Bool(true))]));
        assert_eq!(simplify(&and), p);

        let ite = Arc::new(Term::Ite(Arc::new(Term::Bool(false)), var(0), var(1)));
        assert_eq!(simplify(&ite), var(1));

        let or = Arc::new(Term::Or(vec![p, Arc::new(Term::Bool(true))]));
        assert_eq!(*simplify(&or), Term::Bool(true));
    }

    #[test]
    fn constant_formulas() {
        let t = normalize(&Arc::new(Term::Bool(true)), 10).unwrap();
        assert!(t.is_trivially_true());
        let f = normalize(&Arc::new(Term::Bool(false)), 10).unwrap();
        assert!(f.is_trivially_false());
    }

    #[test]
    fn cnf_is_idempotent_on_its_output() {
        let n = Nnf::Or(vec![
            Nnf::Atom(atom(CmpOp::Lt, false, 0, 1)),
            Nnf::And(vec![Nnf::Atom(atom(CmpOp::Geq, true, 1, 2)), Nnf::Atom(atom(CmpOp::Neq, false, 2, 3))]),
        ]);
        let once = to_cnf(&n, 100).unwrap();
        let twice = to_cnf(&once.to_nnf(), 100).unwrap();
        assert_eq!(once, twice);
    }
}
