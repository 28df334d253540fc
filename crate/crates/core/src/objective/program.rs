use std::cell::RefCell;
use std::collections::HashMap;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use super::distance::atom_distance_at;
use super::ObjectiveError;
use crate::fp::Width;
use crate::normalize::ClauseSet;
use crate::smtlib::{ArithOp, CmpOp, Term, TermRef, Var};

pub(crate) type Reg = u32;

/// One tape instruction; its result lands in the register of the same index.
/// Boolean results are stored as 0.0 / 1.0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum Instr {
    Load { slot: u32, width: Width },
    Const { value: f64, width: Width },
    Arith { op: ArithOp, width: Width, a: Reg, b: Reg },
    Compare { op: CmpOp, a: Reg, b: Reg },
    BoolConst(bool),
    Not(Reg),
    And(Reg, Reg),
    Or(Reg, Reg),
    Select { cond: Reg, then: Reg, other: Reg },
    Distance { op: CmpOp, negated: bool, width: Width, a: Reg, b: Reg },
}

/// The objective `G(x) = Σ_clauses Π_literals d(literal)` as a flat tape.
///
/// Immutable once compiled; [`evaluate`](ObjectiveProgram::evaluate) may run
/// concurrently. The only shared mutable state is the evaluation counter.
#[derive(Debug)]
pub struct ObjectiveProgram {
    pub(crate) instrs: Vec<Instr>,
    /// Distance registers of all literals, clause after clause.
    pub(crate) literals: Vec<Reg>,
    /// End offset into `literals` of each clause.
    pub(crate) clause_ends: Vec<usize>,
    pub(crate) vars: Vec<Var>,
    evals: AtomicU64,
}

thread_local! {
    static SCRATCH: RefCell<Vec<f64>> = const { RefCell::new(Vec::new()) };
}

struct Compiler<'v> {
    instrs: Vec<Instr>,
    memo: HashMap<*const Term, Reg>,
    vars: &'v [Var],
}

impl Compiler<'_> {
    fn push(&mut self, i: Instr) -> Reg {
        self.instrs.push(i);
        (self.instrs.len() - 1) as Reg
    }

    fn term(&mut self, t: &TermRef) -> Result<Reg, ObjectiveError> {
        let key = Arc::as_ptr(t);
        if let Some(&r) = self.memo.get(&key) {
            return Ok(r);
        }
        let instr = match &**t {
            Term::Var(v) => {
                let bound = self.vars.get(v.index).is_some_and(|d| d.name == v.name && d.width == v.width);
                if !bound {
                    return Err(ObjectiveError::UnboundVariable { name: v.name.clone() });
                }
                Instr::Load {
                    slot: v.index as u32,
                    width: v.width,
                }
            }
            Term::Const(c) => Instr::Const {
                value: c.to_f64(),
                width: c.width(),
            },
            Term::Arith(op, xs) => {
                let a = self.term(&xs[0])?;
                let b = match xs.get(1) {
                    Some(b) => self.term(b)?,
                    None => a,
                };
                Instr::Arith {
                    op: *op,
                    width: t.width().expect("fp term"),
                    a,
                    b,
                }
            }
            Term::Ite(c, x, y) => {
                let cond = self.term(c)?;
                let then = self.term(x)?;
                let other = self.term(y)?;
                Instr::Select { cond, then, other }
            }
            Term::Bool(b) => Instr::BoolConst(*b),
            Term::Not(a) => Instr::Not(self.term(a)?),
            Term::And(xs) | Term::Or(xs) => {
                let is_and = matches!(&**t, Term::And(_));
                let mut acc = match xs.first() {
                    Some(x) => self.term(x)?,
                    None => self.push(Instr::BoolConst(is_and)),
                };
                for x in xs.iter().skip(1) {
                    let r = self.term(x)?;
                    acc = self.push(if is_and { Instr::And(acc, r) } else { Instr::Or(acc, r) });
                }
                self.memo.insert(key, acc);
                return Ok(acc);
            }
            Term::Compare(op, a, b) => Instr::Compare {
                op: *op,
                a: self.term(a)?,
                b: self.term(b)?,
            },
            Term::Param(p) => return Err(ObjectiveError::UnboundVariable { name: p.name.clone() }),
            Term::Call(c) => return Err(ObjectiveError::UnboundVariable { name: c.name.clone() }),
        };
        let r = self.push(instr);
        self.memo.insert(key, r);
        Ok(r)
    }
}

/// Compiles a clause set over the variables `vars` (declaration order).
pub fn compile_objective(clauses: &ClauseSet, vars: &[Var]) -> Result<ObjectiveProgram, ObjectiveError> {
    let mut c = Compiler {
        instrs: Vec::new(),
        memo: HashMap::new(),
        vars,
    };
    let mut literals = Vec::new();
    let mut clause_ends = Vec::with_capacity(clauses.clauses.len());
    for clause in &clauses.clauses {
        for atom in clause {
            let a = c.term(&atom.lhs)?;
            let b = c.term(&atom.rhs)?;
            let width = atom.lhs.width().expect("fp operand");
            literals.push(c.push(Instr::Distance {
                op: atom.op,
                negated: atom.negated,
                width,
                a,
                b,
            }));
        }
        clause_ends.push(literals.len());
    }
    Ok(ObjectiveProgram {
        instrs: c.instrs,
        literals,
        clause_ends,
        vars: vars.to_vec(),
        evals: AtomicU64::new(0),
    })
}

#[inline]
fn truth(v: f64) -> bool {
    v != 0.0
}

impl ObjectiveProgram {
    pub fn dimension(&self) -> usize {
        self.vars.len()
    }

    pub fn vars(&self) -> &[Var] {
        &self.vars
    }

    pub fn clause_count(&self) -> usize {
        self.clause_ends.len()
    }

    /// Number of completed [`evaluate`](Self::evaluate) calls.
    pub fn eval_count(&self) -> u64 {
        self.evals.load(Ordering::Relaxed)
    }

    /// Computes `G(x)`. Binary32 slots of `x` are rounded (RNE) first.
    pub fn evaluate(&self, x: &[f64]) -> Result<f64, ObjectiveError> {
        if x.len() != self.vars.len() {
            return Err(ObjectiveError::DimensionMismatch {
                expected: self.vars.len(),
                got: x.len(),
            });
        }
        self.evals.fetch_add(1, Ordering::Relaxed);
        Ok(SCRATCH.with(|s| {
            let mut regs = s.borrow_mut();
            self.run(x, &mut regs)
        }))
    }

    fn run(&self, x: &[f64], regs: &mut Vec<f64>) -> f64 {
        regs.clear();
        regs.reserve(self.instrs.len());
        for instr in &self.instrs {
            let r = |i: Reg| regs[i as usize];
            let v = match *instr {
                Instr::Load { slot, width } => width.narrow(x[slot as usize]),
                Instr::Const { value, .. } => value,
                Instr::Arith { op, width, a, b } => op.apply(width, r(a), r(b)),
                Instr::Compare { op, a, b } => op.holds(r(a), r(b)) as u8 as f64,
                Instr::BoolConst(b) => b as u8 as f64,
                Instr::Not(a) => (!truth(r(a))) as u8 as f64,
                Instr::And(a, b) => (truth(r(a)) && truth(r(b))) as u8 as f64,
                Instr::Or(a, b) => (truth(r(a)) || truth(r(b))) as u8 as f64,
                Instr::Select { cond, then, other } => {
                    if truth(r(cond)) {
                        r(then)
                    } else {
                        r(other)
                    }
                }
                Instr::Distance {
                    op,
                    negated,
                    width,
                    a,
                    b,
                } => atom_distance_at(op, negated, width, r(a), r(b)),
            };
            regs.push(v);
        }
        let mut total = 0.0;
        let mut start = 0;
        for &end in &self.clause_ends {
            // A zero literal zeroes the clause even if the running product overflowed.
            let mut product = 1.0;
            for &lit in &self.literals[start..end] {
                let d = regs[lit as usize];
                if d == 0.0 {
                    product = 0.0;
                    break;
                }
                product *= d;
            }
            total += product;
            start = end;
        }
        total
    }
}
