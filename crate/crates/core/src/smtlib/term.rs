use std::fmt;
use std::sync::Arc;

use crate::fp::{FpValue, Width};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sort {
    Bool,
    Fp(Width),
    RoundingMode,
}

impl fmt::Display for Sort {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sort::Bool => f.write_str("Bool"),
            Sort::Fp(w) => write!(f, "{w}"),
            Sort::RoundingMode => f.write_str("RoundingMode"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CmpOp {
    Lt,
    Leq,
    Gt,
    Geq,
    Eq,
    Neq,
}

impl CmpOp {
    pub const ALL: [CmpOp; 6] = [CmpOp::Lt, CmpOp::Leq, CmpOp::Gt, CmpOp::Geq, CmpOp::Eq, CmpOp::Neq];

    /// IEEE 754 comparison; every relation except `Neq` is false on NaN.
    #[inline]
    pub fn holds(self, a: f64, b: f64) -> bool {
        match self {
            CmpOp::Lt => a < b,
            CmpOp::Leq => a <= b,
            CmpOp::Gt => a > b,
            CmpOp::Geq => a >= b,
            CmpOp::Eq => a == b,
            CmpOp::Neq => a != b,
        }
    }

    pub fn smtlib_name(self) -> &'static str {
        match self {
            CmpOp::Lt => "fp.lt",
            CmpOp::Leq => "fp.leq",
            CmpOp::Gt => "fp.gt",
            CmpOp::Geq => "fp.geq",
            CmpOp::Eq => "fp.eq",
            CmpOp::Neq => "distinct",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
    Neg,
    Abs,
}

impl ArithOp {
    pub fn arity(self) -> usize {
        match self {
            ArithOp::Neg | ArithOp::Abs => 1,
            _ => 2,
        }
    }

    pub fn smtlib_name(self) -> &'static str {
        match self {
            ArithOp::Add => "fp.add",
            ArithOp::Sub => "fp.sub",
            ArithOp::Mul => "fp.mul",
            ArithOp::Div => "fp.div",
            ArithOp::Neg => "fp.neg",
            ArithOp::Abs => "fp.abs",
        }
    }

    /// Applies the operation at `width` with RNE. Operands must already be
    /// representable at `width`.
    #[inline]
    pub fn apply(self, width: Width, a: f64, b: f64) -> f64 {
        match width {
            Width::Binary32 => {
                let (a, b) = (a as f32, b as f32);
                (match self {
                    ArithOp::Add => a + b,
                    ArithOp::Sub => a - b,
                    ArithOp::Mul => a * b,
                    ArithOp::Div => a / b,
                    ArithOp::Neg => -a,
                    ArithOp::Abs => a.abs(),
                }) as f64
            }
            Width::Binary64 => match self {
                ArithOp::Add => a + b,
                ArithOp::Sub => a - b,
                ArithOp::Mul => a * b,
                ArithOp::Div => a / b,
                ArithOp::Neg => -a,
                ArithOp::Abs => a.abs(),
            },
        }
    }
}

/// A declared free variable; `index` is its position in declaration order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Var {
    pub index: usize,
    pub name: String,
    pub width: Width,
}

/// A formal parameter inside a `define-fun` body.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Param {
    pub index: usize,
    pub name: String,
    pub sort: Sort,
}

/// Application of a user definition, present only before expansion.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Call {
    pub name: String,
    pub args: Vec<TermRef>,
    pub sort: Sort,
}

pub type TermRef = Arc<Term>;

/// Formula AST node. Subterms may be shared; meaning is that of the tree.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Term {
    Bool(bool),
    Not(TermRef),
    And(Vec<TermRef>),
    Or(Vec<TermRef>),
    Compare(CmpOp, TermRef, TermRef),
    Const(FpValue),
    Var(Var),
    Arith(ArithOp, Vec<TermRef>),
    Ite(TermRef, TermRef, TermRef),
    Param(Param),
    Call(Call),
}

impl Term {
    pub fn sort(&self) -> Sort {
        match self {
            Term::Bool(_) | Term::Not(_) | Term::And(_) | Term::Or(_) | Term::Compare(..) => {
                Sort::Bool
            }
            Term::Const(v) => Sort::Fp(v.width()),
            Term::Var(v) => Sort::Fp(v.width),
            Term::Arith(_, args) => args[0].sort(),
            Term::Ite(_, t, _) => t.sort(),
            Term::Param(p) => p.sort,
            Term::Call(c) => c.sort,
        }
    }

    pub fn width(&self) -> Option<Width> {
        match self.sort() {
            Sort::Fp(w) => Some(w),
            _ => None,
        }
    }

    /// Renders the term as SMT-LIB2 text (tree form, no sharing).
    pub fn to_smtlib(&self) -> String {
        let mut out = String::new();
        self.write_smtlib(&mut out);
        out
    }

    fn write_smtlib(&self, out: &mut String) {
        let list = |out: &mut String, head: &str, args: &[&TermRef]| {
            out.push('(');
            out.push_str(head);
            for a in args {
                out.push(' ');
                a.write_smtlib(out);
            }
            out.push(')');
        };
        match self {
            Term::Bool(true) => out.push_str("true"),
            Term::Bool(false) => out.push_str("false"),
            Term::Not(t) => list(out, "not", &[t]),
            Term::And(ts) if ts.is_empty() => out.push_str("true"),
            Term::Or(ts) if ts.is_empty() => out.push_str("false"),
            Term::And(ts) => list(out, "and", &ts.iter().collect::<Vec<_>>()),
            Term::Or(ts) => list(out, "or", &ts.iter().collect::<Vec<_>>()),
            Term::Compare(op, a, b) => list(out, op.smtlib_name(), &[a, b]),
            Term::Const(v) => out.push_str(&v.to_smtlib()),
            Term::Var(v) => out.push_str(&quote_symbol(&v.name)),
            Term::Param(p) => out.push_str(&quote_symbol(&p.name)),
            Term::Arith(op, args) => {
                let head = if op.arity() == 2 {
                    format!("{} RNE", op.smtlib_name())
                } else {
                    op.smtlib_name().to_string()
                };
                list(out, &head, &args.iter().collect::<Vec<_>>())
            }
            Term::Ite(c, t, e) => list(out, "ite", &[c, t, e]),
            Term::Call(c) if c.args.is_empty() => out.push_str(&quote_symbol(&c.name)),
            Term::Call(c) => list(out, &quote_symbol(&c.name), &c.args.iter().collect::<Vec<_>>()),
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_smtlib())
    }
}

pub(crate) fn quote_symbol(name: &str) -> String {
    let simple = !name.is_empty()
        && !name.starts_with(|c: char| c.is_ascii_digit())
        && name
            .chars()
            .all(|c| c.is_ascii_alphanumeric() || "~!@$%^&*_-+=<>.?/".contains(c));
    if simple {
        name.to_string()
    } else {
        format!("|{name}|")
    }
}
