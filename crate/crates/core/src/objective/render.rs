//! C99 rendering of a compiled objective.
//!
//! The output defines `double objective(const double *x)` computing the
//! same value as [`ObjectiveProgram::evaluate`], one `double clause_<i>`
//! definition per clause and their sum as the result. Binary32 operations
//! are emitted on `float` so the C compiler performs them at single
//! precision. Compile with `-ffp-contract=off` to keep operations unfused.

use std::fmt::Write;

use super::program::{Instr, ObjectiveProgram};
use crate::fp::Width;
use crate::smtlib::{ArithOp, CmpOp};

const PRELUDE: &str = r#"#include <stdint.h>
#include <string.h>

static float f32_of(uint32_t b) { float f; memcpy(&f, &b, 4); return f; }
static double f64_of(uint64_t b) { double f; memcpy(&f, &b, 8); return f; }

static double theta32(float a, float b) {
    if (a != a || b != b) return 1.0;
    if (a == b) return 0.0;
    uint32_t ua, ub; memcpy(&ua, &a, 4); memcpy(&ub, &b, 4);
    int64_t oa = (int64_t)(ua & 0x7fffffffu); if (ua >> 31) oa = -oa;
    int64_t ob = (int64_t)(ub & 0x7fffffffu); if (ub >> 31) ob = -ob;
    int64_t d = oa - ob;
    return (double)(d < 0 ? -d : d);
}

static double theta64(double a, double b) {
    if (a != a || b != b) return 1.0;
    if (a == b) return 0.0;
    uint64_t ua, ub; memcpy(&ua, &a, 8); memcpy(&ub, &b, 8);
    uint64_t ma = ua & 0x7fffffffffffffffull, mb = ub & 0x7fffffffffffffffull;
    uint64_t d;
    if ((ua >> 63) == (ub >> 63)) d = ma > mb ? ma - mb : mb - ma;
    else d = ma + mb;
    return (double)d;
}

/* op: 0 lt, 1 leq, 2 gt, 3 geq, 4 eq, 5 neq */
#define ATOM(NAME, T, THETA)                                                   \
static double NAME(int op, int neg, T a, T b) {                                \
    int nan = (a != a) || (b != b);                                            \
    if (neg && op != 4 && op != 5) {                                           \
        if (nan) return 0.0;                                                   \
        switch (op) {                                                          \
        case 0: return a >= b ? 0.0 : THETA(a, b);                             \
        case 1: return a > b ? 0.0 : THETA(a, b) + 1.0;                        \
        case 2: return a <= b ? 0.0 : THETA(a, b);                             \
        default: return a < b ? 0.0 : THETA(a, b) + 1.0;                       \
        }                                                                      \
    }                                                                          \
    if (neg) op = op == 4 ? 5 : 4;                                             \
    switch (op) {                                                              \
    case 0: return a < b ? 0.0 : THETA(a, b) + 1.0;                            \
    case 1: return a <= b ? 0.0 : THETA(a, b);                                 \
    case 2: return a > b ? 0.0 : THETA(a, b) + 1.0;                            \
    case 3: return a >= b ? 0.0 : THETA(a, b);                                 \
    case 4: return THETA(a, b);                                                \
    default: return a != b ? 0.0 : 1.0;                                        \
    }                                                                          \
}
ATOM(atom32, float, theta32)
ATOM(atom64, double, theta64)

static double mulz(double acc, double d) { return (acc == 0.0 || d == 0.0) ? 0.0 : acc * d; }
"#;

fn op_code(op: CmpOp) -> u8 {
    match op {
        CmpOp::Lt => 0,
        CmpOp::Leq => 1,
        CmpOp::Gt => 2,
        CmpOp::Geq => 3,
        CmpOp::Eq => 4,
        CmpOp::Neq => 5,
    }
}

fn c_type(w: Width) -> &'static str {
    match w {
        Width::Binary32 => "float",
        Width::Binary64 => "double",
    }
}

fn c_cmp(op: CmpOp) -> &'static str {
    match op {
        CmpOp::Lt => "<",
        CmpOp::Leq => "<=",
        CmpOp::Gt => ">",
        CmpOp::Geq => ">=",
        CmpOp::Eq => "==",
        CmpOp::Neq => "!=",
    }
}

/// Deterministic C99 source for `program`.
pub fn render_objective_source(program: &ObjectiveProgram) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "/* objective: {} variable(s), {} clause(s) */",
        program.dimension(),
        program.clause_count()
    );
    for v in program.vars() {
        let _ = writeln!(out, "/* x[{}] = {} : {} */", v.index, v.name, v.width);
    }
    out.push_str(PRELUDE);
    out.push_str("\ndouble objective(const double *x) {\n");
    if program.dimension() == 0 {
        out.push_str("    (void)x;\n");
    }
    let mut widths = Vec::with_capacity(program.instrs.len());
    for (i, instr) in program.instrs.iter().enumerate() {
        let (ty, expr) = match *instr {
            Instr::Load { slot, width } => (c_type(width), format!("({})x[{slot}]", c_type(width))),
            Instr::Const { value, width } => match width {
                Width::Binary32 => ("float", format!("f32_of(0x{:08x}u)", (value as f32).to_bits())),
                Width::Binary64 => ("double", format!("f64_of(0x{:016x}ull)", value.to_bits())),
            },
            Instr::Arith { op, width, a, b } => {
                let e = match op {
                    ArithOp::Add => format!("t{a} + t{b}"),
                    ArithOp::Sub => format!("t{a} - t{b}"),
                    ArithOp::Mul => format!("t{a} * t{b}"),
                    ArithOp::Div => format!("t{a} / t{b}"),
                    ArithOp::Neg => format!("-t{a}"),
                    ArithOp::Abs => match width {
                        Width::Binary32 => format!("__builtin_fabsf(t{a})"),
                        Width::Binary64 => format!("__builtin_fabs(t{a})"),
                    },
                };
                (c_type(width), e)
            }
            Instr::Compare { op, a, b } => ("int", format!("t{a} {} t{b}", c_cmp(op))),
            Instr::BoolConst(v) => ("int", (v as u8).to_string()),
            Instr::Not(a) => ("int", format!("!t{a}")),
            Instr::And(a, b) => ("int", format!("t{a} && t{b}")),
            Instr::Or(a, b) => ("int", format!("t{a} || t{b}")),
            Instr::Select { cond, then, other } => (widths[then as usize], format!("t{cond} ? t{then} : t{other}")),
            Instr::Distance {
                op,
                negated,
                width,
                a,
                b,
            } => {
                let f = match width {
                    Width::Binary32 => "atom32",
                    Width::Binary64 => "atom64",
                };
                ("double", format!("{f}({}, {}, t{a}, t{b})", op_code(op), negated as u8))
            }
        };
        widths.push(ty);
        let _ = writeln!(out, "    {ty} t{i} = {expr};");
    }
    let mut start = 0;
    for (ci, &end) in program.clause_ends.iter().enumerate() {
        let mut expr = "1.0".to_string();
        for lit in &program.literals[start..end] {
            expr = format!("mulz({expr}, t{lit})");
        }
        let _ = writeln!(out, "    double clause_{ci} = {expr};");
        start = end;
    }
    out.push_str("    return 0.0");
    for ci in 0..program.clause_count() {
        let _ = write!(out, " + clause_{ci}");
    }
    out.push_str(";\n}\n");
    out
}
