use std::collections::HashMap;
use std::sync::Arc;

use log::warn;

use super::literal::{decode_closed, is_rne_symbol, is_rounding_mode_symbol, parse_index, width_of};
use super::sexpr::{read_all, Atom, SExpr};
use super::term::quote_symbol;
use super::{ArithOp, Call, CmpOp, FrontendError, Param, Pos, Sort, Term, TermRef, Var};
use crate::fp::Width;

/// Body of a `define-fun`.
#[derive(Debug, Clone, PartialEq)]
pub enum DefBody {
    Term(TermRef),
    /// A rounding-mode constant; only RNE is ever stored.
    RoundingMode,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Definition {
    pub name: String,
    pub params: Vec<Param>,
    pub sort: Sort,
    pub body: DefBody,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Script {
    pub logic: Option<String>,
    pub assertions: Vec<TermRef>,
    /// Declared variables in declaration order.
    pub declared: Vec<Var>,
    /// Definitions in source order.
    pub definitions: Vec<Definition>,
    pub warnings: Vec<String>,
}

impl Script {
    pub fn definition(&self, name: &str) -> Option<&Definition> {
        self.definitions.iter().find(|d| d.name == name)
    }

    /// Prints the script back as SMT-LIB2.
    pub fn to_smtlib(&self) -> String {
        let mut out = String::new();
        if let Some(logic) = &self.logic {
            out.push_str(&format!("(set-logic {logic})\n"));
        }
        for v in &self.declared {
            out.push_str(&format!("(declare-fun {} () {})\n", quote_symbol(&v.name), v.width));
        }
        for d in &self.definitions {
            let params: Vec<String> = d
                .params
                .iter()
                .map(|p| format!("({} {})", quote_symbol(&p.name), p.sort))
                .collect();
            let body = match &d.body {
                DefBody::Term(t) => t.to_smtlib(),
                DefBody::RoundingMode => "RNE".to_string(),
            };
            out.push_str(&format!(
                "(define-fun {} ({}) {} {})\n",
                quote_symbol(&d.name),
                params.join(" "),
                d.sort,
                body
            ));
        }
        for a in &self.assertions {
            out.push_str(&format!("(assert {})\n", a.to_smtlib()));
        }
        out.push_str("(check-sat)\n");
        out
    }
}

const SUPPORTED_LOGICS: &[&str] = &["QF_FP", "QF_FPLRA"];

const UNSUPPORTED_FP_OPS: &[&str] = &[
    "fp.sqrt",
    "fp.fma",
    "fp.rem",
    "fp.roundToIntegral",
    "fp.min",
    "fp.max",
    "fp.isNormal",
    "fp.isSubnormal",
    "fp.isZero",
    "fp.isInfinite",
    "fp.isNaN",
    "fp.isNegative",
    "fp.isPositive",
    "fp.to_ubv",
    "fp.to_sbv",
    "fp.to_real",
    "to_fp_unsigned",
    "forall",
    "exists",
];

#[derive(Clone)]
enum Binding {
    Term(TermRef),
    RoundingMode,
}

struct Parser {
    script: Script,
    vars: HashMap<String, usize>,
    defs: HashMap<String, usize>,
    sorts: HashMap<String, Sort>,
    scopes: Vec<HashMap<String, Binding>>,
    defining: Option<String>,
}

fn syntax(pos: Pos, msg: impl Into<String>) -> FrontendError {
    FrontendError::Syntax {
        pos,
        msg: msg.into(),
    }
}

fn sort_error(pos: Pos, msg: impl Into<String>) -> FrontendError {
    FrontendError::SortError {
        pos,
        msg: msg.into(),
    }
}

/// Parses an SMT-LIB2 script in the supported QF_FP subset.
pub fn parse_script(text: &str) -> Result<Script, FrontendError> {
    let commands = read_all(text)?;
    let mut p = Parser {
        script: Script::default(),
        vars: HashMap::new(),
        defs: HashMap::new(),
        sorts: HashMap::new(),
        scopes: Vec::new(),
        defining: None,
    };
    for cmd in &commands {
        p.command(cmd)?;
    }
    if p.script.assertions.is_empty() {
        return Err(FrontendError::NoAssertions);
    }
    Ok(p.script)
}

impl Parser {
    fn warn(&mut self, msg: String) {
        warn!("{msg}");
        self.script.warnings.push(msg);
    }

    fn symbol_name<'e>(&self, e: &'e SExpr) -> Result<&'e str, FrontendError> {
        e.as_symbol()
            .ok_or_else(|| syntax(e.pos(), format!("expected symbol, found '{e}'")))
    }

    fn is_bound(&self, name: &str) -> bool {
        self.vars.contains_key(name) || self.defs.contains_key(name)
    }

    fn command(&mut self, cmd: &SExpr) -> Result<(), FrontendError> {
        let pos = cmd.pos();
        let items = cmd
            .as_list()
            .filter(|l| !l.is_empty())
            .ok_or_else(|| syntax(pos, format!("expected command, found '{cmd}'")))?;
        let head = self.symbol_name(&items[0])?;
        match head {
            "set-logic" => {
                let logic = items.get(1).and_then(SExpr::as_symbol).ok_or_else(|| syntax(pos, "set-logic expects a symbol"))?;
                if !SUPPORTED_LOGICS.contains(&logic) {
                    return Err(FrontendError::UnsupportedLogic {
                        pos: items[1].pos(),
                        logic: logic.to_string(),
                    });
                }
                self.script.logic = Some(logic.to_string());
            }
            "set-info" | "set-option" | "check-sat" | "exit" => {}
            "declare-fun" | "declare-const" => {
                let (name, sort_expr) = match (head, items.len()) {
                    ("declare-fun", 4) => {
                        let params = items[2].as_list().ok_or_else(|| syntax(items[2].pos(), "expected parameter sort list"))?;
                        if !params.is_empty() {
                            return Err(FrontendError::UnsupportedOperation {
                                pos,
                                op: "uninterpreted function with arguments".into(),
                            });
                        }
                        (&items[1], &items[3])
                    }
                    ("declare-const", 3) => (&items[1], &items[2]),
                    _ => return Err(syntax(pos, format!("malformed {head}"))),
                };
                let name = self.symbol_name(name)?.to_string();
                let width = match self.sort(sort_expr)? {
                    Sort::Fp(w) => w,
                    other => {
                        return Err(FrontendError::UnsupportedSort {
                            pos: sort_expr.pos(),
                            sort: format!("{other} (free variables must be floating-point)"),
                        })
                    }
                };
                if self.is_bound(&name) {
                    return Err(sort_error(pos, format!("symbol '{name}' already declared")));
                }
                let index = self.script.declared.len();
                self.vars.insert(name.clone(), index);
                self.script.declared.push(Var { index, name, width });
            }
            "define-fun" => self.define_fun(items, pos)?,
            "define-fun-rec" | "define-funs-rec" => {
                let name = items.get(1).map(|e| e.to_string()).unwrap_or_default();
                return Err(FrontendError::RecursiveDefinition { pos, name });
            }
            "define-sort" => {
                if items.len() != 4 || items[2].as_list().map_or(true, |l| !l.is_empty()) {
                    return Err(FrontendError::UnsupportedOperation {
                        pos,
                        op: "parametric define-sort".into(),
                    });
                }
                let name = self.symbol_name(&items[1])?.to_string();
                let sort = self.sort(&items[3])?;
                self.sorts.insert(name, sort);
            }
            "assert" => {
                if items.len() != 2 {
                    return Err(syntax(pos, "assert expects one term"));
                }
                let t = self.term(&items[1])?;
                if t.sort() != Sort::Bool {
                    return Err(sort_error(items[1].pos(), format!("assertion has sort {}, expected Bool", t.sort())));
                }
                self.script.assertions.push(t);
            }
            other => {
                let msg = format!("{pos}: ignoring unsupported command '{other}'");
                self.warn(msg);
            }
        }
        Ok(())
    }

    fn define_fun(&mut self, items: &[SExpr], pos: Pos) -> Result<(), FrontendError> {
        if items.len() != 5 {
            return Err(syntax(pos, "malformed define-fun"));
        }
        let name = self.symbol_name(&items[1])?.to_string();
        if self.is_bound(&name) {
            return Err(sort_error(pos, format!("symbol '{name}' already declared")));
        }
        let param_list = items[2]
            .as_list()
            .ok_or_else(|| syntax(items[2].pos(), "expected parameter list"))?;
        let mut params = Vec::new();
        let mut frame = HashMap::new();
        for (index, pe) in param_list.iter().enumerate() {
            let pair = pe.as_list().filter(|l| l.len() == 2).ok_or_else(|| syntax(pe.pos(), "expected (name sort)"))?;
            let pname = self.symbol_name(&pair[0])?.to_string();
            let sort = self.sort(&pair[1])?;
            if sort == Sort::RoundingMode {
                return Err(FrontendError::UnsupportedRoundingMode {
                    pos: pe.pos(),
                    mode: format!("parameter '{pname}' of sort RoundingMode"),
                });
            }
            let param = Param { index, name: pname.clone(), sort };
            frame.insert(pname, Binding::Term(Arc::new(Term::Param(param.clone()))));
            params.push(param);
        }
        let sort = self.sort(&items[3])?;
        let body = if sort == Sort::RoundingMode {
            self.rounding_mode(&items[4])?;
            DefBody::RoundingMode
        } else {
            self.scopes.push(frame);
            self.defining = Some(name.clone());
            let body = self.term(&items[4]);
            self.defining = None;
            self.scopes.pop();
            let body = body?;
            if body.sort() != sort {
                return Err(sort_error(
                    items[4].pos(),
                    format!("body of '{name}' has sort {}, declared {sort}", body.sort()),
                ));
            }
            DefBody::Term(body)
        };
        self.defs.insert(name.clone(), self.script.definitions.len());
        self.script.definitions.push(Definition { name, params, sort, body });
        Ok(())
    }

    fn sort(&self, e: &SExpr) -> Result<Sort, FrontendError> {
        let unsupported = || FrontendError::UnsupportedSort {
            pos: e.pos(),
            sort: e.to_string(),
        };
        match e {
            SExpr::Atom(Atom::Symbol(s), _) => match s.as_str() {
                "Bool" => Ok(Sort::Bool),
                "RoundingMode" => Ok(Sort::RoundingMode),
                "Float32" => Ok(Sort::Fp(Width::Binary32)),
                "Float64" => Ok(Sort::Fp(Width::Binary64)),
                other => self.sorts.get(other).copied().ok_or_else(unsupported),
            },
            SExpr::List(items, pos) => {
                if items.len() == 4
                    && items[0].as_symbol() == Some("_")
                    && items[1].as_symbol() == Some("FloatingPoint")
                {
                    let eb = parse_index(&items[2])?;
                    let sb = parse_index(&items[3])?;
                    Ok(Sort::Fp(width_of(*pos, eb, sb)?))
                } else {
                    Err(unsupported())
                }
            }
            _ => Err(unsupported()),
        }
    }

    /// Accepts only expressions denoting RNE.
    fn rounding_mode(&self, e: &SExpr) -> Result<(), FrontendError> {
        let bad = |mode: String| FrontendError::UnsupportedRoundingMode { pos: e.pos(), mode };
        let Some(name) = e.as_symbol() else {
            return Err(bad(e.to_string()));
        };
        if is_rne_symbol(name) {
            return Ok(());
        }
        if is_rounding_mode_symbol(name) {
            return Err(bad(name.to_string()));
        }
        for scope in self.scopes.iter().rev() {
            match scope.get(name) {
                Some(Binding::RoundingMode) => return Ok(()),
                Some(Binding::Term(_)) => {
                    return Err(sort_error(e.pos(), format!("'{name}' is not a rounding mode")))
                }
                None => {}
            }
        }
        match self.defs.get(name).map(|&i| &self.script.definitions[i]) {
            Some(d) if d.body == DefBody::RoundingMode => Ok(()),
            Some(_) => Err(sort_error(e.pos(), format!("'{name}' is not a rounding mode"))),
            None => Err(FrontendError::UnknownSymbol {
                pos: e.pos(),
                name: name.to_string(),
            }),
        }
    }

    fn expect_sort(&self, t: &TermRef, want: Sort, e: &SExpr) -> Result<(), FrontendError> {
        if t.sort() != want {
            return Err(sort_error(e.pos(), format!("'{e}' has sort {}, expected {want}", t.sort())));
        }
        Ok(())
    }

    fn expect_fp(&self, t: &TermRef, e: &SExpr) -> Result<Width, FrontendError> {
        t.width()
            .ok_or_else(|| sort_error(e.pos(), format!("'{e}' has sort {}, expected a floating-point sort", t.sort())))
    }

    fn terms(&mut self, es: &[SExpr]) -> Result<Vec<TermRef>, FrontendError> {
        es.iter().map(|e| self.term(e)).collect()
    }

    fn bools(&mut self, es: &[SExpr]) -> Result<Vec<TermRef>, FrontendError> {
        let ts = self.terms(es)?;
        for (t, e) in ts.iter().zip(es) {
            self.expect_sort(t, Sort::Bool, e)?;
        }
        Ok(ts)
    }

    /// FP arguments sharing one width.
    fn fps(&mut self, es: &[SExpr]) -> Result<(Vec<TermRef>, Width), FrontendError> {
        let ts = self.terms(es)?;
        let width = self.expect_fp(&ts[0], &es[0])?;
        for (t, e) in ts.iter().zip(es).skip(1) {
            let w = self.expect_fp(t, e)?;
            if w != width {
                return Err(sort_error(e.pos(), format!("mixed widths: {width} and {w}")));
            }
        }
        Ok((ts, width))
    }

    fn arity(&self, pos: Pos, head: &str, args: &[SExpr], min: usize, max: Option<usize>) -> Result<(), FrontendError> {
        let ok = args.len() >= min && max.map_or(true, |m| args.len() <= m);
        if !ok {
            return Err(syntax(pos, format!("wrong number of arguments to '{head}'")));
        }
        Ok(())
    }

    fn term(&mut self, e: &SExpr) -> Result<TermRef, FrontendError> {
        match e {
            SExpr::Atom(Atom::Symbol(s), pos) => self.symbol(s, *pos),
            SExpr::Atom(..) => Err(FrontendError::UnsupportedOperation {
                pos: e.pos(),
                op: format!("literal '{e}' outside to_fp"),
            }),
            SExpr::List(items, pos) => self.application(e, items, *pos),
        }
    }

    fn symbol(&mut self, s: &str, pos: Pos) -> Result<TermRef, FrontendError> {
        for scope in self.scopes.iter().rev() {
            match scope.get(s) {
                Some(Binding::Term(t)) => return Ok(t.clone()),
                Some(Binding::RoundingMode) => {
                    return Err(sort_error(pos, format!("rounding mode '{s}' used as a term")))
                }
                None => {}
            }
        }
        if self.defining.as_deref() == Some(s) {
            return Err(FrontendError::RecursiveDefinition { pos, name: s.to_string() });
        }
        if let Some(&i) = self.defs.get(s) {
            let d = &self.script.definitions[i];
            if !d.params.is_empty() {
                return Err(syntax(pos, format!("'{s}' expects {} arguments", d.params.len())));
            }
            if d.body == DefBody::RoundingMode {
                return Err(sort_error(pos, format!("rounding mode '{s}' used as a term")));
            }
            return Ok(Arc::new(Term::Call(Call {
                name: s.to_string(),
                args: Vec::new(),
                sort: d.sort,
            })));
        }
        if let Some(&i) = self.vars.get(s) {
            return Ok(Arc::new(Term::Var(self.script.declared[i].clone())));
        }
        match s {
            "true" => Ok(Arc::new(Term::Bool(true))),
            "false" => Ok(Arc::new(Term::Bool(false))),
            _ if is_rounding_mode_symbol(s) => Err(sort_error(pos, format!("rounding mode '{s}' used as a term"))),
            _ => Err(FrontendError::UnknownSymbol { pos, name: s.to_string() }),
        }
    }

    fn application(&mut self, e: &SExpr, items: &[SExpr], pos: Pos) -> Result<TermRef, FrontendError> {
        if items.is_empty() {
            return Err(syntax(pos, "empty application"));
        }
        if let Some(v) = decode_closed(e)? {
            return Ok(Arc::new(Term::Const(v)));
        }
        let Some(head) = items[0].as_symbol() else {
            return self.indexed_application(items, pos);
        };
        let args = &items[1..];
        let head_owned = head.to_string();
        let head = head_owned.as_str();
        if UNSUPPORTED_FP_OPS.contains(&head) {
            return Err(FrontendError::UnsupportedOperation { pos: items[0].pos(), op: head.to_string() });
        }
        let t = match head {
            "not" => {
                self.arity(pos, head, args, 1, Some(1))?;
                Term::Not(self.bools(args)?.remove(0))
            }
            "and" | "or" => {
                self.arity(pos, head, args, 1, None)?;
                let ts = self.bools(args)?;
                if head == "and" {
                    Term::And(ts)
                } else {
                    Term::Or(ts)
                }
            }
            "=>" => {
                self.arity(pos, head, args, 2, None)?;
                let ts = self.bools(args)?;
                let mut acc = ts.last().unwrap().clone();
                for t in ts.iter().rev().skip(1) {
                    acc = Arc::new(Term::Or(vec![Arc::new(Term::Not(t.clone())), acc]));
                }
                return Ok(acc);
            }
            "xor" => {
                self.arity(pos, head, args, 2, None)?;
                let ts = self.bools(args)?;
                let mut acc = ts[0].clone();
                for t in &ts[1..] {
                    acc = xor(&acc, t);
                }
                return Ok(acc);
            }
            "=" | "distinct" => {
                self.arity(pos, head, args, 2, None)?;
                let ts = self.terms(args)?;
                let sort = ts[0].sort();
                for (t, a) in ts.iter().zip(args).skip(1) {
                    self.expect_sort(t, sort, a)?;
                }
                return self.equality(head, ts, sort, pos);
            }
            "ite" => {
                self.arity(pos, head, args, 3, Some(3))?;
                let c = self.term(&args[0])?;
                self.expect_sort(&c, Sort::Bool, &args[0])?;
                let t = self.term(&args[1])?;
                let f = self.term(&args[2])?;
                self.expect_sort(&f, t.sort(), &args[2])?;
                match t.sort() {
                    Sort::Bool => {
                        let not_c = Arc::new(Term::Not(c.clone()));
                        Term::Or(vec![Arc::new(Term::And(vec![c, t])), Arc::new(Term::And(vec![not_c, f]))])
                    }
                    Sort::Fp(_) => Term::Ite(c, t, f),
                    Sort::RoundingMode => {
                        return Err(FrontendError::UnsupportedRoundingMode { pos, mode: e.to_string() })
                    }
                }
            }
            "let" => return self.let_binding(args, pos),
            "!" => {
                self.arity(pos, head, args, 1, None)?;
                return self.term(&args[0]);
            }
            "fp.lt" | "fp.leq" | "fp.gt" | "fp.geq" | "fp.eq" => {
                self.arity(pos, head, args, 2, None)?;
                let op = match head {
                    "fp.lt" => CmpOp::Lt,
                    "fp.leq" => CmpOp::Leq,
                    "fp.gt" => CmpOp::Gt,
                    "fp.geq" => CmpOp::Geq,
                    _ => CmpOp::Eq,
                };
                let (ts, _) = self.fps(args)?;
                let mut atoms: Vec<TermRef> = ts
                    .windows(2)
                    .map(|w| Arc::new(Term::Compare(op, w[0].clone(), w[1].clone())))
                    .collect();
                if atoms.len() == 1 {
                    return Ok(atoms.remove(0));
                }
                Term::And(atoms)
            }
            "fp.add" | "fp.sub" | "fp.mul" | "fp.div" => {
                self.arity(pos, head, args, 3, Some(3))?;
                self.rounding_mode(&args[0])?;
                let op = match head {
                    "fp.add" => ArithOp::Add,
                    "fp.sub" => ArithOp::Sub,
                    "fp.mul" => ArithOp::Mul,
                    _ => ArithOp::Div,
                };
                Term::Arith(op, self.fps(&args[1..])?.0)
            }
            "fp.neg" | "fp.abs" => {
                self.arity(pos, head, args, 1, Some(1))?;
                let op = if head == "fp.neg" { ArithOp::Neg } else { ArithOp::Abs };
                Term::Arith(op, self.fps(args)?.0)
            }
            "fp" => unreachable!("handled by decode_closed"),
            _ => return self.call(head, args, pos),
        };
        Ok(Arc::new(t))
    }

    fn indexed_application(&mut self, items: &[SExpr], pos: Pos) -> Result<TermRef, FrontendError> {
        let head = &items[0];
        let name = head
            .as_list()
            .filter(|l| l.len() >= 2 && l[0].as_symbol() == Some("_"))
            .and_then(|l| l[1].as_symbol())
            .unwrap_or_default();
        if name == "to_fp" {
            // Literal shapes were consumed by decode_closed; what remains is a conversion.
            if let [rm, _] = &items[1..] {
                self.rounding_mode(rm)?;
            }
            return Err(FrontendError::UnsupportedOperation {
                pos,
                op: format!("conversion '{}'", SExpr::List(items.to_vec(), pos)),
            });
        }
        Err(FrontendError::UnsupportedOperation {
            pos,
            op: head.to_string(),
        })
    }

    fn equality(&mut self, head: &str, ts: Vec<TermRef>, sort: Sort, pos: Pos) -> Result<TermRef, FrontendError> {
        let mut atoms = Vec::new();
        match (head, sort) {
            ("=", Sort::Bool) => {
                for w in ts.windows(2) {
                    atoms.push(Arc::new(Term::Not(xor(&w[0], &w[1]))));
                }
            }
            ("distinct", Sort::Bool) => {
                for i in 0..ts.len() {
                    for j in i + 1..ts.len() {
                        atoms.push(xor(&ts[i], &ts[j]));
                    }
                }
            }
            ("distinct", Sort::Fp(_)) => {
                for i in 0..ts.len() {
                    for j in i + 1..ts.len() {
                        atoms.push(Arc::new(Term::Compare(CmpOp::Neq, ts[i].clone(), ts[j].clone())));
                    }
                }
            }
            _ => {
                return Err(FrontendError::UnsupportedOperation {
                    pos,
                    op: format!("'{head}' over sort {sort} (use fp.eq for IEEE equality)"),
                })
            }
        }
        if atoms.len() == 1 {
            Ok(atoms.remove(0))
        } else {
            Ok(Arc::new(Term::And(atoms)))
        }
    }

    fn let_binding(&mut self, args: &[SExpr], pos: Pos) -> Result<TermRef, FrontendError> {
        if args.len() != 2 {
            return Err(syntax(pos, "let expects bindings and a body"));
        }
        let bindings = args[0].as_list().ok_or_else(|| syntax(args[0].pos(), "expected binding list"))?;
        let mut frame = HashMap::new();
        for b in bindings {
            let pair = b.as_list().filter(|l| l.len() == 2).ok_or_else(|| syntax(b.pos(), "expected (name term)"))?;
            let name = self.symbol_name(&pair[0])?.to_string();
            let is_rm = pair[1].as_symbol().is_some_and(is_rounding_mode_symbol);
            let binding = if is_rm {
                self.rounding_mode(&pair[1])?;
                Binding::RoundingMode
            } else {
                Binding::Term(self.term(&pair[1])?)
            };
            frame.insert(name, binding);
        }
        self.scopes.push(frame);
        let body = self.term(&args[1]);
        self.scopes.pop();
        body
    }

    fn call(&mut self, name: &str, args: &[SExpr], pos: Pos) -> Result<TermRef, FrontendError> {
        if self.defining.as_deref() == Some(name) {
            return Err(FrontendError::RecursiveDefinition { pos, name: name.to_string() });
        }
        let Some(&i) = self.defs.get(name) else {
            return Err(FrontendError::UnknownSymbol { pos, name: name.to_string() });
        };
        let (param_sorts, sort): (Vec<Sort>, Sort) = {
            let d = &self.script.definitions[i];
            (d.params.iter().map(|p| p.sort).collect(), d.sort)
        };
        if param_sorts.len() != args.len() {
            return Err(syntax(pos, format!("'{name}' expects {} arguments", param_sorts.len())));
        }
        let ts = self.terms(args)?;
        for ((t, a), s) in ts.iter().zip(args).zip(&param_sorts) {
            self.expect_sort(t, *s, a)?;
        }
        Ok(Arc::new(Term::Call(Call {
            name: name.to_string(),
            args: ts,
            sort,
        })))
    }
}

fn xor(a: &TermRef, b: &TermRef) -> TermRef {
    let not = |t: &TermRef| Arc::new(Term::Not(t.clone()));
    Arc::new(Term::Or(vec![
        Arc::new(Term::And(vec![a.clone(), not(b)])),
        Arc::new(Term::And(vec![not(a), b.clone()])),
    ]))
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) const QUADRATIC_SCRIPT: &str = include_str!("../../corpus/sat_quadratic_chain.smt2");

    #[test]
    fn quadratic_parses() {
        let s = parse_script(QUADRATIC_SCRIPT).unwrap();
        assert_eq!(s.logic.as_deref(), Some("QF_FP"));
        assert_eq!(s.assertions.len(), 1);
        assert_eq!(s.declared.len(), 1);
        assert_eq!(s.declared[0].width, Width::Binary32);
        assert_eq!(s.definitions.len(), 9);
    }

    #[test]
    fn minimal_script() {
        let s = parse_script(
            "(set-logic QF_FP)(declare-fun x () (_ FloatingPoint 11 53))(assert (fp.lt x x))(check-sat)",
        )
        .unwrap();
        let x = Arc::new(Term::Var(s.declared[0].clone()));
        assert_eq!(*s.assertions[0], Term::Compare(CmpOp::Lt, x.clone(), x));
    }

    #[test]
    fn rejects_other_logics() {
        let err = parse_script("(set-logic QF_BV)(declare-fun x () (_ BitVec 8))").unwrap_err();
        assert!(matches!(err, FrontendError::UnsupportedLogic { ref logic, .. } if logic == "QF_BV"));
    }

    #[test]
    fn rejects_unsupported_pieces() {
        let cases = [
            ("(declare-fun x () Float32)(assert (fp.eq (fp.sqrt RNE x) x))", "sqrt"),
            ("(declare-fun x () Float32)(assert (fp.lt (fp.add RTZ x x) x))", "rm"),
            ("(declare-fun x () (_ FloatingPoint 5 11))(assert (fp.lt x x))", "sort"),
            ("(declare-fun x () Float32)(declare-fun y () Float64)(assert (fp.lt x y))", "mixed"),
            ("(declare-fun x () Float32)(assert (fp.lt x z))", "unknown"),
            ("(declare-fun x () Float32)(assert (forall ((y Float32)) (fp.lt x y)))", "quant"),
        ];
        for (text, tag) in cases {
            let err = parse_script(text).unwrap_err();
            let ok = match tag {
                "sqrt" | "quant" => matches!(err, FrontendError::UnsupportedOperation { .. }),
                "rm" => matches!(err, FrontendError::UnsupportedRoundingMode { .. }),
                "sort" => matches!(err, FrontendError::UnsupportedSort { .. }),
                "mixed" => matches!(err, FrontendError::SortError { .. }),
                _ => matches!(err, FrontendError::UnknownSymbol { .. }),
            };
            assert!(ok, "{tag}: {err}");
        }
    }

    #[test]
    fn error_names_symbol_and_position() {
        let err = parse_script("(declare-fun x () Float32)\n(assert (fp.lt x (fp.fma RNE x x x)))").unwrap_err();
        assert_eq!(err.to_string(), "2:19: unsupported operation 'fp.fma'");
    }

    #[test]
    fn ignores_unsupported_commands_with_warning() {
        let s = parse_script("(declare-fun x () Float32)(push 1)(assert (fp.eq x x))(check-sat)(get-model)").unwrap();
        assert_eq!(s.warnings.len(), 2);
    }

    #[test]
    fn distinct_and_chains() {
        let s = parse_script(
            "(declare-fun x () Float32)(declare-fun y () Float32)(declare-fun z () Float32)\
             (assert (distinct x y z))(assert (fp.lt x y z))(assert (distinct x y))",
        )
        .unwrap();
        assert!(matches!(&*s.assertions[0], Term::And(v) if v.len() == 3));
        assert!(matches!(&*s.assertions[1], Term::And(v) if v.len() == 2));
        assert!(matches!(&*s.assertions[2], Term::Compare(CmpOp::Neq, ..)));
    }

    #[test]
    fn let_and_sort_alias() {
        let s = parse_script(
            "(define-sort D () (_ FloatingPoint 11 53))(declare-const x D)\
             (assert (let ((r RNE) (y (fp.mul RNE x x))) (fp.gt (fp.add r y y) x)))",
        )
        .unwrap();
        assert_eq!(s.declared[0].width, Width::Binary64);
        assert!(matches!(&*s.assertions[0], Term::Compare(CmpOp::Gt, ..)));
    }

    #[test]
    fn self_reference_is_recursive() {
        let err = parse_script("(declare-fun x () Float32)(define-fun f ((a Float32)) Float32 (f a))(assert (fp.lt (f x) x))")
            .unwrap_err();
        assert!(matches!(err, FrontendError::RecursiveDefinition { ref name, .. } if name == "f"));
    }

    #[test]
    fn no_assertions_is_an_error() {
        assert_eq!(parse_script("(set-logic QF_FP)(check-sat)").unwrap_err(), FrontendError::NoAssertions);
    }
}
