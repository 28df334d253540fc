//! Shared generators for the integration tests.
#![allow(dead_code)]

use std::path::PathBuf;

use fpsat::fp::{FpValue, Width};
use fpsat::optimize::Xoshiro256Plus;
use fpsat::smtlib::Var;

pub fn corpus_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("corpus")
}

pub fn corpus_files() -> Vec<PathBuf> {
    let mut v: Vec<PathBuf> = std::fs::read_dir(corpus_dir())
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "smt2"))
        .collect();
    v.sort();
    v
}

pub fn is_sat_instance(p: &std::path::Path) -> bool {
    p.file_name().unwrap().to_str().unwrap().starts_with("sat_")
}

/// ±0, ±min subnormal, ±1, ±max finite, ±∞ and two NaN payloads.
pub fn structured_f32() -> Vec<f32> {
    let mut v = Vec::new();
    for s in [1.0f32, -1.0] {
        v.extend([s * 0.0, s * f32::from_bits(1), s, s * f32::MAX, s * f32::INFINITY]);
    }
    v.push(f32::from_bits(0x7fc0_0000));
    v.push(f32::from_bits(0xff80_0001));
    v
}

pub fn structured_f64() -> Vec<f64> {
    let mut v = Vec::new();
    for s in [1.0f64, -1.0] {
        v.extend([s * 0.0, s * f64::from_bits(1), s, s * f64::MAX, s * f64::INFINITY]);
    }
    v.push(f64::from_bits(0x7ff8_0000_0000_0000));
    v.push(f64::from_bits(0xfff0_0000_0000_0001));
    v
}

pub fn structured(width: Width) -> Vec<FpValue> {
    match width {
        Width::Binary32 => structured_f32().into_iter().map(FpValue::from_f32).collect(),
        Width::Binary64 => structured_f64().into_iter().map(FpValue::from_f64).collect(),
    }
}

/// Random value of `width`: special, small integer, or random encoding.
pub fn random_value(rng: &mut Xoshiro256Plus, width: Width) -> FpValue {
    let r = rng.next_f64();
    if r < 0.25 {
        let s = structured(width);
        s[rng.below(s.len())]
    } else if r < 0.6 {
        let k = rng.below(9) as f64 - 4.0;
        FpValue::from_f64_rounded(width, k * [1.0, 0.5, 0.25][rng.below(3)])
    } else if r < 0.8 {
        FpValue::from_f64_rounded(width, rng.uniform(-10.0, 10.0))
    } else {
        FpValue::from_bits(width, rng.next_u64())
    }
}

pub fn random_assignment(rng: &mut Xoshiro256Plus, vars: &[Var]) -> Vec<f64> {
    vars.iter().map(|v| random_value(rng, v.width).to_f64()).collect()
}

/// Random QF_FP script text: nesting depth ≤ 5 (two Boolean levels, the atom, two term levels).
pub struct FormulaGen<'r> {
    rng: &'r mut Xoshiro256Plus,
    vars: Vec<(String, Width)>,
}

impl<'r> FormulaGen<'r> {
    pub fn new(rng: &'r mut Xoshiro256Plus) -> Self {
        let n = 1 + rng.below(4);
        let vars = (0..n)
            .map(|i| {
                let w = if rng.below(3) == 0 { Width::Binary64 } else { Width::Binary32 };
                (format!("v{i}"), w)
            })
            .collect();
        FormulaGen { rng, vars }
    }

    pub fn script(&mut self) -> String {
        let mut out = String::from("(set-logic QF_FP)\n");
        for (name, w) in &self.vars {
            out.push_str(&format!("(declare-fun {name} () {w})\n"));
        }
        let asserts = 1 + self.rng.below(2);
        for _ in 0..asserts {
            let b = self.boolean(2);
            out.push_str(&format!("(assert {b})\n"));
        }
        out.push_str("(check-sat)\n");
        out
    }

    fn pick(&mut self, items: &[&'static str]) -> &'static str {
        items[self.rng.below(items.len())]
    }

    fn boolean(&mut self, depth: usize) -> String {
        if depth == 0 || self.rng.below(10) < 3 {
            return self.atom();
        }
        let d = depth - 1;
        match self.rng.below(8) {
            0 => format!("(not {})", self.boolean(d)),
            1 | 2 => format!("(and {} {})", self.boolean(d), self.boolean(d)),
            3 | 4 => format!("(or {} {})", self.boolean(d), self.boolean(d)),
            5 => format!("(=> {} {})", self.boolean(d), self.boolean(d)),
            6 => format!("(xor {} {})", self.boolean(d), self.boolean(d)),
            _ => format!("(ite {} {} {})", self.boolean(d), self.boolean(d), self.boolean(d)),
        }
    }

    fn width(&mut self) -> Width {
        let i = self.rng.below(self.vars.len());
        self.vars[i].1
    }

    fn atom(&mut self) -> String {
        let w = self.width();
        let op = self.pick(&["fp.lt", "fp.leq", "fp.gt", "fp.geq", "fp.eq", "distinct"]);
        format!("({op} {} {})", self.term(w, 2), self.term(w, 2))
    }

    fn term(&mut self, w: Width, depth: usize) -> String {
        let candidates: Vec<String> = self.vars.iter().filter(|v| v.1 == w).map(|v| v.0.clone()).collect();
        if depth == 0 || self.rng.below(10) < 4 {
            if !candidates.is_empty() && self.rng.below(3) != 0 {
                return candidates[self.rng.below(candidates.len())].clone();
            }
            return random_value(self.rng, w).to_smtlib();
        }
        let d = depth - 1;
        match self.rng.below(7) {
            0..=3 => {
                let op = self.pick(&["fp.add", "fp.sub", "fp.mul", "fp.div"]);
                format!("({op} RNE {} {})", self.term(w, d), self.term(w, d))
            }
            4 => format!("(fp.neg {})", self.term(w, d)),
            5 => format!("(fp.abs {})", self.term(w, d)),
            _ => {
                let c = self.atom_of(w);
                format!("(ite {c} {} {})", self.term(w, d), self.term(w, d))
            }
        }
    }

    fn atom_of(&mut self, w: Width) -> String {
        let op = self.pick(&["fp.lt", "fp.leq", "fp.eq"]);
        format!("({op} {} {})", self.term(w, 0), self.term(w, 0))
    }
}
