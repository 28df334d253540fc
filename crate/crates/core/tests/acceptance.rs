//! Acceptance checks, one line per criterion. Runs without the libtest
//! harness so the PASS/FAIL lines always reach the output.

mod common;

use std::os::unix::fs::PermissionsExt;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use fpsat::fp::{FpValue, Width};
use fpsat::harness::combined::{run_combined, CombinedConfig, CombinedVerdict, Source};
use fpsat::harness::Problem;
use fpsat::objective::{atom_distance, semantic_eval, theta};
use fpsat::optimize::{splitmix64_next, Algorithm, Xoshiro256Plus};
use fpsat::portfolio::{verify_model, PortfolioConfig, Verdict};
use fpsat::smtlib::CmpOp;

use common::{corpus_dir, corpus_files, is_sat_instance, random_assignment, random_value, structured, FormulaGen};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn load(path: &Path) -> Problem {
    Problem::load(path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

fn quadratic_reproduction() -> Outcome {
    let p = load(&corpus_dir().join("sat_quadratic_chain.smt2"));
    let mut slowest = Duration::ZERO;
    for seed in 0..20 {
        let cfg = PortfolioConfig {
            seed,
            ..Default::default()
        };
        let t0 = Instant::now();
        let out = p.solve(&cfg).map_err(|e| e.to_string())?;
        let took = t0.elapsed();
        slowest = slowest.max(took);
        let Verdict::Sat(m) = &out.verdict else {
            return Err(format!("seed {seed}: unknown"));
        };
        ensure(verify_model(&p.formula, m) == Ok(true), || format!("seed {seed}: model fails"))?;
        let x = m.get("x").unwrap().to_f64() as f32;
        let t = -1.0f32 * ((x + 2.0) * (x + 2.0)) + -2.0;
        ensure(t >= -2.0, || format!("seed {seed}: t({x}) = {t}"))?;
        ensure(took < Duration::from_secs(5), || format!("seed {seed}: {took:?}"))?;
    }
    Ok(format!("20/20 seeds SAT, slowest {:.3}s", slowest.as_secs_f64()))
}

fn check_theta_pair(a: FpValue, b: FpValue) -> Result<(), String> {
    let t = theta(a, b);
    let ok = t >= 0.0
        && t == theta(b, a)
        && (t != 0.0 || a.to_f64() == b.to_f64())
        && (!(a.is_nan() || b.is_nan()) || t > 0.0);
    ensure(ok, || format!("theta({a}, {b}) = {t}"))
}

fn theta_properties() -> Outcome {
    let t0 = Instant::now();
    let mut rng = Xoshiro256Plus::from_seed(0x7e7a);
    let mut pairs = 0u64;
    for w in [Width::Binary32, Width::Binary64] {
        let set = structured(w);
        for &a in &set {
            for &b in &set {
                check_theta_pair(a, b)?;
                pairs += 1;
            }
        }
        for i in 0..1_000_000 {
            let (a, b) = if i % 2 == 0 {
                (random_value(&mut rng, w), random_value(&mut rng, w))
            } else {
                (
                    FpValue::from_bits(w, rng.next_u64()),
                    FpValue::from_bits(w, rng.next_u64()),
                )
            };
            check_theta_pair(a, b)?;
            pairs += 1;
        }
    }
    let took = t0.elapsed();
    ensure(took < Duration::from_secs(30), || format!("took {took:?}"))?;
    Ok(format!("{pairs} pairs, 0 failures, {:.1}s", took.as_secs_f64()))
}

fn requirement_fuzz() -> Outcome {
    let t0 = Instant::now();
    let mut rng = Xoshiro256Plus::from_seed(0xf022);
    let (mut sat_points, mut total) = (0u64, 0u64);
    for k in 0..100 {
        let text = FormulaGen::new(&mut rng).script();
        let p = Problem::from_text(&text).map_err(|e| format!("formula {k}: {e}\n{text}"))?;
        for _ in 0..10_000 {
            let x = random_assignment(&mut rng, p.program.vars());
            let g = p.program.evaluate(&x).unwrap();
            let truth = semantic_eval(&p.formula, &x).unwrap();
            ensure(g >= 0.0, || format!("G = {g} at {x:?}\n{text}"))?;
            ensure((g == 0.0) == truth, || format!("G = {g}, formula {truth} at {x:?}\n{text}"))?;
            sat_points += truth as u64;
            total += 1;
        }
    }
    let took = t0.elapsed();
    ensure(took < Duration::from_secs(300), || format!("took {took:?}"))?;
    Ok(format!(
        "100 formulas x 10^4 points, {sat_points}/{total} satisfying, 0 counterexamples, {:.1}s",
        took.as_secs_f64()
    ))
}

fn nan_negation() -> Outcome {
    let mut cases = 0;
    for w in [Width::Binary32, Width::Binary64] {
        let set = structured(w);
        for op in CmpOp::ALL {
            for negated in [false, true] {
                for &a in &set {
                    for &b in &set {
                        let truth = op.holds(a.to_f64(), b.to_f64()) != negated;
                        let d = atom_distance(op, negated, a, b);
                        ensure((d == 0.0) == truth && d >= 0.0, || {
                            format!("{op:?} negated={negated} {a} {b}: d = {d}")
                        })?;
                        cases += 1;
                    }
                }
            }
        }
    }
    Ok(format!("{cases} cases, 0 failures"))
}

struct Trace {
    seed: u64,
    splitmix: [u64; 10],
    raw: [u64; 10],
    doubles: [f64; 10],
}

const TRACES: [Trace; 3] = [
    Trace {
        seed: 0,
        splitmix: [
            0xe220a8397b1dcdaf, 0x6e789e6aa1b965f4, 0x06c45d188009454f, 0xf88bb8a8724c81ec, 0x1b39896a51a8749b,
            0x53cb9f0c747ea2ea, 0x2c829abe1f4532e1, 0xc584133ac916ab3c, 0x3ee5789041c98ac3, 0xf3b8488c368cb0a6,
        ],
        raw: [
            0xdaac60e1ed6a4f9b, 0x3156a1da0dc08435, 0xf9ba3e3285d046ab, 0x4fd194611dba7b01, 0x40b78599c31791bf,
            0x03b1dd310503d6f4, 0xb238d3a721d5092b, 0x11017bba8a0f8adf, 0xa6a988bed1f59149, 0xdb4000fb8d550622,
        ],
        doubles: [
            0.8541927863674711, 0.19272815297677148, 0.9754980920168359, 0.3117916810130995, 0.2528003216167163,
            0.014432739703820419, 0.6961796076810353, 0.06642888359243504, 0.651024386012031, 0.8564453710690323,
        ],
    },
    Trace {
        seed: 42,
        splitmix: [
            0xbdd732262feb6e95, 0x28efe333b266f103, 0x47526757130f9f52, 0x581ce1ff0e4ae394, 0x09bc585a244823f2,
            0xde4431fa3c80db06, 0x37e9671c45376d5d, 0xccf635ee9e9e2fa4, 0x5705b8770b3d7dd5, 0x9e54d738297f77ae,
        ],
        raw: [
            0x15f414253e365229, 0x4f771f08f4211387, 0x100492bd8828891e, 0x4e743fce495374ae, 0x0002d0bae53f7541,
            0x4d95b0309b62834a, 0x166d954e9d491ef0, 0x3a1ee212eb52573b, 0xdce029ea733f8136, 0x85f3f89092a19882,
        ],
        doubles: [
            0.08575559529546095, 0.31041139572710486, 0.06256978156321413, 0.306461322653673, 4.295885923766285e-05,
            0.3030653113049855, 0.08760960740372459, 0.2270337387265695, 0.8627954671276239, 0.5232539513550648,
        ],
    },
    Trace {
        seed: 0xdeadbeefcafebabe,
        splitmix: [
            0x0d7d93560d1929d2, 0x491dfb740e50d43f, 0x42722bf4473e5e7d, 0xd6ca8a0790fffc45, 0xb2d3ab004cdb504b,
            0xb75625fc4e9510a6, 0x099454b898764be2, 0x796b308a7fe49981, 0xdf8a2671627e719f, 0xfe3ea9bc89c83321,
        ],
        raw: [
            0xe4481d5d9e192617, 0x77ba362081e4757d, 0xabc0ae6cdbf56738, 0x0efbce85a5a50424, 0x7f04bb42bb73eb70,
            0x225efe22e212b99f, 0x9b6bedf78fb76fab, 0x48b6b4f4709e5a66, 0xb7fc072282f02110, 0x7a8034aa49101c83,
        ],
        doubles: [
            0.8917253831442378, 0.46768511098515986, 0.6709088340539515, 0.05852976572863966, 0.49616594676213277,
            0.13426197387350214, 0.6071156243703776, 0.2840378853585376, 0.7186893901115927, 0.47851876408918803,
        ],
    },
];

fn prng_traces() -> Outcome {
    for t in &TRACES {
        let mut state = t.seed;
        for (i, &want) in t.splitmix.iter().enumerate() {
            let (v, next) = splitmix64_next(state);
            state = next;
            ensure(v == want, || format!("seed {:#x} splitmix[{i}] = {v:#018x}, want {want:#018x}", t.seed))?;
        }
        let mut r = Xoshiro256Plus::from_seed(t.seed);
        for (i, &want) in t.raw.iter().enumerate() {
            let v = r.next_u64();
            ensure(v == want, || format!("seed {:#x} xoshiro[{i}] = {v:#018x}, want {want:#018x}", t.seed))?;
        }
        let mut r = Xoshiro256Plus::from_seed(t.seed);
        for (i, &want) in t.doubles.iter().enumerate() {
            let v = r.next_f64();
            ensure(v.to_bits() == want.to_bits(), || format!("seed {:#x} double[{i}] = {v}, want {want}", t.seed))?;
        }
    }
    Ok("3 seeds x (splitmix64, xoshiro256+ raw, doubles) x 10 outputs match".into())
}

fn portfolio_contracts() -> Outcome {
    let max_evals = 100_000;
    let mut cfg = PortfolioConfig {
        instances: Algorithm::ALL.iter().map(|&a| (a, 2)).collect(),
        seed: 1,
        ..Default::default()
    };
    cfg.optimizer.max_evals = max_evals;
    let mut sat = 0;
    let mut max_after = 0;
    for path in corpus_files() {
        let p = load(&path);
        let name = path.file_name().unwrap().to_string_lossy().into_owned();
        let before = p.program.eval_count();
        let out = p.solve(&cfg).map_err(|e| format!("{name}: {e}"))?;
        let used = p.program.eval_count() - before;
        let counted = out.total_evals() + out.verdict.is_sat() as u64;
        ensure(used == counted, || format!("{name}: program counted {used}, stats {counted}"))?;
        if let Verdict::Sat(m) = &out.verdict {
            sat += 1;
            ensure(verify_model(&p.formula, m) == Ok(true), || format!("{name}: model fails"))?;
            ensure(p.program.evaluate(&m.to_vector()) == Ok(0.0), || format!("{name}: G(model) != 0"))?;
        }
        for s in &out.instances {
            ensure(s.evals <= max_evals, || format!("{name}: {} used {} evals", s.id, s.evals))?;
            ensure(s.evals_after_win <= 1, || format!("{name}: {} ran {} evals after the win", s.id, s.evals_after_win))?;
            max_after = max_after.max(s.evals_after_win);
        }
        let o = Command::new(env!("CARGO_BIN_EXE_fpsat"))
            .args(["solve", path.to_str().unwrap(), "--model", "--max-evals", "100000"])
            .output()
            .unwrap();
        let text = String::from_utf8_lossy(&o.stdout);
        ensure(!text.contains("unsat"), || format!("{name}: output mentions unsat"))?;
    }
    Ok(format!(
        "{sat} SAT verified, budgets respected, max {max_after} eval(s) after a win, no unsat output"
    ))
}

fn determinism() -> Outcome {
    let mut runs = 0;
    for path in corpus_files() {
        let p = load(&path);
        for a in Algorithm::ALL {
            let mut cfg = PortfolioConfig::single(a, 7);
            cfg.optimizer.max_evals = 20_000;
            let first = p.solve(&cfg).map_err(|e| e.to_string())?;
            for _ in 1..5 {
                let again = p.solve(&cfg).map_err(|e| e.to_string())?;
                ensure(
                    again.verdict == first.verdict && again.total_evals() == first.total_evals(),
                    || format!("{} with {a}: runs differ", path.display()),
                )?;
                runs += 1;
            }
        }
    }
    Ok(format!("{runs} repeat runs identical to their first run"))
}

fn bench_tables() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let csv_path = dir.path().join("bench.csv");
    let t0 = Instant::now();
    let o = Command::new(env!("CARGO_BIN_EXE_fpsat"))
        .args(["bench", corpus_dir().to_str().unwrap(), "--repeat", "10", "--csv"])
        .arg(&csv_path)
        .output()
        .unwrap();
    let took = t0.elapsed();
    ensure(o.status.success(), || String::from_utf8_lossy(&o.stderr).into_owned())?;
    let tables = String::from_utf8_lossy(&o.stdout);
    for line in tables.lines().filter(|l| !l.is_empty()) {
        println!("    {line}");
    }
    let mut rdr = csv::Reader::from_path(&csv_path).unwrap();
    let rows: Vec<csv::StringRecord> = rdr.records().map(Result::unwrap).collect();
    ensure(rows.len() == 120, || format!("{} rows", rows.len()))?;
    let (mut sat_ok, mut unk_ok, mut wins) = (0, 0, 0);
    for r in &rows {
        let sat_file = is_sat_instance(Path::new(&r[0]));
        match (&r[1], sat_file) {
            ("SAT", true) => sat_ok += 1,
            ("UNKNOWN", false) => unk_ok += 1,
            (v, _) => return Err(format!("{} -> {v}", &r[0])),
        }
        wins += (!r[3].is_empty()) as usize;
    }
    ensure(wins == sat_ok, || "winner missing on a SAT row".into())?;
    ensure(took < Duration::from_secs(600), || format!("took {took:?}"))?;
    ensure(tables.contains("fastest optimizer") && tables.contains("avg SAT (s)"), || "tables missing".into())?;
    Ok(format!(
        "10 runs: {sat_ok}/80 SAT, {unk_ok}/40 UNKNOWN, {:.1}s total",
        took.as_secs_f64()
    ))
}

fn stub(dir: &Path, name: &str, body: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, format!("#!/bin/sh\n{body}\n")).unwrap();
    std::fs::set_permissions(&p, std::fs::Permissions::from_mode(0o755)).unwrap();
    p.display().to_string()
}

fn combined_race() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let cfg = |external: String, max_evals: u64| {
        let mut portfolio = PortfolioConfig::default();
        portfolio.optimizer.max_evals = max_evals;
        CombinedConfig {
            portfolio,
            external,
            timeout: Duration::from_secs(60),
        }
    };
    let t0 = Instant::now();
    let slow = stub(dir.path(), "slow_sat", "sleep 10\necho sat");
    let out = run_combined(&corpus_dir().join("sat_quadratic_chain.smt2"), &cfg(slow, 1_000_000))
        .map_err(|e| e.to_string())?;
    ensure(
        out.verdict == CombinedVerdict::Sat && out.source == Source::Portfolio && t0.elapsed() < Duration::from_secs(5),
        || format!("slow-sat: {out:?}"),
    )?;
    let fast = stub(dir.path(), "fast_unsat", "echo unsat");
    let out = run_combined(&corpus_dir().join("unsat_disjoint_bounds.smt2"), &cfg(fast, u64::MAX))
        .map_err(|e| e.to_string())?;
    ensure(
        out.verdict == CombinedVerdict::Unsat && out.source == Source::External,
        || format!("fast-unsat: {out:?}"),
    )?;
    let crash = stub(dir.path(), "crash", "kill -SEGV $$");
    let out = run_combined(&corpus_dir().join("unsat_abs_negative.smt2"), &cfg(crash, 20_000))
        .map_err(|e| e.to_string())?;
    ensure(
        out.verdict == CombinedVerdict::Unknown && out.source == Source::Portfolio && out.external_crashed,
        || format!("crash: {out:?}"),
    )?;
    Ok("slow-sat -> SAT (portfolio), fast-unsat -> UNSAT (external), crash -> UNKNOWN (portfolio only)".into())
}

fn cnf_equivalence() -> Outcome {
    let mut rng = Xoshiro256Plus::from_seed(0xc4f);
    let files = corpus_files();
    for path in &files {
        let p = load(path);
        let cnf = p.clauses.to_term();
        for _ in 0..1000 {
            let x = random_assignment(&mut rng, p.program.vars());
            let a = semantic_eval(&p.formula, &x).unwrap();
            let b = semantic_eval(&cnf, &x).unwrap();
            ensure(a == b, || format!("{}: mismatch at {x:?}", path.display()))?;
        }
    }
    Ok(format!("{} formulas x 1000 points, 0 mismatches", files.len()))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("quadratic instance SAT across 20 seeds", quadratic_reproduction),
        ("theta properties", theta_properties),
        ("objective zero iff formula true (fuzz)", requirement_fuzz),
        ("NaN-aware negated comparisons", nan_negation),
        ("PRNG reference traces", prng_traces),
        ("portfolio contracts", portfolio_contracts),
        ("single-instance determinism", determinism),
        ("bench tables at desk scale", bench_tables),
        ("combined-mode race", combined_race),
        ("CNF equivalence on corpus", cnf_equivalence),
    ];
    let mut failed = 0;
    for (i, (title, f)) in criteria.iter().enumerate() {
        let result = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        match result {
            Ok(detail) => println!("criterion {:>2} PASS  {title}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {title}: {detail}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
