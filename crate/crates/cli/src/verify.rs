//! The `verify` suites. Each runs on its own thread; the report keeps the
//! fixed suite order and carries no timings, so identical configurations
//! give identical output.

use serde::Serialize;

use tower_core::gf2m::{ArtinSchreierSolver, FieldDescriptor};
use tower_core::laurent::{
    alternating_sequences, chain_expand, classify_step_symbolic, lemma31_decompose, lemma31_residual, principal_f,
    BTable,
};
use tower_core::points::{affine_counts, split_check};
use tower_core::rami::{
    classify_closed, count_ramified, count_ramified_closed, genus, pole_order_closed, zero_sequences, A0Class,
    GenusMethod,
};
use tower_core::zeta::genus_crosscheck;
use tower_core::Execution;

use crate::output::{emit, json};
use crate::{Cli, CliError, Format};

const GF2M_MAX_DEGREE: u32 = 12;
const LAURENT_MAX_LEVEL: usize = 8;
const LEMMA_EXHAUSTIVE_LEVEL: usize = 4;
const RAMI_MAX_LEVEL: usize = 30;
const GENUS_MAX_LEVEL: usize = 50;
const SPLIT_MAX_LEVEL: usize = 15;
const ZETA_MAX_LEVEL: usize = 2;

type Outcome = Result<String, String>;
type Suite = Box<dyn Fn() -> Outcome + Send + Sync>;

macro_rules! ensure {
    ($cond:expr, $($arg:tt)+) => {
        if !$cond {
            return Err(format!($($arg)+));
        }
    };
}

#[derive(Debug, Serialize)]
struct SuiteReport {
    suite: &'static str,
    passed: bool,
    detail: String,
}

fn cap(default: usize, imax: Option<usize>) -> usize {
    imax.map_or(default, |i| i.min(default))
}

fn gf2m_suite(exec: Execution) -> Outcome {
    let results = exec.map_range(1..u64::from(GF2M_MAX_DEGREE) + 1, |m| gf2m_degree(m as u32));
    for r in results {
        r?;
    }
    Ok(format!("exhaustive arithmetic and Artin-Schreier roots for m = 1..={GF2M_MAX_DEGREE}"))
}

fn gf2m_degree(m: u32) -> Result<(), String> {
    let f = FieldDescriptor::new(m, None).map_err(|e| e.to_string())?;
    let solver = ArtinSchreierSolver::new(f);
    let q = f.order() as u32;
    let g = f.generator();
    ensure!(g.multiplicative_order() == Some(u64::from(q) - 1), "m={m}: generator {g} is not primitive");
    let mut trace_zero = 0;
    for x in 0..q {
        if x != 0 {
            ensure!(f.mul_raw(x, f.inv_raw(x)) == 1, "m={m}: x·x^-1 != 1 at x={x:#b}");
        }
        ensure!(f.pow_raw(x, u64::from(q)) == x, "m={m}: x^q != x at x={x:#b}");
        let tr = f.trace_raw(x);
        ensure!(tr == f.trace_raw(f.square_raw(x)), "m={m}: trace not Frobenius invariant at {x:#b}");
        match solver.solve_raw(x) {
            Some(y) => {
                ensure!(tr == 0, "m={m}: root found for trace-one {x:#b}");
                ensure!(f.square_raw(y) ^ y == x, "m={m}: bad Artin-Schreier root for {x:#b}");
                ensure!(y & 1 == 0, "m={m}: root for {x:#b} is not the canonical one");
                trace_zero += 1;
            }
            None => ensure!(tr == 1, "m={m}: no root for trace-zero {x:#b}"),
        }
        // distributivity against a spread of second operands
        let y = f.pow_raw(g.bits(), u64::from(x) * 7 + 3);
        let z = f.pow_raw(g.bits(), u64::from(x) * 13 + 5);
        ensure!(f.mul_raw(x, y ^ z) == f.mul_raw(x, y) ^ f.mul_raw(x, z), "m={m}: distributivity fails at {x:#b}");
        ensure!(f.mul_raw(f.mul_raw(x, y), z) == f.mul_raw(x, f.mul_raw(y, z)), "m={m}: associativity fails at {x:#b}");
    }
    ensure!(trace_zero == q / 2, "m={m}: {trace_zero} trace-zero elements");
    Ok(())
}

fn laurent_suite(imax: Option<usize>, precision: i64) -> Outcome {
    let top = cap(LAURENT_MAX_LEVEL, imax);
    let mut parts = 0;
    for class in [A0Class::One, A0Class::Rho] {
        for seq in alternating_sequences(top, class) {
            let m = chain_expand(&seq, precision)
                .map_err(|e| format!("expansion along {seq} at precision {precision}: {e}"))?;
            for (j, mj) in m.iter().enumerate() {
                let pp = mj
                    .inv()
                    .and_then(|x| x.principal_part())
                    .map_err(|e| format!("1/m_{j} along {seq} at precision {precision}: {e}"))?;
                let f = principal_f(&seq, j).map_err(|e| e.to_string())?;
                ensure!(pp == f, "{seq} j={j}: principal part {pp} differs from recursion {f}");
                ensure!(f.is_two_linearized(), "{seq} j={j}: {f} is not 2-linearized");
                parts += 1;
            }
        }
    }

    let mut tables = 0;
    let f4 = FieldDescriptor::f4();
    for class in [A0Class::One, A0Class::Rho] {
        let base = usize::from(class == A0Class::Rho);
        for seq_level in 1..=cap(LEMMA_EXHAUSTIVE_LEVEL, imax) {
            for seq in alternating_sequences(seq_level, class) {
                for level in (base + 2..=seq_level).step_by(2) {
                    let slots: Vec<usize> = (base + 2..=level).step_by(2).collect();
                    for code in 0..4u64.pow(slots.len() as u32) {
                        let entries =
                            slots.iter().enumerate().map(|(n, &j)| (j, f4.element(code >> (2 * n) & 3).expect("F_4")));
                        let b = BTable::new(level, entries).map_err(|e| e.to_string())?;
                        let dec = lemma31_decompose(&b, &seq).map_err(|e| e.to_string())?;
                        ensure!(dec.b_star.bits() <= 1, "{seq}: B* = {} outside F_2", dec.b_star);
                        let r = lemma31_residual(&b, &dec, &seq).map_err(|e| e.to_string())?;
                        ensure!(r.is_zero(), "{seq} level {level} table {code}: residual {r}");
                        tables += 1;
                    }
                }
            }
        }
    }

    let mut steps = 0;
    for i in 1..=top {
        let class = A0Class::of_level(i);
        for seq in zero_sequences(i) {
            for t in 0..=i {
                let r = classify_step_symbolic(&seq, t).map_err(|e| e.to_string())?;
                ensure!(r.class == classify_closed(i, t, class), "{seq} t={t}: symbolic {:?} disagrees", r.class);
                let want = if t == 0 { 1 } else { pole_order_closed(i, t) };
                ensure!(r.order_before == want, "{seq} t={t}: ord {} instead of {want}", r.order_before);
                steps += 1;
            }
        }
    }
    Ok(format!("{parts} principal parts, {tables} reduction tables, {steps} classified steps (levels <= {top})"))
}

fn rami_suite(imax: Option<usize>) -> Outcome {
    let top = cap(RAMI_MAX_LEVEL, imax);
    for i in 1..=top {
        let (a, b) = (count_ramified(i), count_ramified_closed(i));
        ensure!(a == b, "n_{i}: ledger {a}, closed form {b}");
    }
    Ok(format!("ramified counts agree for levels 1..={top}"))
}

fn genus_suite(imax: Option<usize>) -> Outcome {
    let top = cap(GENUS_MAX_LEVEL, imax);
    for i in 0..=top {
        let (h, c) = (genus(i, GenusMethod::Hurwitz), genus(i, GenusMethod::Closed));
        ensure!(h == c, "g(C_{i}): Hurwitz {h}, closed {c}");
    }
    Ok(format!("Hurwitz sum equals the closed form for levels 0..={top}"))
}

fn points_suite(imax: Option<usize>, exec: Execution) -> Outcome {
    let report = split_check(3).map_err(|e| e.to_string())?;
    if let Some((c, v)) = report.clauses.iter().find(|(_, v)| *v != tower_core::points::Verdict::Pass) {
        return Err(format!("splitting clause '{}' over F_8: {v:?}", c.label()));
    }
    let top = cap(SPLIT_MAX_LEVEL, imax);
    if top > 0 {
        let counts = affine_counts(top, 3, exec).map_err(|e| e.to_string())?;
        for (idx, &n) in counts.iter().enumerate() {
            let i = idx + 1;
            ensure!(n == 6u64 << i, "level {i}: {n} affine F_8 chains, expected {}", 6u64 << i);
        }
    }
    Ok(format!("4 splitting clauses, 6·2^i affine chains for levels 1..={top}"))
}

fn zeta_suite(imax: Option<usize>, exec: Execution) -> Outcome {
    let top = cap(ZETA_MAX_LEVEL, imax);
    let mut parts = Vec::new();
    for level in 1..=top {
        let r = genus_crosscheck(level, None, exec).map_err(|e| format!("level {level}: {e}"))?;
        parts.push(format!("L_{level} = {}", r.l_polynomial));
    }
    if top >= 2 {
        ensure!(genus_crosscheck(2, Some(4), exec).is_err(), "level 2 accepted the wrong genus 4");
        parts.push("genus 4 rejected at level 2".into());
    }
    Ok(if parts.is_empty() { "no levels in range".into() } else { parts.join("; ") })
}

pub fn run(cli: &Cli, imax: Option<usize>, precision: i64, exec: Execution) -> Result<(), CliError> {
    let suites: [(&'static str, Suite); 6] = [
        ("gf2m", Box::new(move || gf2m_suite(exec))),
        ("laurent", Box::new(move || laurent_suite(imax, precision))),
        ("rami", Box::new(move || rami_suite(imax))),
        ("genus", Box::new(move || genus_suite(imax))),
        ("points", Box::new(move || points_suite(imax, exec))),
        ("zeta", Box::new(move || zeta_suite(imax, exec))),
    ];
    let outcomes: Vec<Outcome> = std::thread::scope(|s| {
        let handles: Vec<_> = suites.iter().map(|(_, f)| s.spawn(f)).collect();
        handles.into_iter().map(|h| h.join().unwrap_or_else(|_| Err("suite panicked".into()))).collect()
    });
    let reports: Vec<SuiteReport> = suites
        .iter()
        .zip(outcomes)
        .map(|((name, _), o)| match o {
            Ok(detail) => SuiteReport { suite: name, passed: true, detail },
            Err(detail) => SuiteReport { suite: name, passed: false, detail },
        })
        .collect();
    let passed = reports.iter().filter(|r| r.passed).count();
    let content = match cli.format {
        Format::Json => json(&serde_json::json!({ "passed": passed == reports.len(), "suites": reports })),
        Format::Text | Format::Csv => {
            let mut s = String::new();
            for r in &reports {
                s += &format!("{:<8} {}  {}\n", r.suite, if r.passed { "PASS" } else { "FAIL" }, r.detail);
            }
            s += &format!("{passed}/{} suites passed\n", reports.len());
            s
        }
    };
    emit(cli, &content)?;
    if passed == reports.len() {
        Ok(())
    } else {
        Err(CliError::Failed)
    }
}
