use serde_json::{json, Value};

use tower_core::laurent::{chain_expand, principal_f, LaurentSeries, PrincipalPart, SeriesError};
use tower_core::points::{affine_counts, asymptotics_table, split_check, SplitReport, Verdict, BOUNDARY_F8};
use tower_core::rami::{
    count_ramified, genus, ledger, zero_sequence_count, GenusMethod, IndexSequence, LedgerEntry, Origin, StepClass,
    Symbol,
};
use tower_core::zeta::{boundary_count, genus_crosscheck, ZetaError};
use tower_core::{Execution, FieldElement};

use crate::output::{csv, emit, json, num, text_table};
use crate::{verify, Cli, CliError, Command, Format};

pub fn run(cli: &Cli) -> Result<(), CliError> {
    let exec = Execution::default();
    let content = match &cli.command {
        Command::Verify { imax, precision } => return verify::run(cli, *imax, *precision, exec),
        Command::Table { imax } => table(cli.format, *imax, exec)?,
        Command::Points { imax, k } => points(cli.format, *imax, *k, exec)?,
        Command::Genus { imax } => genus_rows(cli.format, *imax),
        Command::Nseq { level } => nseq(cli.format, *level),
        Command::Zeta { level, genus } => zeta(cli.format, *level, *genus, exec)?,
        Command::Expand { seq, precision } => expand(cli.format, seq, *precision)?,
    };
    emit(cli, &content)
}

fn opt(x: &Option<impl ToString>) -> String {
    x.as_ref().map(ToString::to_string).unwrap_or_default()
}

fn table(format: Format, imax: usize, exec: Execution) -> Result<String, CliError> {
    let t = asymptotics_table(imax, exec).map_err(CliError::usage)?;
    let header = ["i", "n_i", "genus_hurwitz", "genus_closed", "N8", "ratio_num", "ratio_den", "ratio_float"];
    let rows: Vec<Vec<String>> = t
        .rows
        .iter()
        .map(|r| {
            vec![
                r.i.to_string(),
                r.n_i.to_string(),
                r.genus_hurwitz.to_string(),
                r.genus_closed.to_string(),
                r.n8.to_string(),
                opt(&r.ratio_num),
                opt(&r.ratio_den),
                opt(&r.ratio_float),
            ]
        })
        .collect();
    Ok(match format {
        Format::Csv => csv(&header, &rows),
        Format::Json => json(&t.rows),
        Format::Text => {
            let b = &t.bounds;
            let mut s = text_table(&header, &rows);
            s += &format!("\nDrinfeld-Vladuts bound sqrt(8) - 1 = {:.6}\n", b.drinfeld_vladuts);
            s += &format!("Zink bound at p = 2: {}\n", b.zink);
            s += &format!("Kummer tower bound 2/(q - 2) = {}\n", b.kummer);
            s += &format!(
                "tower limit {} ({} the Zink bound)\n",
                b.tower_limit,
                if b.limit_equals_zink { "equals" } else { "differs from" }
            );
            s
        }
    })
}

fn verdict_text(v: &Verdict) -> String {
    match v {
        Verdict::Pass => "pass".into(),
        Verdict::Fail(why) => format!("fail: {why}"),
        Verdict::NotApplicable => "not applicable".into(),
    }
}

fn split_json(r: &SplitReport) -> Value {
    let clauses: Vec<Value> = r
        .clauses
        .iter()
        .map(|(c, v)| {
            let (verdict, detail) = match v {
                Verdict::Pass => ("pass", None),
                Verdict::Fail(d) => ("fail", Some(d.clone())),
                Verdict::NotApplicable => ("not_applicable", None),
            };
            json!({ "clause": c.label(), "verdict": verdict, "detail": detail })
        })
        .collect();
    json!({ "k": r.k, "clauses": clauses })
}

fn points(format: Format, imax: usize, k: u32, exec: Execution) -> Result<String, CliError> {
    let split = split_check(k).map_err(CliError::usage)?;
    let affine = if imax == 0 { Vec::new() } else { affine_counts(imax, k, exec).map_err(CliError::usage)? };
    // boundary points are known over F_8 at every level and over any field
    // up to level 2; elsewhere the total is a lower bound
    let rows: Vec<(usize, u64, u64, bool)> = affine
        .iter()
        .enumerate()
        .map(|(idx, &a)| {
            let i = idx + 1;
            let (boundary, exact) = if k == 3 {
                (BOUNDARY_F8, true)
            } else if i <= 2 {
                (boundary_count(i, k).expect("levels 1 and 2") as u64, true)
            } else {
                (2, false)
            };
            (i, a, a + boundary, exact)
        })
        .collect();
    let header = ["i", "k", "affine", "total", "exact"];
    let cells: Vec<Vec<String>> = rows
        .iter()
        .map(|&(i, a, t, exact)| vec![i.to_string(), k.to_string(), a.to_string(), t.to_string(), exact.to_string()])
        .collect();
    Ok(match format {
        Format::Csv => csv(&header, &cells),
        Format::Json => {
            let levels: Vec<Value> = rows
                .iter()
                .map(|&(i, a, t, exact)| json!({ "i": i, "affine": a, "total": t, "exact": exact }))
                .collect();
            json(&json!({ "k": k, "levels": levels, "split": split_json(&split) }))
        }
        Format::Text => {
            let mut s = format!("chains over F_2^{k}\n");
            let text_rows: Vec<Vec<String>> = rows
                .iter()
                .map(|&(i, a, t, exact)| {
                    vec![i.to_string(), a.to_string(), if exact { t.to_string() } else { format!(">= {t}") }]
                })
                .collect();
            s += &text_table(&["i", "affine", "points"], &text_rows);
            s += "\nsplitting of F_2^k - F_2 in the first cover\n";
            for (c, v) in &split.clauses {
                s += &format!("  {:<17} {}\n", c.label(), verdict_text(v));
            }
            s
        }
    })
}

fn genus_rows(format: Format, imax: usize) -> String {
    let header = ["i", "n_i", "genus_hurwitz", "genus_closed"];
    let rows: Vec<Vec<String>> = (0..=imax)
        .map(|i| {
            vec![
                i.to_string(),
                count_ramified(i).to_string(),
                genus(i, GenusMethod::Hurwitz).to_string(),
                genus(i, GenusMethod::Closed).to_string(),
            ]
        })
        .collect();
    match format {
        Format::Csv => csv(&header, &rows),
        Format::Json => {
            let v: Vec<Value> = rows
                .iter()
                .map(|r| json!({ "i": num(&r[0]), "n_i": num(&r[1]), "genus_hurwitz": num(&r[2]), "genus_closed": num(&r[3]) }))
                .collect();
            json(&v)
        }
        Format::Text => text_table(&header, &rows),
    }
}

fn origin_name(e: &LedgerEntry) -> String {
    match e.origin {
        Origin::Zero { level, .. } => {
            let mut s = format!("zero of x_{level}");
            if e.tail_j > 0 {
                s += &format!(" + ∞^{}", e.tail_j);
            }
            s
        }
        Origin::Special(chain) => format!("({},∞,...,∞)", chain.sequence(0).first()),
    }
}

fn step_name(c: StepClass) -> &'static str {
    if c.is_ramified() {
        "ramified"
    } else {
        "unramified"
    }
}

fn nseq(format: Format, level: usize) -> String {
    let entries = ledger(level);
    let header = ["origin", "tail_j", "sequences", "mult", "points", "next"];
    let rows: Vec<Vec<String>> = entries
        .iter()
        .map(|e| {
            vec![
                origin_name(e),
                e.tail_j.to_string(),
                e.sequences.to_string(),
                e.mult.to_string(),
                e.points().to_string(),
                step_name(e.next).into(),
            ]
        })
        .collect();
    let n = count_ramified(level);
    match format {
        Format::Csv => csv(&header, &rows),
        Format::Json => {
            let classes: Vec<Value> = rows
                .iter()
                .map(|r| {
                    json!({
                        "origin": r[0], "tail_j": num(&r[1]), "sequences": num(&r[2]),
                        "mult": num(&r[3]), "points": num(&r[4]), "next": r[5],
                    })
                })
                .collect();
            json(&json!({
                "level": level,
                "zero_sequences": num(zero_sequence_count(level)),
                "n_level": num(&n),
                "classes": classes,
            }))
        }
        Format::Text => {
            let mut s = format!("boundary classes of C_{level}\n");
            s += &text_table(&header, &rows);
            s += &format!("\nzero sequences of x_{level}: {}\n", zero_sequence_count(level));
            s += &format!("n_{level} = {n}\n");
            s
        }
    }
}

fn zeta(format: Format, level: usize, g: Option<usize>, exec: Execution) -> Result<String, CliError> {
    let report = match genus_crosscheck(level, g, exec) {
        Ok(r) => r,
        Err(e @ ZetaError::LevelOutOfRange(_)) => return Err(CliError::usage(e)),
        Err(e) => {
            eprintln!("level {level}: {e}");
            return Err(CliError::Failed);
        }
    };
    Ok(match format {
        Format::Csv => return Err(CliError::usage("zeta has no CSV form; use --format json or text")),
        Format::Json => json(&json!({
            "q": report.q,
            "g": report.g,
            "coeffs": report.l_polynomial.coeffs.iter().map(num).collect::<Vec<_>>(),
            "roots_abs": report.roots_abs,
            "predicted_counts": report.predicted_counts.iter().map(num).collect::<Vec<_>>(),
        })),
        Format::Text => {
            let mut s = format!("C_{level} over F_{}, genus {}\n", report.q, report.g);
            s += &format!("L(T) = {}\n", report.l_polynomial);
            let counts: Vec<String> = report.counts.iter().map(ToString::to_string).collect();
            s += &format!("N_1..N_{} = {}\n", counts.len(), counts.join(", "));
            s += &format!("max | |alpha| - sqrt(q) | = {:.3e}\n", report.max_root_deviation);
            s
        }
    })
}

fn coeff_name(c: FieldElement) -> &'static str {
    Symbol::from_f4_bits(c.bits()).map(Symbol::ascii).unwrap_or("?")
}

fn series_json(j: usize, s: &LaurentSeries) -> Value {
    let terms: Vec<Value> = s.terms().map(|(o, c)| json!([o, coeff_name(c)])).collect();
    json!({ "j": j, "min_order": s.min_order(), "precision": s.precision(), "terms": terms })
}

fn principal_json(j: usize, f: &PrincipalPart) -> Value {
    let terms: Vec<Value> = f.terms().map(|(e, c)| json!([e, coeff_name(c)])).collect();
    json!({ "j": j, "terms": terms })
}

fn expand(format: Format, seq: &str, precision: i64) -> Result<String, CliError> {
    let seq: IndexSequence = seq.parse().map_err(CliError::usage)?;
    let m = match chain_expand(&seq, precision) {
        Ok(m) => m,
        Err(e @ SeriesError::InsufficientPrecision { .. }) => {
            eprintln!("{seq}: {e}");
            return Err(CliError::Failed);
        }
        Err(e) => return Err(CliError::usage(e)),
    };
    let f: Vec<PrincipalPart> = (0..m.len()).map(|j| principal_f(&seq, j).expect("validated")).collect();
    Ok(match format {
        Format::Csv => return Err(CliError::usage("expand has no CSV form; use --format json or text")),
        Format::Json => json(&json!({
            "sequence": seq.entries().iter().map(|s| s.ascii()).collect::<Vec<_>>(),
            "precision": precision,
            "m": m.iter().enumerate().map(|(j, s)| series_json(j, s)).collect::<Vec<_>>(),
            "F": f.iter().enumerate().map(|(j, p)| principal_json(j, p)).collect::<Vec<_>>(),
        })),
        Format::Text => {
            let mut s = format!("expansions along {seq}, t = x_0 + a_0, known below order {precision}\n");
            for (j, (mj, fj)) in m.iter().zip(&f).enumerate() {
                s += &format!("m_{j} = {mj}\nF_{j} = {fj}\n");
            }
            s
        }
    })
}
