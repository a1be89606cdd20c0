//! CSV and text rendering of sweeps, threshold tables and analysis reports.

use std::fmt::Write as _;
use std::io::Write;
use std::path::Path;

use crate::analysis::{ClassificationTable, LambdaRange, SweepRecord, VerificationReport};
use crate::error::{Error, Result};
use crate::measures::CorrelationReport;
use crate::swap::{Pair, SwapOutcome};

pub const CSV_HEADER: &str =
    "case,x,lambda,outcome,pair,probability,negativity,steering2,steering3,nonlocality,M,Lambda3";

const SIG_DIGITS: usize = 12;

/// Formats `v` like C's `%.12g`. Output never depends on the locale.
pub fn format_sig(v: f64) -> String {
    if v.is_nan() {
        return "nan".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if v == 0.0 {
        return if v.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    let sci = format!("{:.*e}", SIG_DIGITS - 1, v);
    let (mantissa, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("exponent digits");
    if exp < -4 || exp >= SIG_DIGITS as i32 {
        let m = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{m}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (SIG_DIGITS as i32 - 1 - exp) as usize;
        trim_zeros(&format!("{v:.decimals$}")).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn csv_table<R, F>(header: &[&str], rows: impl IntoIterator<Item = R>) -> String
where
    R: IntoIterator<Item = F>,
    F: AsRef<[u8]>,
{
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("writing to a Vec");
    for row in rows {
        w.write_record(row).expect("writing to a Vec");
    }
    String::from_utf8(w.into_inner().expect("flushing a Vec")).expect("UTF-8 output")
}

fn record_fields(r: &SweepRecord) -> Vec<String> {
    let mut f = vec![
        r.case.clone(),
        r.x.map(format_sig).unwrap_or_default(),
        format_sig(r.lambda),
        r.outcome.to_string(),
        r.pair.code().to_string(),
    ];
    f.extend(
        [r.probability, r.negativity, r.steering2, r.steering3, r.nonlocality, r.m, r.lambda3].map(format_sig),
    );
    f
}

pub fn csv_string(records: &[SweepRecord]) -> String {
    let header: Vec<&str> = CSV_HEADER.split(',').collect();
    csv_table(&header, records.iter().map(record_fields))
}

pub fn write_csv(w: &mut impl Write, records: &[SweepRecord]) -> std::io::Result<()> {
    w.write_all(csv_string(records).as_bytes())
}

/// Parses CSV produced by [`write_csv`].
pub fn parse_csv(text: &str) -> Result<Vec<SweepRecord>> {
    let bad = |msg: String| Error::BadParam(msg);
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let header = reader.headers().map_err(|e| bad(e.to_string()))?;
    if header.iter().collect::<Vec<_>>().join(",") != CSV_HEADER {
        return Err(bad("missing or unexpected CSV header".into()));
    }
    let mut out = Vec::new();
    for row in reader.records() {
        let row = row.map_err(|e| bad(e.to_string()))?;
        let line = row.position().map(|p| p.line()).unwrap_or(0);
        let field = |k: usize| row.get(k).unwrap_or("");
        let num = |k: usize| -> Result<f64> {
            field(k)
                .parse()
                .map_err(|_| bad(format!("line {line}: '{}' is not a number", field(k))))
        };
        out.push(SweepRecord {
            case: field(0).to_string(),
            x: if field(1).is_empty() { None } else { Some(num(1)?) },
            lambda: num(2)?,
            outcome: field(3)
                .parse()
                .map_err(|_| bad(format!("line {line}: bad outcome '{}'", field(3))))?,
            pair: field(4).parse()?,
            probability: num(5)?,
            negativity: num(6)?,
            steering2: num(7)?,
            steering3: num(8)?,
            nonlocality: num(9)?,
            m: num(10)?,
            lambda3: num(11)?,
        });
    }
    Ok(out)
}

/// Writes `contents` to `path` through a temporary file in the same
/// directory, so a failed run leaves no partial output.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents)?;
    tmp.flush()?;
    tmp.persist(path).map_err(|e| Error::Io(e.error))?;
    Ok(())
}

fn flag(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

pub fn thresholds_text(t: &ClassificationTable) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "case {}  grid {} points on [{}, {}]  tol {:e}", t.case, t.grid.count, t.grid.start, t.grid.stop, t.tol);
    let _ = writeln!(s, "{:<6}{:<13}{}", "pair", "measure", "range");
    for c in &t.cells {
        let _ = writeln!(s, "{:<6}{:<13}{}", c.pair.code(), c.measure.name(), c.range);
    }
    s
}

pub fn thresholds_csv(t: &ClassificationTable) -> String {
    let x = t.case.x().map(format_sig).unwrap_or_default();
    let mut rows: Vec<Vec<String>> = Vec::new();
    for c in &t.cells {
        let head = [t.case.label().to_string(), x.clone(), c.pair.code().to_string(), c.measure.name().to_string()];
        let mut push = |tail: [String; 5]| rows.push(head.iter().cloned().chain(tail).collect());
        match &c.range {
            LambdaRange::Never => push(["never", "", "", "", ""].map(String::from)),
            LambdaRange::Whole => push(["whole", "0", "false", "1", "true"].map(String::from)),
            LambdaRange::Intervals(v) => {
                for i in v {
                    push([
                        "interval".into(),
                        format_sig(i.lo.value),
                        i.lo.inclusive.to_string(),
                        format_sig(i.hi.value),
                        i.hi.inclusive.to_string(),
                    ]);
                }
            }
        }
    }
    csv_table(
        &["case", "x", "pair", "measure", "kind", "lo", "lo_inclusive", "hi", "hi_inclusive"],
        rows,
    )
}

fn report_cells(r: &CorrelationReport) -> [f64; 6] {
    [r.negativity, r.steering2, r.steering3, r.nonlocality, r.m, r.lambda3]
}

pub fn analyze_text(label: &str, outcomes: &[(SwapOutcome, Option<[CorrelationReport; 3]>)]) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "POVM '{label}' with {} outcomes", outcomes.len());
    for (o, reports) in outcomes {
        let _ = writeln!(s, "\noutcome {}  probability {}", o.outcome_index + 1, format_sig(o.probability));
        let Some(reports) = reports else {
            let _ = writeln!(s, "  degenerate outcome, no conditional states");
            continue;
        };
        let _ = writeln!(
            s,
            "  {:<5}{:>14}{:>14}{:>14}{:>14}  {:<10}{:<10}{}",
            "pair", "negativity", "steering3", "nonlocality", "bell", "entangled", "steerable", "nonlocal"
        );
        for (pair, r) in Pair::ALL.iter().zip(reports) {
            let _ = writeln!(
                s,
                "  {:<5}{:>14.9}{:>14.9}{:>14.9}{:>14.9}  {:<10}{:<10}{}",
                pair.code(),
                r.negativity,
                r.steering3,
                r.nonlocality,
                r.bell_value,
                flag(r.entangled),
                flag(r.steerable),
                flag(r.nonlocal)
            );
        }
    }
    s
}

pub fn analyze_csv(label: &str, outcomes: &[(SwapOutcome, Option<[CorrelationReport; 3]>)]) -> String {
    let mut rows: Vec<Vec<String>> = Vec::new();
    for (o, reports) in outcomes {
        for (k, pair) in Pair::ALL.iter().enumerate() {
            let mut row = vec![
                label.to_string(),
                (o.outcome_index + 1).to_string(),
                pair.code().to_string(),
                format_sig(o.probability),
            ];
            match reports {
                Some(r) => {
                    row.extend(report_cells(&r[k]).map(format_sig));
                    row.extend([r[k].entangled, r[k].steerable, r[k].nonlocal].map(|b| b.to_string()));
                }
                None => {
                    row.extend(["nan"; 6].map(String::from));
                    row.extend([""; 3].map(String::from));
                }
            }
            rows.push(row);
        }
    }
    csv_table(
        &[
            "povm", "outcome", "pair", "probability", "negativity", "steering2", "steering3", "nonlocality", "M",
            "Lambda3", "entangled", "steerable", "nonlocal",
        ],
        rows,
    )
}

pub fn verify_text(reports: &[VerificationReport]) -> String {
    let mut s = String::new();
    for r in reports {
        let status = if r.passed() { "PASS" } else { "FAIL" };
        let _ = writeln!(
            s,
            "{status} case {}  grid {}  max deviation {:.3e}",
            r.case,
            r.grid.count,
            r.max_deviation()
        );
        for d in &r.deviations {
            let mark = if d.max_abs < r.tol { " " } else { "!" };
            let _ = writeln!(
                s,
                "  {mark} pair {}  {:<12} {:.3e}  at lambda {} outcome {}",
                d.pair.code(),
                d.quantity.name(),
                d.max_abs,
                format_sig(d.at_lambda),
                d.at_outcome
            );
        }
        if r.probability_failures > 0 {
            let _ = writeln!(s, "  ! {} outcome probabilities differ from 1/4", r.probability_failures);
        }
    }
    s
}

pub fn verify_csv(reports: &[VerificationReport]) -> String {
    let rows = reports.iter().flat_map(|r| {
        let x = r.case.x().map(format_sig).unwrap_or_default();
        r.deviations.iter().map(move |d| {
            vec![
                r.case.label().to_string(),
                x.clone(),
                d.pair.code().to_string(),
                d.quantity.name().to_string(),
                format_sig(d.max_abs),
                format_sig(d.at_lambda),
                d.at_outcome.to_string(),
                (d.max_abs < r.tol).to_string(),
            ]
        })
    });
    csv_table(&["case", "x", "pair", "quantity", "max_deviation", "lambda", "outcome", "pass"], rows)
}
