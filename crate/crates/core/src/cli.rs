//! Command-line front end. Exit codes: 0 success, 1 computation or
//! verification failure, 2 bad flags, 3 invalid POVM.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::analysis::{classify_table, sweep, verify, verify_against, Case, LambdaGrid, Pipeline, SweepConfig};
use crate::error::Error;
use crate::measures::{report, CorrelationReport, DEFAULT_TOL};
use crate::output;
use crate::povm::Povm;
use crate::swap::{run_swap, Pair};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INVALID_POVM: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "swapcorr", version, about = "Correlations generated by entanglement swapping with a general measurement")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Sweep lambda and write one CSV row per (lambda, outcome, pair).
    Sweep(SweepArgs),
    /// Lambda ranges in which each pair is entangled, steerable, nonlocal.
    Thresholds(ThresholdArgs),
    /// Run the protocol for a POVM read from JSON, or for a preset family.
    Analyze(AnalyzeArgs),
    /// Compare closed forms with the numeric pipeline for all presets.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum CaseArg {
    #[value(name = "I")]
    I,
    #[value(name = "II")]
    II,
    #[value(name = "III")]
    III,
    #[value(name = "IV")]
    IV,
}

impl CaseArg {
    fn name(self) -> &'static str {
        match self {
            CaseArg::I => "I",
            CaseArg::II => "II",
            CaseArg::III => "III",
            CaseArg::IV => "IV",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, ValueEnum)]
pub enum Format {
    #[default]
    Csv,
    Text,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, ValueEnum)]
pub enum PipelineArg {
    #[default]
    Numeric,
    Analytic,
    Both,
}

#[derive(Args, Debug, Clone)]
pub struct GridArgs {
    #[arg(long, default_value_t = 0.0)]
    pub lambda_start: f64,
    #[arg(long, default_value_t = 1.0)]
    pub lambda_stop: f64,
    /// Number of grid points, endpoints included.
    #[arg(long, default_value_t = 101)]
    pub grid: usize,
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    #[arg(long, value_enum)]
    pub case: CaseArg,
    /// Mixing weight of the asymmetric family; overrides the preset.
    #[arg(long)]
    pub x: Option<f64>,
    #[command(flatten)]
    pub grid: GridArgs,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    pub tol: f64,
    #[arg(long, value_enum, default_value_t)]
    pub pipeline: PipelineArg,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct ThresholdArgs {
    #[arg(long, value_enum)]
    pub case: CaseArg,
    #[arg(long)]
    pub x: Option<f64>,
    #[command(flatten)]
    pub grid: GridArgs,
    /// Bisection tolerance on lambda.
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct AnalyzeArgs {
    /// POVM in JSON form.
    #[arg(long, conflicts_with_all = ["case", "x", "lambda"], required_unless_present = "case")]
    pub povm: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub case: Option<CaseArg>,
    #[arg(long)]
    pub x: Option<f64>,
    /// Measurement strength for a preset family.
    #[arg(long, default_value_t = 1.0)]
    pub lambda: f64,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    pub tol: f64,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(long, default_value_t = 101)]
    pub grid: usize,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Perturbs one closed form to exercise the failure path.
    #[arg(long, hide = true)]
    pub inject_fault: bool,
}

enum Failure {
    Usage(String),
    Povm(String),
    Compute(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidPovm(_) | Error::PovmFormat(_) => Failure::Povm(e.to_string()),
            e => Failure::Compute(e.to_string()),
        }
    }
}

type CmdResult = std::result::Result<i32, Failure>;

fn case_of(case: CaseArg, x: Option<f64>) -> std::result::Result<Case, Failure> {
    Case::from_parts(case.name(), x).map_err(|e| Failure::Usage(e.to_string()))
}

fn grid_of(g: &GridArgs) -> std::result::Result<LambdaGrid, Failure> {
    LambdaGrid::new(g.lambda_start, g.lambda_stop, g.grid).map_err(|e| Failure::Usage(e.to_string()))
}

fn positive_tol(tol: f64) -> std::result::Result<f64, Failure> {
    if tol > 0.0 && tol.is_finite() {
        Ok(tol)
    } else {
        Err(Failure::Usage(format!("--tol must be positive, got {tol}")))
    }
}

fn emit(out: &Option<PathBuf>, text: &str, stdout: &mut dyn Write) -> std::result::Result<(), Failure> {
    match out {
        Some(path) => output::write_atomic(path, text.as_bytes()).map_err(Failure::from),
        None => stdout
            .write_all(text.as_bytes())
            .map_err(|e| Failure::Compute(e.to_string())),
    }
}

fn cmd_sweep(a: SweepArgs, stdout: &mut dyn Write) -> CmdResult {
    let cfg = SweepConfig {
        case: case_of(a.case, a.x)?,
        grid: grid_of(&a.grid)?,
        tol: positive_tol(a.tol)?,
        pipeline: match a.pipeline {
            PipelineArg::Numeric => Pipeline::Numeric,
            PipelineArg::Analytic => Pipeline::Analytic,
            PipelineArg::Both => Pipeline::Both,
        },
    };
    let records = sweep(&cfg)?;
    emit(&a.out, &output::csv_string(&records), stdout)?;
    Ok(EXIT_OK)
}

fn cmd_thresholds(a: ThresholdArgs, stdout: &mut dyn Write) -> CmdResult {
    let case = case_of(a.case, a.x)?;
    let table = classify_table(case, grid_of(&a.grid)?, positive_tol(a.tol)?)?;
    let text = match a.format {
        Format::Text => output::thresholds_text(&table),
        Format::Csv => output::thresholds_csv(&table),
    };
    emit(&a.out, &text, stdout)?;
    Ok(EXIT_OK)
}

fn cmd_analyze(a: AnalyzeArgs, stdout: &mut dyn Write) -> CmdResult {
    let tol = positive_tol(a.tol)?;
    let povm = match (&a.povm, a.case) {
        (Some(path), _) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Failure::Compute(format!("{}: {e}", path.display())))?;
            Povm::from_json_str(&text)?
        }
        (None, Some(case)) => {
            if !(0.0..=1.0).contains(&a.lambda) {
                return Err(Failure::Usage(format!("--lambda {} outside [0, 1]", a.lambda)));
            }
            case_of(case, a.x)?.povm(a.lambda)?
        }
        (None, None) => return Err(Failure::Usage("either --povm or --case is required".into())),
    };
    let outcomes = run_swap(&povm)?;
    let mut rows = Vec::with_capacity(outcomes.len());
    for o in outcomes {
        let reports = match &o.states {
            None => None,
            Some(s) => {
                let r: Vec<CorrelationReport> = Pair::ALL
                    .iter()
                    .map(|&p| report(s.pair(p), tol))
                    .collect::<crate::Result<_>>()?;
                Some([r[0].clone(), r[1].clone(), r[2].clone()])
            }
        };
        rows.push((o, reports));
    }
    let text = match a.format {
        Format::Text => output::analyze_text(&povm.label, &rows),
        Format::Csv => output::analyze_csv(&povm.label, &rows),
    };
    emit(&a.out, &text, stdout)?;
    Ok(EXIT_OK)
}

fn cmd_verify(a: VerifyArgs, stdout: &mut dyn Write) -> CmdResult {
    let grid = LambdaGrid::new(0.0, 1.0, a.grid).map_err(|e| Failure::Usage(e.to_string()))?;
    let mut reports = Vec::new();
    for case in Case::PRESETS {
        let r = if a.inject_fault && case == Case::I {
            verify_against(case, grid, |lambda, pair| {
                let mut v = case.closed_form(lambda, pair)?;
                if pair == Pair::P12 {
                    v.negativity += 1e-6;
                }
                Ok(v)
            })?
        } else {
            verify(case, grid)?
        };
        reports.push(r);
    }
    let text = match a.format {
        Format::Text => output::verify_text(&reports),
        Format::Csv => output::verify_csv(&reports),
    };
    emit(&a.out, &text, stdout)?;
    Ok(if reports.iter().all(|r| r.passed()) { EXIT_OK } else { EXIT_FAILURE })
}

/// Parses `args` (program name first) and runs the chosen subcommand.
/// Returns the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let rendered = e.render().to_string();
            if code == 0 {
                let _ = write!(stdout, "{rendered}");
            } else {
                let _ = write!(stderr, "{rendered}");
            }
            return code;
        }
    };
    let result = match cli.command {
        Command::Sweep(a) => cmd_sweep(a, stdout),
        Command::Thresholds(a) => cmd_thresholds(a, stdout),
        Command::Analyze(a) => cmd_analyze(a, stdout),
        Command::Verify(a) => cmd_verify(a, stdout),
    };
    match result {
        Ok(code) => code,
        Err(Failure::Usage(m)) => {
            let _ = writeln!(stderr, "error: {m}");
            EXIT_USAGE
        }
        Err(Failure::Povm(m)) => {
            let _ = writeln!(stderr, "error: {m}");
            EXIT_INVALID_POVM
        }
        Err(Failure::Compute(m)) => {
            let _ = writeln!(stderr, "error: {m}");
            EXIT_FAILURE
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let mut full = vec!["swapcorr"];
        full.extend_from_slice(args);
        let code = run(full, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn sweep_to_stdout() {
        let (code, out, _) = call(&["sweep", "--case", "II", "--grid", "11"]);
        assert_eq!(code, 0);
        assert_eq!(out.lines().count(), 1 + 11 * 12);
        assert!(out.starts_with(output::CSV_HEADER));
    }

    #[test]
    fn bad_flags_exit_two() {
        assert_eq!(call(&["sweep", "--case", "V"]).0, 2);
        assert_eq!(call(&["sweep"]).0, 2);
        assert_eq!(call(&["sweep", "--case", "I", "--lambda-start", "0.8", "--lambda-stop", "0.2"]).0, 2);
        assert_eq!(call(&["sweep", "--case", "I", "--x", "0.5"]).0, 2);
        assert_eq!(call(&["sweep", "--case", "I", "--grid", "1"]).0, 2);
        assert_eq!(call(&["analyze", "--povm", "p.json", "--case", "I"]).0, 2);
        assert_eq!(call(&["thresholds", "--case", "I", "--tol", "0"]).0, 2);
    }

    #[test]
    fn thresholds_case_one_text() {
        let (code, out, _) = call(&["thresholds", "--case", "I"]);
        assert_eq!(code, 0);
        for v in ["0.333333333", "0.577350269", "0.707106781", "0.91068360"] {
            assert!(out.contains(v), "{v} missing from\n{out}");
        }
    }

    #[test]
    fn thresholds_case_three_has_never_rows() {
        let (code, out, _) = call(&["thresholds", "--case", "III", "--grid", "21"]);
        assert_eq!(code, 0);
        let never = out.lines().filter(|l| l.ends_with("never")).count();
        assert_eq!(never, 3, "{out}");
    }

    #[test]
    fn analyze_preset_case_four() {
        let (code, out, _) = call(&["analyze", "--case", "IV", "--lambda", "0.5", "--format", "csv"]);
        assert_eq!(code, 0);
        let row = out.lines().find(|l| l.contains(",1,14,")).unwrap();
        assert!(row.ends_with("true,true,true"), "{row}");
    }

    #[test]
    fn verify_injected_fault_fails() {
        assert_eq!(call(&["verify", "--grid", "5"]).0, 0);
        let (code, out, _) = call(&["verify", "--grid", "5", "--inject-fault"]);
        assert_eq!(code, 1);
        assert!(out.contains("FAIL case I"));
    }
}
