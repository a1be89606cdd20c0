//! Parameter sweeps over the measurement strength λ, threshold location by
//! bisection, range classification of every (pair, measure) cell, peak
//! search and closed-form verification.

use std::fmt;

use crate::error::{Error, Result};
use crate::measures::{margin, report, Measure, DEFAULT_TOL};
use crate::povm::{asymmetric_povm, werner_bell_povm, Povm};
use crate::states::DensityMatrix;
use crate::swap::{case1_closed_forms, case2_closed_forms, run_swap, ClosedFormValues, Pair};

/// Agreement required between closed forms and the numeric pipeline.
pub const VERIFY_TOL: f64 = 1e-9;

const BISECTION_MAX_ITER: usize = 200;
const GOLDEN_TOL: f64 = 1e-8;

/// Which measurement family, and with which mixing weight `x`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Case {
    /// Noisy Bell measurement.
    I,
    /// Asymmetric family, x = 0.3.
    II,
    /// Asymmetric family, x = 0.725.
    III,
    /// Asymmetric family, x = 0.8.
    IV,
    /// Asymmetric family with a caller-chosen x.
    Custom { x: f64 },
}

impl Case {
    pub const PRESETS: [Case; 4] = [Case::I, Case::II, Case::III, Case::IV];

    /// Builds a case from a preset name, optionally overriding `x`. An `x`
    /// that differs from the preset's value yields [`Case::Custom`].
    pub fn from_parts(name: &str, x: Option<f64>) -> Result<Case> {
        let preset = match name.to_ascii_uppercase().as_str() {
            "I" | "1" => Case::I,
            "II" | "2" => Case::II,
            "III" | "3" => Case::III,
            "IV" | "4" => Case::IV,
            "CUSTOM" => match x {
                Some(x) => Case::Custom { x },
                None => return Err(Error::BadParam("custom case needs x".into())),
            },
            _ => return Err(Error::BadParam(format!("unknown case '{name}'"))),
        };
        let case = match (preset, x) {
            (Case::I, Some(_)) => {
                return Err(Error::BadParam("case I has no x parameter".into()))
            }
            (c, Some(x)) if c.x() != Some(x) => Case::Custom { x },
            (c, _) => c,
        };
        if let Some(x) = case.x() {
            if !(0.0..=1.0).contains(&x) {
                return Err(Error::BadParam(format!("x = {x} outside [0, 1]")));
            }
        }
        Ok(case)
    }

    pub fn x(&self) -> Option<f64> {
        match self {
            Case::I => None,
            Case::II => Some(0.3),
            Case::III => Some(0.725),
            Case::IV => Some(0.8),
            Case::Custom { x } => Some(*x),
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Case::I => "I",
            Case::II => "II",
            Case::III => "III",
            Case::IV => "IV",
            Case::Custom { .. } => "custom",
        }
    }

    pub fn povm(&self, lambda: f64) -> Result<Povm> {
        match self.x() {
            None => werner_bell_povm(lambda),
            Some(x) => asymmetric_povm(x, lambda),
        }
    }

    pub fn closed_form(&self, lambda: f64, pair: Pair) -> Result<ClosedFormValues> {
        match self.x() {
            None => Ok(case1_closed_forms(lambda)?.pair(pair)),
            Some(x) => Ok(case2_closed_forms(x, lambda)?.pair(pair)),
        }
    }

    /// Conditional state of `pair` after the first outcome. Both families
    /// give outcome-independent quantifiers, so this stands in for all.
    pub fn pair_state(&self, lambda: f64, pair: Pair) -> Result<DensityMatrix> {
        let out = run_swap(&self.povm(lambda)?)?;
        out[0]
            .pair(pair)
            .cloned()
            .ok_or_else(|| Error::BadParam("first outcome is degenerate".into()))
    }
}

impl fmt::Display for Case {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Case::Custom { x } => write!(f, "custom (x = {x})"),
            c => match c.x() {
                Some(x) => write!(f, "{} (x = {x})", c.label()),
                None => f.write_str(c.label()),
            },
        }
    }
}

/// Evenly spaced λ values, endpoints included.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LambdaGrid {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl LambdaGrid {
    pub fn new(start: f64, stop: f64, count: usize) -> Result<Self> {
        let g = Self { start, stop, count };
        g.check()?;
        Ok(g)
    }

    /// The full `[0, 1]` range with `count` points.
    pub fn unit(count: usize) -> Self {
        Self {
            start: 0.0,
            stop: 1.0,
            count,
        }
    }

    fn check(&self) -> Result<()> {
        if !(0.0 <= self.start && self.start <= self.stop && self.stop <= 1.0) {
            return Err(Error::BadParam(format!(
                "lambda range [{}, {}] must satisfy 0 <= start <= stop <= 1",
                self.start, self.stop
            )));
        }
        if self.count < 2 {
            return Err(Error::BadParam(format!("grid count {} must be at least 2", self.count)));
        }
        Ok(())
    }

    pub fn points(&self) -> Vec<f64> {
        let n = self.count - 1;
        (0..=n)
            .map(|k| {
                if k == n {
                    self.stop
                } else {
                    self.start + (self.stop - self.start) * k as f64 / n as f64
                }
            })
            .collect()
    }
}

impl Default for LambdaGrid {
    fn default() -> Self {
        Self::unit(101)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Pipeline {
    #[default]
    Numeric,
    Analytic,
    /// Numeric records, checked against the closed forms.
    Both,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SweepConfig {
    pub case: Case,
    pub grid: LambdaGrid,
    pub tol: f64,
    pub pipeline: Pipeline,
}

impl SweepConfig {
    pub fn new(case: Case, grid: LambdaGrid) -> Self {
        Self {
            case,
            grid,
            tol: DEFAULT_TOL,
            pipeline: Pipeline::Numeric,
        }
    }
}

/// One `(λ, outcome, pair)` row of a sweep.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepRecord {
    pub case: String,
    pub x: Option<f64>,
    pub lambda: f64,
    /// One-based outcome number.
    pub outcome: usize,
    pub pair: Pair,
    pub probability: f64,
    pub negativity: f64,
    pub steering2: f64,
    pub steering3: f64,
    pub nonlocality: f64,
    pub m: f64,
    pub lambda3: f64,
}

impl SweepRecord {
    pub fn value(&self, measure: Measure) -> f64 {
        match measure {
            Measure::Negativity => self.negativity,
            Measure::Steering2 => self.steering2,
            Measure::Steering3 => self.steering3,
            Measure::Nonlocality => self.nonlocality,
        }
    }

    pub fn is_degenerate(&self) -> bool {
        self.negativity.is_nan()
    }
}

fn numeric_records(case: &Case, lambda: f64, tol: f64) -> Result<Vec<SweepRecord>> {
    let outcomes = run_swap(&case.povm(lambda)?)?;
    let mut out = Vec::with_capacity(outcomes.len() * 3);
    for o in &outcomes {
        for pair in Pair::ALL {
            let base = SweepRecord {
                case: case.label().to_string(),
                x: case.x(),
                lambda,
                outcome: o.outcome_index + 1,
                pair,
                probability: o.probability,
                negativity: f64::NAN,
                steering2: f64::NAN,
                steering3: f64::NAN,
                nonlocality: f64::NAN,
                m: f64::NAN,
                lambda3: f64::NAN,
            };
            let rec = match o.pair(pair) {
                None => base,
                Some(rho) => {
                    let r = report(rho, tol)?;
                    SweepRecord {
                        negativity: r.negativity,
                        steering2: r.steering2,
                        steering3: r.steering3,
                        nonlocality: r.nonlocality,
                        m: r.m,
                        lambda3: r.lambda3,
                        ..base
                    }
                }
            };
            out.push(rec);
        }
    }
    Ok(out)
}

fn analytic_records(case: &Case, lambda: f64) -> Result<Vec<SweepRecord>> {
    let mut out = Vec::with_capacity(12);
    for outcome in 1..=4 {
        for pair in Pair::ALL {
            let v = case.closed_form(lambda, pair)?;
            out.push(SweepRecord {
                case: case.label().to_string(),
                x: case.x(),
                lambda,
                outcome,
                pair,
                probability: 0.25,
                negativity: v.negativity,
                steering2: v.steering2,
                steering3: v.steering3,
                nonlocality: v.nonlocality,
                m: v.m,
                lambda3: v.lambda3,
            });
        }
    }
    Ok(out)
}

/// Evaluates every grid point. Rows are ordered by λ, then outcome, then
/// pair (14, 12, 34).
pub fn sweep(cfg: &SweepConfig) -> Result<Vec<SweepRecord>> {
    cfg.grid.check()?;
    let mut out = Vec::new();
    for lambda in cfg.grid.points() {
        let rows = match cfg.pipeline {
            Pipeline::Numeric => numeric_records(&cfg.case, lambda, cfg.tol),
            Pipeline::Analytic => analytic_records(&cfg.case, lambda),
            Pipeline::Both => numeric_records(&cfg.case, lambda, cfg.tol).and_then(|num| {
                let ana = analytic_records(&cfg.case, lambda)?;
                for (n, a) in num.iter().zip(&ana) {
                    for q in Quantity::ALL {
                        let d = (q.of_record(n) - q.of_record(a)).abs();
                        if !(d < VERIFY_TOL) {
                            return Err(Error::OracleMismatch(format!(
                                "{q} of pair {} outcome {} differs by {d:.3e}",
                                n.pair, n.outcome
                            )));
                        }
                    }
                }
                Ok(num)
            }),
        }
        .map_err(|e| e.at_lambda(lambda))?;
        out.extend(rows);
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq)]
pub struct ThresholdResult {
    pub measure: Measure,
    pub pair: Pair,
    /// Bracket the search started from.
    pub bracket: (f64, f64),
    /// Final bracket; its width is the achieved tolerance.
    pub final_bracket: (f64, f64),
    pub root: f64,
    pub achieved_tol: f64,
    pub iterations: usize,
    /// True if the state satisfies the measure above the root.
    pub rising: bool,
    /// Set when the 10-point sub-grid check finds the margin non-monotone.
    pub non_monotone: bool,
}

fn bisect(f: &dyn Fn(f64) -> Result<f64>, mut lo: f64, mut hi: f64, tol: f64) -> Result<(f64, f64, usize)> {
    let lo_pos = f(lo)? > 0.0;
    let mut iterations = 0;
    while hi - lo >= tol && iterations < BISECTION_MAX_ITER {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if (f(mid)? > 0.0) == lo_pos {
            lo = mid;
        } else {
            hi = mid;
        }
        iterations += 1;
    }
    Ok((lo, hi, iterations))
}

/// Bisects the sign change of the unclamped margin of `measure` (see
/// [`margin`]) inside `bracket`. The measure must change classification
/// across the bracket; monotonicity inside it is the caller's concern and
/// is only sanity-checked.
pub fn find_threshold(case: Case, pair: Pair, measure: Measure, bracket: (f64, f64), tol: f64) -> Result<ThresholdResult> {
    let (lo, hi) = bracket;
    if !(0.0 <= lo && lo < hi && hi <= 1.0) {
        return Err(Error::BadParam(format!("bracket [{lo}, {hi}] is not inside [0, 1]")));
    }
    if !(tol > 0.0) {
        return Err(Error::BadParam(format!("tolerance {tol} must be positive")));
    }
    let f = |lambda: f64| -> Result<f64> {
        margin(&case.pair_state(lambda, pair)?, measure).map_err(|e| e.at_lambda(lambda))
    };
    let (flo, fhi) = (f(lo)?, f(hi)?);
    if (flo > 0.0) == (fhi > 0.0) {
        return Err(Error::NoBracket(format!(
            "{measure} of pair {pair} classifies the same at lambda = {lo} and {hi}"
        )));
    }

    let sub: Vec<f64> = (0..10)
        .map(|k| f(lo + (hi - lo) * k as f64 / 9.0))
        .collect::<Result<_>>()?;
    let increasing = fhi > flo;
    let non_monotone = sub.windows(2).any(|w| {
        let d = w[1] - w[0];
        if increasing {
            d < -1e-12
        } else {
            d > 1e-12
        }
    });

    let (a, b, iterations) = bisect(&f, lo, hi, tol)?;
    Ok(ThresholdResult {
        measure,
        pair,
        bracket,
        final_bracket: (a, b),
        root: 0.5 * (a + b),
        achieved_tol: b - a,
        iterations,
        rising: fhi > 0.0,
        non_monotone,
    })
}

/// One end of a λ range.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Bound {
    pub value: f64,
    pub inclusive: bool,
    /// True when the value came from bisection rather than the grid edge.
    pub bisected: bool,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Interval {
    pub lo: Bound,
    pub hi: Bound,
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let op = |b: &Bound| if b.inclusive { "<=" } else { "<" };
        write!(
            f,
            "{} {} lambda {} {}",
            fmt_bound(self.lo.value),
            op(&self.lo),
            op(&self.hi),
            fmt_bound(self.hi.value)
        )
    }
}

fn fmt_bound(v: f64) -> String {
    if v == 0.0 || v == 1.0 {
        format!("{v}")
    } else {
        format!("{v:.9}")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RangeKind {
    Never,
    /// Positive at every grid λ > 0.
    Whole,
    Partial,
}

/// Where on the λ axis a (pair, measure) cell is positive. λ = 0 is ignored
/// for `Never` / `Whole`.
#[derive(Clone, Debug, PartialEq)]
pub enum LambdaRange {
    Never,
    Whole,
    Intervals(Vec<Interval>),
}

impl LambdaRange {
    pub fn kind(&self) -> RangeKind {
        match self {
            LambdaRange::Never => RangeKind::Never,
            LambdaRange::Whole => RangeKind::Whole,
            LambdaRange::Intervals(_) => RangeKind::Partial,
        }
    }

    /// Bisected endpoints, in order.
    pub fn thresholds(&self) -> Vec<f64> {
        match self {
            LambdaRange::Intervals(v) => v
                .iter()
                .flat_map(|i| [i.lo, i.hi])
                .filter(|b| b.bisected)
                .map(|b| b.value)
                .collect(),
            _ => Vec::new(),
        }
    }
}

impl fmt::Display for LambdaRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LambdaRange::Never => f.write_str("never"),
            LambdaRange::Whole => f.write_str("0 < lambda <= 1"),
            LambdaRange::Intervals(v) => {
                let parts: Vec<String> = v.iter().map(|i| i.to_string()).collect();
                f.write_str(&parts.join(" or "))
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TableCell {
    pub pair: Pair,
    pub measure: Measure,
    pub range: LambdaRange,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ClassificationTable {
    pub case: Case,
    pub grid: LambdaGrid,
    pub tol: f64,
    /// Pairs 14, 12, 34; measures negativity, steering3, nonlocality.
    pub cells: Vec<TableCell>,
}

impl ClassificationTable {
    pub fn cell(&self, pair: Pair, measure: Measure) -> Option<&TableCell> {
        self.cells.iter().find(|c| c.pair == pair && c.measure == measure)
    }

    /// Rows 14, 12, 34 × columns entangled, steerable, Bell-nonlocal.
    pub fn pattern(&self) -> [[RangeKind; 3]; 3] {
        let mut out = [[RangeKind::Never; 3]; 3];
        for (i, pair) in Pair::ALL.iter().enumerate() {
            for (j, m) in Measure::CLASSIFYING.iter().enumerate() {
                out[i][j] = self.cell(*pair, *m).map(|c| c.range.kind()).unwrap_or(RangeKind::Never);
            }
        }
        out
    }
}

/// The qualitative range pattern reported for the preset cases (rows 14,
/// 12, 34; columns entangled, steerable, Bell-nonlocal).
pub fn reference_pattern(case: Case) -> Option<[[RangeKind; 3]; 3]> {
    use RangeKind::{Never as N, Partial as P, Whole as W};
    match case {
        Case::I => Some([[P, P, P], [P, P, P], [P, P, P]]),
        Case::II => Some([[W, N, N], [W, W, W], [W, W, W]]),
        Case::III => Some([[W, W, N], [W, W, N], [W, N, N]]),
        Case::IV => Some([[W, W, W], [W, N, N], [W, N, N]]),
        Case::Custom { .. } => None,
    }
}

/// Classifies every (pair, measure) cell on the grid; each change of
/// classification between neighbouring grid points is bisected to `tol`.
pub fn classify_table(case: Case, grid: LambdaGrid, tol: f64) -> Result<ClassificationTable> {
    grid.check()?;
    let lambdas = grid.points();
    let states: Vec<Vec<DensityMatrix>> = lambdas
        .iter()
        .map(|&l| {
            Pair::ALL
                .iter()
                .map(|&p| case.pair_state(l, p))
                .collect::<Result<Vec<_>>>()
                .map_err(|e| e.at_lambda(l))
        })
        .collect::<Result<_>>()?;

    let mut cells = Vec::new();
    for (pi, &pair) in Pair::ALL.iter().enumerate() {
        for &measure in &Measure::CLASSIFYING {
            let positive: Vec<bool> = states
                .iter()
                .map(|s| report(&s[pi], DEFAULT_TOL).map(|r| r.value(measure) > DEFAULT_TOL))
                .collect::<Result<_>>()?;
            let range = classify_cell(case, pair, measure, &lambdas, &positive, tol)?;
            cells.push(TableCell { pair, measure, range });
        }
    }
    Ok(ClassificationTable { case, grid, tol, cells })
}

fn classify_cell(
    case: Case,
    pair: Pair,
    measure: Measure,
    lambdas: &[f64],
    positive: &[bool],
    tol: f64,
) -> Result<LambdaRange> {
    // indices of grid points with λ > 0
    let first = lambdas.iter().position(|&l| l > 0.0);
    let Some(first) = first else {
        return Ok(LambdaRange::Never);
    };
    let considered = &positive[first..];
    if considered.iter().all(|&p| !p) {
        return Ok(LambdaRange::Never);
    }
    if considered.iter().all(|&p| p) {
        return Ok(LambdaRange::Whole);
    }
    let crossing = |k: usize| -> Result<f64> {
        let r = find_threshold(case, pair, measure, (lambdas[k - 1], lambdas[k]), tol)?;
        Ok(r.root)
    };
    let mut intervals = Vec::new();
    let mut k = first;
    let last = lambdas.len() - 1;
    while k <= last {
        if !positive[k] {
            k += 1;
            continue;
        }
        let lo = if k == first {
            let edge = first.saturating_sub(1);
            Bound { value: lambdas[edge], inclusive: edge == first || positive[edge], bisected: false }
        } else {
            Bound { value: crossing(k)?, inclusive: false, bisected: true }
        };
        let mut end = k;
        while end < last && positive[end + 1] {
            end += 1;
        }
        let hi = if end == last {
            Bound { value: lambdas[last], inclusive: true, bisected: false }
        } else {
            Bound { value: crossing(end + 1)?, inclusive: false, bisected: true }
        };
        intervals.push(Interval { lo, hi });
        k = end + 1;
    }
    Ok(LambdaRange::Intervals(intervals))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Extremum {
    pub lambda: f64,
    pub value: f64,
}

/// Grid argmax of `measure` for `pair`, refined by golden-section search
/// over the neighbouring grid cells.
pub fn find_extremum(case: Case, pair: Pair, measure: Measure, grid: LambdaGrid) -> Result<Extremum> {
    grid.check()?;
    let f = |lambda: f64| -> Result<f64> {
        let rho = case.pair_state(lambda, pair).map_err(|e| e.at_lambda(lambda))?;
        Ok(report(&rho, DEFAULT_TOL)?.value(measure))
    };
    let lambdas = grid.points();
    let values: Vec<f64> = lambdas.iter().map(|&l| f(l)).collect::<Result<_>>()?;
    let (k, _) = values
        .iter()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |best, (i, &v)| if v > best.1 { (i, v) } else { best });
    let mut best = Extremum { lambda: lambdas[k], value: values[k] };

    let mut a = lambdas[k.saturating_sub(1)];
    let mut b = lambdas[(k + 1).min(lambdas.len() - 1)];
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (f(c)?, f(d)?);
    while b - a > GOLDEN_TOL {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d)?;
        }
    }
    let mid = 0.5 * (a + b);
    let fmid = f(mid)?;
    if fmid > best.value {
        best = Extremum { lambda: mid, value: fmid };
    }
    Ok(best)
}

/// Quantities compared by [`verify`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Quantity {
    Negativity,
    Steering2,
    Steering3,
    Nonlocality,
    M,
    Lambda3,
}

impl Quantity {
    pub const ALL: [Quantity; 6] = [
        Quantity::Negativity,
        Quantity::Steering2,
        Quantity::Steering3,
        Quantity::Nonlocality,
        Quantity::M,
        Quantity::Lambda3,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Quantity::Negativity => "negativity",
            Quantity::Steering2 => "steering2",
            Quantity::Steering3 => "steering3",
            Quantity::Nonlocality => "nonlocality",
            Quantity::M => "M",
            Quantity::Lambda3 => "Lambda3",
        }
    }

    fn of_record(self, r: &SweepRecord) -> f64 {
        match self {
            Quantity::Negativity => r.negativity,
            Quantity::Steering2 => r.steering2,
            Quantity::Steering3 => r.steering3,
            Quantity::Nonlocality => r.nonlocality,
            Quantity::M => r.m,
            Quantity::Lambda3 => r.lambda3,
        }
    }

    fn of_closed_form(self, v: &ClosedFormValues) -> f64 {
        match self {
            Quantity::Negativity => v.negativity,
            Quantity::Steering2 => v.steering2,
            Quantity::Steering3 => v.steering3,
            Quantity::Nonlocality => v.nonlocality,
            Quantity::M => v.m,
            Quantity::Lambda3 => v.lambda3,
        }
    }
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Deviation {
    pub pair: Pair,
    pub quantity: Quantity,
    pub max_abs: f64,
    pub at_lambda: f64,
    /// One-based outcome number.
    pub at_outcome: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct VerificationReport {
    pub case: Case,
    pub grid: LambdaGrid,
    pub tol: f64,
    pub deviations: Vec<Deviation>,
    /// Total number of outcome probabilities off 1/4 by more than 1e-12.
    pub probability_failures: usize,
}

impl VerificationReport {
    pub fn max_deviation(&self) -> f64 {
        self.deviations.iter().map(|d| d.max_abs).fold(0.0, f64::max)
    }

    pub fn worst(&self) -> Option<&Deviation> {
        self.deviations.iter().max_by(|a, b| a.max_abs.total_cmp(&b.max_abs))
    }

    pub fn failures(&self) -> impl Iterator<Item = &Deviation> {
        self.deviations.iter().filter(|d| !(d.max_abs < self.tol))
    }

    pub fn passed(&self) -> bool {
        self.failures().next().is_none() && self.probability_failures == 0
    }
}

/// Compares the closed forms with the numeric pipeline at every grid point,
/// outcome and pair.
pub fn verify(case: Case, grid: LambdaGrid) -> Result<VerificationReport> {
    verify_against(case, grid, |lambda, pair| case.closed_form(lambda, pair))
}

/// [`verify`] with a caller-supplied closed form.
pub fn verify_against(
    case: Case,
    grid: LambdaGrid,
    closed_form: impl Fn(f64, Pair) -> Result<ClosedFormValues>,
) -> Result<VerificationReport> {
    grid.check()?;
    let mut deviations: Vec<Deviation> = Pair::ALL
        .iter()
        .flat_map(|&pair| {
            Quantity::ALL.iter().map(move |&quantity| Deviation {
                pair,
                quantity,
                max_abs: 0.0,
                at_lambda: f64::NAN,
                at_outcome: 0,
            })
        })
        .collect();
    let mut probability_failures = 0;
    for lambda in grid.points() {
        let records = numeric_records(&case, lambda, DEFAULT_TOL).map_err(|e| e.at_lambda(lambda))?;
        for rec in &records {
            if rec.pair == Pair::P14 && !((rec.probability - 0.25).abs() <= 1e-12) {
                probability_failures += 1;
            }
            let cf = closed_form(lambda, rec.pair).map_err(|e| e.at_lambda(lambda))?;
            for d in deviations.iter_mut().filter(|d| d.pair == rec.pair) {
                let dev = (d.quantity.of_record(rec) - d.quantity.of_closed_form(&cf)).abs();
                let dev = if dev.is_nan() { f64::INFINITY } else { dev };
                if dev > d.max_abs || d.at_lambda.is_nan() {
                    d.max_abs = dev.max(d.max_abs);
                    d.at_lambda = lambda;
                    d.at_outcome = rec.outcome;
                }
            }
        }
    }
    Ok(VerificationReport {
        case,
        grid,
        tol: VERIFY_TOL,
        deviations,
        probability_failures,
    })
}
