//! Acceptance checks, one line per criterion. Exits non-zero if any fails.

use std::f64::consts::FRAC_1_SQRT_2;
use std::time::Instant;

use swapcorr::analysis::{find_extremum, find_threshold, sweep, verify, Case, LambdaGrid, SweepConfig, SweepRecord};
use swapcorr::linalg::{kron, partial_trace};
use swapcorr::measures::{bell_nonlocality, negativity, steering2, steering3, DEFAULT_TOL};
use swapcorr::povm::{effect_entanglement, validate, werner_bell_povm, Povm, ViolationKind};
use swapcorr::random::{random_density_matrix, random_povm, random_qubit_unitary, seeded};
use swapcorr::states::DensityMatrix;
use swapcorr::swap::{run_swap, Pair};
use swapcorr::{margin, Measure};

type Outcome = Result<String, String>;

const TOL: f64 = DEFAULT_TOL;
const GRID: usize = 101;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn s_of_lambda(l: f64) -> f64 {
    0.5 * (1.0 - l + ((1.0 - l) * (1.0 + 3.0 * l)).sqrt())
}

/// Plain bisection on a decreasing function.
fn bisect_decreasing(f: impl Fn(f64) -> f64, target: f64) -> f64 {
    let (mut lo, mut hi) = (0.0, 1.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid) > target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

fn records(case: Case) -> Vec<SweepRecord> {
    sweep(&SweepConfig::new(case, LambdaGrid::unit(GRID))).expect("sweep")
}

fn case1_thresholds() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut lines = Vec::new();
    let pair14 = [
        (Measure::Negativity, 1.0 / 3.0),
        (Measure::Steering3, 1.0 / 3f64.sqrt()),
        (Measure::Nonlocality, FRAC_1_SQRT_2),
    ];
    for (m, want) in pair14 {
        let r = find_threshold(Case::I, Pair::P14, m, (0.0, 1.0), 1e-9).map_err(|e| e.to_string())?;
        worst = worst.max((r.root - want).abs());
        ensure((r.root - want).abs() < 1e-6, || format!("pair 14 {m}: {} vs {want}", r.root))?;
    }
    let oracle = [
        (Measure::Negativity, bisect_decreasing(s_of_lambda, 1.0 / 3.0), None),
        (Measure::Steering3, bisect_decreasing(s_of_lambda, 1.0 / 3f64.sqrt()), Some("0.75")),
        (Measure::Nonlocality, bisect_decreasing(s_of_lambda, FRAC_1_SQRT_2), Some("0.62")),
    ];
    ensure((oracle[0].1 - (1.0 / 3.0 + 1.0 / 3f64.sqrt())).abs() < 1e-12, || "entanglement root oracle".into())?;
    ensure((oracle[0].1 - 0.9107).abs() < 5e-5, || format!("{} does not read 0.9107", oracle[0].1))?;
    for pair in [Pair::P12, Pair::P34] {
        for (m, want, printed) in &oracle {
            let r = find_threshold(Case::I, pair, *m, (0.0, 1.0), 1e-9).map_err(|e| e.to_string())?;
            worst = worst.max((r.root - want).abs());
            ensure((r.root - want).abs() < 1e-6, || format!("pair {pair} {m}: {} vs {want}", r.root))?;
            if let Some(p) = printed {
                ensure(format!("{:.2}", r.root) == *p, || format!("pair {pair} {m}: {} does not round to {p}", r.root))?;
            }
            if pair == Pair::P12 {
                lines.push(format!("{:.6}", r.root));
            }
        }
    }
    Ok(format!("pairs 12/34 roots {}; max error {worst:.1e}", lines.join(", ")))
}

fn case1_fixed_point() -> Outcome {
    let outcomes = run_swap(&werner_bell_povm(2.0 / 3.0).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
    let mut worst: f64 = 0.0;
    for o in &outcomes {
        for pair in Pair::ALL {
            let n = negativity(o.pair(pair).ok_or("degenerate outcome")?).map_err(|e| e.to_string())?;
            worst = worst.max((n - 0.5).abs());
        }
    }
    ensure(worst < 1e-10, || format!("max |E - 1/2| = {worst:.2e}"))?;
    Ok(format!("max |E - 1/2| = {worst:.1e}"))
}

fn oracle_equivalence() -> Outcome {
    let mut worst: f64 = 0.0;
    for case in Case::PRESETS {
        let rep = verify(case, LambdaGrid::unit(GRID)).map_err(|e| e.to_string())?;
        worst = worst.max(rep.max_deviation());
        if !rep.passed() {
            let d = rep.worst().unwrap();
            return Err(format!(
                "case {}: pair {} {} deviates by {:.2e} at lambda {}",
                case.label(),
                d.pair,
                d.quantity,
                d.max_abs,
                d.at_lambda
            ));
        }
    }
    Ok(format!("max deviation {worst:.1e} over four cases"))
}

/// Checks each `(pair, measure, positive)` cell on every record; λ = 0 is
/// exempt from the positive checks.
fn pattern(recs: &[SweepRecord], checks: &[(Pair, Measure, bool)]) -> Result<usize, String> {
    let mut n = 0;
    for r in recs {
        for &(pair, m, positive) in checks {
            if r.pair != pair {
                continue;
            }
            let v = r.value(m);
            let ok = if positive { r.lambda == 0.0 || v > TOL } else { v <= TOL };
            n += 1;
            ensure(ok, || {
                format!(
                    "pair {pair} {m} = {v:.6e} at lambda = {}, expected {}",
                    r.lambda,
                    if positive { "> 0" } else { "0" }
                )
            })?;
        }
    }
    Ok(n)
}

fn table_two() -> Outcome {
    let recs = records(Case::II);
    let n = pattern(
        &recs,
        &[
            (Pair::P14, Measure::Steering3, false),
            (Pair::P14, Measure::Nonlocality, false),
            (Pair::P14, Measure::Negativity, true),
            (Pair::P12, Measure::Negativity, true),
            (Pair::P12, Measure::Steering3, true),
            (Pair::P12, Measure::Nonlocality, true),
            (Pair::P34, Measure::Negativity, true),
            (Pair::P34, Measure::Steering3, true),
            (Pair::P34, Measure::Nonlocality, true),
        ],
    )?;
    Ok(format!("{n} cells checked"))
}

fn table_three() -> Outcome {
    let recs = records(Case::III);
    let n = pattern(
        &recs,
        &[
            (Pair::P14, Measure::Nonlocality, false),
            (Pair::P12, Measure::Nonlocality, false),
            (Pair::P34, Measure::Nonlocality, false),
            (Pair::P14, Measure::Steering3, true),
            (Pair::P12, Measure::Steering3, true),
            (Pair::P34, Measure::Steering3, false),
            (Pair::P14, Measure::Negativity, true),
            (Pair::P12, Measure::Negativity, true),
            (Pair::P34, Measure::Negativity, true),
        ],
    )?;
    Ok(format!("{n} cells checked"))
}

fn table_four() -> Outcome {
    let recs = records(Case::IV);
    let n = pattern(
        &recs,
        &[
            (Pair::P14, Measure::Nonlocality, true),
            (Pair::P14, Measure::Steering3, true),
            (Pair::P14, Measure::Negativity, true),
            (Pair::P12, Measure::Negativity, true),
            (Pair::P12, Measure::Steering3, false),
            (Pair::P12, Measure::Nonlocality, false),
            (Pair::P34, Measure::Negativity, true),
            (Pair::P34, Measure::Steering3, false),
            (Pair::P34, Measure::Nonlocality, false),
        ],
    )?;
    Ok(format!("{n} cells checked"))
}

fn negativity_peak() -> Outcome {
    let grid = LambdaGrid::unit(GRID);
    let peak = find_extremum(Case::II, Pair::P14, Measure::Negativity, grid).map_err(|e| e.to_string())?;
    ensure((peak.lambda - 0.34).abs() <= 0.01, || format!("peak at {}", peak.lambda))?;
    let series: Vec<(f64, f64)> = records(Case::II)
        .iter()
        .filter(|r| r.pair == Pair::P14 && r.outcome == 1)
        .map(|r| (r.lambda, r.negativity))
        .collect();
    for w in series.windows(2) {
        let ((l0, v0), (l1, v1)) = (w[0], w[1]);
        if l1 <= peak.lambda {
            ensure(v1 > v0, || format!("not increasing between {l0} and {l1}"))?;
        } else if l0 >= peak.lambda {
            ensure(v1 < v0, || format!("not decreasing between {l0} and {l1}"))?;
        }
    }
    Ok(format!("peak E = {:.6} at lambda = {:.6}", peak.value, peak.lambda))
}

fn outcome_probabilities() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut n = 0;
    for case in Case::PRESETS {
        for lambda in LambdaGrid::unit(GRID).points() {
            let outcomes = run_swap(&case.povm(lambda).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
            for o in &outcomes {
                worst = worst.max((o.probability - 0.25).abs());
                n += 1;
            }
        }
    }
    ensure(worst <= 1e-12, || format!("max |p - 1/4| = {worst:.2e}"))?;
    Ok(format!("{n} outcomes, max |p - 1/4| = {worst:.1e}"))
}

fn random_states() -> Vec<DensityMatrix> {
    let mut rng = seeded(20240917);
    (0..1000).map(|_| random_density_matrix(&mut rng, 2)).collect()
}

fn steering_nonlocality_identity() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut positive = 0;
    for rho in random_states() {
        let s2 = steering2(&rho).map_err(|e| e.to_string())?;
        let n = bell_nonlocality(&rho).map_err(|e| e.to_string())?;
        worst = worst.max((s2 - n).abs());
        positive += usize::from(n > 0.0);
    }
    ensure(worst <= 1e-12, || format!("max |S2 - N| = {worst:.2e}"))?;
    Ok(format!("1000 states ({positive} nonlocal), max |S2 - N| = {worst:.1e}"))
}

fn hierarchy() -> Outcome {
    let mut states = random_states();
    for case in Case::PRESETS {
        for lambda in LambdaGrid::unit(GRID).points() {
            let outcomes = run_swap(&case.povm(lambda).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
            for o in &outcomes {
                for pair in Pair::ALL {
                    states.extend(o.pair(pair).cloned());
                }
            }
        }
    }
    let mut bad = 0;
    let mut first = None;
    for (k, rho) in states.iter().enumerate() {
        let n = bell_nonlocality(rho).map_err(|e| e.to_string())?;
        let s3 = steering3(rho).map_err(|e| e.to_string())?;
        let e = negativity(rho).map_err(|e| e.to_string())?;
        if (n > TOL && s3 <= TOL) || (s3 > TOL && e <= TOL) {
            bad += 1;
            first.get_or_insert((k, n, s3, e));
        }
    }
    ensure(bad == 0, || format!("{bad} counterexamples, first {first:?}"))?;
    Ok(format!("{} states, 0 counterexamples", states.len()))
}

fn measurement_separability_edge() -> Outcome {
    let ent = |l: f64| effect_entanglement(&werner_bell_povm(l).unwrap(), 0).unwrap();
    let effect_margin = |l: f64| {
        let p = werner_bell_povm(l).unwrap();
        let e = p.effects[0].scale(1.0 / p.effects[0].trace().re);
        margin(&DensityMatrix::new(2, e).unwrap(), Measure::Negativity).unwrap()
    };
    let (mut lo, mut hi) = (0.0, 1.0);
    while hi - lo > 1e-12 {
        let mid = 0.5 * (lo + hi);
        if effect_margin(mid) > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let root = 0.5 * (lo + hi);
    ensure((root - 1.0 / 3.0).abs() < 1e-6, || format!("crossing at {root}"))?;
    for l in [0.0, 0.1, 0.3, 0.333] {
        ensure(ent(l) <= TOL, || format!("effect entangled at {l}: {}", ent(l)))?;
    }
    for l in [0.334, 0.5, 1.0] {
        ensure(ent(l) > TOL, || format!("effect separable at {l}"))?;
    }
    Ok(format!("crossing at {root:.9}"))
}

fn property_suites() -> Outcome {
    let mut rng = seeded(7);

    // POVM validation
    for n in 1..=6 {
        let p = random_povm(&mut rng, n);
        ensure(validate(&p).is_empty(), || format!("random {n}-outcome POVM rejected"))?;
        let doubled = Povm::new("doubled", p.effects.iter().map(|e| e.scale(2.0)).collect());
        ensure(
            validate(&doubled).iter().any(|v| matches!(v.kind, ViolationKind::Incomplete { .. })),
            || "doubled POVM passed completeness".into(),
        )?;
    }

    // density-matrix invariants after every update
    let mut updates = 0;
    for n in [2, 3, 4, 6] {
        for _ in 0..10 {
            let outcomes = run_swap(&random_povm(&mut rng, n)).map_err(|e| e.to_string())?;
            let total: f64 = outcomes.iter().map(|o| o.probability).sum();
            ensure((total - 1.0).abs() < 1e-12, || format!("probabilities sum to {total}"))?;
            for o in &outcomes {
                for pair in Pair::ALL {
                    let rho = o.pair(pair).ok_or("degenerate outcome")?;
                    let m = rho.matrix();
                    ensure((m.trace().re - 1.0).abs() < 1e-10, || "trace drift".into())?;
                    ensure(m.is_hermitian(1e-12), || "not Hermitian".into())?;
                    DensityMatrix::new(2, m.clone()).map_err(|e| e.to_string())?;
                    updates += 1;
                }
            }
        }
    }

    // partial-trace composition
    for _ in 0..20 {
        let rho = random_density_matrix(&mut rng, 4);
        let m = rho.matrix();
        let pairs: [(&[usize], &[usize], &[usize]); 3] =
            [(&[1, 2], &[1], &[1]), (&[2, 3, 4], &[1, 3], &[2, 4]), (&[1, 4], &[2], &[4])];
        for (outer, inner, direct) in pairs {
            let two_step = partial_trace(&partial_trace(m, 4, outer).unwrap(), outer.len(), inner).unwrap();
            let one_step = partial_trace(m, 4, direct).unwrap();
            ensure(two_step.approx_eq(&one_step, 1e-12), || format!("composition failed for {outer:?}"))?;
        }
    }

    // local-unitary invariance
    let mut worst: f64 = 0.0;
    for _ in 0..200 {
        let rho = random_density_matrix(&mut rng, 2);
        let u = kron(&random_qubit_unitary(&mut rng), &random_qubit_unitary(&mut rng));
        let rotated = DensityMatrix::new(2, &(&u * rho.matrix()) * &u.adjoint()).map_err(|e| e.to_string())?;
        for m in Measure::ALL {
            let d = (margin(&rho, m).unwrap() - margin(&rotated, m).unwrap()).abs();
            worst = worst.max(d);
        }
    }
    ensure(worst < 1e-9, || format!("local unitary changed a quantifier by {worst:.2e}"))?;
    Ok(format!("{updates} updates checked, unitary drift {worst:.1e}"))
}

fn main() {
    let started = Instant::now();
    let criteria: [(&str, fn() -> Outcome); 12] = [
        ("noisy Bell thresholds", case1_thresholds),
        ("equal negativity at lambda = 2/3", case1_fixed_point),
        ("closed forms match numeric pipeline", oracle_equivalence),
        ("pattern x = 0.3", table_two),
        ("pattern x = 0.725", table_three),
        ("pattern x = 0.8", table_four),
        ("pair-14 negativity peak, x = 0.3", negativity_peak),
        ("outcome probabilities 1/4", outcome_probabilities),
        ("two-setting steering equals nonlocality", steering_nonlocality_identity),
        ("nonlocal => steerable => entangled", hierarchy),
        ("noisy Bell effect separability edge", measurement_separability_edge),
        ("randomized property suites", property_suites),
    ];
    let mut failed = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let outcome = std::panic::catch_unwind(check).unwrap_or_else(|_| Err("panicked".into()));
        let ms = t.elapsed().as_millis();
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} ({ms} ms)", k + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {detail} ({ms} ms)", k + 1);
            }
        }
    }
    println!(
        "{} of {} criteria passed in {:.1} s",
        criteria.len() - failed,
        criteria.len(),
        started.elapsed().as_secs_f64()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
