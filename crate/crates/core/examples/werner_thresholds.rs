//! λ thresholds for the noisy Bell measurement: pair 14 gains
//! correlations, pairs 12 and 34 lose them.

use swapcorr::analysis::{classify_table, find_threshold, Case, LambdaGrid};
use swapcorr::output::thresholds_text;
use swapcorr::swap::s_of_lambda;
use swapcorr::{Measure, Pair};

fn main() -> swapcorr::Result<()> {
    let table = classify_table(Case::I, LambdaGrid::unit(101), 1e-9)?;
    print!("{}", thresholds_text(&table));

    let r = find_threshold(Case::I, Pair::P12, Measure::Steering3, (0.0, 1.0), 1e-12)?;
    println!(
        "\npair 12 stops being steerable at lambda = {:.12} ({} bisection steps), where s = {:.12}",
        r.root,
        r.iterations,
        s_of_lambda(r.root)?
    );
    Ok(())
}
