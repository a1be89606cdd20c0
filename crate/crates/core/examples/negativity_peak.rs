//! For x = 0.3 the entanglement created in pair 14 is not monotone in λ.

use swapcorr::analysis::{find_extremum, Case, LambdaGrid};
use swapcorr::{Measure, Pair};

fn main() -> swapcorr::Result<()> {
    let peak = find_extremum(Case::II, Pair::P14, Measure::Negativity, LambdaGrid::unit(101))?;
    println!("pair 14 negativity peaks at lambda = {:.6} with E = {:.6}", peak.lambda, peak.value);
    for lambda in [0.1, 0.2, 0.3, peak.lambda, 0.5, 0.7, 0.9, 1.0] {
        let v = Case::II.closed_form(lambda, Pair::P14)?;
        println!("  lambda {lambda:.4}  E14 {:.6}", v.negativity);
    }
    Ok(())
}
