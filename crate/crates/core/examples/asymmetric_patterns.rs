//! Which pairs are entangled, steerable or Bell-nonlocal for the asymmetric
//! measurement at the three preset mixing weights.

use swapcorr::analysis::{classify_table, reference_pattern, Case, LambdaGrid};
use swapcorr::output::thresholds_text;

fn main() -> swapcorr::Result<()> {
    for case in [Case::II, Case::III, Case::IV] {
        let table = classify_table(case, LambdaGrid::unit(101), 1e-9)?;
        print!("{}", thresholds_text(&table));
        if Some(table.pattern()) != reference_pattern(case) {
            println!("  differs from the reference pattern {:?}", reference_pattern(case).unwrap());
        }
        println!();
    }
    Ok(())
}
