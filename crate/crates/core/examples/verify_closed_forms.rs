//! Compares the closed-form expressions with the full 16-dimensional
//! simulation for every preset.

use swapcorr::analysis::{verify, Case, LambdaGrid};
use swapcorr::output::verify_text;

fn main() -> swapcorr::Result<()> {
    let reports = Case::PRESETS
        .iter()
        .map(|&c| verify(c, LambdaGrid::unit(101)))
        .collect::<swapcorr::Result<Vec<_>>>()?;
    print!("{}", verify_text(&reports));
    if reports.iter().any(|r| !r.passed()) {
        std::process::exit(1);
    }
    Ok(())
}
