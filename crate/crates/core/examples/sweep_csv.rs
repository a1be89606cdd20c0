//! Sweeps the noisy Bell measurement over λ and writes the CSV consumed by
//! plotting scripts.

use swapcorr::analysis::{sweep, Case, LambdaGrid, SweepConfig};
use swapcorr::output::{csv_string, write_atomic};

fn main() -> swapcorr::Result<()> {
    let path = std::env::args()
        .nth(1)
        .unwrap_or_else(|| std::env::temp_dir().join("case1.csv").display().to_string());
    let records = sweep(&SweepConfig::new(Case::I, LambdaGrid::unit(101)))?;
    write_atomic(path.as_ref(), csv_string(&records).as_bytes())?;
    println!("wrote {} rows to {path}", records.len());
    for r in records.iter().filter(|r| r.outcome == 1 && r.lambda * 10.0 % 2.0 == 0.0) {
        println!("lambda {:.1} pair {}: E = {:.6}", r.lambda, r.pair, r.negativity);
    }
    Ok(())
}
