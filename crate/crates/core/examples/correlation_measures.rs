//! Entanglement, steering and Bell nonlocality of Werner states, plus the
//! full report for one arbitrary state.

use swapcorr::measures::{correlation_spectrum, WERNER_THRESHOLDS};
use swapcorr::random::{random_density_matrix, seeded};
use swapcorr::{report, werner_state};

fn main() -> swapcorr::Result<()> {
    println!("{:>6} {:>11} {:>11} {:>11} {:>8}", "w", "negativity", "steering3", "nonlocal", "CHSH");
    for k in 0..=10 {
        let w = k as f64 / 10.0;
        let r = report(&werner_state(w, 1)?, 1e-9)?;
        println!(
            "{w:>6.2} {:>11.6} {:>11.6} {:>11.6} {:>8.4}",
            r.negativity, r.steering3, r.nonlocality, r.bell_value
        );
    }
    println!();
    for (m, w) in WERNER_THRESHOLDS {
        println!("Werner {m} threshold: w > {w:.6}");
    }

    let rho = random_density_matrix(&mut seeded(1), 2);
    let spec = correlation_spectrum(&rho)?;
    println!("\nrandom state: T^T T spectrum {:.6?}", spec.t);
    println!("{:#?}", report(&rho, 1e-9)?);
    Ok(())
}
