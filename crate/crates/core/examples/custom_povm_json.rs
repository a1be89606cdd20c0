//! Builds a POVM, round-trips it through the JSON format read by
//! `swapcorr analyze --povm`, and runs the protocol. A broken POVM is
//! rejected with the list of violations.

use swapcorr::linalg::ComplexMatrix;
use swapcorr::povm::{validate, Povm};
use swapcorr::states::{bell_state, product_basis};
use swapcorr::{report, run_swap, Pair};

fn main() -> swapcorr::Result<()> {
    // Half-strength Bell measurement mixed with a computational-basis one.
    let effects = (1..=4)
        .map(|k| {
            let bell = bell_state(k)?.projector();
            let product = product_basis(k)?.projector();
            Ok(&bell.scale(0.5) + &product.scale(0.5))
        })
        .collect::<swapcorr::Result<Vec<ComplexMatrix>>>()?;
    let povm = Povm::new("bell/product mix", effects);

    let json = povm.to_json_string();
    println!("serialized to {} bytes of JSON", json.len());
    let povm = Povm::from_json_str(&json)?.validated()?;

    for o in run_swap(&povm)? {
        let states = o.states.as_ref().expect("non-degenerate");
        print!("outcome {} p = {:.4}:", o.outcome_index + 1, o.probability);
        for pair in Pair::ALL {
            let r = report(states.pair(pair), 1e-9)?;
            print!("  {pair}: E = {:.4}", r.negativity);
        }
        println!();
    }

    let broken = Povm::new("broken", povm.effects.iter().map(|e| e.scale(2.0)).collect());
    println!("\nviolations of a doubled POVM:");
    for v in validate(&broken) {
        println!("  {v}");
    }
    Ok(())
}
