//! Standard entanglement swapping: a projective Bell measurement on qubits
//! 2 and 3 leaves qubits 1 and 4 in a Bell state and destroys the original
//! pairs.

use swapcorr::{negativity, run_swap, werner_bell_povm, Pair};

fn main() -> swapcorr::Result<()> {
    let outcomes = run_swap(&werner_bell_povm(1.0)?)?;
    for o in &outcomes {
        println!("outcome {}  p = {:.4}", o.outcome_index + 1, o.probability);
        for pair in Pair::ALL {
            let rho = o.pair(pair).expect("non-degenerate");
            println!("  pair {pair}: negativity {:.6}", negativity(rho)?);
        }
    }
    let rho14 = outcomes[0].pair(Pair::P14).unwrap();
    println!("\nstate of pair 14 after outcome 1:\n{:?}", rho14.matrix());
    Ok(())
}
