//! The small dense toolkit underneath: Jacobi eigendecomposition, partial
//! trace and partial transpose on qubit registers.

use swapcorr::linalg::{hermitian_eig, partial_trace, partial_transpose, Subsystem};
use swapcorr::random::{random_density_matrix, seeded};
use swapcorr::states::{bell_state, initial_four_qubit};

fn main() -> swapcorr::Result<()> {
    let rho = initial_four_qubit();
    let rho23 = partial_trace(rho.matrix(), 4, &[2, 3])?;
    println!("qubits 2,3 of the initial state:\n{rho23:?}");

    let bell = bell_state(1)?.projector();
    let pt = partial_transpose(&bell, Subsystem::Second)?;
    println!("partial transpose of a Bell projector has spectrum {:.6?}", hermitian_eig(&pt)?.eigenvalues);

    let mixed = random_density_matrix(&mut seeded(2), 4);
    let eig = hermitian_eig(mixed.matrix())?;
    let residual = (&eig.reconstruct() - mixed.matrix()).max_abs();
    println!("random 16x16 state: purity {:.4}, reconstruction error {residual:.2e}", mixed.purity());
    Ok(())
}
