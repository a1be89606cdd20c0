//! Fixed-seed generators for randomized checks: Hermitian matrices, density
//! matrices, local unitaries and POVMs.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::linalg::{c, hermitian_eig, ComplexMatrix};
use crate::povm::Povm;
use crate::states::DensityMatrix;

pub type TestRng = ChaCha8Rng;

pub fn seeded(seed: u64) -> TestRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Matrix with independent entries, real and imaginary parts uniform in [-1, 1].
pub fn random_complex(rng: &mut impl Rng, dim: usize) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(dim);
    for i in 0..dim {
        for j in 0..dim {
            m[(i, j)] = c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        }
    }
    m
}

pub fn random_hermitian(rng: &mut impl Rng, dim: usize) -> ComplexMatrix {
    random_complex(rng, dim).hermitian_part()
}

/// `A A† / Tr(A A†)`, optionally mixed with a random pure state so that both
/// highly mixed and nearly pure states show up.
pub fn random_density_matrix(rng: &mut impl Rng, qubits: usize) -> DensityMatrix {
    let dim = 1 << qubits;
    let a = random_complex(rng, dim);
    let mut m = &a * &a.adjoint();
    let purity_bias: f64 = rng.random();
    if purity_bias > 0.5 {
        let v: Vec<_> = (0..dim)
            .map(|_| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect();
        let pure = ComplexMatrix::outer(&v);
        let w = 10.0 * purity_bias;
        m = &m.scale(1.0 / m.trace().re) + &pure.scale(w / pure.trace().re);
    }
    let m = m.scale(1.0 / m.trace().re).hermitian_part();
    DensityMatrix::new(qubits, m).expect("random density matrix is valid")
}

/// Haar-ish single-qubit unitary from Euler angles.
pub fn random_qubit_unitary(rng: &mut impl Rng) -> ComplexMatrix {
    use std::f64::consts::PI;
    let (alpha, beta, gamma, delta): (f64, f64, f64, f64) = (
        rng.random_range(0.0..2.0 * PI),
        rng.random_range(0.0..2.0 * PI),
        rng.random_range(0.0..PI),
        rng.random_range(0.0..2.0 * PI),
    );
    let (s, co) = (gamma / 2.0).sin_cos();
    let e = |phi: f64| c(phi.cos(), phi.sin());
    ComplexMatrix::from_rows(vec![
        vec![e(alpha - beta / 2.0 - delta / 2.0) * co, -e(alpha - beta / 2.0 + delta / 2.0) * s],
        vec![e(alpha + beta / 2.0 - delta / 2.0) * s, e(alpha + beta / 2.0 + delta / 2.0) * co],
    ])
    .expect("2x2")
}

/// Random POVM on two qubits: random PSD matrices `P_k`, then
/// `E_k = S^{-1/2} P_k S^{-1/2}` with `S = sum P_k`.
pub fn random_povm(rng: &mut impl Rng, outcomes: usize) -> Povm {
    let parts: Vec<ComplexMatrix> = (0..outcomes)
        .map(|_| {
            let a = random_complex(rng, 4);
            &a * &a.adjoint()
        })
        .collect();
    let mut total = ComplexMatrix::zeros(4);
    for p in &parts {
        total = &total + p;
    }
    let inv_sqrt = hermitian_eig(&total)
        .expect("sum of PSD matrices is Hermitian")
        .map_spectrum(|l| 1.0 / l.sqrt());
    let effects = parts
        .iter()
        .map(|p| (&(&inv_sqrt * p) * &inv_sqrt).hermitian_part())
        .collect();
    Povm::new("random", effects)
}
