//! State vectors and density matrices, plus constructors for the states the
//! swapping protocol uses: the Bell basis, Werner states, the
//! λ-parameterized basis of the asymmetric POVM, the computational product
//! basis and the initial two-Bell-pair state.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{c, hermitian_eig, kron, ComplexMatrix, PSD_CLAMP};

/// Tolerance for the Hermiticity and unit-trace checks on density matrices.
pub const STATE_TOL: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    qubits: usize,
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    pub fn new(qubits: usize, amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.len() != 1 << qubits {
            return Err(Error::BadDim {
                expected: 1 << qubits,
                found: amplitudes.len(),
            });
        }
        let norm: f64 = amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > 1e-12 {
            return Err(Error::BadParam(format!("state vector norm {norm} is not 1")));
        }
        Ok(Self { qubits, amplitudes })
    }

    fn from_real(amps: [f64; 4]) -> Self {
        Self {
            qubits: 2,
            amplitudes: amps.iter().map(|&a| c(a, 0.0)).collect(),
        }
    }

    pub fn qubits(&self) -> usize {
        self.qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &StateVector) -> Complex64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn projector(&self) -> ComplexMatrix {
        ComplexMatrix::outer(&self.amplitudes)
    }

    pub fn to_density(&self) -> DensityMatrix {
        DensityMatrix {
            qubits: self.qubits,
            matrix: self.projector(),
        }
    }
}

/// Hermitian, unit-trace, positive semidefinite matrix on `qubits` qubits.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    qubits: usize,
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    /// Validates the density-matrix invariants; fails with `NotAState`.
    pub fn new(qubits: usize, matrix: ComplexMatrix) -> Result<Self> {
        if matrix.dim() != 1 << qubits {
            return Err(Error::NotAState(format!(
                "dimension {} does not match {qubits} qubit(s)",
                matrix.dim()
            )));
        }
        let (herm, pos) = matrix.hermiticity_residual();
        if herm > STATE_TOL {
            return Err(Error::NotAState(format!(
                "not Hermitian: |m - m†| = {herm:.3e} at {pos:?}"
            )));
        }
        let tr = matrix.trace();
        if (tr - c(1.0, 0.0)).norm() > STATE_TOL {
            return Err(Error::NotAState(format!("trace {tr} is not 1")));
        }
        let min = hermitian_eig(&matrix)
            .map_err(|e| Error::NotAState(e.to_string()))?
            .min();
        if min < -PSD_CLAMP {
            return Err(Error::NotAState(format!("negative eigenvalue {min:.3e}")));
        }
        Ok(Self { qubits, matrix })
    }

    pub fn maximally_mixed(qubits: usize) -> Self {
        let dim = 1 << qubits;
        Self {
            qubits,
            matrix: ComplexMatrix::identity(dim).scale(1.0 / dim as f64),
        }
    }

    pub fn qubits(&self) -> usize {
        self.qubits
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn purity(&self) -> f64 {
        (&self.matrix * &self.matrix).trace().re
    }

    pub fn max_abs_diff(&self, other: &DensityMatrix) -> f64 {
        self.matrix.max_abs_diff(&other.matrix)
    }
}

fn check_index(k: usize) -> Result<()> {
    if (1..=4).contains(&k) {
        Ok(())
    } else {
        Err(Error::BadIndex(format!("basis index {k} not in 1..=4")))
    }
}

fn check_unit(name: &str, v: f64) -> Result<()> {
    if (0.0..=1.0).contains(&v) {
        Ok(())
    } else {
        Err(Error::BadParam(format!("{name} = {v} outside [0, 1]")))
    }
}

/// Bell vectors: 1 = (|00>+|11>)/√2, 2 = (|00>-|11>)/√2,
/// 3 = (|01>+|10>)/√2, 4 = (|01>-|10>)/√2.
pub fn bell_state(k: usize) -> Result<StateVector> {
    check_index(k)?;
    let s = std::f64::consts::FRAC_1_SQRT_2;
    Ok(StateVector::from_real(match k {
        1 => [s, 0.0, 0.0, s],
        2 => [s, 0.0, 0.0, -s],
        3 => [0.0, s, s, 0.0],
        _ => [0.0, s, -s, 0.0],
    }))
}

/// `w |ψ_k><ψ_k| + (1 - w)/4 I`.
pub fn werner_state(w: f64, k: usize) -> Result<DensityMatrix> {
    check_unit("w", w)?;
    let bell = bell_state(k)?.projector();
    let noise = ComplexMatrix::identity(4).scale((1.0 - w) / 4.0);
    Ok(DensityMatrix {
        qubits: 2,
        matrix: &bell.scale(w) + &noise,
    })
}

/// Coefficients `(a, b)` of the λ-basis: `a = sqrt(1 - sqrt(1-λ))/√2`,
/// `b = sqrt(1 + sqrt(1-λ))/√2`.
pub fn lambda_coefficients(lambda: f64) -> Result<(f64, f64)> {
    check_unit("lambda", lambda)?;
    let r = (1.0 - lambda).sqrt();
    Ok((((1.0 - r) / 2.0).sqrt(), ((1.0 + r) / 2.0).sqrt()))
}

/// `ψ1 = a|00> - b|11>`, `ψ2 = b|00> + a|11>`, `ψ3 = a|01> - b|10>`,
/// `ψ4 = b|01> + a|10>`.
pub fn lambda_basis(lambda: f64, k: usize) -> Result<StateVector> {
    check_index(k)?;
    let (a, b) = lambda_coefficients(lambda)?;
    Ok(StateVector::from_real(match k {
        1 => [a, 0.0, 0.0, -b],
        2 => [b, 0.0, 0.0, a],
        3 => [0.0, a, -b, 0.0],
        _ => [0.0, b, a, 0.0],
    }))
}

/// `φ1 = |00>`, `φ2 = |11>`, `φ3 = |01>`, `φ4 = |10>`.
pub fn product_basis(k: usize) -> Result<StateVector> {
    check_index(k)?;
    let mut amps = [0.0; 4];
    amps[[0, 3, 1, 2][k - 1]] = 1.0;
    Ok(StateVector::from_real(amps))
}

/// `|ψ1><ψ1|_{12} ⊗ |ψ1><ψ1|_{34}` on four qubits.
pub fn initial_four_qubit() -> DensityMatrix {
    let pair = bell_state(1).expect("index 1 is valid").projector();
    DensityMatrix {
        qubits: 4,
        matrix: kron(&pair, &pair),
    }
}
