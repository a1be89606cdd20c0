//! Correlation quantifiers for two-qubit states.
//!
//! From the correlation matrix `T_ij = Tr[ρ (σ_i ⊗ σ_j)]` and the ordered
//! eigenvalues `t1 ≥ t2 ≥ t3` of `TᵀT`:
//!
//! * Bell-CHSH: `M = t1 + t2`, `B = 2√M`, nonlocality
//!   `N = max{0, (√M - 1)/(√2 - 1)}`;
//! * linear steering: `S2 = max{0, (√M - 1)/(√2 - 1)}` (two settings, equal
//!   to `N`), `S3 = max{0, (√Λ3 - 1)/(√3 - 1)}` with `Λ3 = t1 + t2 + t3`;
//! * entanglement: negativity `2 max{0, -μ}` with `μ` the smallest
//!   eigenvalue of the partial transpose.

use std::f64::consts::{SQRT_2, FRAC_1_SQRT_2};
use std::fmt;

use crate::error::{Error, Result};
use crate::linalg::{c, hermitian_eig, kron, partial_transpose, pauli, trace_norm, ComplexMatrix, Subsystem};
use crate::states::DensityMatrix;

/// Default decision threshold for the boolean classifications.
pub const DEFAULT_TOL: f64 = 1e-9;

const SQRT_3: f64 = 1.732_050_807_568_877_2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Measure {
    Negativity,
    Steering2,
    Steering3,
    Nonlocality,
}

impl Measure {
    pub const ALL: [Measure; 4] = [
        Measure::Negativity,
        Measure::Steering2,
        Measure::Steering3,
        Measure::Nonlocality,
    ];

    /// The three quantifiers used to classify states (steering via the
    /// three-setting inequality).
    pub const CLASSIFYING: [Measure; 3] = [Measure::Negativity, Measure::Steering3, Measure::Nonlocality];

    pub fn name(self) -> &'static str {
        match self {
            Measure::Negativity => "negativity",
            Measure::Steering2 => "steering2",
            Measure::Steering3 => "steering3",
            Measure::Nonlocality => "nonlocality",
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Measure::Negativity => "entangled",
            Measure::Steering2 => "steerable (2-setting)",
            Measure::Steering3 => "steerable",
            Measure::Nonlocality => "Bell-nonlocal",
        }
    }
}

impl fmt::Display for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Measure {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Measure::ALL
            .into_iter()
            .find(|m| m.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::BadParam(format!("unknown measure '{s}'")))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CorrelationSpectrum {
    pub t_matrix: [[f64; 3]; 3],
    /// Eigenvalues of `TᵀT`, descending, clamped at zero.
    pub t: [f64; 3],
    pub m: f64,
    pub lambda3: f64,
}

impl CorrelationSpectrum {
    /// Builds `M` and `Λ3` from an eigenvalue triple in any order.
    pub fn from_triple(mut t: [f64; 3]) -> Self {
        for v in &mut t {
            *v = v.max(0.0);
        }
        t.sort_by(|a, b| b.total_cmp(a));
        Self {
            t_matrix: [[0.0; 3]; 3],
            t,
            m: t[0] + t[1],
            lambda3: t[0] + t[1] + t[2],
        }
    }

    pub fn bell_value(&self) -> f64 {
        2.0 * self.m.sqrt()
    }

    pub fn nonlocality(&self) -> f64 {
        nonlocality_from_m(self.m)
    }

    pub fn steering2(&self) -> f64 {
        nonlocality_from_m(self.m)
    }

    pub fn steering3(&self) -> f64 {
        steering3_from_lambda3(self.lambda3)
    }
}

/// `max{0, (√M - 1)/(√2 - 1)}`.
pub fn nonlocality_from_m(m: f64) -> f64 {
    ((m.max(0.0).sqrt() - 1.0) / (SQRT_2 - 1.0)).max(0.0)
}

/// `max{0, (√Λ3 - 1)/(√3 - 1)}`.
pub fn steering3_from_lambda3(lambda3: f64) -> f64 {
    ((lambda3.max(0.0).sqrt() - 1.0) / (SQRT_3 - 1.0)).max(0.0)
}

fn require_two_qubits(rho: &DensityMatrix) -> Result<()> {
    if rho.qubits() != 2 {
        return Err(Error::NotAState(format!(
            "expected a two-qubit state, got {} qubit(s)",
            rho.qubits()
        )));
    }
    Ok(())
}

pub fn correlation_spectrum(rho: &DensityMatrix) -> Result<CorrelationSpectrum> {
    require_two_qubits(rho)?;
    let mut t_matrix = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            let op = kron(&pauli(i + 1), &pauli(j + 1));
            let v = (rho.matrix() * &op).trace();
            if v.im.abs() > 1e-10 {
                return Err(Error::NotAState(format!(
                    "correlation entry T[{}][{}] has imaginary part {:.3e}",
                    i + 1,
                    j + 1,
                    v.im
                )));
            }
            t_matrix[i][j] = v.re;
        }
    }
    let mut tt = ComplexMatrix::zeros(3);
    for i in 0..3 {
        for j in 0..3 {
            let s: f64 = (0..3).map(|k| t_matrix[k][i] * t_matrix[k][j]).sum();
            tt[(i, j)] = c(s, 0.0);
        }
    }
    let eig = hermitian_eig(&tt)?;
    let ev = &eig.eigenvalues;
    let mut spec = CorrelationSpectrum::from_triple([ev[0], ev[1], ev[2]]);
    spec.t_matrix = t_matrix;
    Ok(spec)
}

pub fn bell_nonlocality(rho: &DensityMatrix) -> Result<f64> {
    Ok(correlation_spectrum(rho)?.nonlocality())
}

pub fn steering2(rho: &DensityMatrix) -> Result<f64> {
    Ok(correlation_spectrum(rho)?.steering2())
}

pub fn steering3(rho: &DensityMatrix) -> Result<f64> {
    Ok(correlation_spectrum(rho)?.steering3())
}

/// Smallest eigenvalue of the partial transpose on the second qubit.
pub fn min_partial_transpose_eigenvalue(rho: &DensityMatrix) -> Result<f64> {
    require_two_qubits(rho)?;
    let pt = partial_transpose(rho.matrix(), Subsystem::Second)?;
    Ok(hermitian_eig(&pt)?.min())
}

pub fn negativity(rho: &DensityMatrix) -> Result<f64> {
    Ok(2.0 * (-min_partial_transpose_eigenvalue(rho)?).max(0.0))
}

/// `‖ρ^{T_B}‖₁ - 1`, the trace-norm form of the negativity.
pub fn negativity_trace_norm(rho: &DensityMatrix) -> Result<f64> {
    require_two_qubits(rho)?;
    let pt = partial_transpose(rho.matrix(), Subsystem::Second)?;
    Ok(trace_norm(&pt)? - 1.0)
}

/// Signed quantity whose zero crossing is the classification boundary of
/// `measure`: `-μ` for negativity, `√M - 1` for the Bell/2-setting
/// quantifiers and `√Λ3 - 1` for three-setting steering.
pub fn margin(rho: &DensityMatrix, measure: Measure) -> Result<f64> {
    match measure {
        Measure::Negativity => Ok(-min_partial_transpose_eigenvalue(rho)?),
        Measure::Steering2 | Measure::Nonlocality => Ok(correlation_spectrum(rho)?.m.sqrt() - 1.0),
        Measure::Steering3 => Ok(correlation_spectrum(rho)?.lambda3.sqrt() - 1.0),
    }
}

/// All quantifiers of one two-qubit state plus tolerance-based
/// classifications.
#[derive(Clone, Debug, PartialEq)]
pub struct CorrelationReport {
    pub negativity: f64,
    pub m: f64,
    pub lambda3: f64,
    pub bell_value: f64,
    pub nonlocality: f64,
    pub steering2: f64,
    pub steering3: f64,
    pub tol: f64,
    pub entangled: bool,
    pub steerable: bool,
    pub nonlocal: bool,
}

impl CorrelationReport {
    pub fn value(&self, measure: Measure) -> f64 {
        match measure {
            Measure::Negativity => self.negativity,
            Measure::Steering2 => self.steering2,
            Measure::Steering3 => self.steering3,
            Measure::Nonlocality => self.nonlocality,
        }
    }
}

pub fn report(rho: &DensityMatrix, tol: f64) -> Result<CorrelationReport> {
    if !(tol > 0.0) {
        return Err(Error::BadParam(format!("tolerance {tol} must be positive")));
    }
    let spec = correlation_spectrum(rho)?;
    let neg = negativity(rho)?;
    let r = CorrelationReport {
        negativity: neg,
        m: spec.m,
        lambda3: spec.lambda3,
        bell_value: spec.bell_value(),
        nonlocality: spec.nonlocality(),
        steering2: spec.steering2(),
        steering3: spec.steering3(),
        tol,
        entangled: neg > tol,
        steerable: spec.steering3() > tol,
        nonlocal: spec.nonlocality() > tol,
    };
    if (r.nonlocal && !r.steerable) || (r.steerable && !r.entangled) {
        return Err(Error::HierarchyViolation(format!(
            "N = {:.3e}, S3 = {:.3e}, E = {:.3e} at tol {tol:.1e}",
            r.nonlocality, r.steering3, r.negativity
        )));
    }
    Ok(r)
}

/// Werner-state thresholds for reference: entangled above 1/3, steerable
/// (three settings) above 1/√3, Bell-nonlocal above 1/√2.
pub const WERNER_THRESHOLDS: [(Measure, f64); 3] = [
    (Measure::Negativity, 1.0 / 3.0),
    (Measure::Steering3, 1.0 / SQRT_3),
    (Measure::Nonlocality, FRAC_1_SQRT_2),
];
