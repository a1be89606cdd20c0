//! The swapping engine. Two `|ψ1>` pairs (1,2) and (3,4) start in
//! `ρ0 = |ψ1><ψ1| ⊗ |ψ1><ψ1|`; outcome `i` of a POVM on qubits (2,3) updates
//! the joint state by the Lüders rule with `K = I ⊗ √E_i ⊗ I`, and the
//! conditional pair states are partial traces of `K ρ0 K† / p_i`.
//!
//! The closed forms for the two measurement families live here too; they
//! serve as oracles for the full 16-dimensional pipeline.

use std::fmt;

use crate::error::{Error, Result};
use crate::linalg::{kron, partial_trace, psd_sqrt, ComplexMatrix};
use crate::measures::{CorrelationSpectrum, Measure};
use crate::povm::{validate, AsymmetricPovmParams, Povm};
use crate::states::{initial_four_qubit, DensityMatrix};

/// Outcomes below this probability carry no conditional states.
pub const DEGENERATE_PROBABILITY: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Pair {
    P14,
    P12,
    P34,
}

impl Pair {
    pub const ALL: [Pair; 3] = [Pair::P14, Pair::P12, Pair::P34];

    pub fn code(self) -> &'static str {
        match self {
            Pair::P14 => "14",
            Pair::P12 => "12",
            Pair::P34 => "34",
        }
    }

    /// Qubits kept when extracting this pair from the four-qubit state.
    pub fn qubits(self) -> [usize; 2] {
        match self {
            Pair::P14 => [1, 4],
            Pair::P12 => [1, 2],
            Pair::P34 => [3, 4],
        }
    }
}

impl fmt::Display for Pair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

impl std::str::FromStr for Pair {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Pair::ALL
            .into_iter()
            .find(|p| p.code() == s.trim_start_matches('P').trim_start_matches('p'))
            .ok_or_else(|| Error::BadParam(format!("unknown pair '{s}'")))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConditionalStates {
    pub rho14: DensityMatrix,
    pub rho12: DensityMatrix,
    pub rho34: DensityMatrix,
}

impl ConditionalStates {
    pub fn pair(&self, pair: Pair) -> &DensityMatrix {
        match pair {
            Pair::P14 => &self.rho14,
            Pair::P12 => &self.rho12,
            Pair::P34 => &self.rho34,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SwapOutcome {
    /// Zero-based effect index.
    pub outcome_index: usize,
    pub probability: f64,
    /// `None` when the outcome is degenerate (`p < 1e-12`).
    pub states: Option<ConditionalStates>,
}

impl SwapOutcome {
    pub fn is_degenerate(&self) -> bool {
        self.states.is_none()
    }

    pub fn pair(&self, pair: Pair) -> Option<&DensityMatrix> {
        self.states.as_ref().map(|s| s.pair(pair))
    }
}

/// Runs the protocol for every effect of `p`.
pub fn run_swap(p: &Povm) -> Result<Vec<SwapOutcome>> {
    let violations = validate(p);
    if !violations.is_empty() {
        return Err(Error::InvalidPovm(violations));
    }
    let rho0 = initial_four_qubit();
    let id2 = ComplexMatrix::identity(2);
    p.effects
        .iter()
        .enumerate()
        .map(|(i, effect)| {
            let root = psd_sqrt(effect)?;
            let k = kron(&kron(&id2, &root), &id2);
            let joint = &(&k * rho0.matrix()) * &k.adjoint();
            let probability = joint.trace().re;
            if probability < DEGENERATE_PROBABILITY {
                return Ok(SwapOutcome {
                    outcome_index: i,
                    probability,
                    states: None,
                });
            }
            let joint = joint.scale(1.0 / probability);
            let extract = |pair: Pair| -> Result<DensityMatrix> {
                let m = partial_trace(&joint, 4, &pair.qubits())?;
                DensityMatrix::new(2, m)
            };
            Ok(SwapOutcome {
                outcome_index: i,
                probability,
                states: Some(ConditionalStates {
                    rho14: extract(Pair::P14)?,
                    rho12: extract(Pair::P12)?,
                    rho34: extract(Pair::P34)?,
                }),
            })
        })
        .collect()
}

/// Shortcut for the (1,4) state: `E_i* / Tr(E_i)` (entrywise conjugate).
pub fn rho14_spectral(p: &Povm, i: usize) -> Result<DensityMatrix> {
    let e = p.effect(i)?;
    let tr = e.trace().re;
    if tr <= DEGENERATE_PROBABILITY {
        return Err(Error::DegenerateEffect { index: i, trace: tr });
    }
    DensityMatrix::new(2, e.conj().scale(1.0 / tr))
}

/// Werner weight of ρ12 and ρ34 under the noisy Bell measurement:
/// `s(λ) = [1 - λ + sqrt((1-λ)(1+3λ))] / 2`.
pub fn s_of_lambda(lambda: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&lambda) {
        return Err(Error::BadParam(format!("lambda = {lambda} outside [0, 1]")));
    }
    Ok(0.5 * (1.0 - lambda + ((1.0 - lambda) * (1.0 + 3.0 * lambda)).sqrt()))
}

/// Analytic values of one pair state.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ClosedFormValues {
    pub negativity: f64,
    pub steering2: f64,
    pub steering3: f64,
    pub nonlocality: f64,
    pub m: f64,
    pub lambda3: f64,
}

impl ClosedFormValues {
    fn from_triple(negativity: f64, t: [f64; 3]) -> Self {
        let spec = CorrelationSpectrum::from_triple(t);
        Self {
            negativity: negativity.max(0.0),
            steering2: spec.steering2(),
            steering3: spec.steering3(),
            nonlocality: spec.nonlocality(),
            m: spec.m,
            lambda3: spec.lambda3,
        }
    }

    pub fn value(&self, measure: Measure) -> f64 {
        match measure {
            Measure::Negativity => self.negativity,
            Measure::Steering2 => self.steering2,
            Measure::Steering3 => self.steering3,
            Measure::Nonlocality => self.nonlocality,
        }
    }
}

/// Noisy-Bell-measurement closed forms (values identical for every outcome;
/// pair (3,4) equals pair (1,2)).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Case1ClosedForms {
    pub lambda: f64,
    pub s: f64,
    pub e14: f64,
    pub e12: f64,
    pub s14: f64,
    pub s12: f64,
    pub n14: f64,
    pub n12: f64,
}

impl Case1ClosedForms {
    pub fn pair(&self, pair: Pair) -> ClosedFormValues {
        let (w, e, s, n) = match pair {
            Pair::P14 => (self.lambda, self.e14, self.s14, self.n14),
            Pair::P12 | Pair::P34 => (self.s, self.e12, self.s12, self.n12),
        };
        ClosedFormValues {
            negativity: e,
            steering2: n,
            steering3: s,
            nonlocality: n,
            m: 2.0 * w * w,
            lambda3: 3.0 * w * w,
        }
    }
}

pub fn case1_closed_forms(lambda: f64) -> Result<Case1ClosedForms> {
    let s = s_of_lambda(lambda)?;
    let sqrt2 = std::f64::consts::SQRT_2;
    let sqrt3 = 3f64.sqrt();
    let neg = |w: f64| ((3.0 * w - 1.0) / 2.0).max(0.0);
    let steer = |w: f64| ((sqrt3 * w - 1.0) / (sqrt3 - 1.0)).max(0.0);
    let nonloc = |w: f64| ((sqrt2 * w - 1.0) / (sqrt2 - 1.0)).max(0.0);
    Ok(Case1ClosedForms {
        lambda,
        s,
        e14: neg(lambda),
        e12: neg(s),
        s14: steer(lambda),
        s12: steer(s),
        n14: nonloc(lambda),
        n12: nonloc(s),
    })
}

/// Asymmetric-family closed forms: negativities and the `TᵀT` eigenvalue
/// triples of the three pair states (identical for every outcome).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Case2ClosedForms {
    pub params: AsymmetricPovmParams,
    pub e14: f64,
    pub e12: f64,
    pub e34: f64,
    pub t14: [f64; 3],
    pub t12: [f64; 3],
    pub t34: [f64; 3],
}

impl Case2ClosedForms {
    pub fn pair(&self, pair: Pair) -> ClosedFormValues {
        match pair {
            Pair::P14 => ClosedFormValues::from_triple(self.e14, self.t14),
            Pair::P12 => ClosedFormValues::from_triple(self.e12, self.t12),
            Pair::P34 => ClosedFormValues::from_triple(self.e34, self.t34),
        }
    }
}

pub fn case2_closed_forms(x: f64, lambda: f64) -> Result<Case2ClosedForms> {
    let p = AsymmetricPovmParams::new(x, lambda)?;
    let (a, b, y1, y2) = (p.a, p.b, p.y1, p.y2);
    let (e, f, g, h, q, r) = (p.e, p.f, p.g, p.h, p.q, p.r);
    let ysum = y1 + y2;

    let e14 = ((4.0 * q * q + r * r).sqrt() - r).max(0.0);
    let e12 = (2.0 * (e * f - h * h)).max(0.0);
    let e34 = (2.0 * (e * g - h * h)).max(0.0);

    let t14_xy = (2.0 * a * b * (y2 * x + y1 * (2.0 * x - 1.0)) / ysum).powi(2);
    let t14_z = ((y1 + y2 * (2.0 * x - 1.0)) / ysum).powi(2);
    let t_zz = (e * e + f * f + g * g - 2.0 * h * h).powi(2);
    Ok(Case2ClosedForms {
        params: p,
        e14,
        e12,
        e34,
        t14: [t14_xy, t14_xy, t14_z],
        t12: [4.0 * e * e * f * f, 4.0 * e * e * f * f, t_zz],
        t34: [4.0 * e * e * g * g, 4.0 * e * e * g * g, t_zz],
    })
}
