//! Two-qubit POVMs: representation, validation, JSON I/O and the two
//! measurement families of the swapping protocol.
//!
//! Effects act on the middle pair (qubits 2 and 3) with qubit 2 as the most
//! significant bit.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eig, ComplexMatrix};
use crate::measures::negativity;
use crate::states::{bell_state, lambda_basis, lambda_coefficients, product_basis, DensityMatrix};

/// Tolerance for effect Hermiticity, the `[0, 1]` eigenvalue range and
/// completeness.
pub const POVM_TOL: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq)]
pub struct Povm {
    pub label: String,
    pub effects: Vec<ComplexMatrix>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum ViolationKind {
    NoEffects,
    WrongDimension { found: usize },
    NotHermitian { position: (usize, usize) },
    NegativeEigenvalue,
    EigenvalueAboveOne,
    Incomplete { position: (usize, usize) },
}

/// One failed POVM check. `effect` is `None` for whole-POVM checks
/// (completeness); `residual` is the measured size of the failure.
#[derive(Clone, Debug, PartialEq)]
pub struct Violation {
    pub effect: Option<usize>,
    pub kind: ViolationKind,
    pub residual: f64,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(i) = self.effect {
            write!(f, "effect {i}: ")?;
        }
        match &self.kind {
            ViolationKind::NoEffects => write!(f, "POVM has no effects"),
            ViolationKind::WrongDimension { found } => write!(f, "dimension {found}, expected 4"),
            ViolationKind::NotHermitian { position } => write!(
                f,
                "not Hermitian at ({}, {}), residual {:.3e}",
                position.0, position.1, self.residual
            ),
            ViolationKind::NegativeEigenvalue => {
                write!(f, "negative eigenvalue {:.3e}", -self.residual)
            }
            ViolationKind::EigenvalueAboveOne => {
                write!(f, "eigenvalue exceeds 1 by {:.3e}", self.residual)
            }
            ViolationKind::Incomplete { position } => write!(
                f,
                "effects do not sum to identity: residual {:.3e} at ({}, {})",
                self.residual, position.0, position.1
            ),
        }
    }
}

impl Povm {
    /// Unchecked constructor; see [`validate`].
    pub fn new(label: impl Into<String>, effects: Vec<ComplexMatrix>) -> Self {
        Self {
            label: label.into(),
            effects,
        }
    }

    pub fn len(&self) -> usize {
        self.effects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.effects.is_empty()
    }

    pub fn effect(&self, i: usize) -> Result<&ComplexMatrix> {
        self.effects.get(i).ok_or_else(|| {
            Error::BadIndex(format!("effect {i} of a {}-outcome POVM", self.effects.len()))
        })
    }

    /// Returns `self` if valid, otherwise `InvalidPovm` with every violation.
    pub fn validated(self) -> Result<Self> {
        let v = validate(&self);
        if v.is_empty() {
            Ok(self)
        } else {
            Err(Error::InvalidPovm(v))
        }
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let raw: PovmJson = serde_json::from_str(s).map_err(|e| Error::PovmFormat(e.to_string()))?;
        raw.into_povm()
    }

    pub fn to_json_string(&self) -> String {
        let raw = PovmJson {
            label: self.label.clone(),
            effects: self
                .effects
                .iter()
                .map(|e| e.rows().map(|r| r.iter().map(|z| [z.re, z.im]).collect()).collect())
                .collect(),
        };
        serde_json::to_string_pretty(&raw).expect("POVM serializes")
    }
}

/// Wire format: `{"label": str, "effects": [[[ [re, im] x4 ] x4 ] ...]}`,
/// row-major.
#[derive(Serialize, Deserialize)]
struct PovmJson {
    label: String,
    effects: Vec<Vec<Vec<[f64; 2]>>>,
}

impl PovmJson {
    fn into_povm(self) -> Result<Povm> {
        let mut effects = Vec::with_capacity(self.effects.len());
        for (k, rows) in self.effects.into_iter().enumerate() {
            if rows.len() != 4 {
                return Err(Error::PovmFormat(format!(
                    "effect {k}: expected 4 rows, found {}",
                    rows.len()
                )));
            }
            let mut m = ComplexMatrix::zeros(4);
            for (i, row) in rows.into_iter().enumerate() {
                if row.len() != 4 {
                    return Err(Error::PovmFormat(format!(
                        "effect {k}, row {i}: expected 4 entries, found {}",
                        row.len()
                    )));
                }
                for (j, [re, im]) in row.into_iter().enumerate() {
                    if !re.is_finite() || !im.is_finite() {
                        return Err(Error::PovmFormat(format!(
                            "effect {k}, position ({i}, {j}): non-finite entry"
                        )));
                    }
                    m[(i, j)] = Complex64::new(re, im);
                }
            }
            effects.push(m);
        }
        Ok(Povm::new(self.label, effects))
    }
}

/// Checks every POVM invariant; an empty list means the POVM is valid.
pub fn validate(p: &Povm) -> Vec<Violation> {
    let mut out = Vec::new();
    if p.effects.is_empty() {
        out.push(Violation {
            effect: None,
            kind: ViolationKind::NoEffects,
            residual: 0.0,
        });
        return out;
    }
    let mut total = ComplexMatrix::zeros(4);
    let mut dims_ok = true;
    for (i, e) in p.effects.iter().enumerate() {
        if e.dim() != 4 {
            dims_ok = false;
            out.push(Violation {
                effect: Some(i),
                kind: ViolationKind::WrongDimension { found: e.dim() },
                residual: 0.0,
            });
            continue;
        }
        total = &total + e;
        let (herm, position) = e.hermiticity_residual();
        if herm > POVM_TOL {
            out.push(Violation {
                effect: Some(i),
                kind: ViolationKind::NotHermitian { position },
                residual: herm,
            });
            continue;
        }
        let eig = hermitian_eig(e).expect("hermiticity checked above");
        if eig.min() < -POVM_TOL {
            out.push(Violation {
                effect: Some(i),
                kind: ViolationKind::NegativeEigenvalue,
                residual: -eig.min(),
            });
        }
        if eig.max() > 1.0 + POVM_TOL {
            out.push(Violation {
                effect: Some(i),
                kind: ViolationKind::EigenvalueAboveOne,
                residual: eig.max() - 1.0,
            });
        }
    }
    if dims_ok {
        let (residual, position) = total.max_abs_diff_at(&ComplexMatrix::identity(4));
        if residual > POVM_TOL {
            out.push(Violation {
                effect: None,
                kind: ViolationKind::Incomplete { position },
                residual,
            });
        }
    }
    out
}

fn check_unit(name: &str, v: f64) -> Result<()> {
    if (0.0..=1.0).contains(&v) {
        Ok(())
    } else {
        Err(Error::BadParam(format!("{name} = {v} outside [0, 1]")))
    }
}

/// Noisy Bell measurement: `E_i = λ|ψ_i><ψ_i| + (1-λ)/4 I`.
pub fn werner_bell_povm(lambda: f64) -> Result<Povm> {
    check_unit("lambda", lambda)?;
    let noise = ComplexMatrix::identity(4).scale((1.0 - lambda) / 4.0);
    let effects = (1..=4)
        .map(|k| &bell_state(k).expect("valid index").projector().scale(lambda) + &noise)
        .collect();
    Ok(Povm::new(format!("werner-bell(lambda={lambda})"), effects))
}

/// Derived quantities of the asymmetric family for one `(x, λ)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AsymmetricPovmParams {
    pub x: f64,
    pub lambda: f64,
    pub a: f64,
    pub b: f64,
    pub y1: f64,
    pub y2: f64,
    /// Weight `y1 (1-x)/(y1+y2)` of the partner λ-basis projector.
    pub partner_weight: f64,
    /// Weight `y2 (1-x)/(y1+y2)` of the product-basis projector.
    pub product_weight: f64,
    pub e: f64,
    pub f: f64,
    pub g: f64,
    pub h: f64,
    pub q: f64,
    pub r: f64,
}

impl AsymmetricPovmParams {
    pub fn new(x: f64, lambda: f64) -> Result<Self> {
        check_unit("x", x)?;
        let (a, b) = lambda_coefficients(lambda)?;
        let y1 = (2.0 + 2.0 * (1.0 - lambda).sqrt() - lambda) / 4.0;
        let y2 = lambda / 4.0;
        let ysum = y1 + y2;
        let partner_weight = y1 * (1.0 - x) / ysum;
        let product_weight = y2 * (1.0 - x) / ysum;
        let e = product_weight.sqrt();
        let sp = partner_weight.sqrt();
        let sx = x.sqrt();
        Ok(Self {
            x,
            lambda,
            a,
            b,
            y1,
            y2,
            partner_weight,
            product_weight,
            e,
            f: a * a * sp + b * b * sx,
            g: b * b * sp + a * a * sx,
            h: a * b * sp - a * b * sx,
            q: a * b * (y1 * (1.0 - 2.0 * x) - x * y2) / ysum,
            r: product_weight,
        })
    }
}

/// The asymmetric four-outcome family built from the λ-basis and the
/// product basis:
///
/// ```text
/// E1 = x ψ1 + w ψ2 + v φ3     E2 = x ψ2 + w ψ1 + v φ4
/// E3 = x ψ3 + w ψ4 + v φ1     E4 = x ψ4 + w ψ3 + v φ2
/// ```
///
/// with `w = y1(1-x)/(y1+y2)` and `v = y2(1-x)/(y1+y2)`.
pub fn asymmetric_povm(x: f64, lambda: f64) -> Result<Povm> {
    let p = AsymmetricPovmParams::new(x, lambda)?;
    let psi = |k| lambda_basis(lambda, k).expect("valid index").projector();
    let phi = |k| product_basis(k).expect("valid index").projector();
    // (main, partner, product) index triples per outcome
    let layout = [(1, 2, 3), (2, 1, 4), (3, 4, 1), (4, 3, 2)];
    let effects = layout
        .iter()
        .map(|&(main, partner, product)| {
            let m = &psi(main).scale(x) + &psi(partner).scale(p.partner_weight);
            &m + &phi(product).scale(p.product_weight)
        })
        .collect();
    Ok(Povm::new(format!("asymmetric(x={x}, lambda={lambda})"), effects))
}

/// Negativity of the trace-normalized effect `E_i / Tr(E_i)`.
pub fn effect_entanglement(p: &Povm, i: usize) -> Result<f64> {
    let e = p.effect(i)?;
    let tr = e.trace().re;
    if tr <= 1e-12 {
        return Err(Error::DegenerateEffect { index: i, trace: tr });
    }
    let rho = DensityMatrix::new(2, e.scale(1.0 / tr))?;
    negativity(&rho)
}
