//! Entanglement swapping with a general measurement on the middle pair.
//!
//! Two Bell pairs (qubits 1-2 and 3-4) are prepared, a POVM acts on qubits 2
//! and 3 with the Lüders update, and the resulting states of pairs (1,4),
//! (1,2) and (3,4) are scored for entanglement (negativity), linear EPR
//! steering with two and three settings, and CHSH nonlocality.
//!
//! ```
//! use swapcorr::{run_swap, werner_bell_povm, negativity, Pair};
//!
//! let outcomes = run_swap(&werner_bell_povm(1.0).unwrap()).unwrap();
//! let rho14 = outcomes[0].pair(Pair::P14).unwrap();
//! assert!((negativity(rho14).unwrap() - 1.0).abs() < 1e-10);
//! ```

pub mod analysis;
pub mod cli;
pub mod error;
pub mod linalg;
pub mod measures;
pub mod output;
pub mod povm;
pub mod random;
pub mod states;
pub mod swap;

pub use analysis::{
    classify_table, find_extremum, find_threshold, reference_pattern, sweep, verify, verify_against, Case,
    LambdaGrid, LambdaRange, Pipeline, RangeKind, SweepConfig, SweepRecord, ThresholdResult,
};
pub use error::{Error, Result};
pub use linalg::{hermitian_eig, kron, partial_trace, partial_transpose, ComplexMatrix, Subsystem};
pub use measures::{
    bell_nonlocality, correlation_spectrum, margin, negativity, report, steering2, steering3, CorrelationReport,
    Measure,
};
pub use povm::{asymmetric_povm, effect_entanglement, validate, werner_bell_povm, Povm};
pub use states::{bell_state, werner_state, DensityMatrix, StateVector};
pub use swap::{run_swap, Pair, SwapOutcome};
