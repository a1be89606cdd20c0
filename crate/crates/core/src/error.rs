use crate::povm::Violation;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("matrix is not Hermitian (max |m - m†| = {residual:.3e})")]
    NotHermitian { residual: f64 },

    #[error("matrix is not positive semidefinite (min eigenvalue {min_eigenvalue:.3e})")]
    NotPsd { min_eigenvalue: f64 },

    #[error("index out of range: {0}")]
    BadIndex(String),

    #[error("bad dimension: expected {expected}, found {found}")]
    BadDim { expected: usize, found: usize },

    #[error("bad parameter: {0}")]
    BadParam(String),

    #[error("not a valid density matrix: {0}")]
    NotAState(String),

    #[error("invalid POVM ({} violation(s)): {}", .0.len(), join_violations(.0))]
    InvalidPovm(Vec<Violation>),

    #[error("effect {index} has vanishing trace {trace:.3e}")]
    DegenerateEffect { index: usize, trace: f64 },

    #[error("no bracket: {0}")]
    NoBracket(String),

    #[error("correlation hierarchy violated: {0}")]
    HierarchyViolation(String),

    #[error("malformed POVM JSON: {0}")]
    PovmFormat(String),

    #[error("closed form disagrees with numeric pipeline: {0}")]
    OracleMismatch(String),

    #[error("at lambda = {lambda}: {source}")]
    AtLambda {
        lambda: f64,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn at_lambda(self, lambda: f64) -> Error {
        match self {
            e @ Error::AtLambda { .. } => e,
            e => Error::AtLambda {
                lambda,
                source: Box::new(e),
            },
        }
    }
}

fn join_violations(v: &[Violation]) -> String {
    v.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}
