use thiserror::Error;

/// Crate-wide error type. Constructors validate eagerly, so most operations
/// only fail on dimension mismatches, membership violations, or solver
/// breakdowns surfaced to the caller.
#[derive(Error, Debug, Clone)]
pub enum Error {
    #[error("dimension mismatch in {what}: expected {expected}, got {got}")]
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        got: usize,
    },

    #[error("matrix is not symmetric: |m[{i}][{j}] - m[{j}][{i}]| = {delta:.3e}")]
    NotSymmetric { i: usize, j: usize, delta: f64 },

    #[error("vector of length {len} is not a packed symmetric matrix")]
    NotTriangularLength { len: usize },

    #[error("invalid cone block: {reason}")]
    InvalidCone { reason: String },

    #[error("invalid parameter {name}: {reason}")]
    InvalidParam { name: &'static str, reason: String },

    #[error("point is not a valid {side} strategy: residual {residual:.3e} exceeds tolerance")]
    NotAStrategy { side: &'static str, residual: f64 },

    #[error("point is not {side}-feasible: worst residual {residual:.3e}")]
    InfeasiblePoint { side: &'static str, residual: f64 },

    #[error("solver failed: {context} (status {status})")]
    SolverFailure { context: String, status: String },

    #[error("equilibrium verification failed: residuals ({res_i:.3e}, {res_ii:.3e}) exceed {tol:.3e}")]
    EquilibriumCheck { res_i: f64, res_ii: f64, tol: f64 },

    #[error("parameter escalation exhausted: {context}")]
    EscalationExhausted { context: String },

    #[error("value {value:.3e} is too close to zero to certify an interior witness; tighten the solver tolerance")]
    ValueNearZero { value: f64 },

    #[error("i/o error: {0}")]
    Io(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub fn dims(what: &'static str, expected: usize, got: usize) -> Self {
        Error::DimensionMismatch {
            what,
            expected,
            got,
        }
    }

    pub fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParam {
            name,
            reason: reason.into(),
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
