use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid ring tables: {axiom} fails at {witness}")]
    InvalidRing { axiom: String, witness: String },

    #[error("invalid ring homomorphism: {0}")]
    InvalidHom(String),

    #[error("invalid module tables: {axiom} fails at {witness}")]
    InvalidModule { axiom: String, witness: String },

    #[error("subset is not an ideal: {0}")]
    NotAnIdeal(String),

    #[error("carrier of size {size} exceeds the size cap {cap}")]
    SizeCap { size: usize, cap: usize },

    #[error("search budget of {budget} steps exhausted")]
    BudgetExceeded { budget: u64 },

    #[error("precondition violated: {0}")]
    Precondition(String),

    /// The scalar action on a kernel depends on the chosen lift; only
    /// possible when the kernel does not square to zero.
    #[error("kernel action depends on the lift of {a}: lifts {lift1} and {lift2} disagree on kernel element {element}")]
    LiftDependence {
        a: usize,
        lift1: usize,
        lift2: usize,
        element: usize,
    },

    /// A statement that holds as a theorem failed on concrete data. Always an
    /// implementation fault or corrupted input.
    #[error("theorem check failed: {0}")]
    TheoremFault(String),

    #[error("invalid topology: {0}")]
    InvalidSpace(String),

    #[error("invalid sheaf: {0}")]
    InvalidSheaf(String),

    #[error("parse error: {0}")]
    Parse(String),
}
