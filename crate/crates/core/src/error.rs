use thiserror::Error;

/// Errors raised by the library.
///
/// `Validation` carries the name of the violated input invariant so callers
/// (the CLI in particular) can report it in machine-readable form.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("product of two scalars with nonzero tau-part is not supported")]
    TauProductUnsupported,
    #[error("division by zero")]
    DivisionByZero,
    #[error("cannot parse {what} from {input:?}")]
    Parse { what: &'static str, input: String },
    #[error("invalid input, invariant `{invariant}` violated: {message}")]
    Validation {
        invariant: &'static str,
        message: String,
    },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("matrix has rank {rank} < {rows} rows")]
    RankDeficient { rank: usize, rows: usize },
    #[error("integer-span query on a vector with nonzero tau-part")]
    TauPresent,
    #[error("sign vector {0} is not a covector of the matrix")]
    NotACovector(String),
    #[error("matrix is not unimodular")]
    NotUnimodular,
    #[error("Q-set is partial: attachment was inconclusive within radius {radius}")]
    PartialQSet { radius: u64 },
    #[error("pr(chi) does not lie in the open chamber")]
    NotInChamber,
    #[error("shifting-cone generator {generator} failed validation at multiple {multiple}")]
    ValidationFailed { generator: String, multiple: u32 },
    #[error("element has terms with nonzero hbar exponent")]
    NonSymbol,
    #[error("element is not in filtration step W({0})")]
    NotInFiltration(String),
    #[error("bad d=1 shape: k={k}, n={n}")]
    BadShape { k: i64, n: i64 },
    #[error("cyclic quiver needs m >= 2, got {0}")]
    BadM(i64),
    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),
}

impl Error {
    pub(crate) fn validation(invariant: &'static str, message: impl Into<String>) -> Self {
        Error::Validation {
            invariant,
            message: message.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
