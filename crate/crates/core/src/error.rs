use alloc::string::String;

/// Errors raised by the core algorithms.
///
/// Path failures inside the homotopy tracker are *not* errors; they are
/// reported as flagged results so that batch runs keep going.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("sampled point stayed degenerate after {attempts} attempts")]
    DegenerateSample { attempts: usize },

    #[error("not a hypersurface: affine cone dimension {cone_dim} in C^{coords}")]
    NotHypersurface { cone_dim: usize, coords: usize },

    #[error("squaring-up mismatch: {slices} slices but fiber dimension {fiber_dim}")]
    SquaringMismatch { slices: usize, fiber_dim: usize },

    #[error("singular Jacobian at start point")]
    SingularJacobian,

    #[error("monodromy loop produced no successful paths")]
    NoSuccessfulPaths,

    #[error("line specialization kept dropping degree ({degree} < {expected}) after {attempts} draws")]
    DegreeDrop {
        degree: usize,
        expected: usize,
        attempts: usize,
    },

    #[error("prime {0} is unsuitable (divides leading coefficient or breaks squarefreeness)")]
    BadPrime(u64),

    #[error("monomial exceeds packed capacity ({0})")]
    MonomialOverflow(&'static str),

    #[error("coefficient overflow during contraction")]
    CoefficientOverflow,

    #[error("refused: {0}")]
    Refused(String),
}

pub type Result<T> = core::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidInput(msg.into())
}
