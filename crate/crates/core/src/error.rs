use thiserror::Error;

/// Errors shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("singular matrix")]
    Singular,
    #[error("rows do not span a full-rank sublattice (rank deficient)")]
    RankDeficient,
    #[error("matrix is not symmetric")]
    NotSymmetric,
    #[error("form is not positive definite")]
    NotPositiveDefinite,
    #[error("point is not in the lattice")]
    NotInLattice,
    #[error("degenerate point set: vertices do not affinely span the space")]
    Degenerate,
    #[error("points are not cospherical")]
    NotCospherical,
    #[error("enumeration exceeded the cap of {cap} points")]
    EnumerationCap { cap: usize },
    #[error("matrix is not Hadamard")]
    NotHadamard,
    #[error("matrix entries must be +1 or -1")]
    NotSignMatrix,
    #[error("first row is not all +1")]
    NotNormalized,
    #[error("columns are not closed under mod-2 addition")]
    CodeNotLinear,
    #[error("no certifying epsilon found after {halvings} halvings")]
    EpsilonExhausted { halvings: u32 },
    #[error("vertex set is not Delone; witness {witness}")]
    NotDelone { witness: String },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
