use thiserror::Error;

use crate::arith::Rational;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("cannot combine elements of Q(sqrt {0}) and Q(sqrt {1})")]
    ExtensionMismatch(u64, u64),
    #[error("invalid rational literal {0:?}")]
    ParseRational(String),
    #[error("division by zero")]
    DivisionByZero,

    #[error("expected a square matrix, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("index {index} out of range 0..={max}")]
    OutOfRange { index: usize, max: usize },
    #[error("matrix is not nilpotent: N^{power} != 0")]
    NotNilpotent { power: usize },
    #[error("subspaces live in ambient dimensions {0} and {1}")]
    AmbientMismatch(usize, usize),
    #[error("basis columns are linearly dependent")]
    DependentBasis,

    #[error("partitions of {0} and {1} are not comparable")]
    UnequalTotals(usize, usize),
    #[error("partition {parts:?} does not sum to {expected}")]
    WrongTotal { parts: Vec<usize>, expected: usize },
    #[error("label sets differ: {0}")]
    LabelMismatch(String),
    #[error("invalid partition {0:?}: parts must be positive and weakly decreasing")]
    InvalidPartition(Vec<usize>),

    #[error("N*Phi != p^f*Phi*N at entry ({row}, {col}): {lhs} vs {rhs}")]
    RelationViolation {
        row: usize,
        col: usize,
        lhs: Box<Rational>,
        rhs: Box<Rational>,
    },
    #[error("Frobenius matrix is singular")]
    SingularFrobenius,
    #[error("monodromy is not nilpotent: N^{power} != 0")]
    NonNilpotentMonodromy { power: usize },
    #[error("bad filtration flag for {label}: {reason}")]
    BadFlag { label: String, reason: String },
    #[error("invalid field descriptor: {0}")]
    BadField(String),
    #[error("Frobenius has repeated eigenvalue {0}; supply candidate subspaces")]
    RepeatedEigenvalues(Box<Rational>),
    #[error("characteristic polynomial does not split over Q; unfactored part {0:?}")]
    NotFullyRational(Vec<Rational>),
    #[error("subspace is not stable under {0}")]
    UnstableSubspace(&'static str),

    #[error("eigenvalues do not form q-chains compatible with the monodromy: {0}")]
    ChainMismatch(String),
    #[error("invalid segment: {0}")]
    BadSegment(String),
    #[error("character value must be nonzero")]
    ZeroCharacter,

    #[error("invalid Hecke parameters: {0}")]
    BadHeckeParams(String),
    #[error("Hodge-Tate weights for {0} are not strictly increasing")]
    IrregularWeights(String),
    #[error("internal error: {0}")]
    Internal(String),
}
