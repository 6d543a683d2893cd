use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("vector length {0} outside supported range 1..={max}", max = crate::gf2::MAX_LEN)]
    InvalidLength(usize),

    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("vector already lies in the span of the basis")]
    AlreadyInSpan,

    #[error("span of dimension {dim} exceeds enumeration cap {cap}")]
    CapExceeded { dim: usize, cap: usize },

    #[error("subspace has dimension 0")]
    EmptySubspace,

    #[error("radii a={a}, b={b} out of range for n={n}")]
    RadiusOutOfRange { a: usize, b: usize, n: usize },

    #[error("inner radius 0 cannot be avoided: every matrix maps 0 to 0")]
    ZeroRadius,

    #[error("forbidden weight set contains 0; no subspace can avoid it")]
    InfeasibleZeroWeight,

    #[error("ambient dimension {n} exceeds the limit {max} for this operation")]
    DimensionTooLarge { n: usize, max: usize },

    #[error("inner subspace has a nonzero element of weight {weight} <= b = {b}")]
    InnerTooShallow { weight: usize, b: usize },

    #[error("n = {n} has fewer than two blocks of length d = {d}")]
    BlockCountTooSmall { n: usize, d: usize },

    #[error("interval [{a}, {b}] contains {multiple}, a multiple of 2d")]
    ForbiddenMultiple { a: usize, b: usize, multiple: usize },

    #[error("class weight sets overlap at weight {0}")]
    NotDisjoint(usize),

    #[error("table is missing entry (a={a}, b={b}, n={n})")]
    MissingDependency { a: usize, b: usize, n: usize },

    #[error("set is empty")]
    EmptySet,

    #[error("argument {0} outside the function's domain")]
    DomainError(String),

    #[error("line {line}: {msg}")]
    Format { line: usize, msg: String },

    #[error("invalid weight set `{0}`")]
    WeightSyntax(String),

    #[error("witness failed verification against the forbidden set")]
    WitnessRejected,
}
