use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("ambient dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("subspace is not contained in the target subspace")]
    NotContained,
    #[error("could not parse rational {0:?}")]
    ParseRational(String),
    #[error("invalid arrangement: {0}")]
    InvalidArrangement(String),
    #[error("invalid poset: {0}")]
    InvalidPoset(String),
    #[error("poset is not a lattice: {0}")]
    NotLattice(String),
    #[error("element {0} is not an atom")]
    NotAtom(usize),
    #[error("elements {0} and {1} are not comparable (need x <= y)")]
    NotComparable(usize, usize),
    #[error("poset has no unique minimum")]
    NoMinimum,
    #[error("resource guard: {what} would need {count} but the limit is {limit}")]
    Guard { what: &'static str, count: u128, limit: u128 },
    #[error("invalid sheaf: {0}")]
    InvalidSheaf(String),
    #[error("sheaf morphism is not injective at element {0}")]
    NotInjective(usize),
    #[error("sheaf is not decomposable along atom {atom}: map into element {element} drops rank")]
    NotDecomposable { atom: usize, element: usize },
    #[error("invalid chain complex: {0}")]
    InvalidComplex(String),
    #[error("arrangement is not essential")]
    NotEssential,
    #[error("lattice rank {0} is below 2; no closed form applies")]
    RankTooSmall(usize),
    #[error("closed form produced a non-integer or negative value {value} at (i={i}, j={j})")]
    BadPrediction { i: usize, j: usize, value: String },
    #[error("invalid input: {0}")]
    Input(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
