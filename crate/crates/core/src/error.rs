use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("alternating sum {sum} for S_{{{r},{s}}}({n},{k}) is not divisible by {k}!")]
    NotDivisible {
        r: u32,
        s: u32,
        n: u32,
        k: u32,
        sum: String,
    },

    #[error("power series truncation orders differ ({left} vs {right})")]
    OrderMismatch { left: usize, right: usize },

    #[error("series exponential needs a zero constant term")]
    NonzeroConstantTerm,

    #[error("series does not converge: {0}")]
    Divergent(String),

    #[error("term budget of {max_terms} exhausted before reaching the requested precision")]
    BudgetExhausted { max_terms: usize },

    #[error("word has {len} letters, above the cap of {cap}")]
    WordTooLong { len: usize, cap: usize },

    #[error("unexpected letter {0:?}: words use 'a' (annihilation) and 'A' (creation)")]
    BadLetter(char),

    #[error("normal form term ({i},{j}) breaks the expected offset: {detail}")]
    OracleStructure { i: usize, j: usize, detail: String },

    #[error("coherent state tail mass {tail_mass:e} exceeds threshold at dimension {dim}; try dimension {suggested_dim}")]
    TailMassTooLarge {
        dim: usize,
        tail_mass: f64,
        suggested_dim: usize,
    },

    #[error("Fock dimension {dim} too small for this expectation; need at least {suggested_dim}")]
    DimensionTooSmall { dim: usize, suggested_dim: usize },

    #[error("truncated expectation unstable under dimension increase (relative change {change:e}); try dimension {suggested_dim}")]
    Unstable { change: f64, suggested_dim: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
