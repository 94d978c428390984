//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("modulus must be monic of degree {expected}, got {got:?}")]
    InvalidModulus { expected: usize, got: Vec<u64> },

    #[error("modulus coefficient {0} is not reduced mod {1}")]
    CoefficientOutOfRange(u64, u64),

    #[error("modulus is reducible: it has an irreducible factor of degree {0}")]
    ReducibleModulus(usize),

    #[error("subfield degree {degree} does not divide extension degree {extension}")]
    DegreeDoesNotDivide { degree: usize, extension: usize },

    #[error("field with {0} elements exceeds the supported size {1}")]
    FieldTooLarge(u128, u64),

    #[error("tower must have at least one block")]
    NoBlocks,

    #[error("block profile has {profile} entries but the tower has {blocks} blocks")]
    ProfileMismatch { profile: usize, blocks: usize },

    #[error("block length must be positive")]
    EmptyBlock,

    #[error("cannot invert zero")]
    ZeroInversion,

    #[error("entry is not an element of the declared field level")]
    EntryOutsideLevel,

    #[error("vector length {got} does not match ambient dimension {expected}")]
    VectorLength { expected: usize, got: usize },

    #[error("block index {0} out of range ({1} blocks)")]
    BlockOutOfRange(usize, usize),

    #[error("subspace dimension {dim} out of range for ambient dimension {ambient}")]
    DimensionOutOfRange { dim: usize, ambient: usize },

    #[error("generator matrix rows are linearly dependent")]
    RankDeficientGenerator,

    #[error("generator matrix is {got} columns wide, expected {expected}")]
    GeneratorWidth { expected: usize, got: usize },

    #[error("grounds do not match (different tower or block profile)")]
    GroundMismatch,

    #[error("code has no nonzero codewords")]
    ZeroCode,

    #[error("argument out of range: {0}")]
    OutOfRange(String),

    #[error("search space of {needed} states exceeds the ceiling of {ceiling}")]
    ScaleExceeded { needed: u128, ceiling: u64 },
}

pub type Result<T> = std::result::Result<T, Error>;

/// Ceiling on brute-force search spaces. Every exhaustive routine sizes its
/// state space up front and refuses to run past the ceiling rather than
/// stalling.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ScaleGuard {
    pub max_states: u64,
}

impl Default for ScaleGuard {
    fn default() -> Self {
        ScaleGuard { max_states: 1 << 24 }
    }
}

impl ScaleGuard {
    pub fn new(max_states: u64) -> Self {
        ScaleGuard { max_states }
    }

    pub fn admit(&self, needed: u128) -> Result<()> {
        if needed > self.max_states as u128 {
            Err(Error::ScaleExceeded { needed, ceiling: self.max_states })
        } else {
            Ok(())
        }
    }
}
