use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
    #[error("permutations have different sizes ({left} vs {right})")]
    SizeMismatch { left: usize, right: usize },
    #[error("origami must have at least one square")]
    Empty,
    #[error("the squares do not form a connected surface ({components} components)")]
    Disconnected { components: usize },
    #[error("SL(2,Z) orbit exceeded {limit} vertices")]
    OrbitLimitExceeded { limit: usize },
    #[error("direction ({p},{q}) is not primitive")]
    NotPrimitive { p: i64, q: i64 },
    #[error("frame degenerated at step {step}; lower qr_every")]
    DegenerateFrame { step: u64 },
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("unknown surface {0:?}")]
    UnknownSurface(String),
}

impl Error {
    /// Stable identifier of the variant, used in machine-readable output.
    pub fn name(&self) -> &'static str {
        match self {
            Error::InvalidPermutation(_) => "InvalidPermutation",
            Error::SizeMismatch { .. } => "SizeMismatch",
            Error::Empty => "Empty",
            Error::Disconnected { .. } => "Disconnected",
            Error::OrbitLimitExceeded { .. } => "OrbitLimitExceeded",
            Error::NotPrimitive { .. } => "NotPrimitive",
            Error::DegenerateFrame { .. } => "DegenerateFrame",
            Error::InvalidConfig(_) => "InvalidConfig",
            Error::UnknownSurface(_) => "UnknownSurface",
        }
    }
}
