use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("characteristic {0} is not an odd prime")]
    UnsupportedCharacteristic(u64),

    #[error("invalid tower parameters: {0}")]
    InvalidTower(String),

    #[error("degree {degree} is not supported by a tower of maximal degree {max_degree}")]
    UnsupportedDegree { degree: u32, max_degree: u32 },

    #[error("degree {from} does not divide degree {to}")]
    NotADivisor { from: u32, to: u32 },

    #[error("division by zero in the field")]
    DivisionByZero,

    #[error("character group mismatch: {0}")]
    GroupMismatch(String),

    #[error("invalid torus shape: {0}")]
    InvalidShape(String),

    #[error("invalid character: {0}")]
    InvalidCharacter(String),

    #[error("invalid subtorus datum: {0}")]
    InvalidDatum(String),

    #[error("character is not regular: {0}")]
    NotRegular(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is not in the group: {0}")]
    NotInGroup(String),

    #[error("invalid Jordan pair: {0}")]
    InvalidJordanPair(String),

    #[error("scale cap exceeded: {0}")]
    CapExceeded(String),

    #[error("unsupported rank: {0}")]
    UnsupportedRank(String),

    #[error("internal inconsistency: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
