use thiserror::Error;

use crate::label::LabelKind;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum WalkError {
    #[error("model/lattice mismatch: expected {expected} labels, found {found}")]
    LabelMismatch { expected: LabelKind, found: LabelKind },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("matrix `{name}` is not unitary (max deviation {deviation:.3e})")]
    NotUnitary { name: String, deviation: f64 },

    #[error("matrix `{name}` is {found}x{found}, expected {expected}x{expected}")]
    DimensionMismatch {
        name: String,
        expected: usize,
        found: usize,
    },

    #[error("unknown matrix `{0}`")]
    UnknownMatrix(String),

    #[error("state has zero norm")]
    ZeroNorm,
}

pub type Result<T> = std::result::Result<T, WalkError>;
