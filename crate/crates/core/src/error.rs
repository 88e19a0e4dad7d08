use thiserror::Error;

use crate::model::SpecError;
use crate::point::Point;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error(transparent)]
    Spec(#[from] SpecError),
    #[error("depth {0} exceeds the supported maximum")]
    DepthTooLarge(u32),
    #[error("invalid model: {0}")]
    InvalidModel(String),
    #[error("point {0} is not in the window")]
    PointOutOfRange(Point),
    #[error("the answer depends on structure beyond the window")]
    Truncated,
    #[error("undefined generator `{0}`")]
    UndefinedGenerator(String),
    #[error("bad word `{text}`: {reason}")]
    BadWord { text: String, reason: String },
}
