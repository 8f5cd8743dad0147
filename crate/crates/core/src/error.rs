use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("polynomials live in different variable spaces")]
    SpaceMismatch,
    #[error("no image given for variable `{0}`")]
    MissingImage(String),
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("parse error at offset {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("grading: {0}")]
    Grading(String),
    #[error("invalid cell complex: {0}")]
    Complex(String),
    #[error("incompatible transition maps: {0}")]
    Compatibility(String),
    #[error("gluing data: {0}")]
    Gluing(String),
    #[error("formula not asserted: {0}")]
    BelowThreshold(String),
    #[error("interpolation: {0}")]
    Interpolation(String),
    #[error("domain file: {0}")]
    Format(String),
    #[error("spline: {0}")]
    Spline(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
