use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch in {what}: expected {expected}, found {found}")]
    DimensionMismatch { what: &'static str, expected: usize, found: usize },
    #[error("operands belong to different parent structures: {0}")]
    ParentMismatch(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("module action is not flat: {0}")]
    NotFlat(String),
    #[error("not a generator of the bracket: {0}")]
    NotGenerator(String),
    #[error("not a twilled Lie-Rinehart algebra: {0}")]
    NotTwilled(String),
    #[error("not a Lie-Rinehart algebra: {0}")]
    NotLieRinehart(String),
    #[error("not a Lie bialgebra: {0}")]
    NotBialgebra(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
}
