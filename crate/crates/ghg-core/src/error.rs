use thiserror::Error;

/// Errors surfaced by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("elements belong to different groups")]
    ParentMismatch,
    #[error("elements belong to different Heisenberg descriptors")]
    DescriptorMismatch,
    #[error("validation failed: {0}")]
    Validation(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("the centre has even order ({0}); this operation needs odd central order")]
    EvenCentralOrder(u64),
    #[error("candidate map is not symplectic")]
    NotSymplectic,
    #[error("diagonal map incompatible with the pairings at generator pair ({0}, {1})")]
    Incompatible(usize, usize),
    #[error("numerical verification failed: {0}")]
    Numerical(String),
    #[error("internal inconsistency: {0}")]
    Internal(String),
    #[error("bounded search exhausted: {0}")]
    Exhausted(String),
}

pub type Result<T> = std::result::Result<T, Error>;
