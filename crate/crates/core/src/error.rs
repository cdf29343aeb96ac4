use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("index {index} out of range 1..={max}")]
    Index { index: usize, max: usize },

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("parent genome is not homozygous at locus {locus}")]
    NotHomozygous { locus: usize },

    #[error("marker {marker} has no tracked founder origin")]
    UntrackedOrigin { marker: usize },

    #[error("unknown trait `{0}`")]
    UnknownTrait(String),

    #[error("malformed input: {0}")]
    Format(String),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
