use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Malformed or out-of-range input (empty sequence, `n = 0`, bad index).
    #[error("invalid input: {0}")]
    Input(String),

    /// The object is well formed but outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A brute-force routine was asked for a size beyond its hard limit.
    #[error("resource limit: {what} requires n <= {limit}, got {requested}")]
    Resource {
        what: &'static str,
        limit: usize,
        requested: usize,
    },

    /// A relation set does not describe a compatible factorial poset.
    #[error("not a factorial poset: {0}")]
    Validation(String),

    /// A failure inside one stage of a leading-block composition.
    #[error("stage k = {k}: {source}")]
    Stage { k: usize, source: Box<Error> },

    /// Text or JSON that could not be parsed.
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_limit(what: &'static str, limit: usize, requested: usize) -> Result<()> {
    if requested > limit {
        Err(Error::Resource {
            what,
            limit,
            requested,
        })
    } else {
        Ok(())
    }
}
