use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("graph would have {requested} edges, exceeding the cap of {cap}")]
    SizeCap { requested: u128, cap: u64 },

    #[error("usage: {0}")]
    Usage(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("operation requires a {expected} graph, got {found}")]
    Family {
        expected: &'static str,
        found: String,
    },

    #[error("vertex {vertex} out of range (graph has {count} vertices)")]
    Range { vertex: usize, count: usize },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("contract violated: {0}")]
    Contract(String),

    #[error("budget exhausted: {0}")]
    Budget(String),

    #[error("enumeration cap {cap} exceeded after {partial} items")]
    Enumeration { cap: usize, partial: usize },

    #[error("cycle could not be classified as a principal cycle: {0}")]
    Classification(String),
}

impl Error {
    /// Budget- and cap-type failures, as opposed to bad input.
    pub fn is_resource_limit(&self) -> bool {
        matches!(
            self,
            Error::SizeCap { .. } | Error::Budget(_) | Error::Enumeration { .. }
        )
    }
}
