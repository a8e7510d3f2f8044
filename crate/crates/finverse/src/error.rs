//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid generator name `{0}` (expected [a-z][a-z0-9_]*)")]
    InvalidGeneratorName(String),

    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),

    /// An element was used with a group it does not belong to.
    #[error("element `{element}` does not belong to this group")]
    BackendMismatch { element: String },

    #[error("invalid group: {0}")]
    InvalidGroup(String),

    #[error("invalid monoid: {0}")]
    InvalidMonoid(String),

    #[error("syntax error at byte {pos}: expected {expected}, found {found}")]
    Syntax {
        pos: usize,
        expected: String,
        found: String,
    },

    #[error("graph is not endpoint-closed: edge ({src}, {label}) leaves the vertex set")]
    NotClosed { src: String, label: String },

    #[error("vertex {0} is isolated (forbidden in the perfect expansion)")]
    IsolatedVertex(String),

    #[error("graph does not contain required vertex {0}")]
    MissingVertex(String),

    #[error("journeys do not compose: previous end {end} differs from next start {start}")]
    NotComposable { end: String, start: String },

    #[error("element lies outside BR: its graph has an edge")]
    NotInBr,

    #[error("term lies outside {domain}: {reason}")]
    OutsideDomain {
        domain: &'static str,
        reason: String,
    },

    #[error("no canonical morphism: {0}")]
    NoSuchMorphism(String),

    #[error("enumeration would exceed the cap of {cap} elements")]
    TooLarge { cap: usize },

    #[error("{0} requires a finite group backend")]
    NotFinite(&'static str),

    #[error("not an inverse monoid: {0}")]
    NotInverse(crate::fim::InverseFailure),

    #[error("not F-inverse: {0}")]
    NotFInverse(crate::fim::FInverseFailure),

    #[error("morphism construction hit an inconsistency at element {element}; the premorphism level map does not factor")]
    ConsistencyFailure { element: usize },

    #[error("io: {0}")]
    Io(String),

    #[error("json: {0}")]
    Json(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}
