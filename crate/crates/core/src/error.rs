use thiserror::Error;

/// Errors raised by the model, semantics and tree operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid schema: {0}")]
    InvalidSchema(String),

    #[error("unknown attribute `{0}`")]
    UnknownAttribute(String),

    #[error("unknown value `{value}` for attribute `{attr}`")]
    UnknownValue { attr: String, value: String },

    #[error("malformed statement: {0}")]
    MalformedStatement(String),

    #[error("malformed CP-net: {0}")]
    MalformedNet(String),

    #[error("malformed LP-tree: {0}")]
    MalformedTree(String),

    #[error("attribute `{0}` is not bound by the instantiation")]
    UnboundAttribute(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("relation is not a preorder: {0}")]
    NotAPreorder(String),

    #[error("universe of {alternatives} alternatives needs {cells} relation cells, above the cap of {cap}")]
    OracleTooLarge {
        alternatives: u128,
        cells: u128,
        cap: u128,
    },

    #[error("theories are defined over different schemas")]
    SchemaMismatch,

    #[error("unsupported input: {0}")]
    Unsupported(String),

    #[error("resource limit reached: {0}")]
    BudgetExhausted(String),

    #[error("theory is not {k}-lexico-compatible")]
    NotLexicoCompatible { k: usize },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
