use thiserror::Error;

/// Errors produced anywhere in the crate.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid signature: {0}")]
    Signature(String),

    #[error("signature mismatch: {left} vs {right}")]
    SignatureMismatch { left: String, right: String },

    #[error("malformed structure: {0}")]
    Structure(String),

    #[error("budget exceeded: {what} needs {needed}, cap is {cap}")]
    Budget {
        what: &'static str,
        needed: u128,
        cap: u128,
    },

    #[error("tuple length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),

    #[error("inconsistent diagram: {0}")]
    Inconsistent(String),

    #[error("malformed tree: {0}")]
    Tree(String),

    #[error("node {0:?} is not in the tree")]
    NodeAbsent(Vec<u32>),

    #[error("unrealizable level spec: {0}")]
    Unrealizable(String),

    #[error("ordinal outside the supported range: {0}")]
    OrdinalRange(String),

    #[error("not a valid image: {0}")]
    InvalidImage(String),

    #[error("division by zero")]
    DivisionByZero,

    #[error("field arithmetic: {0}")]
    Field(String),

    #[error("unsupported radicand shape: {0}")]
    Shape(String),

    #[error("inconsistent atomic type pattern: {0}")]
    Pattern(String),

    #[error("not a member of the image: {0}")]
    NotMember(String),

    #[error("step cap of {0} reached")]
    StepCap(u64),

    #[error("extension failed: {0}")]
    Extension(String),

    #[error("json: {0}")]
    Json(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}

pub(crate) fn check_budget(what: &'static str, needed: u128, cap: u128) -> Result<()> {
    if needed > cap {
        Err(Error::Budget { what, needed, cap })
    } else {
        Ok(())
    }
}
