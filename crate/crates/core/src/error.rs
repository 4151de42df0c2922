use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("not a group: {0}")]
    NotAGroup(GroupAxiomFailure),

    #[error("{what} of size {size} exceeds the cap of {cap}")]
    TooLarge {
        what: &'static str,
        size: usize,
        cap: usize,
    },

    #[error("unknown group name `{0}`")]
    UnknownName(String),

    #[error("mark vector is not in the image of the mark homomorphism: coefficient of class {class} is {value}")]
    NotInImage { class: usize, value: String },

    #[error("homomorphism is not injective: elements {0} and {1} have the same image")]
    NotInjective(usize, usize),

    #[error("not a homomorphism: {0}")]
    NotAHomomorphism(String),

    #[error("invalid action: {0}")]
    InvalidAction(String),

    #[error("group mismatch: {0}")]
    GroupMismatch(String),

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("integer overflow in {0}")]
    Overflow(&'static str),
}

/// Witness for a failed group axiom.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GroupAxiomFailure {
    Shape(String),
    Associativity { a: usize, b: usize, c: usize },
    NoIdentity,
    NoInverse { element: usize },
}

impl std::fmt::Display for GroupAxiomFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            GroupAxiomFailure::Shape(msg) => write!(f, "{msg}"),
            GroupAxiomFailure::Associativity { a, b, c } => {
                write!(f, "associativity fails on ({a}, {b}, {c})")
            }
            GroupAxiomFailure::NoIdentity => write!(f, "no two-sided identity"),
            GroupAxiomFailure::NoInverse { element } => {
                write!(f, "element {element} has no two-sided inverse")
            }
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
