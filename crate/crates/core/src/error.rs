use thiserror::Error;

use crate::model::ValidationReport;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("{what}: {count} exceeds the enumeration cap of {cap}")]
    CapExceeded {
        what: &'static str,
        count: u128,
        cap: u64,
    },
    #[error("invalid environment: {0}")]
    InvalidEnvironment(ValidationReport),
    #[error("operation requires a {expected} environment")]
    WrongFamily { expected: &'static str },
    #[error("malformed ex post rule: {0}")]
    MalformedRule(String),
    #[error("virtual valuations of player {player} are not monotone")]
    NotRegular { player: usize },
    #[error("stake {index} is not strictly positive")]
    NonPositiveStake { index: usize },
    #[error("interim allocation decreases in the type ({high} < {low})")]
    MonotonicityViolated { high: String, low: String },
    #[error("value out of range: {0}")]
    Range(String),
    #[error("vector is not in the Chow polytope")]
    NotInPolytope,
    #[error("affine form vanishes at input {index}")]
    VanishingWitness { index: usize },
    #[error("function does not agree with sign+ of the given affine form at input {index}")]
    NotHalfspace { index: usize },
    #[error("majority needs an odd number of inputs, got {0}")]
    EvenN(usize),
    #[error("insufficient blue multiplicity {k}: recovery needs k >= {bound}")]
    InsufficientMultiplicity { k: usize, bound: usize },
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("internal identity violated: {0}")]
    IdentityViolated(String),
}

impl Error {
    /// Identity violations signal a bug, everything else is a property of the input.
    pub fn is_internal(&self) -> bool {
        matches!(self, Error::IdentityViolated(_))
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Error::CapExceeded { .. } => "cap_exceeded",
            Error::InvalidEnvironment(_) => "invalid_environment",
            Error::WrongFamily { .. } => "wrong_family",
            Error::MalformedRule(_) => "malformed_rule",
            Error::NotRegular { .. } => "not_regular",
            Error::NonPositiveStake { .. } => "non_positive_stake",
            Error::MonotonicityViolated { .. } => "monotonicity_violated",
            Error::Range(_) => "range",
            Error::NotInPolytope => "not_in_polytope",
            Error::VanishingWitness { .. } => "vanishing_witness",
            Error::NotHalfspace { .. } => "not_halfspace",
            Error::EvenN(_) => "even_n",
            Error::InsufficientMultiplicity { .. } => "insufficient_multiplicity",
            Error::InvalidGraph(_) => "invalid_graph",
            Error::InvalidInput(_) => "invalid_input",
            Error::IdentityViolated(_) => "identity_violated",
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
