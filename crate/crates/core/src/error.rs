use thiserror::Error;

/// Errors raised by the arithmetic substrate.
///
/// Every operation that can reject its input reports through this type;
/// silent defaults would mask bugs in the trajectory executors, which rely
/// on these preconditions holding at every step.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DomainError {
    /// expo(0) has no value: the defining loop `while even(y) do y := y/2`
    /// never terminates on 0. The reverse walk's terminal corner is the one
    /// sanctioned caller that must avoid this (see `reverse::ic_step`).
    #[error("expo is undefined on 0")]
    ExpoOfZero,

    /// Division by 2 requires an even operand.
    #[error("div2 requires an even operand, got {0}")]
    OddDiv2(String),

    /// A pair with w = 0 encodes a standard number and must have k >= 0.
    #[error("pair <{k}, {w}> violates: w = 0 requires k >= 0")]
    NegativeStandard { k: String, w: String },

    /// The w component is a non-negative rational by definition.
    #[error("w component must be non-negative, got {0}")]
    NegativeW(String),

    /// Order and addition are defined within one domain only.
    #[error("cross-domain operation: {left} vs {right}")]
    CrossDomain {
        left: &'static str,
        right: &'static str,
    },
}

/// Errors from parsing the textual forms ("123" for naturals,
/// "k+num/den" for non-standard pairs).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("invalid natural number literal {input:?}: {reason}")]
    Nat { input: String, reason: String },

    #[error("invalid pair literal {input:?}: expected \"k+num/den\"")]
    Pair { input: String },

    #[error("invalid pair literal {input:?}: {source}")]
    PairDomain { input: String, source: DomainError },
}
