use thiserror::Error;

/// Errors shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A word mentions a symbol id outside the alphabet it is used with.
    #[error("symbol id {id} is out of range for an alphabet of {size} symbols")]
    ForeignSymbol { id: usize, size: usize },

    #[error("token `{0}` is not in the alphabet")]
    UnknownToken(String),

    #[error("operands use different alphabets")]
    AlphabetMismatch,

    #[error("the empty word has no last output")]
    EmptyWord,

    /// Rewriting did not reach an irreducible word within the step budget,
    /// which signals a non-terminating or pathological system.
    #[error("rewriting exceeded the step budget of {budget} steps")]
    StepBudgetExhausted { budget: usize },

    #[error("invalid rewrite rule: {0}")]
    InvalidRule(String),

    /// Hypothesis construction was attempted on an unclosed table.
    #[error("observation table is not closed (unmatched boundary word)")]
    TableNotClosed,

    /// The learner exceeded its round limit, which signals inconsistent
    /// query channels (for example wrong advice).
    #[error("learning did not converge within {0} rounds")]
    Divergence(usize),

    #[error("advice rejected: {0}")]
    AdviceRejected(String),

    #[error("advice unusable: {0}")]
    AdviceFailure(String),

    #[error("this oracle does not support shadow verification")]
    ShadowUnsupported,
}
