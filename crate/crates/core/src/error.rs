use thiserror::Error;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: &'static str },

    #[error("cannot parse distribution `{0}` (expected `polytail:ALPHA` or `point:A`)")]
    ParseDistribution(alloc::string::String),

    #[error("renewal kernel is not defective (total mass {0} >= 1)")]
    NotDefective(f64),

    #[error("no condensation: gamma(beta) = {0} <= 0")]
    NoCondensation(f64),

    #[error("no Malthusian root: weights sum to {0} <= 1")]
    NoMalthusianRoot(f64),

    #[error("root bracketing failed: {0}")]
    Bracketing(&'static str),

    #[error("distribution is in the Bose-Einstein phase; fit-get-richer root undefined")]
    BosePhase,

    #[error("categorical weights sum to {0}, expected 1")]
    CorruptWeights(f64),

    #[error("non-finite value: {0}")]
    NonFinite(&'static str),

    #[error("degenerate input: {0}")]
    Degenerate(&'static str),
}
