use alloc::string::String;
use alloc::vec::Vec;

use thiserror::Error;

use crate::Rational;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{name} = {value} is outside [0, 1]")]
    OutOfRange { name: &'static str, value: Rational },

    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("embedding constraint violated: p_i must vanish for i in {0:?}")]
    EmbeddingViolation(Vec<usize>),

    #[error("completion is infeasible: p_{index} = {value}")]
    InfeasibleCompletion { index: usize, value: Rational },

    #[error("second-coin head probabilities must all be zero")]
    NonZeroSecondCoin,

    #[error("payoff ratio {0} is undefined (zero denominator)")]
    UndefinedRatio(&'static str),

    #[error("sampling failed after {attempts} rejected draws")]
    SamplingFailed { attempts: usize },

    #[error("linear program is infeasible")]
    Infeasible,

    #[error("linear program is unbounded")]
    Unbounded,

    #[error("invalid configuration: {0}")]
    InvalidConfig(&'static str),
}
