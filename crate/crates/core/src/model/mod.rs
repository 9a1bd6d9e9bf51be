//! Closed-form consistency and latency model.
//!
//! Statements for each topic arrive as two independent Poisson streams
//! (correct and noisy). A context window of length `M` retains a correct
//! statement with probability `exp(-lambda_total * M)`, the chance that the
//! window sees no arrivals at all. The Response Consistency Index (RCI)
//! combines that retention term with the probability that noise follows a
//! correct statement, both for one agent holding every topic in a single
//! shared window and for one agent per topic with its own window.
//!
//! Everything here is a pure function of immutable inputs.
//!
//! A few conventions worth knowing:
//!
//! * `log` in the search-time model is the natural logarithm. Any other base
//!   only rescales `alpha`.
//! * RCI values are never clamped. When coupling and noise push a bracket
//!   outside `[0, 1]` the raw value is returned with
//!   [`RciReport::in_probability_domain`] set to `false`.
//! * The simplified symmetric shared form ([`simplified_rci_shared`]) uses a
//!   cross-term coefficient of `1 + rho/2`, whereas specializing
//!   [`rci_shared`] to two identical topics yields `1 + rho`. Both are kept as
//!   written; the gap is `exp(-2 lambda M) (rho/2) r (1 - exp(-2 lambda M))`.

mod latency;
mod rci;
mod simplified;
mod types;

pub use latency::{response_time_ratio, t_query, t_search, t_separate, t_shared};
pub use rci::{
    compose_separate, compose_shared, noise_after_correct, noise_impact, rci_ratio, rci_separate, rci_shared,
    retention_probability, total_rate, ContextMode, RciReport,
};
pub use simplified::{simplified_rci_ratio, simplified_rci_separate, simplified_rci_shared};
pub use types::{CorrelationMatrix, LatencyParams, MemoryConfig, SystemConfig, TopicRates};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("{name} must be a finite nonnegative rate, got {value}")]
    InvalidRate { name: &'static str, value: f64 },
    #[error("topic has zero total rate (lambda_correct + lambda_noise must be > 0)")]
    ZeroTotalRate,
    #[error("{name} out of range: {value}")]
    OutOfRange { name: &'static str, value: f64 },
    #[error("memory window must be >= 0, got {0}")]
    NegativeWindow(f64),
    #[error("correlation entry ({row}, {col}) must lie in [0, 1], got {value}")]
    InvalidCorrelation { row: usize, col: usize, value: f64 },
    #[error("correlation diagonal entry {index} must be 0, got {value}")]
    NonZeroDiagonal { index: usize, value: f64 },
    #[error("{what}: expected {expected} topics, found {found}")]
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("configuration has no topics")]
    NoTopics,
    #[error("topic index {index} out of range for {n_topics} topics")]
    TopicIndex { index: usize, n_topics: usize },
    #[error("{0} is undefined: zero denominator")]
    ZeroDenominator(&'static str),
    #[error("simplified forms need two identical topics with symmetric coupling and equal windows")]
    NotSymmetric,
}

impl ModelError {
    /// True for errors raised while evaluating a formula on otherwise valid
    /// inputs, as opposed to rejecting the inputs themselves.
    pub fn is_domain_error(&self) -> bool {
        matches!(self, ModelError::ZeroDenominator(_))
    }
}
