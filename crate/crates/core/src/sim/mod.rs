//! Seeded Monte Carlo oracle for the closed-form model.
//!
//! Each probabilistic ingredient of the RCI is re-estimated from sampled
//! exponential inter-arrival times: the zero-arrival probability of a
//! window, the chance that a noisy arrival beats a correct one, and the
//! joint "empty window, then noise" event on a merged stream. RCI values are
//! then rebuilt from those estimates through the same composition algebra
//! as [`crate::model`]; correlation coefficients act as algebraic weights,
//! not as a sampled joint process.
//!
//! All randomness comes from [`RngSpec`] streams, so a run is reproducible
//! from its seed and partition count.

mod estimators;
mod rng;
mod validate;

pub use estimators::{
    estimate_next_event_noise, estimate_noise_after_correct, estimate_rci, estimate_zero_arrival,
    interarrival_from_uniform, sample_interarrival, RciEstimate, Sampler, SimEstimate,
};
pub use rng::RngSpec;
pub use validate::{
    validate, ComponentRecord, ValidationReport, Validator, DEFAULT_SIGMA_THRESHOLD, MIN_VALIDATION_TRIALS,
};

use thiserror::Error;

use crate::model::ModelError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimError {
    #[error("rate must be finite and > 0, got {0}")]
    InvalidRate(f64),
    #[error("window must be >= 0, got {0}")]
    NegativeWindow(f64),
    #[error("uniform draw must lie in (0, 1], got {0}")]
    UniformOutOfRange(f64),
    #[error("trial count must be positive")]
    ZeroTrials,
    #[error("validation needs at least {min} trials, got {got}")]
    TooFewTrials { min: u64, got: u64 },
    #[error("sigma threshold must be > 0, got {0}")]
    InvalidThreshold(f64),
    #[error("partition count {0} must be between 1 and the trial count")]
    InvalidPartitions(u32),
    #[error(transparent)]
    Model(#[from] ModelError),
}
