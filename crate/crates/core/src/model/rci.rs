use serde::Serialize;

use super::types::{check_window, SystemConfig, TopicRates};
use super::ModelError;

/// Which context layout a per-topic quantity is evaluated under.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ContextMode {
    /// One window of length `M` over the pooled rate of all topics.
    Shared,
    /// Topic `i` has its own window `M_i` and its own rate.
    Separate,
}

/// An RCI value together with the pieces it was built from.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RciReport {
    /// Raw RCI, not clamped.
    pub value: f64,
    /// `1 - exp(-rate * window)`; for separate contexts, the product over topics.
    pub retention_factor: f64,
    /// Sum of the per-topic noise-impact terms.
    pub noise_impact_total: f64,
    pub topic_noise_impacts: Vec<f64>,
    /// `value` and every noise bracket lie in `[0, 1]`.
    pub in_probability_domain: bool,
}

pub fn total_rate(rates: &TopicRates) -> f64 {
    rates.total_rate()
}

/// Probability that a Poisson stream of rate `lambda_total` has no arrival
/// in a window of length `window`.
pub fn retention_probability(lambda_total: f64, window: f64) -> Result<f64, ModelError> {
    if !lambda_total.is_finite() || lambda_total <= 0.0 {
        return Err(ModelError::InvalidRate {
            name: "lambda_total",
            value: lambda_total,
        });
    }
    check_window(window)?;
    Ok((-lambda_total * window).exp())
}

/// Probability that the window holds no arrivals and the next statement is noise.
pub fn noise_after_correct(rates: &TopicRates, window: f64) -> Result<f64, ModelError> {
    let total = rates.total_rate();
    Ok(retention_probability(total, window)? * rates.lambda_noise() / total)
}

/// Noise-after-correct probability of every topic under `mode`.
///
/// Shared mode uses the pooled rate and the shared window for every topic,
/// so topic `j` contributes `exp(-L M) * lambda_noise_j / L`.
fn noise_terms(config: &SystemConfig, mode: ContextMode) -> Vec<f64> {
    match mode {
        ContextMode::Shared => {
            let pooled = config.pooled_rate();
            let decay = (-pooled * config.memory().shared_window()).exp();
            config
                .topics()
                .iter()
                .map(|t| decay * t.lambda_noise() / pooled)
                .collect()
        }
        ContextMode::Separate => config
            .topics()
            .iter()
            .zip(config.memory().separate_windows())
            .map(|(t, &w)| {
                let total = t.total_rate();
                (-total * w).exp() * t.lambda_noise() / total
            })
            .collect(),
    }
}

fn coupled_impact(terms: &[f64], corr: &super::CorrelationMatrix, i: usize) -> f64 {
    let cross: f64 = terms
        .iter()
        .enumerate()
        .filter(|&(j, _)| j != i)
        .map(|(j, t)| corr.get(i, j) * t)
        .sum();
    terms[i] + cross
}

/// Topic `i`'s own noise-after-correct term plus the correlation-weighted
/// terms of every other topic.
pub fn noise_impact(config: &SystemConfig, topic_index: usize, mode: ContextMode) -> Result<f64, ModelError> {
    if topic_index >= config.n_topics() {
        return Err(ModelError::TopicIndex {
            index: topic_index,
            n_topics: config.n_topics(),
        });
    }
    let terms = noise_terms(config, mode);
    Ok(coupled_impact(&terms, config.correlations(), topic_index))
}

fn unit(x: f64) -> bool {
    (0.0..=1.0).contains(&x)
}

/// Shared-context RCI from its components: the pooled zero-arrival
/// probability and each topic's noise-after-correct term.
///
/// The Monte Carlo estimator feeds sampled components through this same
/// algebra.
pub fn compose_shared(zero_arrival: f64, noise_terms: &[f64], corr: &super::CorrelationMatrix) -> RciReport {
    let impacts: Vec<f64> = (0..noise_terms.len())
        .map(|i| coupled_impact(noise_terms, corr, i))
        .collect();
    let total: f64 = impacts.iter().sum();
    let retention_factor = 1.0 - zero_arrival;
    let bracket = 1.0 - total;
    let value = retention_factor * bracket;
    let in_probability_domain = unit(value) && unit(bracket) && impacts.iter().all(|&x| unit(x));
    RciReport {
        value,
        retention_factor,
        noise_impact_total: total,
        topic_noise_impacts: impacts,
        in_probability_domain,
    }
}

/// Separate-context RCI from per-topic zero-arrival probabilities and
/// noise-after-correct terms.
pub fn compose_separate(zero_arrivals: &[f64], noise_terms: &[f64], corr: &super::CorrelationMatrix) -> RciReport {
    let impacts: Vec<f64> = (0..noise_terms.len())
        .map(|i| coupled_impact(noise_terms, corr, i))
        .collect();
    let retention_factor: f64 = zero_arrivals.iter().map(|p| 1.0 - p).product();
    let value: f64 = zero_arrivals
        .iter()
        .zip(&impacts)
        .map(|(p, impact)| (1.0 - p) * (1.0 - impact))
        .product();
    let in_probability_domain = unit(value) && impacts.iter().all(|&x| unit(x));
    RciReport {
        value,
        retention_factor,
        noise_impact_total: impacts.iter().sum(),
        topic_noise_impacts: impacts,
        in_probability_domain,
    }
}

pub fn rci_shared(config: &SystemConfig) -> RciReport {
    let decay = (-config.pooled_rate() * config.memory().shared_window()).exp();
    compose_shared(decay, &noise_terms(config, ContextMode::Shared), config.correlations())
}

pub fn rci_separate(config: &SystemConfig) -> RciReport {
    let decays: Vec<f64> = config
        .topics()
        .iter()
        .zip(config.memory().separate_windows())
        .map(|(t, &w)| (-t.total_rate() * w).exp())
        .collect();
    compose_separate(
        &decays,
        &noise_terms(config, ContextMode::Separate),
        config.correlations(),
    )
}

/// `rci_separate / rci_shared`; above 1 favors separate contexts.
pub fn rci_ratio(config: &SystemConfig) -> Result<f64, ModelError> {
    let shared = rci_shared(config).value;
    if shared == 0.0 {
        return Err(ModelError::ZeroDenominator("rci_ratio"));
    }
    Ok(rci_separate(config).value / shared)
}
