use serde::{Deserialize, Serialize};

use super::ModelError;

/// Per-topic statement generation rates.
///
/// Both rates are in statements per unit time. A topic must generate
/// something, so `lambda_correct + lambda_noise > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TopicRates {
    lambda_correct: f64,
    lambda_noise: f64,
}

impl TopicRates {
    pub fn new(lambda_correct: f64, lambda_noise: f64) -> Result<Self, ModelError> {
        for (name, value) in [("lambda_correct", lambda_correct), ("lambda_noise", lambda_noise)] {
            if !value.is_finite() || value < 0.0 {
                return Err(ModelError::InvalidRate { name, value });
            }
        }
        if lambda_correct + lambda_noise <= 0.0 {
            return Err(ModelError::ZeroTotalRate);
        }
        Ok(Self {
            lambda_correct,
            lambda_noise,
        })
    }

    /// Splits a total rate so that `noise_ratio` of it is noise.
    pub fn from_total(lambda_total: f64, noise_ratio: f64) -> Result<Self, ModelError> {
        if !(0.0..=1.0).contains(&noise_ratio) {
            return Err(ModelError::OutOfRange {
                name: "noise_ratio",
                value: noise_ratio,
            });
        }
        if !lambda_total.is_finite() || lambda_total <= 0.0 {
            return Err(ModelError::InvalidRate {
                name: "lambda_total",
                value: lambda_total,
            });
        }
        Self::new((1.0 - noise_ratio) * lambda_total, noise_ratio * lambda_total)
    }

    pub fn lambda_correct(&self) -> f64 {
        self.lambda_correct
    }

    pub fn lambda_noise(&self) -> f64 {
        self.lambda_noise
    }

    /// Fraction of statements that are noise.
    pub fn noise_ratio(&self) -> f64 {
        self.lambda_noise / self.total_rate()
    }

    pub fn total_rate(&self) -> f64 {
        self.lambda_correct + self.lambda_noise
    }
}

impl<'de> Deserialize<'de> for TopicRates {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Raw {
            lambda_correct: f64,
            lambda_noise: f64,
        }
        let raw = Raw::deserialize(d)?;
        TopicRates::new(raw.lambda_correct, raw.lambda_noise).map_err(serde::de::Error::custom)
    }
}

/// Inter-topic coupling coefficients, row-major.
///
/// Entry `(i, j)` weights how much topic `j`'s noise contaminates topic `i`.
/// Entries lie in `[0, 1]` and the diagonal is zero. Symmetry is not required.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CorrelationMatrix {
    n_topics: usize,
    entries: Vec<f64>,
}

impl CorrelationMatrix {
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self, ModelError> {
        let n = rows.len();
        if n == 0 {
            return Err(ModelError::NoTopics);
        }
        let mut entries = Vec::with_capacity(n * n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(ModelError::DimensionMismatch {
                    what: "correlation row",
                    expected: n,
                    found: row.len(),
                });
            }
            for (j, &rho) in row.iter().enumerate() {
                if !(0.0..=1.0).contains(&rho) {
                    return Err(ModelError::InvalidCorrelation {
                        row: i,
                        col: j,
                        value: rho,
                    });
                }
                if i == j && rho != 0.0 {
                    return Err(ModelError::NonZeroDiagonal { index: i, value: rho });
                }
                entries.push(rho);
            }
        }
        Ok(Self { n_topics: n, entries })
    }

    /// All-zero coupling between `n_topics` topics.
    pub fn zeros(n_topics: usize) -> Result<Self, ModelError> {
        Self::uniform(n_topics, 0.0)
    }

    /// The same coefficient on every off-diagonal entry.
    pub fn uniform(n_topics: usize, rho: f64) -> Result<Self, ModelError> {
        let rows: Vec<Vec<f64>> = (0..n_topics)
            .map(|i| (0..n_topics).map(|j| if i == j { 0.0 } else { rho }).collect())
            .collect();
        Self::from_rows(&rows)
    }

    pub fn n_topics(&self) -> usize {
        self.n_topics
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.n_topics + j]
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.entries.chunks(self.n_topics).map(<[f64]>::to_vec).collect()
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n_topics).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }
}

/// Memory windows: one pooled window for the shared context, one per topic
/// for separate contexts.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MemoryConfig {
    shared_window: f64,
    separate_windows: Vec<f64>,
}

impl MemoryConfig {
    pub fn new(shared_window: f64, separate_windows: Vec<f64>) -> Result<Self, ModelError> {
        check_window(shared_window)?;
        for &w in &separate_windows {
            check_window(w)?;
        }
        Ok(Self {
            shared_window,
            separate_windows,
        })
    }

    /// Every separate window equal to the shared one.
    pub fn uniform(window: f64, n_topics: usize) -> Result<Self, ModelError> {
        Self::new(window, vec![window; n_topics])
    }

    pub fn shared_window(&self) -> f64 {
        self.shared_window
    }

    pub fn separate_windows(&self) -> &[f64] {
        &self.separate_windows
    }

    /// Window used when a single separate-context search time is needed:
    /// the largest per-agent window.
    pub fn max_separate_window(&self) -> f64 {
        self.separate_windows.iter().copied().fold(0.0, f64::max)
    }
}

/// Coefficients of the deterministic latency model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LatencyParams {
    alpha: f64,
    beta: f64,
    n_agents: u32,
}

impl LatencyParams {
    pub fn new(alpha: f64, beta: f64, n_agents: u32) -> Result<Self, ModelError> {
        if !alpha.is_finite() || alpha <= 0.0 {
            return Err(ModelError::OutOfRange {
                name: "alpha",
                value: alpha,
            });
        }
        if !beta.is_finite() || beta < 0.0 {
            return Err(ModelError::OutOfRange {
                name: "beta",
                value: beta,
            });
        }
        Ok(Self { alpha, beta, n_agents })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn n_agents(&self) -> u32 {
        self.n_agents
    }

    pub fn with_n_agents(self, n_agents: u32) -> Self {
        Self { n_agents, ..self }
    }
}

/// A complete scenario. Construction checks that the topic list, the
/// correlation matrix and the separate windows agree on the topic count.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SystemConfig {
    topics: Vec<TopicRates>,
    correlations: CorrelationMatrix,
    memory: MemoryConfig,
    latency: LatencyParams,
}

impl SystemConfig {
    pub fn new(
        topics: Vec<TopicRates>,
        correlations: CorrelationMatrix,
        memory: MemoryConfig,
        latency: LatencyParams,
    ) -> Result<Self, ModelError> {
        if topics.is_empty() {
            return Err(ModelError::NoTopics);
        }
        if correlations.n_topics() != topics.len() {
            return Err(ModelError::DimensionMismatch {
                what: "correlation matrix",
                expected: topics.len(),
                found: correlations.n_topics(),
            });
        }
        if memory.separate_windows().len() != topics.len() {
            return Err(ModelError::DimensionMismatch {
                what: "separate_windows",
                expected: topics.len(),
                found: memory.separate_windows().len(),
            });
        }
        Ok(Self {
            topics,
            correlations,
            memory,
            latency,
        })
    }

    /// Two identical topics with symmetric coupling and one window for
    /// every context.
    pub fn symmetric_two_topic(
        lambda_total: f64,
        noise_ratio: f64,
        window: f64,
        rho: f64,
        latency: LatencyParams,
    ) -> Result<Self, ModelError> {
        let topic = TopicRates::from_total(lambda_total, noise_ratio)?;
        Self::new(
            vec![topic, topic],
            CorrelationMatrix::uniform(2, rho)?,
            MemoryConfig::uniform(window, 2)?,
            latency,
        )
    }

    pub fn topics(&self) -> &[TopicRates] {
        &self.topics
    }

    pub fn n_topics(&self) -> usize {
        self.topics.len()
    }

    pub fn correlations(&self) -> &CorrelationMatrix {
        &self.correlations
    }

    pub fn memory(&self) -> &MemoryConfig {
        &self.memory
    }

    pub fn latency(&self) -> &LatencyParams {
        &self.latency
    }

    /// Sum of every topic's total rate.
    pub fn pooled_rate(&self) -> f64 {
        self.topics.iter().map(TopicRates::total_rate).sum()
    }

    pub fn with_topics(&self, topics: Vec<TopicRates>) -> Result<Self, ModelError> {
        Self::new(topics, self.correlations.clone(), self.memory.clone(), self.latency)
    }

    pub fn with_correlations(&self, correlations: CorrelationMatrix) -> Result<Self, ModelError> {
        Self::new(self.topics.clone(), correlations, self.memory.clone(), self.latency)
    }

    pub fn with_memory(&self, memory: MemoryConfig) -> Result<Self, ModelError> {
        Self::new(self.topics.clone(), self.correlations.clone(), memory, self.latency)
    }

    pub fn with_latency(&self, latency: LatencyParams) -> Self {
        Self {
            latency,
            ..self.clone()
        }
    }
}

pub(crate) fn check_window(window: f64) -> Result<(), ModelError> {
    if window.is_nan() || window < 0.0 {
        return Err(ModelError::NegativeWindow(window));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_zero_total_rate() {
        assert!(matches!(TopicRates::new(0.0, 0.0), Err(ModelError::ZeroTotalRate)));
        assert!(matches!(
            TopicRates::new(-1.0, 2.0),
            Err(ModelError::InvalidRate {
                name: "lambda_correct",
                ..
            })
        ));
        assert!(TopicRates::new(0.0, 1.0).is_ok());
    }

    #[test]
    fn from_total_splits_rates() {
        let t = TopicRates::from_total(2.0, 0.25).unwrap();
        assert_eq!(t.lambda_noise(), 0.5);
        assert_eq!(t.lambda_correct(), 1.5);
        assert!(TopicRates::from_total(1.0, 1.5).is_err());
    }

    #[test]
    fn correlation_checks() {
        assert!(matches!(
            CorrelationMatrix::from_rows(&[vec![0.5]]),
            Err(ModelError::NonZeroDiagonal { index: 0, .. })
        ));
        assert!(matches!(
            CorrelationMatrix::from_rows(&[vec![0.0, 1.2], vec![0.0, 0.0]]),
            Err(ModelError::InvalidCorrelation { row: 0, col: 1, .. })
        ));
        assert!(matches!(
            CorrelationMatrix::from_rows(&[vec![0.0, 0.1], vec![0.0]]),
            Err(ModelError::DimensionMismatch { .. })
        ));
        let asym = CorrelationMatrix::from_rows(&[vec![0.0, 0.1], vec![0.2, 0.0]]).unwrap();
        assert!(!asym.is_symmetric());
        assert!(CorrelationMatrix::uniform(3, 0.4).unwrap().is_symmetric());
    }

    #[test]
    fn config_dimensions_must_agree() {
        let t = TopicRates::new(1.0, 0.0).unwrap();
        let lat = LatencyParams::new(1.0, 0.0, 0).unwrap();
        let err = SystemConfig::new(
            vec![t, t],
            CorrelationMatrix::zeros(2).unwrap(),
            MemoryConfig::uniform(1.0, 3).unwrap(),
            lat,
        );
        assert!(matches!(
            err,
            Err(ModelError::DimensionMismatch {
                what: "separate_windows",
                ..
            })
        ));
        assert!(MemoryConfig::new(-1.0, vec![]).is_err());
        assert!(LatencyParams::new(0.0, 1.0, 1).is_err());
        assert!(LatencyParams::new(1.0, -1.0, 1).is_err());
    }
}
