//! Scenario documents (TOML, `schema = 1`).
//!
//! ```toml
//! schema = 1
//! shared_window = 2.0
//! # separate_windows = [2.0, 2.0]   # defaults to shared_window per topic
//! alpha = 1.0
//! beta = 0.5
//! n_agents = 2
//! correlations = [[0.0, 0.3], [0.3, 0.0]]   # defaults to all zeros
//!
//! [[topics]]
//! lambda_correct = 0.5
//! lambda_noise = 0.5
//!
//! [[topics]]
//! lambda_correct = 0.5
//! lambda_noise = 0.5
//!
//! [sweep]
//! parameter = "memory_window"   # memory_window | noise_ratio | n_agents | rho
//! start = 0.25                  # or: values = [0.5, 1.0, 2.0]
//! stop = 10.0
//! step = 0.25
//! outputs = ["rci_shared", "rci_separate"]
//! chart = true
//!
//! [simulation]
//! trials = 1000000
//! seed = 42
//! sigma_threshold = 4.0
//! partitions = 1
//! ```

use std::ops::Range;

use serde::{Deserialize, Serialize};
use thiserror::Error;
use toml::Spanned;

use crate::model::{CorrelationMatrix, LatencyParams, MemoryConfig, ModelError, SystemConfig, TopicRates};
use crate::sim::DEFAULT_SIGMA_THRESHOLD;
use crate::sweep::{linear_grid, SweepError, SweepOutput, SweepSpec, SweptParameter};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ScenarioError {
    #[error("{0}")]
    Parse(String),
    #[error("line {line}: `{key}`: {message}")]
    Invalid { key: String, line: usize, message: String },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GridSpec {
    Range { start: f64, stop: f64, step: f64 },
    Values { values: Vec<f64> },
}

impl GridSpec {
    pub fn points(&self) -> Vec<f64> {
        match self {
            GridSpec::Range { start, stop, step } => linear_grid(*start, *stop, *step),
            GridSpec::Values { values } => values.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepBlock {
    pub parameter: SweptParameter,
    #[serde(flatten)]
    pub grid: GridSpec,
    #[serde(default = "default_outputs")]
    pub outputs: Vec<SweepOutput>,
    #[serde(default)]
    pub chart: bool,
}

fn default_outputs() -> Vec<SweepOutput> {
    vec![SweepOutput::RciShared, SweepOutput::RciSeparate]
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SimulationBlock {
    pub trials: u64,
    pub seed: u64,
    pub sigma_threshold: f64,
    pub partitions: u32,
}

impl Default for SimulationBlock {
    fn default() -> Self {
        Self {
            trials: 1_000_000,
            seed: 42,
            sigma_threshold: DEFAULT_SIGMA_THRESHOLD,
            partitions: 1,
        }
    }
}

/// A parsed and validated scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub config: SystemConfig,
    pub sweep: Option<SweepBlock>,
    pub simulation: SimulationBlock,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTopic {
    lambda_correct: f64,
    lambda_noise: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawScenario {
    schema: Spanned<u32>,
    topics: Spanned<Vec<Spanned<RawTopic>>>,
    correlations: Option<Spanned<Vec<Vec<f64>>>>,
    shared_window: Spanned<f64>,
    separate_windows: Option<Spanned<Vec<f64>>>,
    alpha: Spanned<f64>,
    beta: Spanned<f64>,
    n_agents: u32,
    sweep: Option<SweepBlock>,
    #[serde(default)]
    simulation: Option<Spanned<SimulationBlock>>,
}

/// The serializable shape of a scenario document.
#[derive(Debug, Clone, PartialEq, Serialize)]
struct ScenarioDocument<'a> {
    schema: u32,
    shared_window: f64,
    separate_windows: &'a [f64],
    alpha: f64,
    beta: f64,
    n_agents: u32,
    correlations: Vec<Vec<f64>>,
    topics: Vec<TopicDocument>,
    #[serde(skip_serializing_if = "Option::is_none")]
    sweep: Option<&'a SweepBlock>,
    simulation: SimulationBlock,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
struct TopicDocument {
    lambda_correct: f64,
    lambda_noise: f64,
}

struct Located<'a> {
    text: &'a str,
}

impl Located<'_> {
    fn line(&self, span: Range<usize>) -> usize {
        let end = span.start.min(self.text.len());
        self.text[..end].bytes().filter(|&b| b == b'\n').count() + 1
    }

    fn err(&self, key: impl Into<String>, span: Range<usize>, message: impl ToString) -> ScenarioError {
        ScenarioError::Invalid {
            key: key.into(),
            line: self.line(span),
            message: message.to_string(),
        }
    }
}

impl Scenario {
    pub fn parse(text: &str) -> Result<Self, ScenarioError> {
        let raw: RawScenario = toml::from_str(text).map_err(|e| ScenarioError::Parse(e.to_string()))?;
        let loc = Located { text };

        if *raw.schema.get_ref() != SCHEMA_VERSION {
            return Err(loc.err(
                "schema",
                raw.schema.span(),
                format!("unsupported schema {}, expected {SCHEMA_VERSION}", raw.schema.get_ref()),
            ));
        }

        let topics_span = raw.topics.span();
        let mut topics = Vec::new();
        for (i, t) in raw.topics.into_inner().into_iter().enumerate() {
            let span = t.span();
            let t = t.into_inner();
            topics.push(
                TopicRates::new(t.lambda_correct, t.lambda_noise)
                    .map_err(|e| loc.err(format!("topics[{i}]"), span, e))?,
            );
        }
        if topics.is_empty() {
            return Err(loc.err("topics", topics_span, ModelError::NoTopics));
        }
        let n = topics.len();

        let correlations = match &raw.correlations {
            Some(rows) => {
                let span = rows.span();
                CorrelationMatrix::from_rows(rows.get_ref()).map_err(|e| loc.err("correlations", span, e))?
            }
            None => CorrelationMatrix::zeros(n).expect("n > 0"),
        };
        if correlations.n_topics() != n {
            let span = raw.correlations.as_ref().map(Spanned::span).unwrap_or(0..0);
            return Err(loc.err(
                "correlations",
                span,
                format!("matrix is {0}x{0} but there are {n} topics", correlations.n_topics()),
            ));
        }

        let shared = *raw.shared_window.get_ref();
        let separate = match &raw.separate_windows {
            Some(w) => {
                if w.get_ref().len() != n {
                    return Err(loc.err(
                        "separate_windows",
                        w.span(),
                        format!("expected {n} windows, found {}", w.get_ref().len()),
                    ));
                }
                w.get_ref().clone()
            }
            None => vec![shared; n],
        };
        let memory = MemoryConfig::new(shared, separate).map_err(|e| {
            let (key, span) = match &raw.separate_windows {
                Some(w) if shared >= 0.0 => ("separate_windows", w.span()),
                _ => ("shared_window", raw.shared_window.span()),
            };
            loc.err(key, span, e)
        })?;

        let latency = LatencyParams::new(*raw.alpha.get_ref(), *raw.beta.get_ref(), raw.n_agents).map_err(|e| {
            let span = if *raw.alpha.get_ref() <= 0.0 {
                raw.alpha.span()
            } else {
                raw.beta.span()
            };
            let key = if *raw.alpha.get_ref() <= 0.0 { "alpha" } else { "beta" };
            loc.err(key, span, e)
        })?;

        let config = SystemConfig::new(topics, correlations, memory, latency)
            .map_err(|e| loc.err("topics", topics_span.clone(), e))?;

        let simulation = match raw.simulation {
            Some(s) => {
                let span = s.span();
                let s = s.into_inner();
                if s.trials == 0 {
                    return Err(loc.err("simulation.trials", span, "must be positive"));
                }
                if !(s.sigma_threshold.is_finite() && s.sigma_threshold > 0.0) {
                    return Err(loc.err("simulation.sigma_threshold", span, "must be > 0"));
                }
                if s.partitions == 0 {
                    return Err(loc.err("simulation.partitions", span, "must be positive"));
                }
                s
            }
            None => SimulationBlock::default(),
        };

        Ok(Scenario {
            config,
            sweep: raw.sweep,
            simulation,
        })
    }

    pub fn sweep_spec(&self) -> Option<Result<SweepSpec, SweepError>> {
        self.sweep.as_ref().map(|block| {
            SweepSpec::new(
                self.config.clone(),
                block.parameter,
                block.grid.points(),
                block.outputs.clone(),
            )
        })
    }

    /// Serializes back to a scenario document. Separate windows are always
    /// written out explicitly.
    pub fn to_toml(&self) -> String {
        let c = &self.config;
        let doc = ScenarioDocument {
            schema: SCHEMA_VERSION,
            shared_window: c.memory().shared_window(),
            separate_windows: c.memory().separate_windows(),
            alpha: c.latency().alpha(),
            beta: c.latency().beta(),
            n_agents: c.latency().n_agents(),
            correlations: c.correlations().rows(),
            topics: c
                .topics()
                .iter()
                .map(|t| TopicDocument {
                    lambda_correct: t.lambda_correct(),
                    lambda_noise: t.lambda_noise(),
                })
                .collect(),
            sweep: self.sweep.as_ref(),
            simulation: self.simulation,
        };
        toml::to_string(&doc).expect("scenario documents always serialize")
    }
}
