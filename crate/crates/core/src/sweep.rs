//! Parameter sweeps over the closed forms.
//!
//! A [`SweepSpec`] overrides one parameter of a base configuration at each
//! grid point and evaluates the requested outputs. The resulting
//! [`SweepTable`] can be checked for monotone or bounded columns and scanned
//! for the first point where two columns cross.

use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{self, CorrelationMatrix, MemoryConfig, ModelError, SystemConfig, TopicRates};

/// Absolute slack when comparing neighbouring values in shape checks.
pub const SHAPE_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweptParameter {
    /// Shared window and every separate window.
    MemoryWindow,
    /// `lambda_noise / lambda_total` of every topic, holding totals fixed.
    NoiseRatio,
    NAgents,
    /// Every off-diagonal correlation entry.
    Rho,
}

impl SweptParameter {
    pub fn name(self) -> &'static str {
        match self {
            Self::MemoryWindow => "memory_window",
            Self::NoiseRatio => "noise_ratio",
            Self::NAgents => "n_agents",
            Self::Rho => "rho",
        }
    }

    fn check(self, value: f64) -> bool {
        match self {
            Self::MemoryWindow => value >= 0.0 && value.is_finite(),
            Self::NoiseRatio | Self::Rho => (0.0..=1.0).contains(&value),
            Self::NAgents => value >= 0.0 && value.fract() == 0.0 && value <= f64::from(u32::MAX),
        }
    }

    fn apply(self, base: &SystemConfig, value: f64) -> Result<SystemConfig, ModelError> {
        match self {
            Self::MemoryWindow => base.with_memory(MemoryConfig::uniform(value, base.n_topics())?),
            Self::NoiseRatio => {
                let topics = base
                    .topics()
                    .iter()
                    .map(|t| TopicRates::from_total(t.total_rate(), value))
                    .collect::<Result<Vec<_>, _>>()?;
                base.with_topics(topics)
            }
            Self::NAgents => Ok(base.with_latency(base.latency().with_n_agents(value as u32))),
            Self::Rho => base.with_correlations(CorrelationMatrix::uniform(base.n_topics(), value)?),
        }
    }
}

impl fmt::Display for SweptParameter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepOutput {
    RciShared,
    RciSeparate,
    RciRatio,
    SimplifiedShared,
    SimplifiedSeparate,
    TShared,
    TSeparate,
    TimeRatio,
}

impl SweepOutput {
    pub const ALL: [SweepOutput; 8] = [
        Self::RciShared,
        Self::RciSeparate,
        Self::RciRatio,
        Self::SimplifiedShared,
        Self::SimplifiedSeparate,
        Self::TShared,
        Self::TSeparate,
        Self::TimeRatio,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::RciShared => "rci_shared",
            Self::RciSeparate => "rci_separate",
            Self::RciRatio => "rci_ratio",
            Self::SimplifiedShared => "simplified_shared",
            Self::SimplifiedSeparate => "simplified_separate",
            Self::TShared => "t_shared",
            Self::TSeparate => "t_separate",
            Self::TimeRatio => "time_ratio",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|o| o.name() == name)
    }
}

impl fmt::Display for SweepOutput {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SweepError {
    #[error("empty grid")]
    EmptyGrid,
    #[error("grid must be strictly increasing (index {index}: {value})")]
    GridNotIncreasing { index: usize, value: f64 },
    #[error("grid value {value} is outside the domain of {parameter}")]
    OutOfDomain { parameter: SweptParameter, value: f64 },
    #[error("no outputs requested")]
    NoOutputs,
    #[error("output {0} requested twice")]
    DuplicateOutput(SweepOutput),
    #[error("unknown column {0:?}")]
    UnknownColumn(String),
    #[error("at {parameter} = {value}: {source}")]
    Model {
        parameter: SweptParameter,
        value: f64,
        source: ModelError,
    },
}

impl SweepError {
    /// Math-domain failure while evaluating a grid point.
    pub fn is_domain_error(&self) -> bool {
        matches!(self, SweepError::Model { source, .. } if source.is_domain_error())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    base_config: SystemConfig,
    parameter: SweptParameter,
    grid: Vec<f64>,
    outputs: Vec<SweepOutput>,
}

impl SweepSpec {
    pub fn new(
        base_config: SystemConfig,
        parameter: SweptParameter,
        grid: Vec<f64>,
        outputs: Vec<SweepOutput>,
    ) -> Result<Self, SweepError> {
        if grid.is_empty() {
            return Err(SweepError::EmptyGrid);
        }
        for (index, &value) in grid.iter().enumerate() {
            if !parameter.check(value) {
                return Err(SweepError::OutOfDomain { parameter, value });
            }
            if index > 0 && value <= grid[index - 1] {
                return Err(SweepError::GridNotIncreasing { index, value });
            }
        }
        if outputs.is_empty() {
            return Err(SweepError::NoOutputs);
        }
        for (i, o) in outputs.iter().enumerate() {
            if outputs[..i].contains(o) {
                return Err(SweepError::DuplicateOutput(*o));
            }
        }
        Ok(Self {
            base_config,
            parameter,
            grid,
            outputs,
        })
    }

    pub fn base_config(&self) -> &SystemConfig {
        &self.base_config
    }

    pub fn parameter(&self) -> SweptParameter {
        self.parameter
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn outputs(&self) -> &[SweepOutput] {
        &self.outputs
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub x: f64,
    /// One value per requested output, in request order.
    pub values: Vec<f64>,
    /// Every RCI evaluated for this row stayed in the probability domain.
    pub in_probability_domain: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepTable {
    pub parameter: SweptParameter,
    pub outputs: Vec<SweepOutput>,
    pub rows: Vec<SweepRow>,
}

impl SweepTable {
    pub fn column_index(&self, name: &str) -> Result<usize, SweepError> {
        self.outputs
            .iter()
            .position(|o| o.name() == name)
            .ok_or_else(|| SweepError::UnknownColumn(name.to_owned()))
    }

    pub fn column(&self, name: &str) -> Result<Vec<f64>, SweepError> {
        let idx = self.column_index(name)?;
        Ok(self.rows.iter().map(|r| r.values[idx]).collect())
    }

    pub fn xs(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.x).collect()
    }
}

/// `(lambda_total, noise_ratio, window, rho)` when the config is two
/// identical topics with symmetric coupling and one common window.
fn symmetric_params(config: &SystemConfig) -> Result<(f64, f64, f64, f64), ModelError> {
    let topics = config.topics();
    let mem = config.memory();
    let window = mem.shared_window();
    if topics.len() != 2
        || topics[0] != topics[1]
        || !config.correlations().is_symmetric()
        || mem.separate_windows().iter().any(|&w| w != window)
    {
        return Err(ModelError::NotSymmetric);
    }
    Ok((
        topics[0].total_rate(),
        topics[0].noise_ratio(),
        window,
        config.correlations().get(0, 1),
    ))
}

/// Evaluates a single output on a configuration. Also returns the RCI
/// domain flag when the output involves an RCI.
fn evaluate(config: &SystemConfig, output: SweepOutput) -> Result<(f64, bool), ModelError> {
    let mem = config.memory();
    let lat = config.latency();
    Ok(match output {
        SweepOutput::RciShared => {
            let r = model::rci_shared(config);
            (r.value, r.in_probability_domain)
        }
        SweepOutput::RciSeparate => {
            let r = model::rci_separate(config);
            (r.value, r.in_probability_domain)
        }
        SweepOutput::RciRatio => {
            let ok =
                model::rci_shared(config).in_probability_domain && model::rci_separate(config).in_probability_domain;
            (model::rci_ratio(config)?, ok)
        }
        SweepOutput::SimplifiedShared => {
            let (l, r, m, rho) = symmetric_params(config)?;
            let v = model::simplified_rci_shared(l, r, m, rho)?;
            (v, (0.0..=1.0).contains(&v))
        }
        SweepOutput::SimplifiedSeparate => {
            let (l, r, m, rho) = symmetric_params(config)?;
            let v = model::simplified_rci_separate(l, r, m, rho)?;
            (v, (0.0..=1.0).contains(&v))
        }
        SweepOutput::TShared => (model::t_shared(lat, mem.shared_window())?, true),
        SweepOutput::TSeparate => (model::t_separate(lat, mem.max_separate_window())?, true),
        SweepOutput::TimeRatio => (
            model::response_time_ratio(lat, mem.shared_window(), mem.max_separate_window())?,
            true,
        ),
    })
}

fn evaluate_row(spec: &SweepSpec, x: f64) -> Result<SweepRow, SweepError> {
    let annotate = |source| SweepError::Model {
        parameter: spec.parameter,
        value: x,
        source,
    };
    let config = spec.parameter.apply(&spec.base_config, x).map_err(annotate)?;
    let mut values = Vec::with_capacity(spec.outputs.len());
    let mut in_probability_domain = true;
    for &output in &spec.outputs {
        let (v, ok) = evaluate(&config, output).map_err(annotate)?;
        values.push(v);
        in_probability_domain &= ok;
    }
    Ok(SweepRow {
        x,
        values,
        in_probability_domain,
    })
}

/// Evaluates every grid point. Rows are computed in parallel and returned in
/// grid order; on failure the error of the first failing grid point wins.
pub fn run_sweep(spec: &SweepSpec) -> Result<SweepTable, SweepError> {
    let rows: Vec<Result<SweepRow, SweepError>> = spec.grid.par_iter().map(|&x| evaluate_row(spec, x)).collect();
    Ok(SweepTable {
        parameter: spec.parameter,
        outputs: spec.outputs.clone(),
        rows: rows.into_iter().collect::<Result<_, _>>()?,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Shape {
    Nondecreasing,
    Nonincreasing,
    /// Every value in `[0, 1]`.
    Bounded01,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ShapeCheck {
    pub holds: bool,
    /// Row index of the first offending value (for monotone shapes, the
    /// later row of the offending pair).
    pub first_violation: Option<usize>,
}

pub fn check_shape(table: &SweepTable, column: &str, shape: Shape) -> Result<ShapeCheck, SweepError> {
    let values = table.column(column)?;
    let first_violation = match shape {
        Shape::Nondecreasing => (1..values.len()).find(|&i| values[i] < values[i - 1] - SHAPE_TOLERANCE),
        Shape::Nonincreasing => (1..values.len()).find(|&i| values[i] > values[i - 1] + SHAPE_TOLERANCE),
        Shape::Bounded01 => values.iter().position(|v| !(0.0..=1.0).contains(v)),
    };
    Ok(ShapeCheck {
        holds: first_violation.is_none(),
        first_violation,
    })
}

/// First grid interval `(x_lo, x_hi)` across which `col_a - col_b` changes
/// sign. Rows where the columns are equal carry no sign and are skipped.
pub fn crossover_scan(table: &SweepTable, col_a: &str, col_b: &str) -> Result<Option<(f64, f64)>, SweepError> {
    let a = table.column(col_a)?;
    let b = table.column(col_b)?;
    let mut last: Option<(usize, bool)> = None;
    for i in 0..a.len() {
        let d = a[i] - b[i];
        if d == 0.0 || d.is_nan() {
            continue;
        }
        let positive = d > 0.0;
        if let Some((j, prev)) = last {
            if prev != positive {
                return Ok(Some((table.rows[j].x, table.rows[i].x)));
            }
        }
        last = Some((i, positive));
    }
    Ok(None)
}

/// `start, start + step, ...` up to and including `stop` (with a small
/// allowance for rounding). Points are computed as `start + k * step` so
/// errors do not accumulate.
pub fn linear_grid(start: f64, stop: f64, step: f64) -> Vec<f64> {
    if step.is_nan() || step <= 0.0 || !start.is_finite() || !stop.is_finite() || stop < start {
        return Vec::new();
    }
    let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
    (0..count).map(|k| start + k as f64 * step).collect()
}
