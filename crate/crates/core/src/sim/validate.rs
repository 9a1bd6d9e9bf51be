use serde::Serialize;

use super::estimators::{Sampler, SimEstimate};
use super::{RngSpec, SimError};
use crate::model::{self, ContextMode, SystemConfig};

pub const MIN_VALIDATION_TRIALS: u64 = 10_000;
pub const DEFAULT_SIGMA_THRESHOLD: f64 = 4.0;

/// One analytic value checked against its Monte Carlo estimate.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComponentRecord {
    pub component: String,
    pub analytic: f64,
    pub estimate: SimEstimate,
    pub z_score: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationReport {
    pub trials: u64,
    pub partitions: u32,
    pub sigma_threshold: f64,
    pub seed: RngSpec,
    pub all_passed: bool,
    pub components: Vec<ComponentRecord>,
}

impl ValidationReport {
    pub fn failures(&self) -> impl Iterator<Item = &ComponentRecord> {
        self.components.iter().filter(|c| !c.passed)
    }

    pub fn component(&self, name: &str) -> Option<&ComponentRecord> {
        self.components.iter().find(|c| c.component == name)
    }
}

/// Runs every component estimator of a configuration against the closed
/// forms and flags those more than `sigma_threshold` standard errors off.
#[derive(Debug, Clone)]
pub struct Validator {
    trials: u64,
    sigma_threshold: f64,
    partitions: u32,
    analytic_offsets: Vec<(String, f64)>,
}

impl Validator {
    pub fn new(trials: u64) -> Result<Self, SimError> {
        if trials < MIN_VALIDATION_TRIALS {
            return Err(SimError::TooFewTrials {
                min: MIN_VALIDATION_TRIALS,
                got: trials,
            });
        }
        Ok(Self {
            trials,
            sigma_threshold: DEFAULT_SIGMA_THRESHOLD,
            partitions: 1,
            analytic_offsets: Vec::new(),
        })
    }

    pub fn sigma_threshold(mut self, sigma: f64) -> Result<Self, SimError> {
        if !(sigma.is_finite() && sigma > 0.0) {
            return Err(SimError::InvalidThreshold(sigma));
        }
        self.sigma_threshold = sigma;
        Ok(self)
    }

    pub fn partitions(mut self, partitions: u32) -> Result<Self, SimError> {
        Sampler::new(self.trials)?.with_partitions(partitions)?;
        self.partitions = partitions;
        Ok(self)
    }

    /// Shifts the analytic value of `component` by `sigmas` of its estimate's
    /// standard error before comparing. Exists to self-test the validator.
    pub fn offset_analytic(mut self, component: &str, sigmas: f64) -> Self {
        self.analytic_offsets.push((component.to_owned(), sigmas));
        self
    }

    pub fn run(&self, config: &SystemConfig, rng: RngSpec) -> Result<ValidationReport, SimError> {
        let sampler = Sampler::new(self.trials)?.with_partitions(self.partitions)?;
        let mut checks: Vec<(String, f64, SimEstimate)> = Vec::new();

        for (i, (t, &w)) in config
            .topics()
            .iter()
            .zip(config.memory().separate_windows())
            .enumerate()
        {
            let base = TOPIC_STREAMS + 3 * i as u64;
            checks.push((
                format!("zero_arrival[{i}]"),
                model::retention_probability(t.total_rate(), w)?,
                sampler.zero_arrival(t.total_rate(), w, rng.substream(base))?,
            ));
            checks.push((
                format!("next_event_noise[{i}]"),
                t.noise_ratio(),
                sampler.next_event_noise(t, rng.substream(base + 1))?,
            ));
            checks.push((
                format!("noise_after_correct[{i}]"),
                model::noise_after_correct(t, w)?,
                sampler.noise_after_correct(t, w, rng.substream(base + 2))?,
            ));
        }

        let composed_rng = rng.substream(COMPOSED_STREAMS);
        let shared = sampler.rci(config, ContextMode::Shared, composed_rng)?;
        let pooled = config.pooled_rate();
        let window = config.memory().shared_window();
        let pooled_zero = model::retention_probability(pooled, window)?;
        checks.push(("zero_arrival[shared]".to_owned(), pooled_zero, shared.components[0]));
        for (j, t) in config.topics().iter().enumerate() {
            checks.push((
                format!("noise_after_correct[shared,{j}]"),
                pooled_zero * t.lambda_noise() / pooled,
                shared.components[1 + j],
            ));
        }
        checks.push((
            "rci_shared".to_owned(),
            model::rci_shared(config).value,
            shared.estimate,
        ));

        let separate = sampler.rci(config, ContextMode::Separate, composed_rng)?;
        checks.push((
            "rci_separate".to_owned(),
            model::rci_separate(config).value,
            separate.estimate,
        ));

        let components: Vec<ComponentRecord> = checks
            .into_iter()
            .map(|(name, analytic, estimate)| self.judge(name, analytic, estimate))
            .collect();
        Ok(ValidationReport {
            trials: self.trials,
            partitions: self.partitions,
            sigma_threshold: self.sigma_threshold,
            seed: rng,
            all_passed: components.iter().all(|c| c.passed),
            components,
        })
    }

    fn judge(&self, component: String, analytic: f64, estimate: SimEstimate) -> ComponentRecord {
        let offset: f64 = self
            .analytic_offsets
            .iter()
            .filter(|(name, _)| *name == component)
            .map(|(_, sigmas)| sigmas * estimate.std_error)
            .sum();
        let analytic = analytic + offset;
        let z_score = z_score(estimate.mean, analytic, estimate.std_error, estimate.trials);
        ComponentRecord {
            passed: z_score.abs() <= self.sigma_threshold,
            component,
            analytic,
            estimate,
            z_score,
        }
    }
}

/// `(mean - analytic) / std_error`. A degenerate sample (all successes or
/// all failures) has zero sample error; the binomial error at the analytic
/// value is used instead.
fn z_score(mean: f64, analytic: f64, std_error: f64, trials: u64) -> f64 {
    let diff = mean - analytic;
    if std_error > 0.0 {
        return diff / std_error;
    }
    if diff.abs() <= 1e-12 {
        return 0.0;
    }
    let fallback = (analytic * (1.0 - analytic) / trials as f64).sqrt();
    if fallback > 0.0 {
        diff / fallback
    } else {
        f64::INFINITY.copysign(diff)
    }
}

const TOPIC_STREAMS: u64 = 0x10_0000;
const COMPOSED_STREAMS: u64 = 0x20_0000;

pub fn validate(
    config: &SystemConfig,
    trials: u64,
    sigma_threshold: f64,
    rng: RngSpec,
) -> Result<ValidationReport, SimError> {
    Validator::new(trials)?
        .sigma_threshold(sigma_threshold)?
        .run(config, rng)
}
