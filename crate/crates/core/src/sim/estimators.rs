use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::{RngSpec, SimError};
use crate::model::{self, ContextMode, SystemConfig, TopicRates};

/// A Monte Carlo estimate and where its randomness came from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SimEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub trials: u64,
    pub seed: RngSpec,
}

impl SimEstimate {
    /// Bernoulli estimate from a success count; the standard error is the
    /// binomial `sqrt(p (1 - p) / n)`.
    pub fn bernoulli(successes: u64, trials: u64, seed: RngSpec) -> Self {
        let mean = successes as f64 / trials as f64;
        Self {
            mean,
            std_error: (mean * (1.0 - mean) / trials as f64).sqrt(),
            trials,
            seed,
        }
    }
}

/// Exponential duration with mean `1 / rate` via the inverse CDF, for
/// `u` in `(0, 1]`.
pub fn interarrival_from_uniform(rate: f64, u: f64) -> Result<f64, SimError> {
    check_rate(rate)?;
    if !(u > 0.0 && u <= 1.0) {
        return Err(SimError::UniformOutOfRange(u));
    }
    Ok(-u.ln() / rate)
}

pub fn sample_interarrival<R: Rng + ?Sized>(rate: f64, rng: &mut R) -> Result<f64, SimError> {
    check_rate(rate)?;
    Ok(draw_exp(rate, rng))
}

#[inline]
fn draw_exp<R: Rng + ?Sized>(rate: f64, rng: &mut R) -> f64 {
    // random::<f64>() is in [0, 1); flip it so u is in (0, 1]
    let u = 1.0 - rng.random::<f64>();
    -u.ln() / rate
}

fn check_rate(rate: f64) -> Result<(), SimError> {
    if rate.is_finite() && rate > 0.0 {
        Ok(())
    } else {
        Err(SimError::InvalidRate(rate))
    }
}

fn check_window(window: f64) -> Result<(), SimError> {
    if window >= 0.0 {
        Ok(())
    } else {
        Err(SimError::NegativeWindow(window))
    }
}

/// Trial budget and the number of independent streams it is split over.
///
/// Partition `p` draws from `rng.substream(p)` and gets
/// `trials / partitions` trials (the first `trials % partitions` partitions
/// get one more). Counts are summed, so the result depends on the partition
/// count but not on how partitions are scheduled.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Sampler {
    trials: u64,
    partitions: u32,
}

impl Sampler {
    pub fn new(trials: u64) -> Result<Self, SimError> {
        if trials == 0 {
            return Err(SimError::ZeroTrials);
        }
        Ok(Self { trials, partitions: 1 })
    }

    pub fn with_partitions(self, partitions: u32) -> Result<Self, SimError> {
        if partitions == 0 || u64::from(partitions) > self.trials {
            return Err(SimError::InvalidPartitions(partitions));
        }
        Ok(Self { partitions, ..self })
    }

    pub fn trials(&self) -> u64 {
        self.trials
    }

    pub fn partitions(&self) -> u32 {
        self.partitions
    }

    fn count<F>(&self, rng: RngSpec, trial: F) -> SimEstimate
    where
        F: Fn(&mut ChaCha8Rng) -> bool + Sync,
    {
        let parts = u64::from(self.partitions);
        let base = self.trials / parts;
        let extra = self.trials % parts;
        let run = |p: u64| {
            let n = base + u64::from(p < extra);
            let mut stream = if parts == 1 { rng.rng() } else { rng.substream(p).rng() };
            (0..n).filter(|_| trial(&mut stream)).count() as u64
        };
        let successes: u64 = if parts == 1 {
            run(0)
        } else {
            (0..parts).into_par_iter().map(run).sum()
        };
        SimEstimate::bernoulli(successes, self.trials, rng)
    }

    /// Fraction of trials whose first arrival lands at or beyond `window`,
    /// i.e. the half-open window `[0, window)` stays empty.
    pub fn zero_arrival(&self, rate: f64, window: f64, rng: RngSpec) -> Result<SimEstimate, SimError> {
        check_rate(rate)?;
        check_window(window)?;
        Ok(self.count(rng, |r| draw_exp(rate, r) >= window))
    }

    /// Races a noise arrival against a correct arrival; success when noise
    /// comes first. A zero-rate stream never fires.
    pub fn next_event_noise(&self, rates: &TopicRates, rng: RngSpec) -> Result<SimEstimate, SimError> {
        let (correct, noise) = (rates.lambda_correct(), rates.lambda_noise());
        if noise == 0.0 {
            return Ok(SimEstimate::bernoulli(0, self.trials, rng));
        }
        if correct == 0.0 {
            return Ok(SimEstimate::bernoulli(self.trials, self.trials, rng));
        }
        Ok(self.count(rng, |r| {
            let t_noise = draw_exp(noise, r);
            let t_correct = draw_exp(correct, r);
            t_noise < t_correct
        }))
    }

    /// Joint event on one merged stream of rate `total_rate`: nothing
    /// arrives in `[0, window)` and the first arrival after it is noise
    /// (each arrival is noise with probability `noise_rate / total_rate`).
    pub fn merged_noise_after_correct(
        &self,
        total_rate: f64,
        noise_rate: f64,
        window: f64,
        rng: RngSpec,
    ) -> Result<SimEstimate, SimError> {
        check_rate(total_rate)?;
        check_window(window)?;
        if !(0.0..=total_rate).contains(&noise_rate) {
            return Err(SimError::InvalidRate(noise_rate));
        }
        if noise_rate == 0.0 {
            return Ok(SimEstimate::bernoulli(0, self.trials, rng));
        }
        let p_noise = noise_rate / total_rate;
        Ok(self.count(rng, |r| {
            let first = draw_exp(total_rate, r);
            if first < window {
                return false;
            }
            // `first` is also the first arrival after the window
            r.random::<f64>() < p_noise
        }))
    }

    pub fn noise_after_correct(&self, rates: &TopicRates, window: f64, rng: RngSpec) -> Result<SimEstimate, SimError> {
        self.merged_noise_after_correct(rates.total_rate(), rates.lambda_noise(), window, rng)
    }

    /// RCI estimate composed from independently sampled components.
    pub fn rci(&self, config: &SystemConfig, mode: ContextMode, rng: RngSpec) -> Result<RciEstimate, SimError> {
        let n = config.n_topics();
        let corr = config.correlations();
        match mode {
            ContextMode::Shared => {
                let pooled = config.pooled_rate();
                let window = config.memory().shared_window();
                let zero = self.zero_arrival(pooled, window, rng.substream(SHARED_STREAMS))?;
                let terms = config
                    .topics()
                    .iter()
                    .enumerate()
                    .map(|(j, t)| {
                        self.merged_noise_after_correct(
                            pooled,
                            t.lambda_noise(),
                            window,
                            rng.substream(SHARED_STREAMS + 1 + j as u64),
                        )
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                let q: Vec<f64> = terms.iter().map(|e| e.mean).collect();
                let report = model::compose_shared(zero.mean, &q, corr);

                // d/dp = -(1 - S); d/dq_j = -(1 - p) * (1 + sum_{i != j} rho_ij)
                let bracket = 1.0 - report.noise_impact_total;
                let mut var = (bracket * zero.std_error).powi(2);
                for (j, e) in terms.iter().enumerate() {
                    let weight = 1.0 + (0..n).filter(|&i| i != j).map(|i| corr.get(i, j)).sum::<f64>();
                    var += ((1.0 - zero.mean) * weight * e.std_error).powi(2);
                }
                let mut components = vec![zero];
                components.extend(terms);
                Ok(RciEstimate::new(report, var, self.trials, rng, components))
            }
            ContextMode::Separate => {
                let mut zeros = Vec::with_capacity(n);
                let mut terms = Vec::with_capacity(n);
                for (i, (t, &w)) in config
                    .topics()
                    .iter()
                    .zip(config.memory().separate_windows())
                    .enumerate()
                {
                    let base = SEPARATE_STREAMS + 2 * i as u64;
                    zeros.push(self.zero_arrival(t.total_rate(), w, rng.substream(base))?);
                    terms.push(self.noise_after_correct(t, w, rng.substream(base + 1))?);
                }
                let p: Vec<f64> = zeros.iter().map(|e| e.mean).collect();
                let q: Vec<f64> = terms.iter().map(|e| e.mean).collect();
                let report = model::compose_separate(&p, &q, corr);

                let factors: Vec<f64> = (0..n)
                    .map(|i| (1.0 - p[i]) * (1.0 - report.topic_noise_impacts[i]))
                    .collect();
                let others = |i: usize| -> f64 { (0..n).filter(|&k| k != i).map(|k| factors[k]).product() };
                let mut var = 0.0;
                for (i, z) in zeros.iter().enumerate() {
                    let d_p = -(1.0 - report.topic_noise_impacts[i]) * others(i);
                    var += (d_p * z.std_error).powi(2);
                }
                for (j, t) in terms.iter().enumerate() {
                    let d_q: f64 = (0..n)
                        .map(|i| {
                            let c = if i == j { 1.0 } else { corr.get(i, j) };
                            -(1.0 - p[i]) * c * others(i)
                        })
                        .sum();
                    var += (d_q * t.std_error).powi(2);
                }
                let mut components = zeros;
                components.extend(terms);
                Ok(RciEstimate::new(report, var, self.trials, rng, components))
            }
        }
    }
}

const SHARED_STREAMS: u64 = 0x1_0000;
const SEPARATE_STREAMS: u64 = 0x2_0000;

/// RCI rebuilt from sampled components.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RciEstimate {
    /// Mean is the composed RCI; the standard error is a first-order
    /// delta-method approximation over independent components.
    pub estimate: SimEstimate,
    pub report: model::RciReport,
    pub components: Vec<SimEstimate>,
}

impl RciEstimate {
    fn new(report: model::RciReport, variance: f64, trials: u64, seed: RngSpec, components: Vec<SimEstimate>) -> Self {
        Self {
            estimate: SimEstimate {
                mean: report.value,
                std_error: variance.sqrt(),
                trials,
                seed,
            },
            report,
            components,
        }
    }
}

pub fn estimate_zero_arrival(rate: f64, window: f64, trials: u64, rng: RngSpec) -> Result<SimEstimate, SimError> {
    Sampler::new(trials)?.zero_arrival(rate, window, rng)
}

pub fn estimate_next_event_noise(rates: &TopicRates, trials: u64, rng: RngSpec) -> Result<SimEstimate, SimError> {
    Sampler::new(trials)?.next_event_noise(rates, rng)
}

pub fn estimate_noise_after_correct(
    rates: &TopicRates,
    window: f64,
    trials: u64,
    rng: RngSpec,
) -> Result<SimEstimate, SimError> {
    Sampler::new(trials)?.noise_after_correct(rates, window, rng)
}

pub fn estimate_rci(
    config: &SystemConfig,
    mode: ContextMode,
    trials: u64,
    rng: RngSpec,
) -> Result<SimEstimate, SimError> {
    Ok(Sampler::new(trials)?.rci(config, mode, rng)?.estimate)
}
