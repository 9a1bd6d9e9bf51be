use super::types::{check_window, LatencyParams};
use super::ModelError;

/// Time to search a window: `alpha * ln(1 + window)`.
pub fn t_search(latency: &LatencyParams, window: f64) -> Result<f64, ModelError> {
    check_window(window)?;
    Ok(latency.alpha() * window.ln_1p())
}

/// Time spent querying other agents: `beta * n_agents`.
pub fn t_query(latency: &LatencyParams) -> f64 {
    latency.beta() * f64::from(latency.n_agents())
}

pub fn t_shared(latency: &LatencyParams, window: f64) -> Result<f64, ModelError> {
    t_search(latency, window)
}

pub fn t_separate(latency: &LatencyParams, separate_window: f64) -> Result<f64, ModelError> {
    Ok(t_search(latency, separate_window)? + t_query(latency))
}

/// `t_separate / t_shared`. With equal windows this is
/// `1 + beta N / (alpha ln(1 + M))`.
pub fn response_time_ratio(
    latency: &LatencyParams,
    shared_window: f64,
    separate_window: f64,
) -> Result<f64, ModelError> {
    let shared = t_shared(latency, shared_window)?;
    let separate = t_separate(latency, separate_window)?;
    if shared == 0.0 {
        return Err(ModelError::ZeroDenominator("response_time_ratio"));
    }
    Ok(separate / shared)
}
