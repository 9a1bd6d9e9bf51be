//! Two-topic closed forms for identical rates and symmetric coupling.

use super::types::check_window;
use super::ModelError;

fn check(lambda_total: f64, noise_ratio: f64, window: f64, rho: f64) -> Result<(), ModelError> {
    if !lambda_total.is_finite() || lambda_total <= 0.0 {
        return Err(ModelError::InvalidRate {
            name: "lambda_total",
            value: lambda_total,
        });
    }
    if !(0.0..=1.0).contains(&noise_ratio) {
        return Err(ModelError::OutOfRange {
            name: "noise_ratio",
            value: noise_ratio,
        });
    }
    if !(0.0..=1.0).contains(&rho) {
        return Err(ModelError::OutOfRange {
            name: "rho",
            value: rho,
        });
    }
    check_window(window)
}

/// `(1 - e^{-2 lambda M}) (1 - e^{-2 lambda M} (1 + rho/2) r)`.
///
/// Note the `1 + rho/2` coefficient: this is not what [`super::rci_shared`]
/// reduces to for two identical topics (that gives `1 + rho`).
pub fn simplified_rci_shared(lambda_total: f64, noise_ratio: f64, window: f64, rho: f64) -> Result<f64, ModelError> {
    check(lambda_total, noise_ratio, window, rho)?;
    let decay = (-2.0 * lambda_total * window).exp();
    Ok((1.0 - decay) * (1.0 - decay * (1.0 + rho / 2.0) * noise_ratio))
}

/// `(1 - e^{-lambda M})^2 (1 - (e^{-lambda M} + rho e^{-lambda M}) r)^2`.
pub fn simplified_rci_separate(lambda_total: f64, noise_ratio: f64, window: f64, rho: f64) -> Result<f64, ModelError> {
    check(lambda_total, noise_ratio, window, rho)?;
    let decay = (-lambda_total * window).exp();
    let retention = 1.0 - decay;
    let bracket = 1.0 - (decay + rho * decay) * noise_ratio;
    Ok(retention * retention * bracket * bracket)
}

pub fn simplified_rci_ratio(lambda_total: f64, noise_ratio: f64, window: f64, rho: f64) -> Result<f64, ModelError> {
    let shared = simplified_rci_shared(lambda_total, noise_ratio, window, rho)?;
    if shared == 0.0 {
        return Err(ModelError::ZeroDenominator("simplified_rci_ratio"));
    }
    Ok(simplified_rci_separate(lambda_total, noise_ratio, window, rho)? / shared)
}
