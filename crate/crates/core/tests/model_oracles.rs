mod common;

use common::{frozen, rel_close};
use ctxcalc::model::*;
use proptest::prelude::*;

fn latency() -> LatencyParams {
    LatencyParams::new(1.0, 0.5, 2).unwrap()
}

fn symmetric() -> SystemConfig {
    SystemConfig::symmetric_two_topic(1.0, 0.5, 2.0, 0.3, latency()).unwrap()
}

fn build(rates: &common::Rates, shared_window: f64, windows: &[f64], rho: &[Vec<f64>]) -> SystemConfig {
    SystemConfig::new(
        rates.iter().map(|&(c, n)| TopicRates::new(c, n).unwrap()).collect(),
        CorrelationMatrix::from_rows(rho).unwrap(),
        MemoryConfig::new(shared_window, windows.to_vec()).unwrap(),
        latency(),
    )
    .unwrap()
}

#[test]
fn frozen_closed_form_values() {
    let cfg = symmetric();
    assert!(rel_close(
        retention_probability(1.0, 1.0).unwrap(),
        frozen::EXP_NEG_1,
        1e-15
    ));
    assert!(rel_close(
        retention_probability(2.0, 2.0).unwrap(),
        frozen::EXP_NEG_4,
        1e-15
    ));
    let half = TopicRates::new(0.5, 0.5).unwrap();
    assert!(rel_close(
        noise_after_correct(&half, 2.0).unwrap(),
        frozen::NOISE_AFTER_CORRECT_HALF_M2,
        1e-15
    ));
    assert!(rel_close(
        noise_impact(&cfg, 1, ContextMode::Separate).unwrap(),
        frozen::NOISE_IMPACT_SEPARATE_SYM,
        1e-14
    ));
    assert!(rel_close(rci_shared(&cfg).value, frozen::RCI_SHARED_SYM, 1e-14));
    assert!(rel_close(rci_separate(&cfg).value, frozen::RCI_SEPARATE_SYM, 1e-14));
    assert!(rel_close(rci_ratio(&cfg).unwrap(), frozen::RCI_RATIO_SYM, 1e-14));
    assert!(rel_close(
        simplified_rci_shared(1.0, 0.5, 2.0, 0.3).unwrap(),
        frozen::SIMPLIFIED_SHARED_SYM,
        1e-14
    ));
    assert!(rel_close(
        simplified_rci_separate(1.0, 0.5, 2.0, 0.3).unwrap(),
        frozen::SIMPLIFIED_SEPARATE_SYM,
        1e-14
    ));
    assert!(rel_close(
        simplified_rci_ratio(1.0, 0.5, 2.0, 0.3).unwrap(),
        frozen::SIMPLIFIED_RATIO_SYM,
        1e-14
    ));
    assert!(rel_close(
        t_shared(&LatencyParams::new(1.0, 0.0, 0).unwrap(), 1.0).unwrap(),
        frozen::LN_2,
        1e-15
    ));
}

#[test]
fn shared_and_simplified_shared_differ_on_the_reference_config() {
    let general = rci_shared(&symmetric()).value;
    let simplified = simplified_rci_shared(1.0, 0.5, 2.0, 0.3).unwrap();
    assert!((simplified - general - 0.001_348_513).abs() < 1e-9);
}

#[test]
fn retention_is_strictly_decreasing_on_grids() {
    let grid: Vec<f64> = (0..200).map(|k| k as f64 * 0.05).collect();
    for &rate in &[0.1, 1.0, 3.0] {
        let values: Vec<f64> = grid.iter().map(|&m| retention_probability(rate, m).unwrap()).collect();
        assert_eq!(values[0], 1.0);
        assert!(values.windows(2).all(|w| w[1] < w[0]));
    }
    for &m in &[0.1, 1.0, 3.0] {
        let values: Vec<f64> = (1..200)
            .map(|k| retention_probability(k as f64 * 0.05, m).unwrap())
            .collect();
        assert!(values.windows(2).all(|w| w[1] < w[0]));
    }
    assert!(retention_probability(1.0, 800.0).unwrap() < 1e-300);
}

#[test]
fn large_window_limit() {
    let cfg = symmetric()
        .with_memory(MemoryConfig::uniform(50.0, 2).unwrap())
        .unwrap();
    assert!((rci_shared(&cfg).value - 1.0).abs() < 1e-15);
    assert!((rci_separate(&cfg).value - 1.0).abs() < 1e-15);
    assert!((rci_ratio(&cfg).unwrap() - 1.0).abs() < 1e-15);
}

fn topic_rates() -> impl Strategy<Value = (f64, f64)> {
    (0.05f64..3.0, 0.0f64..=1.0).prop_map(|(total, r)| ((1.0 - r) * total, r * total))
}

fn correlation(n: usize) -> impl Strategy<Value = Vec<Vec<f64>>> {
    prop::collection::vec(0.0f64..=1.0, n * n).prop_map(move |flat| {
        (0..n)
            .map(|i| (0..n).map(|j| if i == j { 0.0 } else { flat[i * n + j] }).collect())
            .collect()
    })
}

fn scenario() -> impl Strategy<Value = (common::Rates, f64, Vec<f64>, Vec<Vec<f64>>)> {
    (1usize..=4).prop_flat_map(|n| {
        (
            prop::collection::vec(topic_rates(), n),
            0.0f64..6.0,
            prop::collection::vec(0.0f64..6.0, n),
            correlation(n),
        )
    })
}

proptest! {
    #[test]
    fn matches_reference_evaluator((rates, m, windows, rho) in scenario()) {
        let cfg = build(&rates, m, &windows, &rho);
        let shared = rci_shared(&cfg);
        let separate = rci_separate(&cfg);
        prop_assert!((shared.value - common::shared(&rates, m, &rho)).abs() <= 1e-12 * shared.value.abs().max(1.0));
        prop_assert!((separate.value - common::separate(&rates, &windows, &rho)).abs() <= 1e-12 * separate.value.abs().max(1.0));
        let impact_sum: f64 = (0..rates.len()).map(|i| noise_impact(&cfg, i, ContextMode::Shared).unwrap()).sum();
        prop_assert!(rel_close(impact_sum, shared.noise_impact_total, 1e-12));
    }

    #[test]
    fn noise_after_correct_bounded_by_retention((c, n) in topic_rates(), m in 0.0f64..10.0) {
        let t = TopicRates::new(c, n).unwrap();
        let nac = noise_after_correct(&t, m).unwrap();
        let ret = retention_probability(t.total_rate(), m).unwrap();
        prop_assert!(0.0 <= nac && nac <= ret && ret <= 1.0);
    }

    #[test]
    fn single_topic_shared_equals_separate((c, n) in topic_rates(), m in 0.0f64..6.0) {
        let cfg = build(&vec![(c, n)], m, &[m], &[vec![0.0]]);
        let a = rci_shared(&cfg).value;
        let b = rci_separate(&cfg).value;
        prop_assert!((a - b).abs() <= 1e-12 * a.abs().max(b.abs()));
    }

    #[test]
    fn zero_noise_reduces_to_retention((rates, m, windows, rho) in scenario()) {
        let quiet: common::Rates = rates.iter().map(|&(c, n)| (c + n, 0.0)).collect();
        let cfg = build(&quiet, m, &windows, &rho);
        let pooled: f64 = quiet.iter().map(|r| r.0).sum();
        let expected_shared = 1.0 - (-pooled * m).exp();
        let expected_sep: f64 = quiet.iter().zip(&windows).map(|(r, w)| 1.0 - (-r.0 * w).exp()).product();
        prop_assert!((rci_shared(&cfg).value - expected_shared).abs() <= 1e-12);
        prop_assert!((rci_separate(&cfg).value - expected_sep).abs() <= 1e-12);
    }

    #[test]
    fn symmetric_separate_matches_simplified(lambda in 0.05f64..3.0, r in 0.0f64..=1.0, m in 0.0f64..6.0, rho in 0.0f64..=1.0) {
        let cfg = SystemConfig::symmetric_two_topic(lambda, r, m, rho, latency()).unwrap();
        let general = rci_separate(&cfg).value;
        let simplified = simplified_rci_separate(lambda, r, m, rho).unwrap();
        prop_assert!((general - simplified).abs() <= 1e-12 * general.abs().max(simplified.abs()).max(1e-300));
    }

    #[test]
    fn symmetric_shared_gap(lambda in 0.05f64..3.0, r in 0.0f64..=1.0, m in 0.0f64..6.0, rho in 0.0f64..=1.0) {
        let cfg = SystemConfig::symmetric_two_topic(lambda, r, m, rho, latency()).unwrap();
        let general = rci_shared(&cfg).value;
        let simplified = simplified_rci_shared(lambda, r, m, rho).unwrap();
        let d = (-2.0 * lambda * m).exp();
        let gap = d * (rho / 2.0) * r * (1.0 - d);
        prop_assert!(rel_close(simplified, general + gap, 1e-12));
    }

    #[test]
    fn ratio_is_quotient((rates, m, windows, rho) in scenario()) {
        let cfg = build(&rates, m, &windows, &rho);
        match rci_ratio(&cfg) {
            Ok(ratio) => prop_assert!(rel_close(ratio, rci_separate(&cfg).value / rci_shared(&cfg).value, 1e-12)),
            Err(e) => prop_assert_eq!(rci_shared(&cfg).value, 0.0, "{}", e),
        }
    }

    #[test]
    fn time_ratio_at_least_one(
        alpha in 0.01f64..5.0, beta in 0.0f64..3.0, n in 0u32..20,
        m in 0.01f64..20.0, extra in 0.0f64..5.0,
    ) {
        let lat = LatencyParams::new(alpha, beta, n).unwrap();
        let ratio = response_time_ratio(&lat, m, m + extra).unwrap();
        prop_assert!(ratio >= 1.0 - 1e-12);
        if beta * f64::from(n) == 0.0 && extra == 0.0 {
            prop_assert!((ratio - 1.0).abs() <= 1e-12);
        }
        if beta * f64::from(n) > 0.0 {
            prop_assert!(ratio > 1.0);
        }
        let equal = response_time_ratio(&lat, m, m).unwrap();
        let closed = 1.0 + beta * f64::from(n) / (alpha * m.ln_1p());
        prop_assert!(rel_close(equal, closed, 1e-12));
    }
}
