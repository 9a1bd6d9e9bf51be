mod common;

use ctxcalc::io::Scenario;
use ctxcalc::model::{CorrelationMatrix, LatencyParams, MemoryConfig, SystemConfig, TopicRates};
use ctxcalc::sweep::*;
use proptest::prelude::*;

fn figure(text: &str) -> SweepTable {
    let scenario = Scenario::parse(text).unwrap();
    run_sweep(&scenario.sweep_spec().unwrap().unwrap()).unwrap()
}

fn figure1() -> SweepTable {
    figure(ctxcalc::cli::FIGURE1_SCENARIO)
}

fn figure2() -> SweepTable {
    figure(ctxcalc::cli::FIGURE2_SCENARIO)
}

fn base() -> SystemConfig {
    SystemConfig::symmetric_two_topic(1.0, 0.5, 2.0, 0.3, LatencyParams::new(1.0, 0.5, 2).unwrap()).unwrap()
}

#[test]
fn figure1_rci_rises_with_window() {
    let t = figure1();
    assert_eq!(t.rows.len(), 40);
    assert_eq!(t.rows[0].x, 0.25);
    assert_eq!(t.rows[39].x, 10.0);
    for col in ["rci_shared", "rci_separate"] {
        assert!(check_shape(&t, col, Shape::Nondecreasing).unwrap().holds);
        assert!(check_shape(&t, col, Shape::Bounded01).unwrap().holds);
        let v = t.column(col).unwrap();
        assert!(v.windows(2).all(|w| w[1] > w[0]), "{col} not strictly increasing");
    }
    assert!(t.rows.iter().all(|r| r.in_probability_domain));
}

#[test]
fn figure1_matches_reference_evaluator() {
    let t = figure1();
    let rho = vec![vec![0.0, 0.3], vec![0.3, 0.0]];
    let rates = vec![(0.5, 0.5), (0.5, 0.5)];
    for row in &t.rows {
        let m = row.x;
        assert!(common::rel_close(row.values[0], common::shared(&rates, m, &rho), 1e-12));
        assert!(common::rel_close(
            row.values[1],
            common::separate(&rates, &[m, m], &rho),
            1e-12
        ));
    }
}

#[test]
fn figure2_rci_falls_with_noise() {
    let t = figure2();
    assert_eq!(t.rows.len(), 21);
    assert_eq!(t.rows[20].x, 1.0);
    for col in ["rci_shared", "rci_separate"] {
        assert!(check_shape(&t, col, Shape::Nonincreasing).unwrap().holds);
    }
    // noiseless endpoint: pure retention terms
    assert!(common::rel_close(t.rows[0].values[0], 1.0 - (-4.0f64).exp(), 1e-14));
    assert!(common::rel_close(
        t.rows[0].values[1],
        (1.0 - (-2.0f64).exp()).powi(2),
        1e-14
    ));
}

#[test]
fn crossover_goldens() {
    // Shared stays above separate over the whole default Figure-1 grid (and
    // the Figure-2 grid); checked independently at 30 digits.
    assert_eq!(crossover_scan(&figure1(), "rci_shared", "rci_separate").unwrap(), None);
    assert_eq!(crossover_scan(&figure2(), "rci_shared", "rci_separate").unwrap(), None);
    assert_eq!(crossover_scan(&figure1(), "rci_shared", "rci_shared").unwrap(), None);
}

#[test]
fn single_topic_has_no_crossover() {
    let cfg = SystemConfig::new(
        vec![TopicRates::new(0.6, 0.3).unwrap()],
        CorrelationMatrix::zeros(1).unwrap(),
        MemoryConfig::uniform(1.0, 1).unwrap(),
        LatencyParams::new(1.0, 0.5, 1).unwrap(),
    )
    .unwrap();
    let spec = SweepSpec::new(
        cfg,
        SweptParameter::MemoryWindow,
        linear_grid(0.1, 5.0, 0.1),
        vec![SweepOutput::RciShared, SweepOutput::RciSeparate],
    )
    .unwrap();
    let t = run_sweep(&spec).unwrap();
    assert_eq!(crossover_scan(&t, "rci_shared", "rci_separate").unwrap(), None);
}

#[test]
fn every_output_column() {
    let spec = SweepSpec::new(
        base(),
        SweptParameter::Rho,
        linear_grid(0.0, 1.0, 0.1),
        SweepOutput::ALL.to_vec(),
    )
    .unwrap();
    let t = run_sweep(&spec).unwrap();
    assert_eq!(t.outputs.len(), 8);
    let shared = t.column("rci_shared").unwrap();
    let separate = t.column("rci_separate").unwrap();
    let ratio = t.column("rci_ratio").unwrap();
    for i in 0..t.rows.len() {
        assert!(common::rel_close(ratio[i], separate[i] / shared[i], 1e-12));
    }
    assert!(common::rel_close(
        t.column("simplified_separate").unwrap()[3],
        separate[3],
        1e-12
    ));
    // latency has no rho dependence
    let tr = t.column("time_ratio").unwrap();
    assert!(tr.iter().all(|&v| v == tr[0]));
}

#[test]
fn time_ratio_constant_in_noise_sweeps() {
    let spec = SweepSpec::new(
        base(),
        SweptParameter::NoiseRatio,
        linear_grid(0.0, 1.0, 0.05),
        vec![SweepOutput::TimeRatio, SweepOutput::TSeparate],
    )
    .unwrap();
    let t = run_sweep(&spec).unwrap();
    let tr = t.column("time_ratio").unwrap();
    assert!(tr.iter().all(|&v| v == tr[0]));
}

#[test]
fn agent_sweep_grows_linearly() {
    let spec = SweepSpec::new(
        base(),
        SweptParameter::NAgents,
        vec![0.0, 1.0, 2.0, 3.0],
        vec![SweepOutput::TSeparate, SweepOutput::TimeRatio],
    )
    .unwrap();
    let t = run_sweep(&spec).unwrap();
    let ts = t.column("t_separate").unwrap();
    for w in ts.windows(2) {
        assert!((w[1] - w[0] - 0.5).abs() < 1e-12);
    }
    assert_eq!(t.column("time_ratio").unwrap()[0], 1.0);
}

proptest! {
    #[test]
    fn rows_do_not_depend_on_grid_order(mut grid in prop::collection::btree_set(0u32..400, 1..30)) {
        let sorted: Vec<f64> = std::mem::take(&mut grid).into_iter().map(|k| f64::from(k) * 0.025).collect();
        let spec = SweepSpec::new(base(), SweptParameter::MemoryWindow, sorted.clone(),
            vec![SweepOutput::RciShared, SweepOutput::RciSeparate, SweepOutput::TShared]).unwrap();
        let full = run_sweep(&spec).unwrap();
        // evaluating each point on its own gives the same row
        for (i, &x) in sorted.iter().enumerate() {
            let one = SweepSpec::new(base(), SweptParameter::MemoryWindow, vec![x], spec.outputs().to_vec()).unwrap();
            prop_assert_eq!(&run_sweep(&one).unwrap().rows[0], &full.rows[i]);
        }
        prop_assert_eq!(run_sweep(&spec).unwrap(), full);
    }
}
