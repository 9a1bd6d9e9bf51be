//! Cross-check the closed forms against seeded Monte Carlo estimates.
//!
//! ```text
//! cargo run --release --example monte_carlo_validation -- 1000000 42
//! ```

use ctxcalc::model::{ContextMode, LatencyParams, SystemConfig, TopicRates};
use ctxcalc::sim::{self, RngSpec, Sampler, Validator};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let trials: u64 = args.next().map(|s| s.parse()).transpose()?.unwrap_or(1_000_000);
    let seed: u64 = args.next().map(|s| s.parse()).transpose()?.unwrap_or(42);
    let rng = RngSpec::new(seed);

    let e = sim::estimate_zero_arrival(1.0, 1.0, trials, rng)?;
    println!(
        "P(no arrival in [0,1)) = {:.5} ± {:.5}  exact {:.5}",
        e.mean,
        e.std_error,
        (-1.0f64).exp()
    );
    let half = TopicRates::new(0.5, 0.5)?;
    let e = sim::estimate_noise_after_correct(&half, 2.0, trials, rng)?;
    println!(
        "noise after correct    = {:.5} ± {:.5}  exact {:.5}",
        e.mean,
        e.std_error,
        (-2.0f64).exp() / 2.0
    );

    let cfg = SystemConfig::symmetric_two_topic(1.0, 0.5, 2.0, 0.3, LatencyParams::new(1.0, 0.5, 2)?)?;
    let sampler = Sampler::new(trials)?.with_partitions(4)?;
    for mode in [ContextMode::Shared, ContextMode::Separate] {
        let est = sampler.rci(&cfg, mode, rng)?;
        println!(
            "RCI {mode:?}: {:.5} ± {:.5} from {} components",
            est.estimate.mean,
            est.estimate.std_error,
            est.components.len()
        );
    }

    let report = Validator::new(trials)?.partitions(4)?.run(&cfg, rng)?;
    for c in &report.components {
        let mark = if c.passed { "ok  " } else { "FAIL" };
        println!(
            "{mark} {:<28} analytic {:.6} estimate {:.6} z {:+.2}",
            c.component, c.analytic, c.estimate.mean, c.z_score
        );
    }
    println!("all within {} sigma: {}", report.sigma_threshold, report.all_passed);
    Ok(())
}
