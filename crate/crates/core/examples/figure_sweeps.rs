//! Sweep the memory window and the noise ratio, then check curve shapes.

use ctxcalc::io::sweep_csv_string;
use ctxcalc::model::{LatencyParams, SystemConfig};
use ctxcalc::sweep::*;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let base = SystemConfig::symmetric_two_topic(1.0, 0.5, 2.0, 0.3, LatencyParams::new(1.0, 0.5, 2)?)?;
    let outputs = vec![SweepOutput::RciShared, SweepOutput::RciSeparate, SweepOutput::RciRatio];

    let window = run_sweep(&SweepSpec::new(
        base.clone(),
        SweptParameter::MemoryWindow,
        linear_grid(0.25, 5.0, 0.25),
        outputs.clone(),
    )?)?;
    print!("{}", sweep_csv_string(&window));
    for col in ["rci_shared", "rci_separate"] {
        println!(
            "{col} nondecreasing in M: {}",
            check_shape(&window, col, Shape::Nondecreasing)?.holds
        );
    }

    let noise = run_sweep(&SweepSpec::new(
        base,
        SweptParameter::NoiseRatio,
        linear_grid(0.0, 1.0, 0.1),
        outputs,
    )?)?;
    print!("{}", sweep_csv_string(&noise));
    for col in ["rci_shared", "rci_separate"] {
        println!(
            "{col} nonincreasing in r: {}",
            check_shape(&noise, col, Shape::Nonincreasing)?.holds
        );
    }
    match crossover_scan(&window, "rci_shared", "rci_separate")? {
        Some((lo, hi)) => println!("curves cross between M={lo} and M={hi}"),
        None => println!("no crossover on this grid"),
    }
    Ok(())
}
