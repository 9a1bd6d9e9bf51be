//! Load a scenario file and print its closed-form metrics.
//!
//! ```text
//! cargo run --example evaluate_scenario -- scenarios/single_topic.toml
//! ```

use ctxcalc::cli::EvalReport;
use ctxcalc::io::{to_json_string, Scenario};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = std::env::args()
        .nth(1)
        .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/scenarios/symmetric_two_topic.toml").to_string());
    let scenario = Scenario::parse(&std::fs::read_to_string(&path)?)?;
    let cfg = &scenario.config;
    println!(
        "{path}: {} topics, pooled rate {}",
        cfg.topics().len(),
        cfg.pooled_rate()
    );

    let report = EvalReport::compute(cfg)?;
    println!("RCI shared   {:.6}", report.rci_shared.value);
    println!("RCI separate {:.6}", report.rci_separate.value);
    println!("ratio        {:.6}", report.rci_ratio);
    print!("{}", to_json_string(&report)?);
    Ok(())
}
