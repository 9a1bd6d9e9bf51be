//! Render a sweep as an SVG line chart.
//!
//! ```text
//! cargo run --example svg_chart -- rho.svg
//! ```

use ctxcalc::io::{sweep_chart, LineChart, Series};
use ctxcalc::model::{LatencyParams, SystemConfig};
use ctxcalc::sweep::*;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let out = std::env::args().nth(1).unwrap_or_else(|| "rho_sweep.svg".into());
    let base = SystemConfig::symmetric_two_topic(1.0, 0.5, 2.0, 0.3, LatencyParams::new(1.0, 0.5, 2)?)?;
    let spec = SweepSpec::new(
        base,
        SweptParameter::Rho,
        linear_grid(0.0, 1.0, 0.05),
        vec![SweepOutput::RciShared, SweepOutput::RciSeparate],
    )?;
    let table = run_sweep(&spec)?;
    std::fs::write(&out, sweep_chart(&table, "RCI vs topic coupling").to_svg())?;
    println!("wrote {out}");

    // Charts can also be assembled by hand.
    let chart = LineChart {
        title: "ln(1 + M)".into(),
        x_label: "M".into(),
        y_label: "search time".into(),
        series: vec![Series {
            name: "alpha = 1".into(),
            points: (0..=20).map(|k| (k as f64 * 0.5, (k as f64 * 0.5).ln_1p())).collect(),
        }],
    };
    println!("hand-built chart: {} bytes of SVG", chart.to_svg().len());
    Ok(())
}
