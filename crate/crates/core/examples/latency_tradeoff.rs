//! Response time of shared and per-agent contexts as the agent count grows.

use ctxcalc::model::{response_time_ratio, t_separate, t_shared, LatencyParams, ModelError};

fn main() -> Result<(), ModelError> {
    let window = std::f64::consts::E - 1.0;
    let base = LatencyParams::new(1.0, 0.5, 0)?;
    println!("window {window:.4}, T_shared {:.4}", t_shared(&base, window)?);
    println!("{:>8} {:>12} {:>10}", "agents", "T_separate", "ratio");
    for n in [0, 1, 2, 4, 8, 16] {
        let lat = base.with_n_agents(n);
        println!(
            "{n:>8} {:>12.4} {:>10.4}",
            t_separate(&lat, window)?,
            response_time_ratio(&lat, window, window)?
        );
    }
    Ok(())
}
