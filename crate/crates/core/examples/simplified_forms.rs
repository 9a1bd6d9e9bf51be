//! Compare the general RCI expressions with the symmetric two-topic shortcuts.

use ctxcalc::model::*;

fn main() -> Result<(), ModelError> {
    let latency = LatencyParams::new(1.0, 0.5, 2)?;
    println!(
        "{:>6} {:>6} {:>12} {:>12} {:>12} {:>12}",
        "r", "rho", "shared", "simpl.shared", "separate", "simpl.sep"
    );
    for (r, rho) in [(0.0, 0.0), (0.25, 0.3), (0.5, 0.3), (0.5, 0.9), (1.0, 1.0)] {
        let cfg = SystemConfig::symmetric_two_topic(1.0, r, 2.0, rho, latency)?;
        println!(
            "{r:>6} {rho:>6} {:>12.8} {:>12.8} {:>12.8} {:>12.8}",
            rci_shared(&cfg).value,
            simplified_rci_shared(1.0, r, 2.0, rho)?,
            rci_separate(&cfg).value,
            simplified_rci_separate(1.0, r, 2.0, rho)?,
        );
    }
    // The shared shortcut counts the coupling term with the pooled
    // zero-arrival probability in place of the per-topic one.
    let d = (-4.0f64).exp();
    println!(
        "expected shared gap at r=0.5, rho=0.3: {:.9}",
        d * 0.15 * 0.5 * (1.0 - d)
    );
    Ok(())
}
