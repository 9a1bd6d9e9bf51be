//! Scenario input and CSV / JSON / SVG output.

pub mod chart;
pub mod format;
pub mod scenario;

pub use chart::{LineChart, Series};
pub use format::{format_sig12, round_sig12, sweep_csv_string, to_json_string, write_sweep_csv};
pub use scenario::{GridSpec, Scenario, ScenarioError, SimulationBlock, SweepBlock, SCHEMA_VERSION};

use crate::sweep::SweepTable;

/// One line per output column against the swept parameter.
pub fn sweep_chart(table: &SweepTable, title: &str) -> LineChart {
    let xs = table.xs();
    LineChart {
        title: title.to_owned(),
        x_label: table.parameter.name().to_owned(),
        y_label: "value".to_owned(),
        series: table
            .outputs
            .iter()
            .enumerate()
            .map(|(k, o)| Series {
                name: o.name().to_owned(),
                points: xs.iter().zip(&table.rows).map(|(&x, r)| (x, r.values[k])).collect(),
            })
            .collect(),
    }
}
