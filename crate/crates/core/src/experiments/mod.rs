//! Figure scenarios, sweeps and their CSV output.

mod figures;
mod output;
mod scenario;

pub use figures::{analytic_latency, distortion_outage, run_scenario, AnalyticPoint, Protocol};
pub use output::{read_csv, write_csv, ResultRow, RowSink};
pub use scenario::{FigureKind, NTilde, Scenario, BUILTIN};
