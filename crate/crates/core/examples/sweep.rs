//! Run a built-in sweep and write its rows as CSV.
//!
//! `cargo run --release --example sweep -- fig5 out.csv`

use std::fs::File;
use std::io::BufWriter;

use r2c::experiments::{run_scenario, write_csv, Scenario};

fn main() -> r2c::Result<()> {
    let mut args = std::env::args().skip(1);
    let name = args.next().unwrap_or_else(|| "fig8".into());
    let out = args.next().unwrap_or_else(|| format!("{name}.csv"));

    let mut sc = Scenario::load(&name)?;
    // Keep the example quick; analytic rows are unaffected.
    sc.trials = sc.trials.min(100);
    let rows = run_scenario(&sc, 0)?;
    write_csv(&rows, BufWriter::new(File::create(&out)?))?;
    println!("{} rows -> {out}", rows.len());
    for r in rows.iter().take(8) {
        println!("  {}={} {} = {:.4}", r.sweep_var, r.sweep_value, r.metric, r.value);
    }
    Ok(())
}
