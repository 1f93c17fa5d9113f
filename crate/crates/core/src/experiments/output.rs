use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::sim::{Proportion, Summary};

/// One value of one metric at one sweep point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    pub scenario: String,
    pub sweep_var: String,
    pub sweep_value: f64,
    pub metric: String,
    pub value: f64,
    pub ci_low: Option<f64>,
    pub ci_high: Option<f64>,
    pub trials: u64,
    pub seed: u64,
}

/// Accumulates rows for one scenario.
#[derive(Debug)]
pub struct RowSink {
    scenario: String,
    seed: u64,
    rows: Vec<ResultRow>,
}

impl RowSink {
    pub fn new(scenario: &str, seed: u64) -> Self {
        Self { scenario: scenario.into(), seed, rows: Vec::new() }
    }

    pub fn exact(&mut self, var: &str, x: f64, metric: String, value: f64) {
        self.rows.push(ResultRow {
            scenario: self.scenario.clone(),
            sweep_var: var.into(),
            sweep_value: x,
            metric,
            value,
            ci_low: None,
            ci_high: None,
            trials: 0,
            seed: self.seed,
        });
    }

    pub fn mean(&mut self, var: &str, x: f64, metric: String, s: &Summary) {
        self.rows.push(ResultRow {
            scenario: self.scenario.clone(),
            sweep_var: var.into(),
            sweep_value: x,
            metric,
            value: s.mean,
            ci_low: Some(s.ci_low),
            ci_high: Some(s.ci_high),
            trials: s.count as u64,
            seed: self.seed,
        });
    }

    pub fn freq(&mut self, var: &str, x: f64, metric: String, p: &Proportion) {
        self.rows.push(ResultRow {
            scenario: self.scenario.clone(),
            sweep_var: var.into(),
            sweep_value: x,
            metric,
            value: p.p,
            ci_low: Some(p.ci_low),
            ci_high: Some(p.ci_high),
            trials: p.trials,
            seed: self.seed,
        });
    }

    pub fn finish(self) -> Vec<ResultRow> {
        self.rows
    }
}

pub fn write_csv<W: Write>(rows: &[ResultRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r)?;
    }
    if rows.is_empty() {
        w.write_record(["scenario", "sweep_var", "sweep_value", "metric", "value", "ci_low", "ci_high", "trials", "seed"])?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_csv<R: std::io::Read>(input: R) -> Result<Vec<ResultRow>> {
    csv::Reader::from_reader(input).deserialize().map(|r| r.map_err(Into::into)).collect()
}
