use std::fs;
use std::path::Path;

use anyhow::{Context, Result};
use serde::Serialize;
use sha2::{Digest, Sha256};
use tepai_core::estimate::CircuitOutcome;
use tepai_core::sampling::CircuitRecord;
use tepai_core::EstimatorResult;

#[derive(Clone, Debug, Serialize)]
pub struct Row {
    pub series: String,
    pub x: f64,
    pub mean: f64,
    pub stderr: f64,
    pub n_circuits: usize,
    pub accepted_fraction: f64,
    pub gates_2q_mean: Option<f64>,
    pub gates_2q_std: Option<f64>,
}

impl Row {
    pub fn estimate(series: impl Into<String>, x: f64, r: &EstimatorResult) -> Self {
        Row {
            series: series.into(),
            x,
            mean: r.mean,
            stderr: r.stderr,
            n_circuits: r.n_circuits,
            accepted_fraction: r.accepted_fraction,
            gates_2q_mean: r.gates_2q_mean,
            gates_2q_std: r.gates_2q_std,
        }
    }

    /// A deterministic value, such as an exact reference or a Trotter point.
    pub fn exact(series: impl Into<String>, x: f64, value: f64, gates_2q: Option<usize>) -> Self {
        Row {
            series: series.into(),
            x,
            mean: value,
            stderr: 0.0,
            n_circuits: 1,
            accepted_fraction: 1.0,
            gates_2q_mean: gates_2q.map(|g| g as f64),
            gates_2q_std: gates_2q.map(|_| 0.0),
        }
    }
}

#[derive(Debug, Serialize)]
struct LedgerRow<'a> {
    series: &'a str,
    x: f64,
    index: usize,
    seed: u64,
    weight: f64,
    raw_re: Option<f64>,
    raw_im: Option<f64>,
    shots: usize,
    accepted_shots: usize,
    acceptance: f64,
    invalid: bool,
    gates_2q: Option<usize>,
}

#[derive(Default)]
pub struct Ledger {
    entries: Vec<(String, f64, Vec<CircuitOutcome>)>,
}

impl Ledger {
    pub fn push(&mut self, series: impl Into<String>, x: f64, outcomes: Vec<CircuitOutcome>) {
        self.entries.push((series.into(), x, outcomes));
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        let mut w = csv::Writer::from_path(path)?;
        for (series, x, outcomes) in &self.entries {
            for o in outcomes {
                w.serialize(LedgerRow {
                    series,
                    x: *x,
                    index: o.index,
                    seed: o.seed,
                    weight: o.weight,
                    raw_re: o.raw_re,
                    raw_im: o.raw_im,
                    shots: o.shots,
                    accepted_shots: o.accepted_shots,
                    acceptance: o.acceptance,
                    invalid: o.invalid,
                    gates_2q: o.gates_2q,
                })?;
            }
        }
        w.flush()?;
        Ok(())
    }
}

#[derive(Debug, Serialize)]
pub struct DumpEntry {
    pub series: String,
    pub x: f64,
    pub index: usize,
    /// Circuits in execution order, e.g. preparation then evolution.
    pub circuits: Vec<CircuitRecord>,
}

pub fn write_results(path: &Path, rows: &[Row]) -> Result<()> {
    let mut w = csv::Writer::from_path(path)
        .with_context(|| format!("creating {}", path.display()))?;
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

/// Content hash in the style of a git blob id, with SHA-256.
pub fn content_hash(text: &str) -> String {
    let mut h = Sha256::new();
    h.update(format!("blob {}\0", text.len()).as_bytes());
    h.update(text.as_bytes());
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}
