use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use super::runner::PhaseTransitionTable;
use super::ModelKind;
use crate::error::{Error, Result};

/// Exact CSV header, in [`TrialRecord`] field order.
pub const CSV_HEADER: [&str; 16] = [
    "trial_id",
    "m",
    "n",
    "s",
    "eta",
    "f_star",
    "model",
    "noise_kind",
    "noise_scale",
    "error",
    "bound_value",
    "mismatch_term",
    "iters",
    "converged",
    "runtime_ms",
    "seed",
];

const NA: &str = "NA";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

/// One solve inside an experiment grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub trial_id: u64,
    pub m: usize,
    pub n: usize,
    pub s: usize,
    pub eta: f64,
    pub f_star: f64,
    pub model: ModelKind,
    pub noise_kind: String,
    pub noise_scale: f64,
    /// Sign-invariant distance for the amplitude model, Euclidean otherwise.
    pub error: f64,
    /// `None` when the bound's hypotheses fail, e.g. `ρ ≥ 1`.
    pub bound_value: Option<f64>,
    pub mismatch_term: Option<f64>,
    pub iters: usize,
    pub converged: bool,
    pub runtime_ms: f64,
    pub seed: u64,
}

/// 17 significant digits, enough to round-trip an `f64`.
fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map_or_else(|| NA.to_string(), fmt_f64)
}

fn csv_err(e: csv::Error) -> Error {
    Error::Io(e.to_string())
}

pub fn write_records_csv<W: Write>(out: W, records: &[TrialRecord]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER).map_err(csv_err)?;
    for r in records {
        w.write_record([
            r.trial_id.to_string(),
            r.m.to_string(),
            r.n.to_string(),
            r.s.to_string(),
            fmt_f64(r.eta),
            fmt_f64(r.f_star),
            r.model.to_string(),
            r.noise_kind.clone(),
            fmt_f64(r.noise_scale),
            fmt_f64(r.error),
            fmt_opt(r.bound_value),
            fmt_opt(r.mismatch_term),
            r.iters.to_string(),
            r.converged.to_string(),
            fmt_f64(r.runtime_ms),
            r.seed.to_string(),
        ])
        .map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_records_json<W: Write>(mut out: W, records: &[TrialRecord]) -> Result<()> {
    serde_json::to_writer_pretty(&mut out, records).map_err(|e| Error::Io(e.to_string()))?;
    out.write_all(b"\n")?;
    Ok(())
}

fn parse<T: std::str::FromStr>(field: &str, name: &str, row: usize) -> Result<T> {
    field
        .parse()
        .map_err(|_| Error::Validation(format!("row {row}: bad {name} '{field}'")))
}

fn parse_opt(field: &str, name: &str, row: usize) -> Result<Option<f64>> {
    if field == NA {
        Ok(None)
    } else {
        parse(field, name, row).map(Some)
    }
}

pub fn read_records_csv<R: Read>(input: R) -> Result<Vec<TrialRecord>> {
    let mut rd = csv::Reader::from_reader(input);
    let header = rd.headers().map_err(csv_err)?.clone();
    if header.iter().ne(CSV_HEADER.iter().copied()) {
        return Err(Error::Validation(format!(
            "unexpected CSV header: {}",
            header.iter().collect::<Vec<_>>().join(",")
        )));
    }
    let mut records = Vec::new();
    for (i, row) in rd.records().enumerate() {
        let row = row.map_err(csv_err)?;
        let f = |k: usize| &row[k];
        let line = i + 2;
        records.push(TrialRecord {
            trial_id: parse(f(0), "trial_id", line)?,
            m: parse(f(1), "m", line)?,
            n: parse(f(2), "n", line)?,
            s: parse(f(3), "s", line)?,
            eta: parse(f(4), "eta", line)?,
            f_star: parse(f(5), "f_star", line)?,
            model: ModelKind::parse(f(6))?,
            noise_kind: f(7).to_string(),
            noise_scale: parse(f(8), "noise_scale", line)?,
            error: parse(f(9), "error", line)?,
            bound_value: parse_opt(f(10), "bound_value", line)?,
            mismatch_term: parse_opt(f(11), "mismatch_term", line)?,
            iters: parse(f(12), "iters", line)?,
            converged: parse(f(13), "converged", line)?,
            runtime_ms: parse(f(14), "runtime_ms", line)?,
            seed: parse(f(15), "seed", line)?,
        });
    }
    Ok(records)
}

pub fn read_records_json<R: Read>(input: R) -> Result<Vec<TrialRecord>> {
    serde_json::from_reader(input).map_err(|e| Error::Validation(e.to_string()))
}

pub fn write_phase_table_csv<W: Write>(out: W, table: &PhaseTransitionTable) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["m", "trials", "successes", "success_rate", "m0_estimate"])
        .map_err(csv_err)?;
    for r in &table.rows {
        w.write_record([
            r.m.to_string(),
            r.trials.to_string(),
            r.successes.to_string(),
            fmt_f64(r.success_rate),
            fmt_f64(r.m0_estimate),
        ])
        .map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}
