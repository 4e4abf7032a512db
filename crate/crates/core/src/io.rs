//! Text file formats: sequence tables and run records.
//!
//! A sequence file is a CSV table with header `index,phase,re,im` and one
//! row per element; phases are radians in `[0, 2π)` written with 17
//! significant digits so they survive a round trip exactly.
//!
//! A run record is a JSON document holding the configuration, the ISL and
//! timing traces and the final design.

use std::fs::File;
use std::io::{BufWriter, Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::metrics::{autocorrelation, UnimodularSequence};
use crate::solver::{PhaseRange, RunTrace};
use crate::{Error, Result};

pub const SEQUENCE_HEADER: [&str; 4] = ["index", "phase", "re", "im"];

/// Allowed mismatch between a row's `re, im` and `cos, sin` of its phase.
pub const ROW_CONSISTENCY_TOL: f64 = 1e-12;

pub fn write_sequence<W: Write>(mut w: W, x: &UnimodularSequence) -> Result<()> {
    writeln!(w, "{}", SEQUENCE_HEADER.join(","))?;
    for (i, phase) in x.phases().into_iter().enumerate() {
        let (s, c) = phase.sin_cos();
        writeln!(w, "{i},{phase:.16e},{c:.16e},{s:.16e}")?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_sequence_file(path: &Path, x: &UnimodularSequence) -> Result<()> {
    write_sequence(BufWriter::new(File::create(path)?), x)
}

/// Parses a sequence table; `source` names the input in error messages.
pub fn read_sequence<R: Read>(r: R, source: &str) -> Result<UnimodularSequence> {
    let fail = |msg: String| Error::Format {
        path: source.to_string(),
        msg,
    };
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(r);

    let header = reader
        .headers()
        .map_err(|e| fail(format!("cannot read header: {e}")))?
        .clone();
    let names: Vec<&str> = header.iter().collect();
    if names != SEQUENCE_HEADER {
        return Err(fail(format!(
            "line 1: expected header {:?}, found {:?}",
            SEQUENCE_HEADER.join(","),
            names.join(",")
        )));
    }

    let mut phases = Vec::new();
    for (row, record) in reader.records().enumerate() {
        let line = row + 2;
        let record = record.map_err(|e| fail(format!("line {line}: {e}")))?;
        if record.len() != 4 {
            return Err(fail(format!(
                "line {line}: expected 4 columns, found {}",
                record.len()
            )));
        }
        let index: usize = record[0]
            .parse()
            .map_err(|_| fail(format!("line {line}, column index: {:?} is not an integer", &record[0])))?;
        if index != row {
            return Err(fail(format!("line {line}, column index: expected {row}, found {index}")));
        }
        let num = |col: usize| -> Result<f64> {
            let v: f64 = record[col].parse().map_err(|_| {
                fail(format!(
                    "line {line}, column {}: {:?} is not a number",
                    SEQUENCE_HEADER[col], &record[col]
                ))
            })?;
            if !v.is_finite() {
                return Err(fail(format!("line {line}, column {}: not finite", SEQUENCE_HEADER[col])));
            }
            Ok(v)
        };
        let phase = num(1)?;
        let re = num(2)?;
        let im = num(3)?;
        let (s, c) = phase.sin_cos();
        if (re - c).abs() > ROW_CONSISTENCY_TOL || (im - s).abs() > ROW_CONSISTENCY_TOL {
            return Err(fail(format!(
                "line {line}: re/im ({re}, {im}) do not match phase {phase}"
            )));
        }
        phases.push(phase);
    }
    if phases.is_empty() {
        return Err(fail("no sequence rows".into()));
    }
    UnimodularSequence::from_phases(&phases)
}

pub fn read_sequence_file(path: &Path) -> Result<UnimodularSequence> {
    read_sequence(File::open(path)?, &path.display().to_string())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct RunRecord {
    pub algorithm: String,
    #[serde(rename = "N")]
    pub n: usize,
    pub seed: u64,
    pub phase_range: PhaseRange,
    pub max_iterations: usize,
    pub rel_tolerance: f64,
    pub fast_path: bool,
    pub iterations_run: usize,
    pub isl_trace: Vec<f64>,
    pub time_trace_seconds: Vec<f64>,
    pub final_phases: Vec<f64>,
    pub final_isl: f64,
    pub final_psl: f64,
    /// `null` when undefined (N = 1) or infinite.
    pub merit_factor: Option<f64>,
}

impl RunRecord {
    pub fn from_trace(algorithm: &str, trace: &RunTrace) -> Self {
        let cfg = &trace.config;
        let profile = autocorrelation(&trace.final_sequence);
        let n = cfg.n as f64;
        let isl = trace.final_isl();
        let merit_factor = (cfg.n >= 2 && isl > 0.0).then(|| n * n / (2.0 * isl));
        RunRecord {
            algorithm: algorithm.to_string(),
            n: cfg.n,
            seed: cfg.seed,
            phase_range: cfg.phase_range,
            max_iterations: cfg.max_iterations,
            rel_tolerance: cfg.rel_tolerance,
            fast_path: cfg.fast_path,
            iterations_run: trace.iterations_run,
            isl_trace: trace.isl_per_iteration.clone(),
            time_trace_seconds: trace.wall_time_per_iteration.clone(),
            final_phases: trace.final_sequence.phases(),
            final_isl: isl,
            final_psl: profile.psl(),
            merit_factor,
        }
    }

    pub fn final_sequence(&self) -> Result<UnimodularSequence> {
        UnimodularSequence::from_phases(&self.final_phases)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("run record serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Format {
            path: "<run record>".into(),
            msg: e.to_string(),
        })
    }
}
