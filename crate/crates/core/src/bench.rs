//! Monte Carlo benchmark harness: seeded trials per (algorithm, length),
//! one CSV row per trial.

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use crate::baselines::can_run;
use crate::metrics::UnimodularSequence;
use crate::solver::{run, PhaseRange, RunTrace, SolverConfig};
use crate::{Error, Result};

pub const DEFAULT_LENGTHS: [usize; 8] = [50, 100, 225, 400, 625, 900, 1000, 1300];

pub const CSV_HEADER: [&str; 7] = [
    "algo",
    "N",
    "seed",
    "iterations",
    "finalIsl",
    "totalSeconds",
    "perIterSeconds",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Algorithm {
    Unipol,
    Can,
}

impl Algorithm {
    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Unipol => "unipol",
            Algorithm::Can => "can",
        }
    }

    pub fn run(self, cfg: &SolverConfig) -> Result<RunTrace> {
        self.run_from(cfg, None)
    }

    pub fn run_from(self, cfg: &SolverConfig, init: Option<UnimodularSequence>) -> Result<RunTrace> {
        match self {
            Algorithm::Unipol => run(cfg, init),
            Algorithm::Can => can_run(cfg, init),
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "unipol" => Ok(Algorithm::Unipol),
            "can" => Ok(Algorithm::Can),
            other => Err(Error::invalid(format!(
                "unknown algorithm {other:?} (expected unipol or can)"
            ))),
        }
    }
}

#[derive(Debug, Clone)]
pub struct BenchConfig {
    pub algos: Vec<Algorithm>,
    pub lengths: Vec<usize>,
    pub runs: usize,
    pub iterations: usize,
    pub rel_tolerance: f64,
    pub base_seed: u64,
    pub phase_range: PhaseRange,
    pub fast_path: bool,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            algos: vec![Algorithm::Unipol, Algorithm::Can],
            lengths: DEFAULT_LENGTHS.to_vec(),
            runs: 30,
            iterations: 1000,
            rel_tolerance: 0.0,
            base_seed: 0,
            phase_range: PhaseRange::Full,
            fast_path: true,
        }
    }
}

impl BenchConfig {
    pub fn validate(&self) -> Result<()> {
        if self.algos.is_empty() {
            return Err(Error::invalid("no algorithms selected"));
        }
        if self.lengths.is_empty() {
            return Err(Error::invalid("no lengths selected"));
        }
        if let Some(n) = self.lengths.iter().find(|&&n| n < 2) {
            return Err(Error::invalid(format!("benchmark lengths must be at least 2, got {n}")));
        }
        if self.runs == 0 {
            return Err(Error::invalid("runs must be at least 1"));
        }
        self.trial_config(self.lengths[0], self.base_seed).validate()
    }

    pub fn trial_config(&self, n: usize, seed: u64) -> SolverConfig {
        SolverConfig::new(n)
            .with_iterations(self.iterations)
            .with_tolerance(self.rel_tolerance)
            .with_seed(seed)
            .with_phase_range(self.phase_range)
            .with_fast_path(self.fast_path)
    }

    /// Trials in output order: algorithm, then length, then seed.
    pub fn trials(&self) -> Vec<(Algorithm, usize, u64)> {
        let mut out = Vec::new();
        for &algo in &self.algos {
            for &n in &self.lengths {
                for t in 0..self.runs {
                    out.push((algo, n, self.base_seed.wrapping_add(t as u64)));
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub algo: Algorithm,
    pub n: usize,
    pub seed: u64,
    pub iterations: usize,
    pub final_isl: f64,
    pub total_seconds: f64,
    pub per_iter_seconds: f64,
}

fn trial(cfg: &BenchConfig, (algo, n, seed): (Algorithm, usize, u64)) -> Result<BenchRow> {
    let trace = algo.run(&cfg.trial_config(n, seed))?;
    let total = trace.total_seconds();
    Ok(BenchRow {
        algo,
        n,
        seed,
        iterations: trace.iterations_run,
        final_isl: trace.final_isl(),
        total_seconds: total,
        per_iter_seconds: total / trace.iterations_run.max(1) as f64,
    })
}

/// Runs every trial; rows come back in [`BenchConfig::trials`] order.
pub fn run_bench(cfg: &BenchConfig) -> Result<Vec<BenchRow>> {
    cfg.validate()?;
    let trials = cfg.trials();
    #[cfg(feature = "parallel")]
    let rows: Vec<Result<BenchRow>> = {
        use rayon::prelude::*;
        trials.into_par_iter().map(|t| trial(cfg, t)).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let rows: Vec<Result<BenchRow>> = trials.into_iter().map(|t| trial(cfg, t)).collect();
    rows.into_iter().collect()
}

pub fn write_csv<W: Write>(w: W, rows: &[BenchRow]) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    let io = |e: csv::Error| Error::Io(e.into());
    out.write_record(CSV_HEADER).map_err(io)?;
    for r in rows {
        out.write_record([
            r.algo.name().to_string(),
            r.n.to_string(),
            r.seed.to_string(),
            r.iterations.to_string(),
            format!("{:.16e}", r.final_isl),
            format!("{:.9e}", r.total_seconds),
            format!("{:.9e}", r.per_iter_seconds),
        ])
        .map_err(io)?;
    }
    out.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> BenchConfig {
        BenchConfig {
            algos: vec![Algorithm::Unipol, Algorithm::Can],
            lengths: vec![8, 12],
            runs: 2,
            iterations: 5,
            base_seed: 10,
            ..BenchConfig::default()
        }
    }

    #[test]
    fn row_order_and_count() {
        let rows = run_bench(&small()).unwrap();
        assert_eq!(rows.len(), 8);
        let keys: Vec<_> = rows.iter().map(|r| (r.algo, r.n, r.seed)).collect();
        assert_eq!(keys, small().trials());
        assert_eq!(keys[0], (Algorithm::Unipol, 8, 10));
        assert_eq!(keys[7], (Algorithm::Can, 12, 11));
    }

    #[test]
    fn deterministic_isl_columns() {
        let a = run_bench(&small()).unwrap();
        let b = run_bench(&small()).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.final_isl, y.final_isl);
            assert_eq!(x.iterations, y.iterations);
        }
    }

    #[test]
    fn rejects_bad_lengths() {
        let cfg = BenchConfig {
            lengths: vec![1, 10],
            ..small()
        };
        assert!(run_bench(&cfg).is_err());
        let cfg = BenchConfig { runs: 0, ..small() };
        assert!(run_bench(&cfg).is_err());
    }

    #[test]
    fn csv_layout() {
        let rows = run_bench(&BenchConfig {
            algos: vec![Algorithm::Unipol],
            lengths: vec![4],
            runs: 1,
            ..small()
        })
        .unwrap();
        let mut out = Vec::new();
        write_csv(&mut out, &rows).unwrap();
        let text = String::from_utf8(out).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "algo,N,seed,iterations,finalIsl,totalSeconds,perIterSeconds");
        assert!(lines[1].starts_with("unipol,4,10,5,"));
    }
}
