//! Browser bindings for the `unipol` designer.
//!
//! Three operations are exposed to the page: an incremental [`Designer`]
//! that runs UNIPOL or CAN a few iterations at a time, [`classical`] for
//! the closed-form families, and [`analyze`] for phases pasted by the user.
//! The Rust-side logic lives in plain functions so it can be unit tested
//! natively; the `wasm_bindgen` wrappers only translate errors.

use std::f64::consts::TAU;

use unipol::baselines::{generate, Can, GeneratorFamily};
use unipol::metrics::{autocorrelation, merit_factor, UnimodularSequence};
use unipol::solver::{init_random, Iteration, PhaseRange, Unipol};
use wasm_bindgen::prelude::*;

/// Upper bound on N so a stray input cannot freeze the tab.
pub const MAX_LENGTH: usize = 8192;

/// Metrics of one sequence, shaped for plotting.
#[wasm_bindgen]
#[derive(Debug, Clone)]
pub struct Report {
    phases: Vec<f64>,
    sidelobes_db: Vec<f64>,
    isl: f64,
    psl: f64,
    merit: f64,
}

#[wasm_bindgen]
impl Report {
    pub fn len(&self) -> usize {
        self.phases.len()
    }

    pub fn is_empty(&self) -> bool {
        self.phases.is_empty()
    }

    pub fn phases(&self) -> Vec<f64> {
        self.phases.clone()
    }

    /// `20 log10(|r_k| / N)` for lags `0..N`; exact zeros are `-inf`.
    #[wasm_bindgen(js_name = sidelobesDb)]
    pub fn sidelobes_db(&self) -> Vec<f64> {
        self.sidelobes_db.clone()
    }

    pub fn isl(&self) -> f64 {
        self.isl
    }

    pub fn psl(&self) -> f64 {
        self.psl
    }

    /// NaN when undefined (N = 1); `Infinity` for zero ISL.
    #[wasm_bindgen(js_name = meritFactor)]
    pub fn merit_factor(&self) -> f64 {
        self.merit
    }
}

pub fn report_of(x: &UnimodularSequence) -> Report {
    let profile = autocorrelation(x);
    Report {
        phases: x.phases(),
        sidelobes_db: profile.sidelobes_db(),
        isl: profile.isl(),
        psl: profile.psl(),
        merit: merit_factor(x).unwrap_or(f64::NAN),
    }
}

fn check_length(n: usize) -> Result<(), String> {
    if n == 0 || n > MAX_LENGTH {
        return Err(format!("length must be between 1 and {MAX_LENGTH}, got {n}"));
    }
    Ok(())
}

enum Method {
    Unipol(Unipol),
    Can(Can),
}

impl Method {
    fn iteration(&mut self) -> &mut dyn Iteration {
        match self {
            Method::Unipol(m) => m,
            Method::Can(m) => m,
        }
    }
}

/// A running design: seeded start, then `advance` as often as the page likes.
#[wasm_bindgen]
pub struct Designer {
    method: Method,
    x: UnimodularSequence,
    trace: Vec<f64>,
}

impl Designer {
    pub fn create(algo: &str, n: usize, seed: u64, full_range: bool) -> Result<Designer, String> {
        check_length(n)?;
        let method = match algo.to_ascii_lowercase().as_str() {
            "unipol" => Method::Unipol(Unipol::new(n, true)),
            "can" => Method::Can(Can::new(n)),
            other => return Err(format!("unknown algorithm {other:?} (expected unipol or can)")),
        };
        let range = if full_range { PhaseRange::Full } else { PhaseRange::Paper };
        let mut d = Designer {
            method,
            x: init_random(n, seed, range).map_err(|e| e.to_string())?,
            trace: Vec::new(),
        };
        let isl = d.method.iteration().isl(&d.x);
        d.trace.push(isl);
        Ok(d)
    }

    pub fn sequence(&self) -> &UnimodularSequence {
        &self.x
    }
}

#[wasm_bindgen]
impl Designer {
    /// `algo` is "unipol" or "can"; `fullRange` picks [0, 2π) over [0, 1] rad.
    #[wasm_bindgen(constructor)]
    pub fn new(algo: &str, n: usize, seed: u32, full_range: bool) -> Result<Designer, JsError> {
        Designer::create(algo, n, u64::from(seed), full_range).map_err(|e| JsError::new(&e))
    }

    /// Runs `iterations` more steps and returns the latest ISL.
    pub fn advance(&mut self, iterations: usize) -> f64 {
        let method = self.method.iteration();
        for _ in 0..iterations {
            self.x = method.step(&self.x);
            self.trace.push(method.isl(&self.x));
        }
        *self.trace.last().expect("trace holds the initial ISL")
    }

    pub fn iterations(&self) -> usize {
        self.trace.len() - 1
    }

    #[wasm_bindgen(js_name = islTrace)]
    pub fn isl_trace(&self) -> Vec<f64> {
        self.trace.clone()
    }

    pub fn report(&self) -> Report {
        report_of(&self.x)
    }
}

pub fn classical_report(family: &str, n: usize) -> Result<Report, String> {
    check_length(n)?;
    let family: GeneratorFamily = family.parse().map_err(|e: unipol::Error| e.to_string())?;
    generate(family, n).map(|x| report_of(&x)).map_err(|e| e.to_string())
}

/// Parses phases in radians separated by commas, whitespace or newlines.
pub fn parse_phases(text: &str) -> Result<UnimodularSequence, String> {
    let phases = text
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .enumerate()
        .map(|(i, t)| {
            t.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| format!("entry {}: {t:?} is not a finite number", i + 1))
        })
        .collect::<Result<Vec<f64>, String>>()?;
    check_length(phases.len())?;
    UnimodularSequence::from_phases(&phases).map_err(|e| e.to_string())
}

/// Report for a classical family: barker, frank, golomb, chu or p4.
#[wasm_bindgen]
pub fn classical(family: &str, n: usize) -> Result<Report, JsError> {
    classical_report(family, n).map_err(|e| JsError::new(&e))
}

/// Report for user-supplied phases (radians).
#[wasm_bindgen]
pub fn analyze(phases: &str) -> Result<Report, JsError> {
    parse_phases(phases).map(|x| report_of(&x)).map_err(|e| JsError::new(&e))
}

/// Phases of a report wrapped to (-π, π], convenient for a phase plot.
#[wasm_bindgen(js_name = centeredPhases)]
pub fn centered_phases(report: &Report) -> Vec<f64> {
    report
        .phases
        .iter()
        .map(|&p| if p > TAU / 2.0 { p - TAU } else { p })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn designer_descends_and_tracks_isl() {
        let mut d = Designer::create("unipol", 32, 4, true).unwrap();
        let first = d.isl_trace()[0];
        let last = d.advance(20);
        assert_eq!(d.iterations(), 20);
        assert_eq!(d.isl_trace().len(), 21);
        assert!(last < first);
        assert!(d.isl_trace().windows(2).all(|w| w[1] <= w[0] * (1.0 + 1e-9) + 1e-9));
        let r = d.report();
        assert!((r.isl() - last).abs() <= 1e-9 * last);
        assert_eq!(r.len(), 32);
    }

    #[test]
    fn designer_matches_core_solver() {
        use unipol::solver::{run, SolverConfig};
        let mut d = Designer::create("UNIPOL", 24, 7, true).unwrap();
        d.advance(15);
        let t = run(&SolverConfig::new(24).with_seed(7).with_iterations(15), None).unwrap();
        assert_eq!(d.isl_trace(), t.isl_per_iteration);
    }

    #[test]
    fn can_designer_runs() {
        let mut d = Designer::create("can", 16, 1, false).unwrap();
        let first = d.isl_trace()[0];
        assert!(d.advance(30) < first);
    }

    #[test]
    fn designer_rejects_bad_input() {
        assert!(Designer::create("sa", 8, 0, true).is_err());
        assert!(Designer::create("unipol", 0, 0, true).is_err());
        assert!(Designer::create("unipol", MAX_LENGTH + 1, 0, true).is_err());
    }

    #[test]
    fn barker_report() {
        let r = classical_report("barker", 13).unwrap();
        assert!((r.isl() - 6.0).abs() <= 1e-12);
        assert!((r.psl() - 1.0).abs() <= 1e-12);
        assert!((r.merit_factor() - 169.0 / 12.0).abs() <= 1e-12);
        assert_eq!(r.sidelobes_db()[0], 0.0);
        assert!(classical_report("barker", 6).is_err());
        assert!(classical_report("kasami", 8).is_err());
    }

    #[test]
    fn parses_pasted_phases() {
        let x = parse_phases("0, 0\n0 3.141592653589793").unwrap();
        assert_eq!(x.len(), 4);
        assert!(parse_phases("0, nan").unwrap_err().contains("entry 2"));
        assert!(parse_phases("0, x").is_err());
        assert!(parse_phases("  ").is_err());
        let r = report_of(&parse_phases("1.0").unwrap());
        assert!(r.merit_factor().is_nan());
        assert_eq!(r.isl(), 0.0);
    }

    #[test]
    fn centered_phase_range() {
        let r = report_of(&parse_phases("0 3 4 6").unwrap());
        let c = centered_phases(&r);
        assert!(c.iter().all(|&p| p > -TAU / 2.0 && p <= TAU / 2.0));
        assert!((c[2] - (4.0 - TAU)).abs() < 1e-12);
    }
}
