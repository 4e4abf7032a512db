//! The majorization-minimization driver.
//!
//! Every outer iteration builds the surrogate coefficients of all elements
//! from one snapshot of the current sequence, minimizes each on the unit
//! circle, and swaps in the new sequence at the end (Jacobi update). Since
//! the joint majorizer is a sum of per-element terms, this minimizes it
//! exactly, so the ISL never increases.

use std::f64::consts::TAU;
use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::metrics::{autocorrelation_with, UnimodularSequence};
use crate::spectral::Spectral;
use crate::surrogate::{ab_all_direct_with, ab_all_fast_with, map_indices, minimize_phase};
use crate::{Error, Result};

/// Elements whose `|a| + |b|` falls below this times `2N` have a surrogate
/// that is flat to rounding error and keep their current value.
pub const FLAT_SURROGATE_TOL: f64 = 1e-12;

/// Consecutive iterations below `rel_tolerance` needed to stop early.
pub const STALL_ITERATIONS: usize = 3;

/// Range of the uniform initial phases.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PhaseRange {
    /// `[0, 1]` radians.
    Paper,
    /// `[0, 2π)`.
    #[default]
    Full,
}

impl PhaseRange {
    pub fn width(self) -> f64 {
        match self {
            PhaseRange::Paper => 1.0,
            PhaseRange::Full => TAU,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            PhaseRange::Paper => "paper",
            PhaseRange::Full => "full",
        }
    }
}

impl std::str::FromStr for PhaseRange {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "paper" => Ok(PhaseRange::Paper),
            "full" => Ok(PhaseRange::Full),
            other => Err(Error::invalid(format!(
                "unknown phase range {other:?} (expected \"paper\" or \"full\")"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SolverConfig {
    #[serde(rename = "N")]
    pub n: usize,
    pub max_iterations: usize,
    /// Zero means run the full iteration budget.
    pub rel_tolerance: f64,
    pub seed: u64,
    pub phase_range: PhaseRange,
    pub fast_path: bool,
}

impl SolverConfig {
    pub fn new(n: usize) -> Self {
        SolverConfig {
            n,
            max_iterations: 1000,
            rel_tolerance: 0.0,
            seed: 0,
            phase_range: PhaseRange::Full,
            fast_path: true,
        }
    }

    pub fn with_iterations(mut self, iters: usize) -> Self {
        self.max_iterations = iters;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_tolerance(mut self, tol: f64) -> Self {
        self.rel_tolerance = tol;
        self
    }

    pub fn with_phase_range(mut self, range: PhaseRange) -> Self {
        self.phase_range = range;
        self
    }

    pub fn with_fast_path(mut self, fast: bool) -> Self {
        self.fast_path = fast;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::invalid("sequence length must be at least 1"));
        }
        if self.max_iterations == 0 {
            return Err(Error::invalid("iteration budget must be at least 1"));
        }
        if !(self.rel_tolerance >= 0.0 && self.rel_tolerance.is_finite()) {
            return Err(Error::invalid("relative tolerance must be finite and nonnegative"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunTrace {
    /// ISL after each iteration; entry 0 is the initial sequence.
    pub isl_per_iteration: Vec<f64>,
    /// Cumulative wall-clock seconds, aligned with `isl_per_iteration`.
    pub wall_time_per_iteration: Vec<f64>,
    pub final_sequence: UnimodularSequence,
    pub iterations_run: usize,
    pub config: SolverConfig,
}

impl RunTrace {
    pub fn initial_isl(&self) -> f64 {
        self.isl_per_iteration[0]
    }

    pub fn final_isl(&self) -> f64 {
        *self.isl_per_iteration.last().expect("trace holds the initial ISL")
    }

    pub fn total_seconds(&self) -> f64 {
        *self.wall_time_per_iteration.last().unwrap_or(&0.0)
    }
}

/// Seeded uniform phases; the same `(n, seed, range)` always gives the same sequence.
pub fn init_random(n: usize, seed: u64, range: PhaseRange) -> Result<UnimodularSequence> {
    if n == 0 {
        return Err(Error::invalid("sequence length must be at least 1"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let width = range.width();
    let phases: Vec<f64> = (0..n).map(|_| rng.random::<f64>() * width).collect();
    UnimodularSequence::from_phases(&phases)
}

/// One iteration of an iterative sequence design method.
pub trait Iteration {
    fn step(&mut self, x: &UnimodularSequence) -> UnimodularSequence;

    /// ISL used for the trace and stopping rule.
    fn isl(&self, x: &UnimodularSequence) -> f64;
}

/// Reusable per-length state for the MM update.
#[derive(Clone)]
pub struct Unipol {
    plan: Spectral,
    fast_path: bool,
}

impl Unipol {
    pub fn new(n: usize, fast_path: bool) -> Self {
        Unipol {
            plan: Spectral::new(n),
            fast_path,
        }
    }

    pub fn step(&self, xt: &UnimodularSequence) -> UnimodularSequence {
        assert_eq!(xt.len(), self.plan.len(), "sequence length differs from solver length");
        let x = xt.values();
        let coeffs = if self.fast_path {
            ab_all_fast_with(&self.plan, x)
        } else {
            ab_all_direct_with(&self.plan, x)
        };
        let flat = FLAT_SURROGATE_TOL * (2 * x.len()) as f64;
        let next: Vec<Complex64> = map_indices(x.len(), |q| {
            let c = &coeffs[q];
            if c.a.norm() + c.b.norm() <= flat {
                return x[q];
            }
            match minimize_phase(c) {
                Some(theta) => Complex64::from_polar(1.0, theta),
                None => x[q],
            }
        });
        UnimodularSequence::from_values_unchecked(next)
    }

    pub fn isl(&self, x: &UnimodularSequence) -> f64 {
        autocorrelation_with(&self.plan, x.values())
            .iter()
            .skip(1)
            .map(|r| r.norm_sqr())
            .sum()
    }
}

impl Iteration for Unipol {
    fn step(&mut self, x: &UnimodularSequence) -> UnimodularSequence {
        Unipol::step(self, x)
    }

    fn isl(&self, x: &UnimodularSequence) -> f64 {
        Unipol::isl(self, x)
    }
}

/// A single Jacobi MM update of every element.
pub fn unipol_step(xt: &UnimodularSequence, cfg: &SolverConfig) -> UnimodularSequence {
    Unipol::new(xt.len(), cfg.fast_path).step(xt)
}

/// Runs the MM iteration from `init` or from [`init_random`] with the config's seed.
pub fn run(cfg: &SolverConfig, init: Option<UnimodularSequence>) -> Result<RunTrace> {
    cfg.validate()?;
    let mut method = Unipol::new(cfg.n, cfg.fast_path);
    drive(cfg, init, &mut method)
}

/// Shared outer loop: trace recording, timing and the stopping rule.
pub fn drive<M: Iteration>(
    cfg: &SolverConfig,
    init: Option<UnimodularSequence>,
    method: &mut M,
) -> Result<RunTrace> {
    cfg.validate()?;
    let mut x = match init {
        Some(x) if x.len() != cfg.n => {
            return Err(Error::invalid(format!(
                "initial sequence has length {} but the config asks for {}",
                x.len(),
                cfg.n
            )))
        }
        Some(x) => x,
        None => init_random(cfg.n, cfg.seed, cfg.phase_range)?,
    };

    let mut isl = vec![method.isl(&x)];
    let mut times = vec![0.0];
    let mut elapsed = 0.0;
    let mut stalled = 0;

    while isl.len() <= cfg.max_iterations {
        let start = Instant::now();
        x = method.step(&x);
        elapsed += start.elapsed().as_secs_f64();
        let prev = *isl.last().unwrap();
        let cur = method.isl(&x);
        isl.push(cur);
        times.push(elapsed);

        if cfg.rel_tolerance > 0.0 {
            let rel = if prev > 0.0 { (prev - cur) / prev } else { 0.0 };
            stalled = if rel < cfg.rel_tolerance { stalled + 1 } else { 0 };
            if stalled >= STALL_ITERATIONS {
                break;
            }
        }
    }

    Ok(RunTrace {
        iterations_run: isl.len() - 1,
        isl_per_iteration: isl,
        wall_time_per_iteration: times,
        final_sequence: x,
        config: cfg.clone(),
    })
}
