//! Reference designs: the CAN alternating projection method and classical
//! polyphase/binary codes.

use std::f64::consts::{PI, TAU};
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::metrics::{autocorrelation_with, UnimodularSequence};
use crate::solver::{drive, Iteration, RunTrace, SolverConfig};
use crate::spectral::Spectral;
use crate::{Error, Result};

pub const BARKER_2: [i8; 2] = [1, -1];
pub const BARKER_3: [i8; 3] = [1, 1, -1];
pub const BARKER_4: [i8; 4] = [1, 1, -1, 1];
pub const BARKER_5: [i8; 5] = [1, 1, 1, -1, 1];
pub const BARKER_7: [i8; 7] = [1, 1, 1, -1, -1, 1, -1];
pub const BARKER_11: [i8; 11] = [1, 1, 1, -1, -1, -1, 1, -1, -1, 1, -1];
pub const BARKER_13: [i8; 13] = [1, 1, 1, 1, 1, -1, -1, 1, 1, -1, 1, -1, 1];

pub fn barker_code(n: usize) -> Option<&'static [i8]> {
    Some(match n {
        2 => &BARKER_2,
        3 => &BARKER_3,
        4 => &BARKER_4,
        5 => &BARKER_5,
        7 => &BARKER_7,
        11 => &BARKER_11,
        13 => &BARKER_13,
        _ => return None,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GeneratorFamily {
    Barker,
    Frank,
    Golomb,
    Chu,
    P4,
}

impl GeneratorFamily {
    pub const ALL: [GeneratorFamily; 5] = [
        GeneratorFamily::Barker,
        GeneratorFamily::Frank,
        GeneratorFamily::Golomb,
        GeneratorFamily::Chu,
        GeneratorFamily::P4,
    ];

    pub fn name(self) -> &'static str {
        match self {
            GeneratorFamily::Barker => "barker",
            GeneratorFamily::Frank => "frank",
            GeneratorFamily::Golomb => "golomb",
            GeneratorFamily::Chu => "chu",
            GeneratorFamily::P4 => "p4",
        }
    }

    fn constraint(self) -> &'static str {
        match self {
            GeneratorFamily::Barker => "Barker codes exist only for N in {2, 3, 4, 5, 7, 11, 13}",
            GeneratorFamily::Frank => "Frank codes need N = L^2 with L >= 2",
            _ => "length must be at least 1",
        }
    }
}

impl fmt::Display for GeneratorFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for GeneratorFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        GeneratorFamily::ALL
            .into_iter()
            .find(|f| f.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| {
                Error::invalid(format!(
                    "unknown family {s:?} (expected one of barker, frank, golomb, chu, p4)"
                ))
            })
    }
}

fn exact_sqrt(n: usize) -> Option<usize> {
    let r = (n as f64).sqrt().round() as usize;
    (r * r == n).then_some(r)
}

/// Generates the classical sequence of the given family and length.
pub fn generate(family: GeneratorFamily, n: usize) -> Result<UnimodularSequence> {
    let unsupported = || Error::UnsupportedLength {
        family: family.name(),
        len: n,
        constraint: family.constraint(),
    };
    if n == 0 {
        return Err(unsupported());
    }
    let nf = n as f64;
    let phases: Vec<f64> = match family {
        GeneratorFamily::Barker => {
            let code = barker_code(n).ok_or_else(unsupported)?;
            return UnimodularSequence::from_signs(code);
        }
        GeneratorFamily::Frank => {
            let l = exact_sqrt(n).filter(|&l| l >= 2).ok_or_else(unsupported)?;
            (0..l)
                .flat_map(|m| (0..l).map(move |k| TAU * ((m * k) % l) as f64 / l as f64))
                .collect()
        }
        // e^{jπ(n−1)n/N}, 1-based n.
        GeneratorFamily::Golomb => (0..n).map(|i| PI * (i * (i + 1)) as f64 / nf).collect(),
        GeneratorFamily::Chu => (0..n)
            .map(|i| {
                let k = if n % 2 == 0 { i * i } else { i * (i + 1) };
                // Reduce mod 2N before scaling to keep angles small.
                PI * (k % (2 * n)) as f64 / nf
            })
            .collect(),
        // e^{jπ(n−1)(n−1−N)/N}, 1-based n.
        GeneratorFamily::P4 => (0..n)
            .map(|i| PI * (i as f64) * (i as f64 - nf) / nf)
            .collect(),
    };
    UnimodularSequence::from_phases(&phases)
}

/// CAN iteration: alternate unit-modulus projections in frequency and time.
#[derive(Clone)]
pub struct Can {
    plan: Spectral,
}

fn unit(z: Complex64) -> Complex64 {
    let r = z.norm();
    if r > 0.0 {
        z / r
    } else {
        Complex64::new(1.0, 0.0)
    }
}

impl Can {
    pub fn new(n: usize) -> Self {
        Can {
            plan: Spectral::new(n),
        }
    }

    pub fn step(&self, x: &UnimodularSequence) -> UnimodularSequence {
        let n = self.plan.len();
        assert_eq!(x.len(), n, "sequence length differs from solver length");
        let mut buf = self.plan.spectrum(x.values());
        for v in buf.iter_mut() {
            *v = unit(*v);
        }
        self.plan.inverse_in_place(&mut buf);
        buf.truncate(n);
        UnimodularSequence::from_values_unchecked(buf.into_iter().map(unit).collect())
    }
}

impl Iteration for Can {
    fn step(&mut self, x: &UnimodularSequence) -> UnimodularSequence {
        Can::step(self, x)
    }

    fn isl(&self, x: &UnimodularSequence) -> f64 {
        autocorrelation_with(&self.plan, x.values())
            .iter()
            .skip(1)
            .map(|r| r.norm_sqr())
            .sum()
    }
}

/// Runs CAN with the same configuration surface as [`crate::solver::run`].
/// The ISL trace is not guaranteed to be monotone.
pub fn can_run(cfg: &SolverConfig, init: Option<UnimodularSequence>) -> Result<RunTrace> {
    cfg.validate()?;
    drive(cfg, init, &mut Can::new(cfg.n))
}
