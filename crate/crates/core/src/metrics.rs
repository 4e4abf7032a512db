//! Sequence type and sidelobe metrics.
//!
//! All metrics follow the aperiodic autocorrelation
//! `r_k = Σ_{n=0}^{N−1−k} x_{n+k} x_n*` for `k = 0..N`. Spectra live on the
//! 2N-point grid `ω_p = 2πp / 2N` with `p = 0..2N` and phase convention
//! `X_p = Σ_n x_n e^{−jω_p n}` with 0-based `n`.

use std::f64::consts::TAU;

use num_complex::Complex64;

use crate::spectral::Spectral;
use crate::{Error, Result};

/// Tolerance on `|x_n| − 1` accepted by [`UnimodularSequence::from_values`].
pub const UNIMODULAR_TOL: f64 = 1e-12;

/// Lengths up to this use direct O(N²) autocorrelation; above it, transforms.
pub const DIRECT_AUTOCORR_MAX: usize = 64;

/// A nonempty sequence of unit-modulus complex values.
#[derive(Debug, Clone, PartialEq)]
pub struct UnimodularSequence {
    values: Vec<Complex64>,
}

impl UnimodularSequence {
    /// Builds `x_n = e^{jθ_n}`.
    pub fn from_phases(phases: &[f64]) -> Result<Self> {
        if phases.is_empty() {
            return Err(Error::invalid("sequence must have at least one element"));
        }
        if let Some(i) = phases.iter().position(|p| !p.is_finite()) {
            return Err(Error::invalid(format!("phase {i} is not finite")));
        }
        Ok(UnimodularSequence {
            values: phases.iter().map(|&p| Complex64::from_polar(1.0, p)).collect(),
        })
    }

    /// Wraps values that must already have unit modulus within [`UNIMODULAR_TOL`].
    pub fn from_values(values: Vec<Complex64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::invalid("sequence must have at least one element"));
        }
        for (i, v) in values.iter().enumerate() {
            let dev = (v.norm() - 1.0).abs();
            if !(dev <= UNIMODULAR_TOL) {
                return Err(Error::invalid(format!(
                    "element {i} has modulus {} (expected 1)",
                    v.norm()
                )));
            }
        }
        Ok(UnimodularSequence { values })
    }

    /// Real ±1 sequence, e.g. a binary code.
    pub fn from_signs(signs: &[i8]) -> Result<Self> {
        let values = signs
            .iter()
            .map(|&s| match s {
                1 => Ok(Complex64::new(1.0, 0.0)),
                -1 => Ok(Complex64::new(-1.0, 0.0)),
                other => Err(Error::invalid(format!("sign {other} is not ±1"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_values(values)
    }

    pub(crate) fn from_values_unchecked(values: Vec<Complex64>) -> Self {
        debug_assert!(!values.is_empty());
        UnimodularSequence { values }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    /// Always false; kept for API symmetry with `len`.
    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    /// Phases in `[0, 2π)`.
    pub fn phases(&self) -> Vec<f64> {
        self.values.iter().map(|v| wrap_phase(v.arg())).collect()
    }

    /// `e^{jφ} · x`.
    pub fn rotated(&self, phi: f64) -> Self {
        let w = Complex64::from_polar(1.0, phi);
        UnimodularSequence {
            values: self.values.iter().map(|v| v * w).collect(),
        }
    }
}

/// Maps any finite angle into `[0, 2π)`.
pub fn wrap_phase(theta: f64) -> f64 {
    let w = theta.rem_euclid(TAU);
    if w >= TAU {
        0.0
    } else {
        w
    }
}

/// Autocorrelation at nonnegative lags; `r_{−k} = r_k*`.
#[derive(Debug, Clone, PartialEq)]
pub struct AutocorrelationProfile {
    lags: Vec<Complex64>,
}

impl AutocorrelationProfile {
    pub fn lags(&self) -> &[Complex64] {
        &self.lags
    }

    pub fn len(&self) -> usize {
        self.lags.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lags.is_empty()
    }

    /// Lag `k ∈ (−N, N)`, using conjugate symmetry for negative lags.
    pub fn at(&self, k: isize) -> Option<Complex64> {
        let idx = k.unsigned_abs();
        let r = *self.lags.get(idx)?;
        Some(if k < 0 { r.conj() } else { r })
    }

    /// `Σ_{k≥1} |r_k|²`.
    pub fn isl(&self) -> f64 {
        self.lags.iter().skip(1).map(|r| r.norm_sqr()).sum()
    }

    /// `max_{k≥1} |r_k|`, zero for a single-element sequence.
    pub fn psl(&self) -> f64 {
        self.lags.iter().skip(1).map(|r| r.norm()).fold(0.0, f64::max)
    }

    /// `20·log10(|r_k| / N)` for every nonnegative lag. Exact zeros map to `-inf`.
    pub fn sidelobes_db(&self) -> Vec<f64> {
        let n = self.lags.len() as f64;
        self.lags.iter().map(|r| 20.0 * (r.norm() / n).log10()).collect()
    }
}

/// Spectrum on the 2N-point grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumGrid {
    bins: Vec<Complex64>,
}

impl SpectrumGrid {
    pub fn bins(&self) -> &[Complex64] {
        &self.bins
    }

    pub fn grid_size(&self) -> usize {
        self.bins.len()
    }

    /// `Σ_p |X_p|²`, equal to `2N²` for unimodular input.
    pub fn energy(&self) -> f64 {
        self.bins.iter().map(|b| b.norm_sqr()).sum()
    }

    /// `(1/4N) Σ_p (|X_p|² − N)²`.
    ///
    /// The sum over the grid counts every lag pair `±k`, hence `4N` rather
    /// than `2N` in the normalization.
    pub fn isl(&self) -> f64 {
        let two_n = self.bins.len() as f64;
        let n = two_n / 2.0;
        self.bins
            .iter()
            .map(|b| {
                let d = b.norm_sqr() - n;
                d * d
            })
            .sum::<f64>()
            / (2.0 * two_n)
    }

    /// `Σ_p |X_p|⁴`.
    pub fn quartic(&self) -> f64 {
        self.bins
            .iter()
            .map(|b| {
                let m = b.norm_sqr();
                m * m
            })
            .sum()
    }

    pub(crate) fn from_bins(bins: Vec<Complex64>) -> Self {
        SpectrumGrid { bins }
    }
}

pub(crate) fn autocorrelation_direct(x: &[Complex64]) -> Vec<Complex64> {
    let n = x.len();
    (0..n)
        .map(|k| {
            x[k..]
                .iter()
                .zip(x)
                .fold(Complex64::new(0.0, 0.0), |acc, (a, b)| acc + a * b.conj())
        })
        .collect()
}

pub(crate) fn autocorrelation_with(plan: &Spectral, x: &[Complex64]) -> Vec<Complex64> {
    if x.len() <= DIRECT_AUTOCORR_MAX {
        autocorrelation_direct(x)
    } else {
        plan.autocorrelation(x)
    }
}

pub fn autocorrelation(x: &UnimodularSequence) -> AutocorrelationProfile {
    let lags = if x.len() <= DIRECT_AUTOCORR_MAX {
        autocorrelation_direct(x.values())
    } else {
        Spectral::new(x.len()).autocorrelation(x.values())
    };
    AutocorrelationProfile { lags }
}

/// Time-domain ISL `Σ_{k=1}^{N−1} |r_k|²`.
pub fn isl_time(x: &UnimodularSequence) -> f64 {
    autocorrelation(x).isl()
}

/// Frequency-domain ISL `(1/4N) Σ_p (|X_p|² − N)²`.
pub fn isl_freq(x: &UnimodularSequence) -> f64 {
    spectrum_2n(x).isl()
}

/// `Σ_p |X_p|⁴ = 4N·ISL + 2N³` for unimodular input.
pub fn isl_quartic(x: &UnimodularSequence) -> f64 {
    spectrum_2n(x).quartic()
}

pub fn psl(x: &UnimodularSequence) -> f64 {
    autocorrelation(x).psl()
}

/// `N² / (2·ISL)`; `+∞` when the ISL is exactly zero.
pub fn merit_factor(x: &UnimodularSequence) -> Result<f64> {
    if x.len() < 2 {
        return Err(Error::MeritFactorUndefined);
    }
    let isl = isl_time(x);
    let n = x.len() as f64;
    Ok(if isl == 0.0 {
        f64::INFINITY
    } else {
        n * n / (2.0 * isl)
    })
}

pub fn spectrum_2n(x: &UnimodularSequence) -> SpectrumGrid {
    SpectrumGrid::from_bins(Spectral::new(x.len()).spectrum(x.values()))
}
