//! Cached length-2N transforms shared by the metrics, surrogate and solver code.

use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

/// Forward and inverse plans for a zero-padded transform of a length-N
/// sequence onto the 2N-point grid `ω_p = 2πp / 2N`, `p = 0..2N`.
#[derive(Clone)]
pub(crate) struct Spectral {
    n: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl Spectral {
    pub(crate) fn new(n: usize) -> Self {
        let mut planner = FftPlanner::new();
        Spectral {
            n,
            forward: planner.plan_fft_forward(2 * n),
            inverse: planner.plan_fft_inverse(2 * n),
        }
    }

    pub(crate) fn len(&self) -> usize {
        self.n
    }

    /// `X_p = Σ_n x_n e^{−jω_p n}` for `p = 0..2N`.
    pub(crate) fn spectrum(&self, x: &[Complex64]) -> Vec<Complex64> {
        debug_assert_eq!(x.len(), self.n);
        let mut buf = vec![Complex64::new(0.0, 0.0); 2 * self.n];
        buf[..self.n].copy_from_slice(x);
        self.forward.process(&mut buf);
        buf
    }

    /// Unnormalized forward DFT of a full 2N-point buffer, in place.
    pub(crate) fn forward_in_place(&self, buf: &mut [Complex64]) {
        debug_assert_eq!(buf.len(), 2 * self.n);
        self.forward.process(buf);
    }

    /// Unnormalized inverse DFT (`Σ_p Y_p e^{+jω_p k}`) of a full buffer, in place.
    pub(crate) fn inverse_in_place(&self, buf: &mut [Complex64]) {
        debug_assert_eq!(buf.len(), 2 * self.n);
        self.inverse.process(buf);
    }

    /// Nonnegative-lag aperiodic autocorrelation via `IDFT(|X|²) / 2N`.
    pub(crate) fn autocorrelation(&self, x: &[Complex64]) -> Vec<Complex64> {
        let mut buf = self.spectrum(x);
        for v in buf.iter_mut() {
            *v = Complex64::new(v.norm_sqr(), 0.0);
        }
        self.inverse.process(&mut buf);
        let scale = 1.0 / (2 * self.n) as f64;
        buf.truncate(self.n);
        for v in buf.iter_mut() {
            *v *= scale;
        }
        buf
    }
}
