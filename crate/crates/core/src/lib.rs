//! Unimodular sequence design with low aperiodic autocorrelation sidelobes.
//!
//! The centre of the crate is [`solver`], a majorization-minimization loop
//! that replaces the quartic spectral form of the integrated sidelobe level
//! (ISL) with a surrogate that separates across sequence elements. Each
//! element is then updated by minimizing `Re(a x² − b x)` on the unit circle,
//! which reduces to finding the real roots of a quartic ([`surrogate`]).
//!
//! Supporting pieces:
//!
//! * [`metrics`]: sequences, autocorrelation, ISL (time, frequency and quartic
//!   forms), PSL, merit factor and the 2N-point spectrum.
//! * [`baselines`]: the CAN alternating projection baseline and the classical
//!   Barker, Frank, Golomb, Chu and P4 sequences.
//! * `io` and `bench` (feature `cli`): sequence and run-record files, and the
//!   benchmark harness used by the `unipol` binary.

pub mod baselines;
mod error;
pub mod metrics;
pub mod quartic;
pub mod solver;
mod spectral;
pub mod surrogate;

#[cfg(feature = "cli")]
pub mod bench;
#[cfg(feature = "cli")]
pub mod io;

pub use error::{Error, Result};
pub use metrics::UnimodularSequence;
pub use num_complex::Complex64;
