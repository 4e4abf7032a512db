//! Per-element quartic surrogate and its exact unit-circle minimizer.
//!
//! Around the current iterate `xᵗ` the quartic spectral objective
//! `Σ_p |X_p|⁴` is majorized by a sum of independent per-element terms
//! `N³ Σ_p |x_q − α_p(q)|⁴` with
//!
//! ```text
//! α_p(q) = xᵗ_q − (1/N) Xᵗ_p e^{jω_p q}
//! ```
//!
//! Up to constants each term equals `Re(a x_q² − b x_q)` where
//! `a = Σ_p 2 (α_p*)²` and `b = Σ_p 4 α_p* (1 + |α_p|²)`. Writing
//! `x_q = e^{jθ}` and `β = tan(θ/2)` turns the stationarity condition into
//! a real quartic in `β`; `θ = π` is checked separately because the
//! substitution cannot reach it.
//!
//! Element indices `q` are 0-based throughout.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;

use crate::metrics::{wrap_phase, UnimodularSequence};
use crate::quartic::{QuarticPolynomial, QuarticRoots};
use crate::spectral::Spectral;
use crate::{Error, Result};

/// Candidates whose objective is within this (scaled by `max(1, |a|+|b|)`)
/// of the best are considered tied; the smallest angle wins.
pub const TIE_GAP: f64 = 1e-12;

/// The 2N values `α_p(q)` for one element.
#[derive(Debug, Clone, PartialEq)]
pub struct AlphaSet {
    pub q: usize,
    pub alphas: Vec<Complex64>,
}

/// Coefficients of `Re(a x² − b x)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurrogateCoefficients {
    pub a: Complex64,
    pub b: Complex64,
}

impl SurrogateCoefficients {
    pub fn new(a: Complex64, b: Complex64) -> Self {
        SurrogateCoefficients { a, b }
    }

    pub fn a_re(&self) -> f64 {
        self.a.re
    }

    pub fn a_im(&self) -> f64 {
        self.a.im
    }

    pub fn b_re(&self) -> f64 {
        self.b.re
    }

    pub fn b_im(&self) -> f64 {
        self.b.im
    }

    /// `f(θ) = Re(a e^{2jθ} − b e^{jθ})`.
    pub fn objective(&self, theta: f64) -> f64 {
        let (s1, c1) = theta.sin_cos();
        let (s2, c2) = (2.0 * theta).sin_cos();
        self.a.re * c2 - self.a.im * s2 - self.b.re * c1 + self.b.im * s1
    }

    /// `df/dθ = −2a_I cos 2θ − 2a_R sin 2θ + b_I cos θ + b_R sin θ`.
    pub fn objective_derivative(&self, theta: f64) -> f64 {
        let (s1, c1) = theta.sin_cos();
        let (s2, c2) = (2.0 * theta).sin_cos();
        -2.0 * self.a.im * c2 - 2.0 * self.a.re * s2 + self.b.im * c1 + self.b.re * s1
    }
}

pub(crate) fn alphas_from_spectrum(x: &[Complex64], spectrum: &[Complex64], q: usize) -> Vec<Complex64> {
    let n = x.len();
    let m = spectrum.len();
    let inv_n = 1.0 / n as f64;
    let xq = x[q];
    spectrum
        .iter()
        .enumerate()
        .map(|(p, xp)| {
            // e^{jω_p q} with the exponent reduced mod 2N to keep the angle small.
            let k = (p * q) % m;
            let w = Complex64::from_polar(1.0, TAU * k as f64 / m as f64);
            xq - xp * w * inv_n
        })
        .collect()
}

/// `α_p(q)` for all `p`, evaluated from the 2N-point spectrum of `xt`.
pub fn alpha_direct(xt: &UnimodularSequence, q: usize) -> Result<AlphaSet> {
    if q >= xt.len() {
        return Err(Error::invalid(format!(
            "element index {q} out of range for length {}",
            xt.len()
        )));
    }
    let spectrum = Spectral::new(xt.len()).spectrum(xt.values());
    Ok(AlphaSet {
        q,
        alphas: alphas_from_spectrum(xt.values(), &spectrum, q),
    })
}

/// `a = Σ_p 2(α_p*)²`, `b = Σ_p 4α_p*(1 + |α_p|²)`, summed in ascending `p`.
pub fn ab_from_alphas(alphas: &[Complex64]) -> SurrogateCoefficients {
    let mut a = Complex64::new(0.0, 0.0);
    let mut b = Complex64::new(0.0, 0.0);
    for al in alphas {
        let c = al.conj();
        a += 2.0 * c * c;
        b += 4.0 * c * (1.0 + al.norm_sqr());
    }
    SurrogateCoefficients { a, b }
}

/// Direct O(N²) construction of every element's coefficients.
pub fn ab_all_direct(xt: &UnimodularSequence) -> Vec<SurrogateCoefficients> {
    ab_all_direct_with(&Spectral::new(xt.len()), xt.values())
}

pub(crate) fn ab_all_direct_with(plan: &Spectral, x: &[Complex64]) -> Vec<SurrogateCoefficients> {
    let spectrum = plan.spectrum(x);
    map_indices(x.len(), |q| ab_from_alphas(&alphas_from_spectrum(x, &spectrum, q)))
}

/// Every element's coefficients from four length-2N transforms.
///
/// With `c_p = X_p / N` and `E = e^{jω_p q}`, expanding the sums gives
///
/// ```text
/// a(q) = 2 [ 2N x̄² − 2 x̄ Σ c̄_p E* + Σ c̄_p² E*² ]
/// b(q) = 4 [ x̄ (4N + 2Σ|c_p|²) − x̄² Σ c_p E − Σ (3 + |c_p|²) c̄_p E* + x Σ c̄_p² E*² ]
/// ```
///
/// where `x = xᵗ_q`, `x̄` its conjugate and `|x| = 1` was used. Each sum over
/// `p` is a forward DFT evaluated at `q` (or `2q mod 2N` for the `E*²` terms).
pub fn ab_all_fast(xt: &UnimodularSequence) -> Vec<SurrogateCoefficients> {
    ab_all_fast_with(&Spectral::new(xt.len()), xt.values())
}

pub(crate) fn ab_all_fast_with(plan: &Spectral, x: &[Complex64]) -> Vec<SurrogateCoefficients> {
    let n = x.len();
    debug_assert_eq!(plan.len(), n);
    let m = 2 * n;
    let inv_n = 1.0 / n as f64;

    let c: Vec<Complex64> = plan.spectrum(x).into_iter().map(|v| v * inv_n).collect();
    let energy: f64 = c.iter().map(|v| v.norm_sqr()).sum();

    let mut conj_c: Vec<Complex64> = c.iter().map(|v| v.conj()).collect();
    let mut conj_c_sq: Vec<Complex64> = c.iter().map(|v| v.conj() * v.conj()).collect();
    let mut weighted: Vec<Complex64> = c.iter().map(|v| v.conj() * (3.0 + v.norm_sqr())).collect();
    plan.forward_in_place(&mut conj_c);
    plan.forward_in_place(&mut conj_c_sq);
    plan.forward_in_place(&mut weighted);

    let two_n = m as f64;
    let diag = 2.0 * two_n + 2.0 * energy;
    (0..n)
        .map(|q| {
            let xq = x[q];
            let xc = xq.conj();
            let s1 = conj_c[q];
            let s2 = conj_c_sq[(2 * q) % m];
            let a = 2.0 * (two_n * xc * xc - 2.0 * xc * s1 + s2);
            let b = 4.0 * (xc * diag - xc * xc * s1.conj() - weighted[q] + xq * s2);
            SurrogateCoefficients { a, b }
        })
        .collect()
}

/// `p₄ = 2a_I + b_I`, `p₃ = −8a_R − 2b_R`, `p₂ = −12a_I`, `p₁ = 8a_R − 2b_R`,
/// `p₀ = 2a_I − b_I`.
pub fn quartic_coeffs(c: &SurrogateCoefficients) -> QuarticPolynomial {
    let (ar, ai, br, bi) = (c.a.re, c.a.im, c.b.re, c.b.im);
    QuarticPolynomial::new(
        2.0 * ai + bi,
        -8.0 * ar - 2.0 * br,
        -12.0 * ai,
        8.0 * ar - 2.0 * br,
        2.0 * ai - bi,
    )
}

/// Minimizer of `f(θ)` on `[0, 2π)`, or `None` when the stationarity
/// polynomial vanishes identically (`a = b = 0`, every angle optimal).
pub fn minimize_phase(c: &SurrogateCoefficients) -> Option<f64> {
    let poly = quartic_coeffs(c);
    let roots = match poly.real_roots() {
        QuarticRoots::IdenticallyZero => return None,
        QuarticRoots::Real(r) => r,
    };

    let mut candidates: Vec<(f64, f64)> = roots
        .iter()
        .map(|&beta| wrap_phase(2.0 * beta.atan()))
        .chain(std::iter::once(PI))
        .map(|theta| (theta, c.objective(theta)))
        .collect();
    candidates.sort_by(|l, r| l.0.total_cmp(&r.0));

    let best = candidates.iter().map(|&(_, f)| f).fold(f64::INFINITY, f64::min);
    let gap = TIE_GAP * (c.a.norm() + c.b.norm()).max(1.0);
    candidates
        .iter()
        .find(|&&(_, f)| f <= best + gap)
        .map(|&(theta, _)| theta)
}

/// Minimizer of `Re(a e^{2jθ} − b e^{jθ})`; returns 0 when the objective is constant.
pub fn minimize_single(c: &SurrogateCoefficients) -> f64 {
    minimize_phase(c).unwrap_or(0.0)
}

/// Joint majorizer `(1/N) Σ_p Σ_n |N(x_n − xᵗ_n) + Xᵗ_p e^{jω_p n}|⁴`.
///
/// Equals `Σ_p |X_p|⁴` at `x = xᵗ` and bounds it from above elsewhere.
/// O(N²); intended for verification.
pub fn surrogate_value(x: &UnimodularSequence, xt: &UnimodularSequence) -> Result<f64> {
    if x.len() != xt.len() {
        return Err(Error::invalid(format!(
            "length mismatch: {} vs {}",
            x.len(),
            xt.len()
        )));
    }
    let n = x.len();
    let m = 2 * n;
    let nf = n as f64;
    let spectrum = Spectral::new(n).spectrum(xt.values());
    let mut total = 0.0;
    for (p, xp) in spectrum.iter().enumerate() {
        for (i, (xn, xtn)) in x.values().iter().zip(xt.values()).enumerate() {
            let k = (p * i) % m;
            let w = Complex64::from_polar(1.0, TAU * k as f64 / m as f64);
            let v = (xn - xtn) * nf + xp * w;
            total += v.norm_sqr().powi(2);
        }
    }
    Ok(total / nf)
}

/// `Σ_p |e^{jθ} − α_p|⁴`, the per-element surrogate before dropping constants.
pub fn element_surrogate(alphas: &[Complex64], theta: f64) -> f64 {
    let x = Complex64::from_polar(1.0, theta);
    alphas.iter().map(|al| (x - al).norm_sqr().powi(2)).sum()
}

#[cfg(feature = "parallel")]
pub(crate) fn map_indices<T: Send>(n: usize, f: impl Fn(usize) -> T + Sync + Send) -> Vec<T> {
    use rayon::prelude::*;
    (0..n).into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn map_indices<T>(n: usize, f: impl Fn(usize) -> T) -> Vec<T> {
    (0..n).map(f).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn cx(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn random_seq(n: usize, rng: &mut ChaCha8Rng) -> UnimodularSequence {
        let phases: Vec<f64> = (0..n).map(|_| rng.random::<f64>() * TAU).collect();
        UnimodularSequence::from_phases(&phases).unwrap()
    }

    // Naive double sum straight from the definition, independent of any transform.
    fn alpha_naive(x: &[Complex64], q: usize) -> Vec<Complex64> {
        let n = x.len();
        (0..2 * n)
            .map(|p| {
                let w = 2.0 * PI * p as f64 / (2 * n) as f64;
                let s: Complex64 = x
                    .iter()
                    .enumerate()
                    .map(|(k, v)| v * Complex64::from_polar(1.0, -w * (k as f64 - q as f64)))
                    .sum();
                x[q] - s / n as f64
            })
            .collect()
    }

    fn close(a: Complex64, b: Complex64, rel: f64) -> bool {
        (a - b).norm() <= rel * a.norm().max(b.norm()).max(1.0)
    }

    fn grid_min(c: &SurrogateCoefficients, points: usize) -> f64 {
        (0..points)
            .map(|i| c.objective(TAU * i as f64 / points as f64))
            .fold(f64::INFINITY, f64::min)
    }

    #[test]
    fn single_element_alphas_vanish() {
        let x = UnimodularSequence::from_phases(&[0.0]).unwrap();
        let al = alpha_direct(&x, 0).unwrap();
        assert_eq!(al.alphas.len(), 2);
        for a in &al.alphas {
            assert!(a.norm() < 1e-15);
        }
        let ab = ab_all_fast(&x);
        assert!(ab[0].a.norm() < 1e-14 && ab[0].b.norm() < 1e-14);
    }

    #[test]
    fn two_ones_alpha_at_quarter_turn() {
        let x = UnimodularSequence::from_phases(&[0.0, 0.0]).unwrap();
        let al = alpha_direct(&x, 0).unwrap();
        // ω_1 = π/2: α_1 = 1 − (1 + e^{−jπ/2}) / 2
        let want = cx(1.0, 0.0) - (cx(1.0, 0.0) + Complex64::from_polar(1.0, -PI / 2.0)) / 2.0;
        assert!((al.alphas[1] - want).norm() < 1e-15);
        assert!((al.alphas[1] - cx(0.5, 0.5)).norm() < 1e-15);
    }

    #[test]
    fn alpha_index_out_of_range() {
        let x = UnimodularSequence::from_phases(&[0.0, 1.0]).unwrap();
        assert!(alpha_direct(&x, 2).is_err());
    }

    #[test]
    fn alpha_matches_naive_double_sum() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for n in [1usize, 2, 3, 7, 16, 33] {
            let x = random_seq(n, &mut rng);
            for q in 0..n {
                let fast = alpha_direct(&x, q).unwrap().alphas;
                let naive = alpha_naive(x.values(), q);
                for (f, nv) in fast.iter().zip(&naive) {
                    assert!((f - nv).norm() <= 1e-10, "n={n} q={q}");
                }
            }
        }
    }

    #[test]
    fn ab_simple_alpha_sets() {
        let n = 5;
        let zero = ab_from_alphas(&vec![cx(0.0, 0.0); 2 * n]);
        assert_eq!(zero.a, cx(0.0, 0.0));
        assert_eq!(zero.b, cx(0.0, 0.0));
        let one = ab_from_alphas(&vec![cx(1.0, 0.0); 2 * n]);
        assert_eq!(one.a, cx(4.0 * n as f64, 0.0));
        assert_eq!(one.b, cx(16.0 * n as f64, 0.0));
        let j = ab_from_alphas(&vec![cx(0.0, 1.0); 2 * n]);
        assert_eq!(j.a, cx(-4.0 * n as f64, 0.0));
        assert_eq!(j.b, cx(0.0, -16.0 * n as f64));
    }

    #[test]
    fn fast_matches_direct_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for n in [2usize, 3, 5, 8, 16] {
            for _ in 0..50 {
                let x = random_seq(n, &mut rng);
                let fast = ab_all_fast(&x);
                let direct = ab_all_direct(&x);
                for (f, d) in fast.iter().zip(&direct) {
                    assert!(close(f.a, d.a, 1e-8) && close(f.b, d.b, 1e-8), "n={n}");
                }
            }
        }
    }

    #[test]
    fn fast_matches_direct_all_ones() {
        let x = UnimodularSequence::from_phases(&[0.0; 4]).unwrap();
        for (f, d) in ab_all_fast(&x).iter().zip(&ab_all_direct(&x)) {
            assert!((f.a - d.a).norm() <= 1e-10 && (f.b - d.b).norm() <= 1e-10);
        }
    }

    #[test]
    fn reduced_objective_tracks_element_surrogate() {
        // Σ|x − α_p|⁴ − Re(a x² − b x) must not depend on θ.
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let x = random_seq(6, &mut rng);
        let al = alpha_direct(&x, 2).unwrap().alphas;
        let c = ab_from_alphas(&al);
        let offset = element_surrogate(&al, 0.0) - c.objective(0.0);
        for i in 1..50 {
            let th = TAU * i as f64 / 50.0;
            let d = element_surrogate(&al, th) - c.objective(th);
            assert!((d - offset).abs() < 1e-9 * offset.abs().max(1.0));
        }
    }

    #[test]
    fn quartic_coefficient_examples() {
        let p = quartic_coeffs(&SurrogateCoefficients::new(cx(0.0, 0.0), cx(-1.0, 0.0)));
        assert_eq!(p.coeffs, [0.0, 2.0, 0.0, 2.0, 0.0]);
        let p = quartic_coeffs(&SurrogateCoefficients::new(cx(0.0, 1.0), cx(0.0, 0.0)));
        assert_eq!(p.coeffs, [2.0, 0.0, -12.0, 0.0, 2.0]);
        let p = quartic_coeffs(&SurrogateCoefficients::new(cx(1.0, 0.0), cx(0.0, 0.0)));
        assert_eq!(p.coeffs, [0.0, -8.0, 0.0, 8.0, 0.0]);
    }

    #[test]
    fn quartic_is_scaled_derivative() {
        // p(β) / (1+β²)² = −df/dθ at θ = 2 atan β.
        let c = SurrogateCoefficients::new(cx(0.3, -1.2), cx(2.5, 0.7));
        let p = quartic_coeffs(&c);
        for &beta in &[-3.0, -0.4, 0.0, 0.9, 5.0] {
            let th = 2.0 * f64::atan(beta);
            let lhs = p.eval(beta) / (1.0 + beta * beta).powi(2);
            assert!((lhs + c.objective_derivative(th)).abs() < 1e-12);
        }
    }

    #[test]
    fn minimizer_examples() {
        let c = SurrogateCoefficients::new(cx(0.0, 0.0), cx(2.0, 0.0));
        assert_eq!(minimize_single(&c), 0.0);
        let c = SurrogateCoefficients::new(cx(0.0, 0.0), cx(-2.0, 0.0));
        assert_eq!(minimize_single(&c), PI);
        let c = SurrogateCoefficients::new(cx(1.0, 0.0), cx(0.0, 0.0));
        assert!((minimize_single(&c) - PI / 2.0).abs() < 1e-12);
        let c = SurrogateCoefficients::new(cx(0.0, 0.0), cx(0.0, 0.0));
        assert_eq!(minimize_phase(&c), None);
        assert_eq!(minimize_single(&c), 0.0);
    }

    #[test]
    fn pi_candidate_is_required() {
        // For a = 0, b = −2 the only root is β = 0, which maximizes f.
        let c = SurrogateCoefficients::new(cx(0.0, 0.0), cx(-2.0, 0.0));
        let roots = quartic_coeffs(&c).real_roots();
        assert_eq!(roots.real(), &[0.0]);
        assert!(c.objective(0.0) > c.objective(PI));
        assert!((c.objective(PI) - grid_min(&c, 1_000_000)).abs() < 1e-9);
    }

    #[test]
    fn minimizer_beats_grid_and_is_stationary() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..200 {
            let c = SurrogateCoefficients::new(
                cx(rng.random_range(-5.0..5.0), rng.random_range(-5.0..5.0)),
                cx(rng.random_range(-5.0..5.0), rng.random_range(-5.0..5.0)),
            );
            let th = minimize_single(&c);
            assert!((0.0..TAU).contains(&th));
            assert!(c.objective(th) <= grid_min(&c, 20_000) + 1e-9);
            if th != PI {
                let h = 1e-6;
                let fd = (c.objective(th + h) - c.objective(th - h)) / (2.0 * h);
                assert!(fd.abs() <= 1e-6 * (c.a.norm() + c.b.norm() + 1.0), "{fd}");
            }
        }
    }

    #[test]
    fn surrogate_touches_at_current_point() {
        let x = UnimodularSequence::from_phases(&[0.0]).unwrap();
        assert!((surrogate_value(&x, &x).unwrap() - 2.0).abs() < 1e-14);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for n in [2usize, 5, 16, 40] {
            let xt = random_seq(n, &mut rng);
            let u = surrogate_value(&xt, &xt).unwrap();
            let g = crate::metrics::isl_quartic(&xt);
            assert!((u - g).abs() <= 1e-8 * g);
        }
    }

    #[test]
    fn surrogate_dominates() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for _ in 0..100 {
            let x = random_seq(16, &mut rng);
            let xt = random_seq(16, &mut rng);
            let u = surrogate_value(&x, &xt).unwrap();
            let g = crate::metrics::isl_quartic(&x);
            assert!(u >= g - 1e-8 * u);
        }
    }

    #[test]
    fn surrogate_length_mismatch() {
        let a = UnimodularSequence::from_phases(&[0.0]).unwrap();
        let b = UnimodularSequence::from_phases(&[0.0, 0.0]).unwrap();
        assert!(surrogate_value(&a, &b).is_err());
    }

    #[test]
    fn surrogate_is_sum_of_element_terms() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let x = random_seq(7, &mut rng);
        let xt = random_seq(7, &mut rng);
        let n = 7.0_f64;
        let by_element: f64 = (0..7)
            .map(|q| {
                let al = alpha_direct(&xt, q).unwrap().alphas;
                element_surrogate(&al, x.values()[q].arg())
            })
            .sum();
        let u = surrogate_value(&x, &xt).unwrap();
        assert!((u - n.powi(3) * by_element).abs() <= 1e-9 * u);
    }
}
