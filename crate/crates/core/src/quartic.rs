//! Real roots of polynomials of degree at most four.
//!
//! Roots come from the eigenvalues of the balanced companion matrix of the
//! monic, deflated polynomial, computed with shifted Hessenberg QR.
//! Near-real eigenvalues are projected onto the real axis, polished with
//! guarded Newton steps and kept only if the residual passes
//! [`QuarticPolynomial::residual_bound`].

use serde::{Deserialize, Serialize};

/// Leading coefficients with `|p_i| ≤ DEFLATION_TOL · max_j |p_j|` are dropped.
pub const DEFLATION_TOL: f64 = 1e-12;

/// Relative residual accepted for a reported root.
pub const RESIDUAL_TOL: f64 = 1e-9;

/// Eigenvalues with `|Im z| ≤ REAL_AXIS_TOL · (1 + |z|)` are root candidates.
const REAL_AXIS_TOL: f64 = 1e-4;

/// Roots closer than this (relative) are collapsed into one.
const MERGE_TOL: f64 = 1e-7;

const NEWTON_STEPS: usize = 3;

/// `p₄β⁴ + p₃β³ + p₂β² + p₁β + p₀`, stored highest degree first.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuarticPolynomial {
    pub coeffs: [f64; 5],
}

#[derive(Debug, Clone, PartialEq)]
pub enum QuarticRoots {
    /// Distinct real roots in ascending order (possibly empty).
    Real(Vec<f64>),
    /// Every coefficient is zero, so every β is a root.
    IdenticallyZero,
}

impl QuarticRoots {
    pub fn real(&self) -> &[f64] {
        match self {
            QuarticRoots::Real(r) => r,
            QuarticRoots::IdenticallyZero => &[],
        }
    }
}

impl QuarticPolynomial {
    pub fn new(p4: f64, p3: f64, p2: f64, p1: f64, p0: f64) -> Self {
        QuarticPolynomial {
            coeffs: [p4, p3, p2, p1, p0],
        }
    }

    pub fn eval(&self, beta: f64) -> f64 {
        self.coeffs.iter().fold(0.0, |acc, &c| acc * beta + c)
    }

    pub fn derivative_at(&self, beta: f64) -> f64 {
        let [p4, p3, p2, p1, _] = self.coeffs;
        ((4.0 * p4 * beta + 3.0 * p3) * beta + 2.0 * p2) * beta + p1
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, c| m.max(c.abs()))
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_finite())
    }

    /// `RESIDUAL_TOL · (1 + max|p_i|) · (1 + |β|)⁴`.
    pub fn residual_bound(&self, beta: f64) -> f64 {
        RESIDUAL_TOL * (1.0 + self.max_abs_coeff()) * (1.0 + beta.abs()).powi(4)
    }

    /// Effective degree after dropping negligible leading coefficients,
    /// or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        let scale = self.max_abs_coeff();
        if scale == 0.0 {
            return None;
        }
        let lead = self
            .coeffs
            .iter()
            .position(|c| c.abs() > DEFLATION_TOL * scale)
            .expect("nonzero polynomial has a significant coefficient");
        Some(4 - lead)
    }

    /// All distinct real roots.
    pub fn real_roots(&self) -> QuarticRoots {
        let Some(degree) = self.degree() else {
            return QuarticRoots::IdenticallyZero;
        };
        let lead = 4 - degree;
        let lc = self.coeffs[lead];
        // Monic coefficients below the leading term, highest degree first.
        let c: Vec<f64> = self.coeffs[lead + 1..].iter().map(|v| v / lc).collect();

        let candidates: Vec<f64> = match degree {
            0 => Vec::new(),
            1 => vec![-c[0]],
            d => companion_real_eigenvalues(&c[..d]),
        };

        let mut roots: Vec<(f64, f64)> = candidates
            .into_iter()
            .map(|b| self.polish(b))
            .filter_map(|b| {
                let r = self.eval(b).abs();
                (b.is_finite() && r <= self.residual_bound(b)).then_some((b, r))
            })
            .collect();
        roots.sort_by(|a, b| a.0.total_cmp(&b.0));

        let mut merged: Vec<(f64, f64)> = Vec::with_capacity(roots.len());
        for (b, r) in roots {
            match merged.last_mut() {
                Some(last) if (b - last.0).abs() <= MERGE_TOL * (1.0 + b.abs().max(last.0.abs())) => {
                    if r < last.1 {
                        *last = (b, r);
                    }
                }
                _ => merged.push((b, r)),
            }
        }
        QuarticRoots::Real(merged.into_iter().map(|(b, _)| b).collect())
    }

    fn second_derivative_at(&self, beta: f64) -> f64 {
        let [p4, p3, p2, _, _] = self.coeffs;
        (12.0 * p4 * beta + 6.0 * p3) * beta + 2.0 * p2
    }

    /// Newton refinement on `p`, then on `p'` (which recovers double roots to
    /// full precision); steps that increase `|p|` are rejected.
    fn polish(&self, mut beta: f64) -> f64 {
        let mut res = self.eval(beta).abs();
        for _ in 0..NEWTON_STEPS {
            if res == 0.0 {
                break;
            }
            let d = self.derivative_at(beta);
            if d == 0.0 || !d.is_finite() {
                break;
            }
            let next = beta - self.eval(beta) / d;
            let next_res = self.eval(next).abs();
            if next.is_finite() && next_res < res {
                beta = next;
                res = next_res;
            } else {
                break;
            }
        }
        for _ in 0..NEWTON_STEPS {
            let dd = self.second_derivative_at(beta);
            if dd == 0.0 || !dd.is_finite() {
                break;
            }
            let slope = self.derivative_at(beta);
            let next = beta - slope / dd;
            let next_res = self.eval(next).abs();
            if next.is_finite() && next_res <= res && self.derivative_at(next).abs() < slope.abs() {
                beta = next;
                res = next_res;
            } else {
                break;
            }
        }
        beta
    }
}

/// Near-real eigenvalues of the companion matrix of `β^d + c[0]β^{d−1} + … + c[d−1]`.
fn companion_real_eigenvalues(c: &[f64]) -> Vec<f64> {
    let d = c.len();
    let mut m = [[0.0; 4]; 4];
    for (j, v) in c.iter().enumerate() {
        m[0][j] = -v;
    }
    for i in 1..d {
        m[i][i - 1] = 1.0;
    }
    balance(&mut m, d);
    match hessenberg_eigenvalues(&mut m, d) {
        Some(eigs) => eigs
            .into_iter()
            .filter(|&(re, im)| {
                re.is_finite() && im.abs() <= REAL_AXIS_TOL * (1.0 + re.hypot(im))
            })
            .map(|(re, _)| re)
            .collect(),
        None => bracket_sign_changes(c),
    }
}

/// Diagonal similarity scaling so rows and columns have comparable norms.
fn balance(a: &mut [[f64; 4]; 4], n: usize) {
    const RADIX: f64 = 2.0;
    let sqrdx = RADIX * RADIX;
    let mut done = false;
    while !done {
        done = true;
        for i in 0..n {
            let (mut r, mut c) = (0.0, 0.0);
            for j in (0..n).filter(|&j| j != i) {
                c += a[j][i].abs();
                r += a[i][j].abs();
            }
            if c == 0.0 || r == 0.0 {
                continue;
            }
            let s = c + r;
            let mut f = 1.0;
            let mut g = r / RADIX;
            while c < g {
                f *= RADIX;
                c *= sqrdx;
            }
            g = r * RADIX;
            while c > g {
                f /= RADIX;
                c /= sqrdx;
            }
            if (c + r) / f < 0.95 * s {
                done = false;
                let g = 1.0 / f;
                for j in 0..n {
                    a[i][j] *= g;
                }
                for row in a.iter_mut().take(n) {
                    row[i] *= f;
                }
            }
        }
    }
}

/// Eigenvalues `(re, im)` of an upper Hessenberg matrix by Francis double-shift
/// QR with exceptional shifts. `None` if an eigenvalue fails to converge.
fn hessenberg_eigenvalues(a: &mut [[f64; 4]; 4], n: usize) -> Option<Vec<(f64, f64)>> {
    const MAX_ITS: usize = 60;
    let eps = f64::EPSILON;
    let mut wr = [0.0; 4];
    let mut wi = [0.0; 4];
    let mut anorm = 0.0;
    for i in 0..n {
        for j in i.saturating_sub(1)..n {
            anorm += a[i][j].abs();
        }
    }

    let mut nn = n as isize - 1;
    let mut t = 0.0;
    while nn >= 0 {
        let mut its = 0;
        loop {
            let nu = nn as usize;
            // Look for a negligible subdiagonal element.
            let mut l = nu;
            while l > 0 {
                let mut s = a[l - 1][l - 1].abs() + a[l][l].abs();
                if s == 0.0 {
                    s = anorm;
                }
                if a[l][l - 1].abs() <= eps * s {
                    a[l][l - 1] = 0.0;
                    break;
                }
                l -= 1;
            }

            let mut x = a[nu][nu];
            if l == nu {
                wr[nu] = x + t;
                wi[nu] = 0.0;
                nn -= 1;
                break;
            }
            let mut y = a[nu - 1][nu - 1];
            let mut w = a[nu][nu - 1] * a[nu - 1][nu];
            if l == nu - 1 {
                let p = 0.5 * (y - x);
                let q = p * p + w;
                let z = q.abs().sqrt();
                x += t;
                if q >= 0.0 {
                    let z = p + z.copysign(p);
                    wr[nu - 1] = x + z;
                    wr[nu] = if z != 0.0 { x - w / z } else { x + z };
                    wi[nu - 1] = 0.0;
                    wi[nu] = 0.0;
                } else {
                    wr[nu - 1] = x + p;
                    wr[nu] = x + p;
                    wi[nu - 1] = -z;
                    wi[nu] = z;
                }
                nn -= 2;
                break;
            }

            if its == MAX_ITS {
                return None;
            }
            if its == 10 || its == 20 || its == 40 {
                t += x;
                for i in 0..=nu {
                    a[i][i] -= x;
                }
                let s = a[nu][nu - 1].abs() + a[nu - 1][nu - 2].abs();
                x = 0.75 * s;
                y = x;
                w = -0.4375 * s * s;
            }
            its += 1;

            let (mut p, mut q, mut r);
            let mut m = nu - 2;
            loop {
                let z = a[m][m];
                let rr = x - z;
                let ss = y - z;
                p = (rr * ss - w) / a[m + 1][m] + a[m][m + 1];
                q = a[m + 1][m + 1] - z - rr - ss;
                r = a[m + 2][m + 1];
                let s = p.abs() + q.abs() + r.abs();
                p /= s;
                q /= s;
                r /= s;
                if m == l {
                    break;
                }
                let u = a[m][m - 1].abs() * (q.abs() + r.abs());
                let v = p.abs() * (a[m - 1][m - 1].abs() + z.abs() + a[m + 1][m + 1].abs());
                if u <= eps * v {
                    break;
                }
                m -= 1;
            }
            for i in m..nu - 1 {
                a[i + 2][i] = 0.0;
                if i != m {
                    a[i + 2][i - 1] = 0.0;
                }
            }
            for k in m..nu {
                if k != m {
                    p = a[k][k - 1];
                    q = a[k + 1][k - 1];
                    r = if k + 1 != nu { a[k + 2][k - 1] } else { 0.0 };
                    x = p.abs() + q.abs() + r.abs();
                    if x != 0.0 {
                        p /= x;
                        q /= x;
                        r /= x;
                    }
                }
                let s = (p * p + q * q + r * r).sqrt().copysign(p);
                if s == 0.0 {
                    continue;
                }
                if k == m {
                    if l != m {
                        a[k][k - 1] = -a[k][k - 1];
                    }
                } else {
                    a[k][k - 1] = -s * x;
                }
                p += s;
                x = p / s;
                y = q / s;
                let z = r / s;
                q /= p;
                r /= p;
                for j in k..=nu {
                    let mut pp = a[k][j] + q * a[k + 1][j];
                    if k + 1 != nu {
                        pp += r * a[k + 2][j];
                        a[k + 2][j] -= pp * z;
                    }
                    a[k + 1][j] -= pp * y;
                    a[k][j] -= pp * x;
                }
                let mmin = nu.min(k + 3);
                for i in l..=mmin {
                    let mut pp = x * a[i][k] + y * a[i][k + 1];
                    if k + 1 != nu {
                        pp += z * a[i][k + 2];
                        a[i][k + 2] -= pp * r;
                    }
                    a[i][k + 1] -= pp * q;
                    a[i][k] -= pp;
                }
            }
        }
    }
    Some((0..n).map(|i| (wr[i], wi[i])).collect())
}

/// Fallback when QR does not converge: bisection on sign changes over the
/// Cauchy root bound. Misses even-multiplicity roots.
fn bracket_sign_changes(c: &[f64]) -> Vec<f64> {
    const SAMPLES: usize = 8192;
    let eval = |b: f64| c.iter().fold(1.0, |acc, &v| acc * b + v);
    let bound = 1.0 + c.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    let grid = |i: usize| -bound + 2.0 * bound * i as f64 / SAMPLES as f64;
    let mut roots = Vec::new();
    for i in 0..SAMPLES {
        let (mut lo, mut hi) = (grid(i), grid(i + 1));
        let (flo, fhi) = (eval(lo), eval(hi));
        if flo == 0.0 {
            roots.push(lo);
            continue;
        }
        if flo.signum() == fhi.signum() {
            continue;
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if eval(mid).signum() == flo.signum() {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        roots.push(0.5 * (lo + hi));
    }
    roots
}

/// Convenience wrapper over [`QuarticPolynomial::real_roots`].
pub fn solve_quartic_real(p: &QuarticPolynomial) -> QuarticRoots {
    p.real_roots()
}
