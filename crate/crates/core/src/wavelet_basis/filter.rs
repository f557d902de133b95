//! Daubechies lowpass filters by spectral factorization.
//!
//! `|m0(ω)|² = cos^{2V}(ω/2) · P(sin²(ω/2))` with `P(y) = Σ_{k<V} C(V-1+k, k) y^k`.
//! Each root `y_j` of `P` maps to a pair `z, 1/z` of roots of `z² - (2 - 4y_j) z + 1`; keeping
//! the root outside the unit circle gives the extremal-phase filter whose largest taps come first.

use alloc::vec::Vec;
use core::f64::consts::SQRT_2;

use num_complex::Complex64;

use crate::error::{Error, Result};

pub const MAX_VANISHING_MOMENTS: usize = 10;

/// Returns the `2V` taps `h_0..h_{2V-1}` of the Daubechies filter with `V` vanishing moments,
/// normalized so that `Σ h_k = √2`.
pub fn daubechies_filter(vanishing_moments: usize) -> Result<Vec<f64>> {
    let v = vanishing_moments;
    if !(1..=MAX_VANISHING_MOMENTS).contains(&v) {
        return Err(Error::UnsupportedOrder(v));
    }

    // P(y) coefficients, lowest degree first.
    let p: Vec<f64> = (0..v).map(|k| binomial(v - 1 + k, k)).collect();
    let y_roots = polynomial_roots(&p);

    let zeros: Vec<Complex64> = y_roots
        .iter()
        .map(|&y| {
            // z + 1/z = 2 - 4y
            let b = Complex64::new(2.0, 0.0) - y * 4.0;
            let disc = (b * b - 4.0).sqrt();
            let z1 = (b + disc) * 0.5;
            let z2 = (b - disc) * 0.5;
            if z1.norm() >= z2.norm() {
                z1
            } else {
                z2
            }
        })
        .collect();

    // H(w) = Σ h_k w^k ∝ (1 + w)^V Π (w - z_j)
    let mut poly = alloc::vec![Complex64::new(1.0, 0.0)];
    for _ in 0..v {
        poly = multiply_linear(&poly, Complex64::new(-1.0, 0.0));
    }
    for &z in &zeros {
        poly = multiply_linear(&poly, z);
    }
    let total: Complex64 = poly.iter().sum();
    let mut taps: Vec<f64> = poly.iter().map(|c| (c / total).re * SQRT_2).collect();

    if taps[0] < 0.0 {
        taps.iter_mut().for_each(|t| *t = -*t);
    }
    Ok(taps)
}

/// Alternating-flip highpass `g_k = (-1)^k h_{2V-1-k}`.
pub fn quadrature_mirror(lowpass: &[f64]) -> Vec<f64> {
    let len = lowpass.len();
    (0..len)
        .map(|k| {
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            sign * lowpass[len - 1 - k]
        })
        .collect()
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Multiplies `poly` (lowest degree first) by `(w - root)`.
fn multiply_linear(poly: &[Complex64], root: Complex64) -> Vec<Complex64> {
    let mut out = alloc::vec![Complex64::new(0.0, 0.0); poly.len() + 1];
    for (i, &c) in poly.iter().enumerate() {
        out[i + 1] += c;
        out[i] -= c * root;
    }
    out
}

fn horner(coeffs: &[f64], z: Complex64) -> (Complex64, Complex64) {
    let mut value = Complex64::new(0.0, 0.0);
    let mut deriv = Complex64::new(0.0, 0.0);
    for &c in coeffs.iter().rev() {
        deriv = deriv * z + value;
        value = value * z + c;
    }
    (value, deriv)
}

/// All complex roots of a real polynomial (lowest degree first) by Aberth iteration,
/// polished with Newton steps on the undeflated polynomial.
fn polynomial_roots(coeffs: &[f64]) -> Vec<Complex64> {
    let degree = coeffs.len() - 1;
    if degree == 0 {
        return Vec::new();
    }
    let lead = coeffs[degree];
    let monic: Vec<f64> = coeffs.iter().map(|c| c / lead).collect();

    // Cauchy bound for the initial circle.
    let radius = 1.0 + monic[..degree].iter().map(|c| c.abs()).fold(0.0, f64::max);
    let mut roots: Vec<Complex64> = (0..degree)
        .map(|i| {
            let angle = 2.0 * core::f64::consts::PI * (i as f64 + 0.25) / degree as f64;
            Complex64::from_polar(0.5 * radius, angle)
        })
        .collect();

    for _ in 0..500 {
        let mut max_step = 0.0f64;
        for i in 0..degree {
            let (p, dp) = horner(&monic, roots[i]);
            if p.norm() == 0.0 {
                continue;
            }
            let ratio = p / dp;
            let repulsion: Complex64 = (0..degree)
                .filter(|&j| j != i)
                .map(|j| (roots[i] - roots[j]).inv())
                .sum();
            let step = ratio / (Complex64::new(1.0, 0.0) - ratio * repulsion);
            roots[i] -= step;
            max_step = max_step.max(step.norm() / (1.0 + roots[i].norm()));
        }
        if max_step < 1e-16 {
            break;
        }
    }
    for root in roots.iter_mut() {
        for _ in 0..3 {
            let (p, dp) = horner(&monic, *root);
            if dp.norm() == 0.0 {
                break;
            }
            *root -= p / dp;
        }
    }
    roots
}
