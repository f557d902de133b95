//! Compactly supported orthonormal Daubechies bases evaluated by the cascade algorithm.
//!
//! `φ` natively lives on `[0, 2V-1]`. Every evaluator here works in the centered coordinate
//! `x = u - s` with `s = ⌊(2V-1)/2⌋`, so both `φ` and `ψ` vanish outside `[-A, A]` with
//! `A = ⌈(2V-1)/2⌉`. In centered coordinates the two-scale relation reads
//! `φ(x) = √2 Σ_m h_{m+s} φ(2x - m)` and likewise for `ψ` with `g`.

mod cascade;
mod filter;

use alloc::vec::Vec;

pub use filter::{daubechies_filter, quadrature_mirror, MAX_VANISHING_MOMENTS};

use crate::error::{Error, Result};
use crate::math::FloatExt;

pub const DEFAULT_CASCADE_DEPTH: u32 = 12;
pub const MIN_CASCADE_DEPTH: u32 = 4;
pub const MAX_CASCADE_DEPTH: u32 = 20;

/// A Daubechies scaling function / wavelet pair tabulated on a dyadic grid.
///
/// Immutable once built, so it can be shared freely between threads.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveletBasis {
    vanishing_moments: usize,
    lowpass: Vec<f64>,
    highpass: Vec<f64>,
    shift: i64,
    support_radius: u32,
    cascade_depth: u32,
    phi_table: Vec<f64>,
    psi_table: Vec<f64>,
    phi_sup: f64,
    psi_sup: f64,
}

/// Builds the Daubechies basis with `V` vanishing moments tabulated at step `2^-depth`.
pub fn build_basis(vanishing_moments: usize, cascade_depth: u32) -> Result<WaveletBasis> {
    if !(MIN_CASCADE_DEPTH..=MAX_CASCADE_DEPTH).contains(&cascade_depth) {
        return Err(Error::CascadeDepth(cascade_depth));
    }
    let lowpass = daubechies_filter(vanishing_moments)?;
    let highpass = quadrature_mirror(&lowpass);
    let (phi_table, psi_table) = cascade::tabulate(&lowpass, &highpass, cascade_depth)?;
    let sup = |t: &[f64]| t.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let phi_sup = sup(&phi_table);
    let psi_sup = sup(&psi_table);
    let span = 2 * vanishing_moments as i64 - 1;
    Ok(WaveletBasis {
        vanishing_moments,
        lowpass,
        highpass,
        shift: span / 2,
        support_radius: ((span + 1) / 2) as u32,
        cascade_depth,
        phi_table,
        psi_table,
        phi_sup,
        psi_sup,
    })
}

impl WaveletBasis {
    pub fn vanishing_moments(&self) -> usize {
        self.vanishing_moments
    }

    pub fn lowpass(&self) -> &[f64] {
        &self.lowpass
    }

    pub fn highpass(&self) -> &[f64] {
        &self.highpass
    }

    /// Offset between native filter indices and centered translates.
    pub fn shift(&self) -> i64 {
        self.shift
    }

    /// `A`: both `φ` and `ψ` vanish outside `[-A, A]`.
    pub fn support_radius(&self) -> u32 {
        self.support_radius
    }

    /// Centered support `[lo, hi]` of `φ` and `ψ`, a subset of `[-A, A]`.
    pub fn support(&self) -> (i64, i64) {
        (-self.shift, self.filter_len() as i64 - 1 - self.shift)
    }

    pub fn filter_len(&self) -> usize {
        self.lowpass.len()
    }

    pub fn cascade_depth(&self) -> u32 {
        self.cascade_depth
    }

    /// Grid step `2^-J` of the tables.
    pub fn table_step(&self) -> f64 {
        f64::exp2i(-(self.cascade_depth as i32))
    }

    /// `φ` on the uncentered nodes `i · 2^-J`, `i = 0..=(2V-1)·2^J`.
    pub fn phi_table(&self) -> &[f64] {
        &self.phi_table
    }

    pub fn psi_table(&self) -> &[f64] {
        &self.psi_table
    }

    pub fn phi_sup(&self) -> f64 {
        self.phi_sup
    }

    pub fn psi_sup(&self) -> f64 {
        self.psi_sup
    }

    /// `Φ₀ = max(‖φ‖∞, ‖ψ‖∞)`, the scale that enters the penalty.
    pub fn phi0(&self) -> f64 {
        self.phi_sup.max(self.psi_sup)
    }

    /// `φ(x)`; exactly zero outside the support.
    #[inline]
    pub fn eval_phi(&self, x: f64) -> f64 {
        self.lookup(&self.phi_table, x)
    }

    /// `ψ(x)`; exactly zero outside the support.
    #[inline]
    pub fn eval_psi(&self, x: f64) -> f64 {
        self.lookup(&self.psi_table, x)
    }

    /// `φ_{N,k}(x) = 2^{N/2} φ(2^N x - k)`.
    #[inline]
    pub fn scaled_phi(&self, level: i32, k: i64, x: f64) -> f64 {
        let scale = f64::exp2i(level);
        scale.sqrt() * self.eval_phi(scale * x - k as f64)
    }

    /// `ψ_{ℓ,k}(x) = 2^{ℓ/2} ψ(2^ℓ x - k)`.
    #[inline]
    pub fn scaled_psi(&self, level: i32, k: i64, x: f64) -> f64 {
        let scale = f64::exp2i(level);
        scale.sqrt() * self.eval_psi(scale * x - k as f64)
    }

    /// Translates `k` for which `φ(t - k)` (or `ψ(t - k)`) can be nonzero, as an inclusive range.
    #[inline]
    pub fn translates_at(&self, t: f64) -> (i64, i64) {
        let (lo, hi) = self.support();
        (
            (t - hi as f64).floor() as i64,
            (t - lo as f64).floor() as i64,
        )
    }

    /// `Σ_k |φ(x - k)|`, a finite sum over at most `2A + 1` translates.
    pub fn overlap_sum(&self, x: f64) -> f64 {
        let (k0, k1) = self.translates_at(x);
        (k0..=k1).map(|k| self.eval_phi(x - k as f64).abs()).sum()
    }

    /// `Σ_k |ψ_{j,k}(x)|`.
    pub fn overlap_sum_psi(&self, level: i32, x: f64) -> f64 {
        let t = f64::exp2i(level) * x;
        let (k0, k1) = self.translates_at(t);
        (k0..=k1).map(|k| self.scaled_psi(level, k, x).abs()).sum()
    }

    /// Riemann sum of `φ` over the table, approximating `∫φ = 1`.
    pub fn phi_integral(&self) -> f64 {
        self.phi_table.iter().sum::<f64>() * self.table_step()
    }

    /// Riemann-sum values of `∫ψ(u) u^ℓ du` for `ℓ = 0..max_order`, in centered coordinates.
    pub fn vanishing_moments_check(&self, max_order: usize) -> Vec<f64> {
        let step = self.table_step();
        let origin = -(self.shift as f64);
        (0..max_order)
            .map(|ell| {
                self.psi_table
                    .iter()
                    .enumerate()
                    .map(|(i, &v)| v * (origin + i as f64 * step).powi(ell as i32))
                    .sum::<f64>()
                    * step
            })
            .collect()
    }

    fn lookup(&self, table: &[f64], x: f64) -> f64 {
        let u = x + self.shift as f64;
        let span = (self.filter_len() - 1) as f64;
        if !(u >= 0.0 && u < span) {
            return 0.0;
        }
        let pos = u * f64::exp2i(self.cascade_depth as i32);
        let i = pos.floor();
        let idx = i as usize;
        if self.vanishing_moments == 1 {
            // Haar is piecewise constant; interpolating would smear the jump.
            return table[idx];
        }
        let frac = pos - i;
        table[idx] + frac * (table[idx + 1] - table[idx])
    }
}
