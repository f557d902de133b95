//! Empirical scaling/detail coefficients and the analysis/synthesis filter bank linking them.
//!
//! The sample is touched once, at the top level `N_max`; every coarser `α̂_{N,·}` and every
//! `β̂_{ℓ,·}` comes from the two-scale relation, which commutes with empirical averaging.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math::FloatExt;
use crate::wavelet_basis::WaveletBasis;

/// Largest dense coefficient window we agree to allocate for a single level.
pub const MAX_WINDOW: usize = 1 << 27;

/// Dense coefficients `c_k` for `k = offset .. offset + len`; zero outside.
#[derive(Debug, Clone, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct LevelCoefficients {
    pub offset: i64,
    pub values: Vec<f64>,
}

impl LevelCoefficients {
    pub fn zeros(offset: i64, len: usize) -> Result<Self> {
        if len > MAX_WINDOW {
            return Err(Error::Resource(len));
        }
        Ok(Self {
            offset,
            values: alloc::vec![0.0; len],
        })
    }

    #[inline]
    pub fn get(&self, k: i64) -> f64 {
        usize::try_from(k - self.offset)
            .ok()
            .and_then(|i| self.values.get(i))
            .copied()
            .unwrap_or(0.0)
    }

    /// Inclusive window `[first, last]` of stored translates.
    pub fn window(&self) -> (i64, i64) {
        (self.offset, self.offset + self.values.len() as i64 - 1)
    }

    pub fn energy(&self) -> f64 {
        self.values.iter().map(|v| v * v).sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, f64)> + '_ {
        self.values
            .iter()
            .enumerate()
            .map(move |(i, &v)| (self.offset + i as i64, v))
    }

    /// `max_k |self_k - other_k|` over the union of both windows.
    pub fn max_abs_diff(&self, other: &LevelCoefficients) -> f64 {
        let lo = self.offset.min(other.offset);
        let hi = self.window().1.max(other.window().1);
        (lo..=hi)
            .map(|k| (self.get(k) - other.get(k)).abs())
            .fold(0.0, f64::max)
    }

    /// `Σ_k (self_k - other_k)²` over the union of both windows.
    pub fn distance_sq(&self, other: &LevelCoefficients) -> f64 {
        let lo = self.offset.min(other.offset);
        let hi = self.window().1.max(other.window().1);
        (lo..=hi)
            .map(|k| (self.get(k) - other.get(k)).powi(2))
            .sum()
    }
}

/// Multiresolution pyramid of one sample: `α̂_{N,·}` for every `N ≤ N_max` and `β̂_{ℓ,·}` for `ℓ < N_max`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CoefficientPyramid {
    n: usize,
    n_max: u32,
    /// Analysis-side approximations indexed by level, `approximations[n_max]` is the top fit.
    approximations: Vec<LevelCoefficients>,
    details: Vec<LevelCoefficients>,
    /// `tail_energy[N] = Σ_{ℓ ≥ N} ‖β̂_ℓ‖²`, with `tail_energy[n_max] = 0`.
    tail_energy: Vec<f64>,
    data_range: (f64, f64),
}

fn check_sample(sample: &[f64]) -> Result<(f64, f64)> {
    if sample.is_empty() {
        return Err(Error::EmptyInput);
    }
    sample
        .iter()
        .try_fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| {
            if x.is_finite() {
                Ok((lo.min(x), hi.max(x)))
            } else {
                Err(Error::NonFinite)
            }
        })
}

/// `α̂_{N,k} = (1/n) Σ_u φ_{N,k}(X_u)` on the window `[⌊2^N min X⌋ - A, ⌈2^N max X⌉ + A]`.
pub fn fit_top_level(
    basis: &WaveletBasis,
    sample: &[f64],
    n_max: u32,
) -> Result<LevelCoefficients> {
    let (lo, hi) = check_sample(sample)?;
    let level = n_max as i32;
    let scale = f64::exp2i(level);
    let radius = basis.support_radius() as i64;
    let first = (scale * lo).floor() as i64 - radius;
    let last = (scale * hi).ceil() as i64 + radius;
    let mut out = LevelCoefficients::zeros(first, (last - first + 1) as usize)?;

    let amplitude = scale.sqrt();
    for &x in sample {
        let t = scale * x;
        let (k0, k1) = basis.translates_at(t);
        for k in k0..=k1 {
            out.values[(k - first) as usize] += amplitude * basis.eval_phi(t - k as f64);
        }
    }
    let inv_n = 1.0 / sample.len() as f64;
    out.values.iter_mut().for_each(|v| *v *= inv_n);
    Ok(out)
}

/// One analysis step: `(α_{N-1}, β_{N-1})` from `α_N`.
pub fn analysis_step(
    basis: &WaveletBasis,
    fine: &LevelCoefficients,
) -> Result<(LevelCoefficients, LevelCoefficients)> {
    let s = basis.shift();
    let taps = basis.filter_len() as i64;
    let (m0, m1) = fine.window();
    // Translates k with [2k - s, 2k - s + taps - 1] ∩ [m0, m1] ≠ ∅.
    let first = -((-(m0 + s - taps + 1)).div_euclid(2));
    let last = (m1 + s).div_euclid(2);
    let len = (last - first + 1).max(0) as usize;
    let mut approx = LevelCoefficients::zeros(first, len)?;
    let mut detail = LevelCoefficients::zeros(first, len)?;
    let (h, g) = (basis.lowpass(), basis.highpass());
    for (i, k) in (first..=last).enumerate() {
        let base = 2 * k - s;
        let (mut a, mut d) = (0.0, 0.0);
        for j in 0..taps {
            let c = fine.get(base + j);
            a += h[j as usize] * c;
            d += g[j as usize] * c;
        }
        approx.values[i] = a;
        detail.values[i] = d;
    }
    Ok((approx, detail))
}

/// One synthesis step onto the window of `target`:
/// `α_{N,m} = Σ_k h_{m-2k+s} α_{N-1,k} + Σ_k g_{m-2k+s} β_{N-1,k}`.
pub fn synthesis_step(
    basis: &WaveletBasis,
    coarse: &LevelCoefficients,
    detail: &LevelCoefficients,
    target: (i64, i64),
) -> Result<LevelCoefficients> {
    let s = basis.shift();
    let (h, g) = (basis.lowpass(), basis.highpass());
    let mut out = LevelCoefficients::zeros(target.0, (target.1 - target.0 + 1).max(0) as usize)?;
    let lo = coarse.offset.min(detail.offset);
    let hi = coarse.window().1.max(detail.window().1);
    for k in lo..=hi {
        let (a, d) = (coarse.get(k), detail.get(k));
        if a == 0.0 && d == 0.0 {
            continue;
        }
        let base = 2 * k - s;
        for j in 0..h.len() {
            let m = base + j as i64;
            if m >= target.0 && m <= target.1 {
                out.values[(m - target.0) as usize] += h[j] * a + g[j] * d;
            }
        }
    }
    Ok(out)
}

/// Runs the analysis filter bank from `N_max` down to level 0.
pub fn pyramid_down(
    basis: &WaveletBasis,
    top_alpha: LevelCoefficients,
    n_max: u32,
    n: usize,
) -> Result<CoefficientPyramid> {
    let mut approximations = alloc::vec![LevelCoefficients::default(); n_max as usize + 1];
    let mut details = alloc::vec![LevelCoefficients::default(); n_max as usize];
    approximations[n_max as usize] = top_alpha;
    for level in (1..=n_max as usize).rev() {
        let (a, d) = analysis_step(basis, &approximations[level])?;
        approximations[level - 1] = a;
        details[level - 1] = d;
    }
    let mut tail_energy = alloc::vec![0.0; n_max as usize + 1];
    for level in (0..n_max as usize).rev() {
        tail_energy[level] = tail_energy[level + 1] + details[level].energy();
    }
    let top = &approximations[n_max as usize];
    let radius = basis.support_radius() as i64;
    let scale = f64::exp2i(-(n_max as i32));
    let data_range = (
        (top.offset + radius) as f64 * scale,
        (top.window().1 - radius) as f64 * scale,
    );
    Ok(CoefficientPyramid {
        n,
        n_max,
        approximations,
        details,
        tail_energy,
        data_range,
    })
}

impl CoefficientPyramid {
    /// Fits the top level directly and derives the rest by the filter bank.
    pub fn from_sample(basis: &WaveletBasis, sample: &[f64], n_max: u32) -> Result<Self> {
        let top = fit_top_level(basis, sample, n_max)?;
        pyramid_down(basis, top, n_max, sample.len())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn n_max(&self) -> u32 {
        self.n_max
    }

    pub fn top_alpha(&self) -> &LevelCoefficients {
        &self.approximations[self.n_max as usize]
    }

    pub fn coarse_alpha(&self) -> &LevelCoefficients {
        &self.approximations[0]
    }

    /// `β̂_{ℓ,·}` for `ℓ < N_max`.
    pub fn details(&self, level: u32) -> Result<&LevelCoefficients> {
        self.details.get(level as usize).ok_or(Error::LevelRange {
            level,
            max: self.n_max.saturating_sub(1),
        })
    }

    /// `α̂_{N,·}` as produced by the analysis pass.
    pub fn approximation(&self, level: u32) -> Result<&LevelCoefficients> {
        self.approximations
            .get(level as usize)
            .ok_or(self.range_error(level))
    }

    /// `α̂_{N,·}` re-expanded from `α̂_{0,·}` and the details by the synthesis filter bank.
    pub fn level_alpha(&self, basis: &WaveletBasis, level: u32) -> Result<LevelCoefficients> {
        if level > self.n_max {
            return Err(self.range_error(level));
        }
        let mut current = self.approximations[0].clone();
        for l in 0..level as usize {
            let target = self.approximations[l + 1].window();
            current = synthesis_step(basis, &current, &self.details[l], target)?;
        }
        Ok(current)
    }

    /// Data range rounded outward to the top-level dyadic grid.
    pub fn data_range(&self) -> (f64, f64) {
        self.data_range
    }

    /// `‖f̂_{N_max} - f̂_N‖² = Σ_{ℓ=N}^{N_max-1} Σ_k β̂²_{ℓk}`.
    pub fn distance_sq(&self, level: u32) -> Result<f64> {
        self.tail_energy
            .get(level as usize)
            .copied()
            .ok_or(self.range_error(level))
    }

    /// `Σ_k α̂²_{N_max,k}` and `Σ_k α̂²_{0,k} + Σ_ℓ Σ_k β̂²_{ℓk}`; equal up to rounding.
    pub fn energy_balance(&self) -> (f64, f64) {
        (
            self.top_alpha().energy(),
            self.coarse_alpha().energy() + self.tail_energy[0],
        )
    }

    fn range_error(&self, level: u32) -> Error {
        Error::LevelRange {
            level,
            max: self.n_max,
        }
    }
}
