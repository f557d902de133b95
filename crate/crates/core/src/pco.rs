//! Resolution-level selection by penalized comparison to overfitting.
//!
//! Every candidate `f̂_N` is compared with the most overfitted estimator `f̂_{N_max}`:
//!
//! ```text
//! Crit(N) = ‖f̂_{N_max} - f̂_N‖² + pen_λ(N)
//! pen_λ(N) = (2A+1)² Φ₀² (λ 2^{N+1} - (N_max - N) 2^{N_max}) / n
//! ```
//!
//! and `N̂` is the smallest minimizer of `Crit` over the candidate set.

use alloc::vec::Vec;

use crate::coefficients::CoefficientPyramid;
use crate::error::{Error, Result};
use crate::math::FloatExt;
use crate::wavelet_basis::WaveletBasis;

pub const DEFAULT_LAMBDA: f64 = 10.0;
pub const DEFAULT_LEVEL_CAP: u32 = 15;

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PcoConfig {
    pub lambda: f64,
    pub level_cap: u32,
    /// Smallest candidate level; 1 unless level 0 should compete too.
    pub min_level: u32,
}

impl Default for PcoConfig {
    fn default() -> Self {
        Self {
            lambda: DEFAULT_LAMBDA,
            level_cap: DEFAULT_LEVEL_CAP,
            min_level: 1,
        }
    }
}

impl PcoConfig {
    pub fn new(lambda: f64, level_cap: u32) -> Result<Self> {
        let cfg = Self {
            lambda,
            level_cap,
            min_level: 1,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.lambda > 0.0 && self.lambda.is_finite()) {
            return Err(Error::Config("lambda must be positive and finite"));
        }
        if self.level_cap < 1 {
            return Err(Error::Config("level cap must be at least 1"));
        }
        if self.min_level > self.level_cap {
            return Err(Error::Config("min level exceeds level cap"));
        }
        Ok(())
    }

    /// Candidate levels for a sample of size `n`, honoring `min_level`.
    pub fn candidates(&self, n: usize) -> Result<Vec<u32>> {
        self.validate()?;
        let top = max_candidate(n, self.level_cap)?;
        let levels: Vec<u32> = (self.min_level..=top).collect();
        if levels.is_empty() {
            return Err(Error::Config("empty candidate set"));
        }
        Ok(levels)
    }
}

fn max_candidate(n: usize, level_cap: u32) -> Result<u32> {
    if n < 2 {
        return Err(Error::SampleSize(n));
    }
    let bound = n as f64 / (n as f64).ln();
    // Largest integer strictly below n / log n.
    let strict = (bound.ceil() as u64).saturating_sub(1);
    Ok(strict.min(level_cap as u64) as u32)
}

/// `H = {1, …, min(⌈n / log n⌉ - 1, level_cap)}`; `N_max = max H`.
pub fn candidate_set(n: usize, level_cap: u32) -> Result<Vec<u32>> {
    PcoConfig {
        lambda: DEFAULT_LAMBDA,
        level_cap,
        min_level: 1,
    }
    .candidates(n)
}

/// `pen_λ(N)`; negative whenever the bias-proxy correction outweighs the variance term.
pub fn penalty(cfg: &PcoConfig, basis: &WaveletBasis, level: u32, n_max: u32, n: usize) -> f64 {
    let width = (2 * basis.support_radius() + 1) as f64;
    let scale = width * width * basis.phi0() * basis.phi0() / n as f64;
    let variance = cfg.lambda * f64::exp2i(level as i32 + 1);
    let correction = (n_max as f64 - level as f64) * f64::exp2i(n_max as i32);
    scale * (variance - correction)
}

/// `Crit(N) = distance_sq(N) + pen_λ(N)`.
pub fn criterion(
    pyramid: &CoefficientPyramid,
    cfg: &PcoConfig,
    basis: &WaveletBasis,
    level: u32,
) -> Result<f64> {
    let distance = pyramid.distance_sq(level)?;
    Ok(distance + penalty(cfg, basis, level, pyramid.n_max(), pyramid.n()))
}

/// One row of a selection report.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CandidateScore {
    #[cfg_attr(feature = "serde", serde(rename = "N"))]
    pub level: u32,
    pub distance: f64,
    pub penalty: f64,
    pub criterion: f64,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SelectionReport {
    pub lambda: f64,
    pub candidates: Vec<CandidateScore>,
    pub selected: u32,
}

impl SelectionReport {
    pub fn n_max(&self) -> u32 {
        self.candidates.last().map_or(0, |c| c.level)
    }

    pub fn score(&self, level: u32) -> Option<&CandidateScore> {
        self.candidates.iter().find(|c| c.level == level)
    }
}

/// Smallest level attaining the minimal criterion.
pub fn argmin_level(scores: &[CandidateScore]) -> Option<u32> {
    scores
        .iter()
        .fold(None::<&CandidateScore>, |best, s| match best {
            Some(b) if b.criterion <= s.criterion => Some(b),
            _ => Some(s),
        })
        .map(|s| s.level)
}

/// Scores every candidate level of a pyramid fitted at `N_max = max H` and picks `N̂`.
pub fn select(
    pyramid: &CoefficientPyramid,
    cfg: &PcoConfig,
    basis: &WaveletBasis,
) -> Result<SelectionReport> {
    let levels = cfg.candidates(pyramid.n())?;
    if levels.last() != Some(&pyramid.n_max()) {
        return Err(Error::Config(
            "pyramid must be fitted at the largest candidate level",
        ));
    }
    let candidates = levels
        .iter()
        .map(|&level| {
            let distance = pyramid.distance_sq(level)?;
            let penalty = penalty(cfg, basis, level, pyramid.n_max(), pyramid.n());
            Ok(CandidateScore {
                level,
                distance,
                penalty,
                criterion: distance + penalty,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let selected = argmin_level(&candidates).ok_or(Error::Config("empty candidate set"))?;
    Ok(SelectionReport {
        lambda: cfg.lambda,
        candidates,
        selected,
    })
}

/// Fits the pyramid at `N_max = max H(n)` and runs [`select`].
pub fn fit_and_select(
    basis: &WaveletBasis,
    sample: &[f64],
    cfg: &PcoConfig,
) -> Result<(CoefficientPyramid, SelectionReport)> {
    if sample.is_empty() {
        return Err(Error::EmptyInput);
    }
    let levels = cfg.candidates(sample.len())?;
    let n_max = *levels.last().expect("candidates are nonempty");
    let pyramid = CoefficientPyramid::from_sample(basis, sample, n_max)?;
    let report = select(&pyramid, cfg, basis)?;
    Ok((pyramid, report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wavelet_basis::build_basis;

    #[test]
    fn candidate_set_examples() {
        assert_eq!(
            candidate_set(4096, 15).unwrap(),
            (1..=15).collect::<Vec<_>>()
        );
        assert_eq!(candidate_set(8, 15).unwrap(), [1, 2, 3]);
        assert_eq!(candidate_set(4096, 1).unwrap(), [1]);
        assert_eq!(candidate_set(1, 15), Err(Error::SampleSize(1)));
        assert!(candidate_set(100, 0).is_err());
        // 2 / ln 2 ≈ 2.885
        assert_eq!(candidate_set(2, 15).unwrap(), [1, 2]);
    }

    #[test]
    fn penalty_examples() {
        let haar = build_basis(1, 8).unwrap();
        let cfg = PcoConfig::new(10.0, 15).unwrap();
        let p = penalty(&cfg, &haar, 2, 5, 1000);
        assert!((p - (-0.144)).abs() < 1e-15, "{p}");

        let d = build_basis(3, 10).unwrap();
        let width = (2 * d.support_radius() + 1) as f64;
        let c = width * width * d.phi0() * d.phi0();
        let top = penalty(&cfg, &d, 6, 6, 500);
        assert!((top - 10.0 * c * 128.0 / 500.0).abs() < 1e-12);

        let doubled = PcoConfig::new(20.0, 15).unwrap();
        for level in 1..=6 {
            let delta = penalty(&doubled, &d, level, 6, 500) - penalty(&cfg, &d, level, 6, 500);
            let expected = 10.0 * c * f64::exp2i(level as i32 + 1) / 500.0;
            assert!((delta - expected).abs() < 1e-9 * expected, "N={level}");
        }
    }

    #[test]
    fn flat_details_follow_penalty() {
        let haar = build_basis(1, 8).unwrap();
        let cfg = PcoConfig::new(10.0, 1).unwrap();
        let pyramid = CoefficientPyramid::from_sample(&haar, &[0.25, 0.75], 1).unwrap();
        let c0 = criterion(&pyramid, &cfg, &haar, 0).unwrap();
        let c1 = criterion(&pyramid, &cfg, &haar, 1).unwrap();
        let p0 = penalty(&cfg, &haar, 0, 1, 2);
        let p1 = penalty(&cfg, &haar, 1, 1, 2);
        assert!(((c0 - c1) - (p0 - p1)).abs() < 1e-12);
        assert_eq!(c1, p1);
    }

    #[test]
    fn ties_break_to_smallest_level() {
        let flat: Vec<CandidateScore> = (1..=5)
            .map(|level| CandidateScore {
                level,
                distance: 0.0,
                penalty: 1.0,
                criterion: 1.0,
            })
            .collect();
        assert_eq!(argmin_level(&flat), Some(1));
        let mut dip = flat.clone();
        dip[2].criterion = 0.5;
        dip[4].criterion = 0.5;
        assert_eq!(argmin_level(&dip), Some(3));
        assert_eq!(argmin_level(&[]), None);
    }

    #[test]
    fn singleton_candidate_set() {
        let b = build_basis(2, 10).unwrap();
        let sample: Vec<f64> = (0..64).map(|i| (i as f64 * 0.37).sin()).collect();
        let cfg = PcoConfig {
            lambda: 10.0,
            level_cap: 3,
            min_level: 3,
        };
        let (pyramid, report) = fit_and_select(&b, &sample, &cfg).unwrap();
        assert_eq!(pyramid.n_max(), 3);
        assert_eq!(report.selected, 3);
        assert_eq!(report.candidates.len(), 1);
    }

    #[test]
    fn rejects_bad_configuration() {
        assert!(PcoConfig::new(0.0, 15).is_err());
        assert!(PcoConfig::new(-1.0, 15).is_err());
        assert!(PcoConfig::new(f64::NAN, 15).is_err());
        assert!(PcoConfig::new(1.0, 0).is_err());
        let b = build_basis(1, 8).unwrap();
        let pyramid = CoefficientPyramid::from_sample(&b, &[0.1, 0.2, 0.3, 0.4, 0.5], 2).unwrap();
        assert!(select(&pyramid, &PcoConfig::default(), &b).is_err());
    }
}
