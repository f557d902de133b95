//! Integrated squared error, Monte Carlo MISE studies, and empirical checks of the
//! variance bound, bias decay, coefficient concentration and convergence rate.
//!
//! Two independent routes to `‖f̂_N - f‖²` are available: trapezoid quadrature on a grid
//! ([`ise`]) and the orthonormal expansion `Σ_k (α̂_{N,k} - α_{N,k})² + ‖f‖² - Σ_k α²_{N,k}`
//! against quadrature-computed true coefficients ([`TrueCoefficients::ise`]).

use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::coefficients::{fit_top_level, pyramid_down, CoefficientPyramid, LevelCoefficients};
use crate::error::{Error, Result};
use crate::estimator::DensityEstimate;
use crate::grid::UniformGrid;
use crate::math::FloatExt;
use crate::models::DensityModel;
use crate::pco::{fit_and_select, PcoConfig};
use crate::wavelet_basis::WaveletBasis;

/// Minimum number of quadrature nodes for risk grids.
pub const MIN_RISK_NODES: usize = 1 << 14;
/// Probability mass a quadrature grid may leave outside its endpoints.
pub const COVERAGE_TOLERANCE: f64 = 1e-6;

/// Composite trapezoid `∫ (f̂ - f)²` over `grid`.
///
/// Fails with a coverage error when the grid leaves more than `1e-6` of the model mass outside
/// or does not contain the support of the estimate.
pub fn ise(
    estimate: &DensityEstimate<'_>,
    model: &DensityModel,
    grid: &UniformGrid,
) -> Result<f64> {
    let outside = match (model.cdf(grid.start()), model.cdf(grid.end())) {
        (Some(lo), Some(hi)) => lo + (1.0 - hi),
        _ => {
            let (lo, hi) = model.effective_support();
            if lo < grid.start() || hi > grid.end() {
                1.0
            } else {
                0.0
            }
        }
    };
    if outside > COVERAGE_TOLERANCE {
        return Err(Error::Coverage(outside));
    }
    let (lo, hi) = estimate.support();
    if lo < grid.start() || hi > grid.end() {
        return Err(Error::Grid("grid does not contain the estimate support"));
    }
    Ok(trapezoid_of(grid, |x| {
        let e = estimate.evaluate(x) - model.pdf(x);
        e * e
    }))
}

/// Grid covering both the estimate support and the model effective support with at least
/// [`MIN_RISK_NODES`] nodes and step at most `2^{-(N+4)}`.
pub fn risk_grid(estimate: &DensityEstimate<'_>, model: &DensityModel) -> UniformGrid {
    let (a, b) = estimate.support();
    let (c, d) = model.effective_support();
    let (lo, hi) = (a.min(c), b.max(d));
    let step =
        ((hi - lo) / (MIN_RISK_NODES - 1) as f64).min(f64::exp2i(-(estimate.level() as i32 + 4)));
    UniformGrid::with_step(lo, hi, step).expect("nonempty risk interval")
}

fn trapezoid_of<F: FnMut(f64) -> f64>(grid: &UniformGrid, mut f: F) -> f64 {
    let last = grid.len() - 1;
    let inner: f64 = (1..last).map(|i| f(grid.node(i))).sum();
    grid.step() * (inner + 0.5 * (f(grid.start()) + f(grid.node(last))))
}

/// True coefficients `α_{N,k} = ∫ f φ_{N,k}` at every level up to `n_max`, by dyadic
/// trapezoid quadrature at the top level followed by the analysis filter bank.
#[derive(Debug, Clone)]
pub struct TrueCoefficients {
    pyramid: CoefficientPyramid,
    norm_sq: f64,
}

/// Quadrature step in `x` targeted by [`TrueCoefficients`].
const TRUTH_STEP_LOG2: i32 = 12;

impl TrueCoefficients {
    pub fn new(model: &DensityModel, basis: &WaveletBasis, n_max: u32) -> Result<Self> {
        let top = Self::direct(model, basis, n_max)?;
        Ok(Self {
            pyramid: pyramid_down(basis, top, n_max, 1)?,
            norm_sq: model.norm_sq(),
        })
    }

    /// Quadrature at one level without the filter bank.
    pub fn direct(
        model: &DensityModel,
        basis: &WaveletBasis,
        level: u32,
    ) -> Result<LevelCoefficients> {
        let scale = f64::exp2i(level as i32);
        let (lo, hi) = model.effective_support();
        let radius = basis.support_radius() as i64;
        let first = (scale * lo).floor() as i64 - radius;
        let last = (scale * hi).ceil() as i64 + radius;
        let mut out = LevelCoefficients::zeros(first, (last - first + 1) as usize)?;

        // Nodes per unit of the dilated variable; dyadic subsamples of the table keep the
        // discrete moments of φ exact up to degree V - 1.
        let depth = (TRUTH_STEP_LOG2 - level as i32).clamp(2, basis.cascade_depth() as i32) as u32;
        let stride = 1usize << (basis.cascade_depth() - depth);
        let h = f64::exp2i(-(depth as i32));
        let table = basis.phi_table();
        // The Haar box is discontinuous at both ends; its left-node sum becomes a midpoint rule.
        let origin = -(basis.shift() as f64)
            + if basis.vanishing_moments() == 1 {
                0.5 * h
            } else {
                0.0
            };
        let nodes: Vec<(f64, f64)> = (0..table.len())
            .step_by(stride)
            .map(|i| (origin + (i / stride) as f64 * h, table[i]))
            .filter(|&(_, w)| w != 0.0)
            .collect();
        let amplitude = 1.0 / scale.sqrt();
        for (i, k) in (first..=last).enumerate() {
            let sum: f64 = nodes
                .iter()
                .map(|&(u, w)| w * model.pdf((u + k as f64) / scale))
                .sum();
            out.values[i] = amplitude * h * sum;
        }
        Ok(out)
    }

    pub fn n_max(&self) -> u32 {
        self.pyramid.n_max()
    }

    pub fn level(&self, level: u32) -> Result<&LevelCoefficients> {
        self.pyramid.approximation(level)
    }

    pub fn norm_sq(&self) -> f64 {
        self.norm_sq
    }

    /// `‖f - P_N f‖²` as the detail energy `Σ_{N ≤ ℓ < N_max} ‖β_ℓ‖²` plus the residual
    /// `‖f‖² - ‖α_{N_max}‖²`; the residual is dropped when it is within rounding of zero.
    pub fn bias_sq(&self, level: u32) -> Result<f64> {
        let details = self.pyramid.distance_sq(level)?;
        let residual = self.norm_sq - self.pyramid.top_alpha().energy();
        let floor = 64.0 * f64::EPSILON * self.norm_sq;
        Ok(details + if residual > floor { residual } else { 0.0 })
    }

    /// `‖f̂_N - f‖²` for empirical coefficients `alpha_hat` at `level`.
    pub fn ise(&self, alpha_hat: &LevelCoefficients, level: u32) -> Result<f64> {
        let truth = self.level(level)?;
        Ok(alpha_hat.distance_sq(truth) + self.bias_sq(level)?)
    }
}

/// Settings echoed in every report.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct StudySettings {
    pub model: String,
    pub n: usize,
    pub reps: usize,
    pub lambda: f64,
    pub vanishing_moments: usize,
    pub level_cap: u32,
    pub seed: u64,
}

impl StudySettings {
    pub fn new(
        model: &DensityModel,
        n: usize,
        reps: usize,
        cfg: &PcoConfig,
        basis: &WaveletBasis,
        seed: u64,
    ) -> Self {
        Self {
            model: model.to_string(),
            n,
            reps,
            lambda: cfg.lambda,
            vanishing_moments: basis.vanishing_moments(),
            level_cap: cfg.level_cap,
            seed,
        }
    }
}

/// Outcome of one Monte Carlo replication.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ReplicationOutcome {
    pub ise: f64,
    pub selected: u32,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RiskReport {
    pub settings: StudySettings,
    pub ise: Vec<f64>,
    pub selected: Vec<u32>,
    pub mise_mean: f64,
    /// Sample standard deviation of the ISE values; `None` for a single replication.
    pub mise_sd: Option<f64>,
    /// `(level, count)` pairs in ascending level order.
    pub histogram: Vec<(u32, usize)>,
    /// Minimum, lower quartile, median, upper quartile, maximum of the ISE values.
    pub quartiles: [f64; 5],
}

impl RiskReport {
    /// Aggregates outcomes in replication order.
    pub fn from_outcomes(settings: StudySettings, outcomes: &[ReplicationOutcome]) -> Result<Self> {
        if outcomes.is_empty() {
            return Err(Error::Config("at least one replication is required"));
        }
        let ise: Vec<f64> = outcomes.iter().map(|o| o.ise).collect();
        let selected: Vec<u32> = outcomes.iter().map(|o| o.selected).collect();
        let (mise_mean, mise_sd) = mean_sd(&ise);
        let mut histogram: Vec<(u32, usize)> = Vec::new();
        let mut levels = selected.clone();
        levels.sort_unstable();
        for level in levels {
            match histogram.last_mut() {
                Some((l, c)) if *l == level => *c += 1,
                _ => histogram.push((level, 1)),
            }
        }
        let quartiles = five_numbers(&ise);
        Ok(Self {
            settings,
            ise,
            selected,
            mise_mean,
            mise_sd,
            histogram,
            quartiles,
        })
    }

    /// Most frequent selected level, smallest on ties.
    pub fn selected_mode(&self) -> u32 {
        self.histogram
            .iter()
            .fold(
                (0, 0),
                |best, &(level, count)| if count > best.1 { (level, count) } else { best },
            )
            .0
    }
}

/// Mean and sample standard deviation (`None` below two values).
pub fn mean_sd(values: &[f64]) -> (f64, Option<f64>) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, None);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, Some(var.sqrt()))
}

fn five_numbers(values: &[f64]) -> [f64; 5] {
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let q = |p: f64| {
        let pos = p * (sorted.len() - 1) as f64;
        let i = pos.floor() as usize;
        let frac = pos - i as f64;
        match sorted.get(i + 1) {
            Some(next) => sorted[i] + frac * (next - sorted[i]),
            None => sorted[i],
        }
    };
    [q(0.0), q(0.25), q(0.5), q(0.75), q(1.0)]
}

/// One replication: sample stream `rep`, fit, select `N̂`, grid ISE of `f̂_{N̂}`.
pub fn replicate(
    model: &DensityModel,
    n: usize,
    cfg: &PcoConfig,
    basis: &WaveletBasis,
    seed: u64,
    rep: u64,
) -> Result<ReplicationOutcome> {
    let sample = model.sample_stream(n, seed, rep);
    let (pyramid, report) = fit_and_select(basis, &sample, cfg)?;
    let estimate = DensityEstimate::new(basis, &pyramid, report.selected)?;
    let grid = risk_grid(&estimate, model);
    Ok(ReplicationOutcome {
        ise: ise(&estimate, model, &grid)?,
        selected: report.selected,
    })
}

/// Sequential Monte Carlo MISE study over `reps` replications.
pub fn mise_study(
    model: &DensityModel,
    n: usize,
    reps: usize,
    cfg: &PcoConfig,
    basis: &WaveletBasis,
    seed: u64,
) -> Result<RiskReport> {
    let outcomes = (0..reps as u64)
        .map(|rep| replicate(model, n, cfg, basis, seed, rep))
        .collect::<Result<Vec<_>>>()?;
    RiskReport::from_outcomes(
        StudySettings::new(model, n, reps, cfg, basis, seed),
        &outcomes,
    )
}

/// Empirical `V_N` next to its bound.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct VarianceCheck {
    pub level: u32,
    pub empirical: f64,
    /// `(2^N / n)(2A+1)² Φ₀²`.
    pub bound: f64,
}

/// `V_N = E‖f̂_N - E f̂_N‖²` estimated in coefficient space as `Σ_k` sample variances of
/// `α̂_{N,k}` over `reps` independent samples.
pub fn variance_bound_check(
    model: &DensityModel,
    basis: &WaveletBasis,
    level: u32,
    n: usize,
    reps: usize,
    seed: u64,
) -> Result<VarianceCheck> {
    if reps < 2 {
        return Err(Error::Config(
            "variance check needs at least two replications",
        ));
    }
    let fits = (0..reps as u64)
        .map(|rep| fit_top_level(basis, &model.sample_stream(n, seed, rep), level))
        .collect::<Result<Vec<_>>>()?;
    let lo = fits.iter().map(|f| f.offset).min().expect("reps > 0");
    let hi = fits.iter().map(|f| f.window().1).max().expect("reps > 0");
    let mut empirical = 0.0;
    for k in lo..=hi {
        let (_, sd) = mean_sd(&fits.iter().map(|f| f.get(k)).collect::<Vec<_>>());
        empirical += sd.unwrap_or(0.0).powi(2);
    }
    let width = (2 * basis.support_radius() + 1) as f64;
    let bound = f64::exp2i(level as i32) / n as f64 * width * width * basis.phi0().powi(2);
    Ok(VarianceCheck {
        level,
        empirical,
        bound,
    })
}

/// Squared-bias proxy per level and its fitted `log₂` slope.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct BiasDecay {
    pub levels: Vec<u32>,
    /// `‖f̂_N - f‖²` by grid quadrature.
    pub ise: Vec<f64>,
    /// Unbiased estimate of `V_N` from the same sample.
    pub variance: Vec<f64>,
    /// `ise - variance`.
    pub bias: Vec<f64>,
    /// Three standard deviations of the proxy; levels whose proxy falls below it are dropped.
    pub floor: Vec<f64>,
    /// Levels kept for the slope.
    pub kept: Vec<u32>,
    /// Least-squares slope of `log₂ bias` against `N` over the kept levels.
    pub slope: Option<f64>,
    /// `‖f - P_N f‖²` from quadrature-computed true coefficients.
    pub exact: Vec<f64>,
    /// Least-squares slope of `log₂ exact` against `N`.
    pub exact_slope: Option<f64>,
}

/// Levels above the last requested one used for the true coefficients.
const TRUTH_HEADROOM: u32 = 6;

/// Empirical bias decay from one large sample, next to the quadrature-oracle bias.
///
/// The empirical proxy is kept only while it exceeds its noise floor; with smooth densities
/// the variance dominates already at coarse levels, so the proxy may retain no level at all.
pub fn bias_decay_check(
    model: &DensityModel,
    basis: &WaveletBasis,
    levels: &[u32],
    n_large: usize,
    seed: u64,
) -> Result<BiasDecay> {
    if levels.windows(2).any(|w| w[0] >= w[1]) || levels.is_empty() {
        return Err(Error::Config(
            "levels must be nonempty and strictly ascending",
        ));
    }
    let sample = model.sample(n_large, seed);
    let n = n_large as f64;
    let top = *levels.last().expect("nonempty");
    let pyramid = CoefficientPyramid::from_sample(basis, &sample, top)?;
    let mut out = BiasDecay {
        levels: levels.to_vec(),
        ise: Vec::new(),
        variance: Vec::new(),
        bias: Vec::new(),
        floor: Vec::new(),
        kept: Vec::new(),
        slope: None,
        exact: Vec::new(),
        exact_slope: None,
    };
    let truth = TrueCoefficients::new(model, basis, top + TRUTH_HEADROOM)?;
    for &level in levels {
        let estimate = DensityEstimate::new(basis, &pyramid, level)?;
        let grid = risk_grid(&estimate, model);
        let ise = ise(&estimate, model, &grid)?;
        let moments = second_moments(basis, &sample, level)?;
        let alpha = pyramid.approximation(level)?;
        // Per-coefficient variance of the mean: (E φ² - α²) / (n - 1) with sample moments.
        let per_coeff: Vec<f64> = moments
            .iter()
            .map(|(k, m2)| ((m2 - alpha.get(k).powi(2)) / (n - 1.0)).max(0.0))
            .collect();
        let variance: f64 = per_coeff.iter().sum();
        // Σ_k (α̂_k - α_k)² fluctuates with sd ≈ √2 · ‖Σ‖_F; the diagonal gives a lower bound,
        // doubled for the correlation between neighboring translates.
        let spread = 2.0 * (2.0 * per_coeff.iter().map(|v| v * v).sum::<f64>()).sqrt();
        out.ise.push(ise);
        out.variance.push(variance);
        out.bias.push(ise - variance);
        out.floor.push(3.0 * spread);
        out.exact.push(truth.bias_sq(level)?);
    }
    let points: Vec<(f64, f64)> = out
        .levels
        .iter()
        .zip(out.bias.iter().zip(&out.floor))
        .take_while(|(_, (b, f))| **b > **f)
        .map(|(&l, (b, _))| (l as f64, libm::log2(*b)))
        .collect();
    out.kept = points.iter().map(|(l, _)| *l as u32).collect();
    out.slope = ols_slope(&points);
    let exact: Vec<(f64, f64)> = out
        .levels
        .iter()
        .zip(&out.exact)
        .take_while(|(_, b)| **b > 0.0)
        .map(|(&l, b)| (l as f64, libm::log2(*b)))
        .collect();
    out.exact_slope = ols_slope(&exact);
    Ok(out)
}

/// `(k, (1/n) Σ_i φ_{N,k}(X_i)²)` over the fitted window.
fn second_moments(basis: &WaveletBasis, sample: &[f64], level: u32) -> Result<LevelCoefficients> {
    let scale = f64::exp2i(level as i32);
    let alpha = fit_top_level(basis, sample, level)?;
    let mut out = LevelCoefficients::zeros(alpha.offset, alpha.values.len())?;
    for &x in sample {
        let t = scale * x;
        let (k0, k1) = basis.translates_at(t);
        for k in k0..=k1 {
            out.values[(k - out.offset) as usize] += scale * basis.eval_phi(t - k as f64).powi(2);
        }
    }
    let inv_n = 1.0 / sample.len() as f64;
    out.values.iter_mut().for_each(|v| *v *= inv_n);
    Ok(out)
}

/// Least-squares slope of `y` on `x`; `None` with fewer than two points.
pub fn ols_slope(points: &[(f64, f64)]) -> Option<f64> {
    if points.len() < 2 {
        return None;
    }
    let m = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / m;
    let my = points.iter().map(|p| p.1).sum::<f64>() / m;
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    Some(sxy / sxx)
}

/// Exceedance frequencies of the centered summed coefficient statistics.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ConcentrationCheck {
    pub reps: usize,
    /// `c √(log n (2A+1)² Φ₀² / n)`.
    pub phi_threshold: f64,
    /// `c √(log n (2A+1)² Φ₀² 4^N / n)`.
    pub psi_threshold: f64,
    pub phi_frequency: f64,
    pub psi_frequency: f64,
}

impl ConcentrationCheck {
    pub fn frequency(&self) -> f64 {
        self.phi_frequency.max(self.psi_frequency)
    }
}

/// Frequency over `reps` samples of
/// `|(1/n) Σ_i Σ_k φ_{N,k}(X_i) - E[…]| ≥ c √V_φ` and of the analogous detail statistic
/// `Σ_{ℓ<N} Σ_k ψ_{ℓk}`. Expectations come from trapezoid quadrature against the model pdf.
pub fn concentration_check(
    model: &DensityModel,
    basis: &WaveletBasis,
    level: u32,
    n: usize,
    reps: usize,
    threshold_constant: f64,
    seed: u64,
) -> Result<ConcentrationCheck> {
    if reps == 0 || n < 2 {
        return Err(Error::Config(
            "concentration check needs reps ≥ 1 and n ≥ 2",
        ));
    }
    let phi_stat = |x: f64| summed(basis, level as i32, x, WaveletBasis::eval_phi);
    let psi_stat = |x: f64| {
        (0..level as i32)
            .map(|l| summed(basis, l, x, WaveletBasis::eval_psi))
            .sum::<f64>()
    };

    let (lo, hi) = model.effective_support();
    let grid = UniformGrid::with_step(
        lo,
        hi,
        ((hi - lo) / (1 << 16) as f64).min(f64::exp2i(-(level as i32 + 6))),
    )?;
    let phi_mean = trapezoid_of(&grid, |x| model.pdf(x) * phi_stat(x));
    let psi_mean = trapezoid_of(&grid, |x| model.pdf(x) * psi_stat(x));

    let width = (2 * basis.support_radius() + 1) as f64;
    let base = (n as f64).ln() * width * width * basis.phi0().powi(2) / n as f64;
    let phi_threshold = threshold_constant * base.sqrt();
    let psi_threshold = threshold_constant * (base * f64::exp2i(2 * level as i32)).sqrt();

    let (mut phi_hits, mut psi_hits) = (0usize, 0usize);
    for rep in 0..reps as u64 {
        let sample = model.sample_stream(n, seed, rep);
        let inv_n = 1.0 / n as f64;
        let phi_dev = sample.iter().map(|&x| phi_stat(x)).sum::<f64>() * inv_n - phi_mean;
        let psi_dev = sample.iter().map(|&x| psi_stat(x)).sum::<f64>() * inv_n - psi_mean;
        phi_hits += usize::from(phi_dev.abs() >= phi_threshold);
        psi_hits += usize::from(psi_dev.abs() >= psi_threshold);
    }
    Ok(ConcentrationCheck {
        reps,
        phi_threshold,
        psi_threshold,
        phi_frequency: phi_hits as f64 / reps as f64,
        psi_frequency: psi_hits as f64 / reps as f64,
    })
}

fn summed(
    basis: &WaveletBasis,
    level: i32,
    x: f64,
    generator: fn(&WaveletBasis, f64) -> f64,
) -> f64 {
    let scale = f64::exp2i(level);
    let t = scale * x;
    let (k0, k1) = basis.translates_at(t);
    scale.sqrt()
        * (k0..=k1)
            .map(|k| generator(basis, t - k as f64))
            .sum::<f64>()
}

/// MISE per sample size and the log-log slope.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RateCheck {
    pub reports: Vec<RiskReport>,
    /// OLS slope of `ln MISE` on `ln n`.
    pub slope: f64,
}

impl RateCheck {
    pub fn from_reports(reports: Vec<RiskReport>) -> Result<Self> {
        let points: Vec<(f64, f64)> = reports
            .iter()
            .map(|r| ((r.settings.n as f64).ln(), r.mise_mean.ln()))
            .collect();
        let slope = ols_slope(&points)
            .ok_or(Error::Config("rate check needs at least two sample sizes"))?;
        Ok(Self { reports, slope })
    }
}

pub fn rate_check(
    model: &DensityModel,
    n_list: &[usize],
    cfg: &PcoConfig,
    basis: &WaveletBasis,
    reps: usize,
    seed: u64,
) -> Result<RateCheck> {
    if n_list.len() < 2 {
        return Err(Error::Config("rate check needs at least two sample sizes"));
    }
    let reports = n_list
        .iter()
        .map(|&n| mise_study(model, n, reps, cfg, basis, seed))
        .collect::<Result<Vec<_>>>()?;
    RateCheck::from_reports(reports)
}

/// `ISE(f̂_{N̂}) / min_{N ∈ H} ISE(f̂_N)` for one replication, all ISEs through the
/// coefficient route.
pub fn oracle_ratio(
    model: &DensityModel,
    n: usize,
    cfg: &PcoConfig,
    basis: &WaveletBasis,
    truth: &TrueCoefficients,
    seed: u64,
    rep: u64,
) -> Result<f64> {
    let sample = model.sample_stream(n, seed, rep);
    let (pyramid, report) = fit_and_select(basis, &sample, cfg)?;
    if truth.n_max() < pyramid.n_max() {
        return Err(Error::Config("true coefficients do not reach N_max"));
    }
    let mut best = f64::INFINITY;
    let mut chosen = f64::NAN;
    for c in &report.candidates {
        let value = truth.ise(pyramid.approximation(c.level)?, c.level)?;
        best = best.min(value);
        if c.level == report.selected {
            chosen = value;
        }
    }
    Ok(chosen / best)
}

#[cfg(test)]
mod tests;
