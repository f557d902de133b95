//! Experiment drivers. Replications run on the ambient rayon pool and are reduced in
//! replication order, so results do not depend on the thread count.

use std::env;

use anyhow::{Context, Result};
use rayon::prelude::*;
use wavedens::estimator::clip_renormalize;
use wavedens::risk::{self, RateCheck, ReplicationOutcome, StudySettings};
use wavedens::{
    build_basis, fit_and_select, DensityEstimate, DensityModel, RiskReport, SelectionReport,
    UniformGrid, WaveletBasis,
};

use crate::config::ExperimentConfig;
use crate::UsageError;

pub const THREADS_ENV: &str = "PCO_THREADS";
pub const FIGURE_GRID_NODES: usize = 1024;
pub const DEFAULT_RATE_SIZES: [usize; 6] = [1 << 9, 1 << 10, 1 << 11, 1 << 12, 1 << 13, 1 << 14];

/// Pool sized by `PCO_THREADS` when set, rayon's default otherwise.
pub fn thread_pool() -> Result<rayon::ThreadPool, UsageError> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Ok(raw) = env::var(THREADS_ENV) {
        let threads: usize = raw.trim().parse().ok().filter(|&t| t > 0).ok_or_else(|| {
            UsageError(format!(
                "{THREADS_ENV} must be a positive integer, got {raw:?}"
            ))
        })?;
        builder = builder.num_threads(threads);
    }
    builder
        .build()
        .map_err(|e| UsageError(format!("thread pool: {e}")))
}

pub fn basis(cfg: &ExperimentConfig) -> Result<WaveletBasis> {
    build_basis(cfg.vanishing_moments, cfg.cascade_depth).context("building wavelet basis")
}

pub fn study(
    cfg: &ExperimentConfig,
    model: &DensityModel,
    basis: &WaveletBasis,
) -> Result<RiskReport> {
    let pco = cfg.pco()?;
    let outcomes: Vec<ReplicationOutcome> = (0..cfg.reps as u64)
        .into_par_iter()
        .map(|rep| risk::replicate(model, cfg.n, &pco, basis, cfg.seed, rep))
        .collect::<Result<_, _>>()
        .with_context(|| format!("MISE study for {model}"))?;
    let settings = StudySettings::new(model, cfg.n, cfg.reps, &pco, basis, cfg.seed);
    Ok(RiskReport::from_outcomes(settings, &outcomes)?)
}

pub fn table_models() -> [DensityModel; 3] {
    [DensityModel::m1(), DensityModel::m2(), DensityModel::m3()]
}

/// One report per benchmark model; the configured model is ignored.
pub fn table1(cfg: &ExperimentConfig) -> Result<Vec<RiskReport>> {
    let basis = basis(cfg)?;
    table_models()
        .iter()
        .map(|m| study(cfg, m, &basis))
        .collect()
}

#[derive(Debug, Clone)]
pub struct RunOutput {
    pub report: RiskReport,
    /// Selection details of replication 0.
    pub selection: SelectionReport,
    /// `(x, f̂(x), f(x))` for replication 0 on the estimate's default grid, when requested.
    pub grid: Option<Curve>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Curve {
    pub x: Vec<f64>,
    pub estimate: Vec<f64>,
    pub truth: Vec<f64>,
}

pub fn run(cfg: &ExperimentConfig) -> Result<RunOutput> {
    let basis = basis(cfg)?;
    let report = study(cfg, &cfg.model, &basis)?;
    let sample = cfg.model.sample_stream(cfg.n, cfg.seed, 0);
    let (pyramid, selection) = fit_and_select(&basis, &sample, &cfg.pco()?)?;
    let grid = if cfg.emit_grid {
        let estimate = DensityEstimate::new(&basis, &pyramid, selection.selected)?;
        let grid = estimate.default_grid();
        let mut values = estimate.evaluate_grid(&grid);
        if cfg.clip_renormalize {
            clip_renormalize(&grid, &mut values);
        }
        let x: Vec<f64> = grid.nodes().collect();
        let truth = x.iter().map(|&t| cfg.model.pdf(t)).collect();
        Some(Curve {
            x,
            estimate: values,
            truth,
        })
    } else {
        None
    };
    Ok(RunOutput {
        report,
        selection,
        grid,
    })
}

#[derive(Debug, Clone)]
pub struct FigureData {
    pub model: DensityModel,
    /// Mean estimate over replications against the true density.
    pub curve: Curve,
    pub report: RiskReport,
}

/// Mean reconstruction over `cfg.reps` replications on a uniform grid spanning the model's
/// effective support, plus the per-replication ISE values.
pub fn figure(
    cfg: &ExperimentConfig,
    model: &DensityModel,
    basis: &WaveletBasis,
) -> Result<FigureData> {
    let pco = cfg.pco()?;
    let (lo, hi) = model.effective_support();
    let grid = UniformGrid::new(lo, hi, FIGURE_GRID_NODES)?;
    let runs: Vec<(Vec<f64>, ReplicationOutcome)> = (0..cfg.reps as u64)
        .into_par_iter()
        .map(|rep| -> Result<_> {
            let sample = model.sample_stream(cfg.n, cfg.seed, rep);
            let (pyramid, selection) = fit_and_select(basis, &sample, &pco)?;
            let estimate = DensityEstimate::new(basis, &pyramid, selection.selected)?;
            let ise = risk::ise(&estimate, model, &risk::risk_grid(&estimate, model))?;
            let mut values = estimate.evaluate_grid(&grid);
            if cfg.clip_renormalize {
                clip_renormalize(&grid, &mut values);
            }
            Ok((
                values,
                ReplicationOutcome {
                    ise,
                    selected: selection.selected,
                },
            ))
        })
        .collect::<Result<_>>()?;
    let mut mean = vec![0.0; grid.len()];
    for (values, _) in &runs {
        mean.iter_mut().zip(values).for_each(|(m, v)| *m += v);
    }
    let inv = 1.0 / runs.len() as f64;
    mean.iter_mut().for_each(|m| *m *= inv);
    let x: Vec<f64> = grid.nodes().collect();
    let truth = x.iter().map(|&t| model.pdf(t)).collect();
    let outcomes: Vec<ReplicationOutcome> = runs.into_iter().map(|(_, o)| o).collect();
    let settings = StudySettings::new(model, cfg.n, cfg.reps, &pco, basis, cfg.seed);
    Ok(FigureData {
        model: *model,
        curve: Curve {
            x,
            estimate: mean,
            truth,
        },
        report: RiskReport::from_outcomes(settings, &outcomes)?,
    })
}

pub fn figures(cfg: &ExperimentConfig) -> Result<Vec<FigureData>> {
    let basis = basis(cfg)?;
    table_models()
        .iter()
        .map(|m| figure(cfg, m, &basis))
        .collect()
}

/// MISE of the configured model at each sample size and the log-log slope.
pub fn rates(cfg: &ExperimentConfig, sizes: &[usize]) -> Result<RateCheck> {
    if sizes.len() < 2 {
        return Err(UsageError("rates needs at least two sample sizes".into()).into());
    }
    let basis = basis(cfg)?;
    let reports = sizes
        .iter()
        .map(|&n| {
            let at_n = ExperimentConfig { n, ..cfg.clone() };
            at_n.validate()?;
            study(&at_n, &cfg.model, &basis)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(RateCheck::from_reports(reports)?)
}
