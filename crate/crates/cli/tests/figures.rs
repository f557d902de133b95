use wavedens::{build_basis, fit_and_select, DensityEstimate, UniformGrid};
use wavedens_cli::config::ExperimentConfig;
use wavedens_cli::experiments::{figure, FIGURE_GRID_NODES};

#[test]
fn m1_mean_reconstruction_tracks_truth() {
    let cfg = ExperimentConfig::default();
    let basis = build_basis(cfg.vanishing_moments, cfg.cascade_depth).unwrap();
    let fig = figure(&cfg, &cfg.model, &basis).unwrap();
    let worst = fig
        .curve
        .estimate
        .iter()
        .zip(&fig.curve.truth)
        .map(|(e, t)| (e - t).abs())
        .fold(0.0, f64::max);
    assert!(worst <= 0.05, "{worst}");
    assert_eq!(fig.curve.x.len(), FIGURE_GRID_NODES);
}

#[test]
fn single_replication_column_is_the_estimate() {
    let cfg = ExperimentConfig {
        reps: 1,
        n: 700,
        model: "m3".parse().unwrap(),
        ..Default::default()
    };
    let basis = build_basis(cfg.vanishing_moments, cfg.cascade_depth).unwrap();
    let fig = figure(&cfg, &cfg.model, &basis).unwrap();
    let sample = cfg.model.sample_stream(cfg.n, cfg.seed, 0);
    let (pyramid, report) = fit_and_select(&basis, &sample, &cfg.pco().unwrap()).unwrap();
    let estimate = DensityEstimate::new(&basis, &pyramid, report.selected).unwrap();
    let (lo, hi) = cfg.model.effective_support();
    let direct = estimate.evaluate_grid(&UniformGrid::new(lo, hi, FIGURE_GRID_NODES).unwrap());
    assert_eq!(fig.curve.estimate, direct);
}
