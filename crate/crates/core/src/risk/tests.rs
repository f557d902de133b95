use super::*;
use crate::wavelet_basis::build_basis;

#[test]
fn ise_of_zero_estimate_is_beta_norm() {
    // Disjoint supports: the ISE is ‖f̂‖² + ‖f‖², with ‖f̂‖² = 2 for two Haar bins of height 2.
    let b = build_basis(1, 10).unwrap();
    let p = CoefficientPyramid::from_sample(&b, &[100.0, 100.5], 2).unwrap();
    let e = DensityEstimate::new(&b, &p, 2).unwrap();
    let grid = UniformGrid::new(-1.0, 102.0, 1 << 20).unwrap();
    let value = ise(&e, &DensityModel::m3(), &grid).unwrap();
    assert!(
        (value - 2.0 - 20.0 / 11.0).abs() < 4.0 * grid.step(),
        "{value}"
    );
}

#[test]
fn haar_uniform_is_exact() {
    let b = build_basis(1, 10).unwrap();
    let p = CoefficientPyramid::from_sample(&b, &[0.25, 0.75], 1).unwrap();
    let e = DensityEstimate::new(&b, &p, 0).unwrap();
    let uniform = DensityModel::beta(1.0, 1.0).unwrap();
    let grid = UniformGrid::new(-1.0, 2.0, 3 * 1024 + 1).unwrap();
    // Only the jump nodes at 0 and 1 contribute.
    assert!(ise(&e, &uniform, &grid).unwrap() <= grid.step());
}

#[test]
fn ise_rejects_short_grid() {
    let b = build_basis(2, 10).unwrap();
    let p = CoefficientPyramid::from_sample(&b, &[0.0, 0.5], 2).unwrap();
    let e = DensityEstimate::new(&b, &p, 2).unwrap();
    let grid = UniformGrid::new(-2.0, 2.0, 1000).unwrap();
    assert!(matches!(
        ise(&e, &DensityModel::m1(), &grid),
        Err(Error::Coverage(_))
    ));
}

#[test]
fn report_aggregation() {
    let b = build_basis(1, 8).unwrap();
    let cfg = PcoConfig::default();
    let settings = StudySettings::new(&DensityModel::m1(), 10, 3, &cfg, &b, 1);
    let outcomes = [
        ReplicationOutcome {
            ise: 1.0,
            selected: 2,
        },
        ReplicationOutcome {
            ise: 2.0,
            selected: 1,
        },
        ReplicationOutcome {
            ise: 6.0,
            selected: 2,
        },
    ];
    let r = RiskReport::from_outcomes(settings.clone(), &outcomes).unwrap();
    assert_eq!(r.mise_mean, 3.0);
    assert!((r.mise_sd.unwrap() - 7.0f64.sqrt()).abs() < 1e-15);
    assert_eq!(r.histogram, [(1, 1), (2, 2)]);
    assert_eq!(r.selected_mode(), 2);
    assert_eq!(r.quartiles, [1.0, 1.5, 2.0, 4.0, 6.0]);

    let single = RiskReport::from_outcomes(settings.clone(), &outcomes[..1]).unwrap();
    assert_eq!(single.mise_sd, None);
    assert_eq!(single.mise_mean, 1.0);
    assert!(RiskReport::from_outcomes(settings, &[]).is_err());
}

#[test]
fn variance_bound_degenerate_haar() {
    let b = build_basis(1, 10).unwrap();
    let uniform = DensityModel::beta(1.0, 1.0).unwrap();
    let check = variance_bound_check(&uniform, &b, 0, 200, 100, 3).unwrap();
    assert!(check.empirical < 1e-25);
    assert!((check.bound - 9.0 / 200.0).abs() < 1e-15);
    let next = variance_bound_check(&uniform, &b, 1, 200, 100, 3).unwrap();
    assert!((next.bound - 2.0 * check.bound).abs() < 1e-15);
}

#[test]
fn concentration_extremes() {
    let b = build_basis(2, 10).unwrap();
    let m = DensityModel::m1();
    let zero = concentration_check(&m, &b, 3, 256, 20, 0.0, 9).unwrap();
    assert_eq!(zero.phi_frequency, 1.0);
    assert_eq!(zero.psi_frequency, 1.0);
    let huge = concentration_check(&m, &b, 3, 256, 20, 1e3, 9).unwrap();
    assert_eq!(huge.frequency(), 0.0);
}

#[test]
fn truth_routes_agree() {
    let b = build_basis(4, 12).unwrap();
    let m = DensityModel::m1();
    let truth = TrueCoefficients::new(&m, &b, 10).unwrap();
    for level in [0, 2, 4] {
        let direct = TrueCoefficients::direct(&m, &b, level).unwrap();
        let diff = direct.max_abs_diff(truth.level(level).unwrap());
        assert!(diff < 1e-9, "N={level} {diff:e}");
    }
    assert!(truth.bias_sq(10).unwrap() < 1e-12);
}

#[test]
fn ols_slope_of_a_line() {
    let pts = [(1.0, 3.0), (2.0, 1.0), (3.0, -1.0)];
    assert!((ols_slope(&pts).unwrap() + 2.0).abs() < 1e-15);
    assert_eq!(ols_slope(&pts[..1]), None);
}

#[test]
fn bias_vanishes_for_haar_uniform() {
    let b = build_basis(1, 10).unwrap();
    let truth = TrueCoefficients::new(&DensityModel::beta(1.0, 1.0).unwrap(), &b, 6).unwrap();
    for level in 0..=6 {
        assert!(truth.bias_sq(level).unwrap() < 1e-12);
    }
}

#[test]
fn haar_bias_of_smooth_density_quarters() {
    let b = build_basis(1, 12).unwrap();
    let truth = TrueCoefficients::new(&DensityModel::m1(), &b, 12).unwrap();
    for level in 2..6 {
        let ratio = truth.bias_sq(level).unwrap() / truth.bias_sq(level + 1).unwrap();
        assert!((ratio - 4.0).abs() < 0.1, "{level}: {ratio}");
    }
}
