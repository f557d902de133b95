//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any fails.

use std::f64::consts::SQRT_2;
use std::fs;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use wavedens::risk::{self, TrueCoefficients};
use wavedens::{
    build_basis, daubechies_filter, fit_and_select, fit_top_level, CoefficientPyramid,
    DensityEstimate, DensityModel, PcoConfig, RiskReport, UniformGrid,
};
use wavedens_cli::config::ExperimentConfig;
use wavedens_cli::{experiments, output};

struct Outcome {
    passed: bool,
    detail: String,
}

fn verdict(passed: bool, detail: String) -> Outcome {
    Outcome { passed, detail }
}

fn uniform_points(count: usize, lo: f64, hi: f64, seed: u64) -> Vec<f64> {
    let unit = DensityModel::beta(1.0, 1.0).unwrap();
    unit.sample(count, seed)
        .into_iter()
        .map(|u| lo + (hi - lo) * u)
        .collect()
}

fn table1_reports() -> Vec<RiskReport> {
    experiments::table1(&ExperimentConfig::default()).expect("table1")
}

fn table_ranges(reports: &[RiskReport]) -> Outcome {
    let ranges = [(1.3e-4, 1.2e-3), (1.7e-4, 1.6e-3), (1.2e-3, 1.05e-2)];
    let mut ok = true;
    let mut parts = Vec::new();
    for (r, (lo, hi)) in reports.iter().zip(ranges) {
        let inside = (lo..=hi).contains(&r.mise_mean);
        ok &= inside;
        parts.push(format!(
            "{} {:.3e} in [{lo:.1e}, {hi:.2e}] {}",
            r.settings.model,
            r.mise_mean,
            if inside { "ok" } else { "OUT" }
        ));
    }
    verdict(ok, parts.join("; "))
}

fn modal_levels(reports: &[RiskReport]) -> Outcome {
    let allowed: [&[u32]; 3] = [&[1, 2], &[1, 2], &[2, 3, 4]];
    let mut ok = true;
    let mut parts = Vec::new();
    for (r, allowed) in reports.iter().zip(allowed) {
        let mode = r.selected_mode();
        let inside = allowed.contains(&mode);
        ok &= inside;
        parts.push(format!(
            "{} mode {mode} in {allowed:?} {}",
            r.settings.model,
            if inside { "ok" } else { "OUT" }
        ));
    }
    verdict(ok, parts.join("; "))
}

fn filter_algebra() -> Outcome {
    let mut worst: f64 = 0.0;
    for v in 1..=10 {
        let h = daubechies_filter(v).unwrap();
        worst = worst.max((h.iter().sum::<f64>() - SQRT_2).abs());
        for shift in 0..v {
            let dot: f64 = h.iter().zip(&h[2 * shift..]).map(|(a, b)| a * b).sum();
            worst = worst.max((dot - if shift == 0 { 1.0 } else { 0.0 }).abs());
        }
    }
    verdict(
        worst <= 1e-12,
        format!("max error {worst:.2e} over V=1..10"),
    )
}

fn pyramid_equivalence() -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    // D4 is only Hölder-0.55; its table needs depth 20 for interpolation error below 1e-5.
    for (v, depth, tol) in [(1usize, 12u32, 1e-12), (2, 20, 1e-5), (4, 12, 1e-5)] {
        let basis = build_basis(v, depth).unwrap();
        let mut worst: f64 = 0.0;
        for seed in 0..20u64 {
            let n = 20 + (seed as usize * 37) % 180;
            let sample = uniform_points(n, -3.0, 3.0, 1000 + seed);
            let n_max = 1 + (seed % 6) as u32;
            let pyramid = CoefficientPyramid::from_sample(&basis, &sample, n_max).unwrap();
            for level in 0..n_max {
                let direct = fit_top_level(&basis, &sample, level).unwrap();
                worst = worst.max(direct.max_abs_diff(pyramid.approximation(level).unwrap()));
            }
        }
        ok &= worst <= tol;
        parts.push(format!("V={v} {worst:.2e} (tol {tol:.0e})"));
    }
    verdict(ok, parts.join("; "))
}

fn quadrature_distance(
    basis: &wavedens::WaveletBasis,
    pyramid: &CoefficientPyramid,
    level: u32,
) -> f64 {
    let top = DensityEstimate::new(basis, pyramid, pyramid.n_max()).unwrap();
    let coarse = DensityEstimate::new(basis, pyramid, level).unwrap();
    let (a, b) = coarse.support();
    let (c, d) = top.support();
    let step = f64::powi(2.0, -(pyramid.n_max() as i32 + 8));
    let grid = UniformGrid::with_step(a.min(c), b.max(d), step).unwrap();
    let diff: Vec<f64> = grid
        .nodes()
        .map(|x| (top.evaluate(x) - coarse.evaluate(x)).powi(2))
        .collect();
    grid.trapezoid(&diff)
}

fn parseval() -> Outcome {
    let mut energy_gap: f64 = 0.0;
    let mut distance_gap: f64 = 0.0;
    for i in 0..20u64 {
        let v = [1usize, 4, 10][(i % 3) as usize];
        let basis = build_basis(v, 12).unwrap();
        let sample = DensityModel::m1().sample(100 + 10 * i as usize, 2000 + i);
        let n_max = 3 + (i % 4) as u32;
        let pyramid = CoefficientPyramid::from_sample(&basis, &sample, n_max).unwrap();
        let (top, split) = pyramid.energy_balance();
        energy_gap = energy_gap.max((top - split).abs() / top);
        let level = (i % n_max as u64) as u32;
        let coefficient = pyramid.distance_sq(level).unwrap();
        let quadrature = quadrature_distance(&basis, &pyramid, level);
        distance_gap = distance_gap.max((coefficient - quadrature).abs() / coefficient);
    }
    verdict(
        energy_gap <= 1e-10 && distance_gap <= 1e-3,
        format!("energy relative gap {energy_gap:.2e} (tol 1e-10); distance_sq vs quadrature {distance_gap:.2e} (tol 1e-3)"),
    )
}

fn overlap_bounds() -> Outcome {
    let points = uniform_points(10_000, -20.0, 20.0, 31);
    let mut violations = 0usize;
    for v in [1, 2, 4, 10] {
        let b = build_basis(v, 12).unwrap();
        let width = (2 * b.support_radius() + 1) as f64;
        let phi_bound = SQRT_2 * width * b.phi_sup();
        for &x in &points {
            violations += usize::from(b.overlap_sum(x) > phi_bound);
            for j in 0..=6 {
                let bound = width * b.psi_sup() * f64::powi(2.0, j).sqrt();
                violations += usize::from(b.overlap_sum_psi(j, x) > bound);
            }
        }
    }
    verdict(
        violations == 0,
        format!("{violations} violations over 10000 points, V in {{1,2,4,10}}, j <= 6"),
    )
}

fn variance_bound() -> Outcome {
    let basis = build_basis(10, 12).unwrap();
    let mut violations = 0;
    let mut parts = Vec::new();
    for level in 1..=5 {
        let c =
            risk::variance_bound_check(&DensityModel::m1(), &basis, level, 512, 500, 77).unwrap();
        violations += usize::from(c.empirical > c.bound);
        parts.push(format!("N={level} {:.2e}<={:.2e}", c.empirical, c.bound));
    }
    verdict(violations == 0, parts.join(" "))
}

fn bias_decay() -> Outcome {
    let basis = build_basis(4, 12).unwrap();
    let d =
        risk::bias_decay_check(&DensityModel::m1(), &basis, &[1, 2, 3, 4, 5], 1 << 17, 5).unwrap();
    let slope = d.exact_slope.unwrap_or(f64::NAN);
    let exact: Vec<String> = d.exact.iter().map(|b| format!("{b:.1e}")).collect();
    let proxy = match d.slope {
        Some(s) => format!("empirical proxy slope {s:.2} over levels {:?}", d.kept),
        None => format!(
            "empirical proxy below its noise floor at every level (first: {:.1e} vs floor {:.1e})",
            d.bias[0], d.floor[0]
        ),
    };
    verdict(
        slope <= -2.0,
        format!(
            "quadrature-oracle slope {slope:.2} (bias {}); {proxy}",
            exact.join(", ")
        ),
    )
}

fn concentration() -> Outcome {
    let basis = build_basis(10, 12).unwrap();
    let reps = 2000;
    let c = risk::concentration_check(&DensityModel::m1(), &basis, 3, 1024, reps, 4.0, 3).unwrap();
    let budget = 0.002 + 3.0 * (0.002 * 0.998 / reps as f64).sqrt();
    verdict(
        c.frequency() <= budget,
        format!(
            "phi {:.4} psi {:.4} budget {budget:.4}",
            c.phi_frequency, c.psi_frequency
        ),
    )
}

fn rate() -> Outcome {
    let start = Instant::now();
    let cfg = ExperimentConfig {
        reps: 20,
        ..Default::default()
    };
    let rates = experiments::rates(&cfg, &experiments::DEFAULT_RATE_SIZES).unwrap();
    let elapsed = start.elapsed();
    let mise: Vec<String> = rates
        .reports
        .iter()
        .map(|r| format!("{:.2e}", r.mise_mean))
        .collect();
    verdict(
        rates.slope <= -0.6 && elapsed <= Duration::from_secs(900),
        format!(
            "slope {:.3} (MISE {}) in {:.1}s",
            rates.slope,
            mise.join(", "),
            elapsed.as_secs_f64()
        ),
    )
}

fn oracle_regret() -> Outcome {
    let basis = build_basis(10, 12).unwrap();
    let cfg = PcoConfig::default();
    let model = DensityModel::m1();
    let n = 4096;
    let n_max = *cfg.candidates(n).unwrap().last().unwrap();
    let truth = TrueCoefficients::new(&model, &basis, n_max).unwrap();
    let mut ratios: Vec<f64> = (0..50)
        .map(|rep| risk::oracle_ratio(&model, n, &cfg, &basis, &truth, 11, rep).unwrap())
        .collect();
    ratios.sort_by(f64::total_cmp);
    let median = 0.5 * (ratios[24] + ratios[25]);
    // Cross-check the coefficient-route ISE against grid quadrature on one replication.
    let sample = model.sample_stream(n, 11, 0);
    let (pyramid, report) = fit_and_select(&basis, &sample, &cfg).unwrap();
    let estimate = DensityEstimate::new(&basis, &pyramid, report.selected).unwrap();
    let grid_ise = risk::ise(&estimate, &model, &risk::risk_grid(&estimate, &model)).unwrap();
    let coef_ise = truth
        .ise(
            pyramid.approximation(report.selected).unwrap(),
            report.selected,
        )
        .unwrap();
    let agree = (grid_ise - coef_ise).abs() <= 1e-3 * grid_ise;
    verdict(
        median <= 3.0 && agree,
        format!(
            "median ratio {median:.3}, max {:.3}; ISE routes {grid_ise:.4e} vs {coef_ise:.4e}",
            ratios[49]
        ),
    )
}

fn determinism(first: &[RiskReport]) -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    output::write_table1(&a, first).unwrap();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(3)
        .build()
        .unwrap();
    let second = pool.install(table1_reports);
    output::write_table1(&b, &second).unwrap();
    let same = fs::read(a.join("table1.csv")).unwrap() == fs::read(b.join("table1.csv")).unwrap();
    verdict(
        same,
        format!(
            "table1.csv {} across runs with different thread counts",
            if same { "identical" } else { "DIFFERS" }
        ),
    )
}

fn main() -> ExitCode {
    let mut failures = 0;
    let mut report = |id: u32, name: &str, outcome: Outcome, elapsed: Duration| {
        failures += usize::from(!outcome.passed);
        println!(
            "{} {id:>2} {name:<24} {} [{:.1}s]",
            if outcome.passed { "PASS" } else { "FAIL" },
            outcome.detail,
            elapsed.as_secs_f64()
        );
    };
    let timed = |f: &dyn Fn() -> Outcome| {
        let start = Instant::now();
        let outcome = f();
        (outcome, start.elapsed())
    };

    let start = Instant::now();
    let reports = table1_reports();
    let table_time = start.elapsed();
    let mut table = table_ranges(&reports);
    table.detail.push_str(&format!(
        "; runtime {:.1}s (target 300s)",
        table_time.as_secs_f64()
    ));
    table.passed &= table_time <= Duration::from_secs(300);
    report(1, "table1 mise", table, table_time);
    report(2, "selected levels", modal_levels(&reports), Duration::ZERO);

    let checks: [(u32, &str, &dyn Fn() -> Outcome); 9] = [
        (3, "filter algebra", &filter_algebra),
        (4, "pyramid equivalence", &pyramid_equivalence),
        (5, "energy and distance", &parseval),
        (6, "overlap bounds", &overlap_bounds),
        (7, "variance bound", &variance_bound),
        (8, "bias decay", &bias_decay),
        (9, "concentration", &concentration),
        (10, "rate slope", &rate),
        (11, "oracle regret", &oracle_regret),
    ];
    for (id, name, check) in checks {
        let (outcome, elapsed) = timed(check);
        report(id, name, outcome, elapsed);
    }
    let (outcome, elapsed) = timed(&|| determinism(&reports));
    report(12, "determinism", outcome, elapsed);

    println!("{} of 12 criteria failed", failures);
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
