//! Smoke checks of filter algebra, pyramid equivalence and energy balance.

use wavedens::wavelet_basis::MAX_VANISHING_MOMENTS;
use wavedens::{build_basis, daubechies_filter, fit_top_level, CoefficientPyramid, DensityModel};

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

fn check(name: impl Into<String>, passed: bool, detail: String) -> Check {
    Check {
        name: name.into(),
        passed,
        detail,
    }
}

pub fn filter_algebra() -> Vec<Check> {
    (1..=MAX_VANISHING_MOMENTS)
        .map(|v| {
            let Ok(h) = daubechies_filter(v) else {
                return check(format!("filter V={v}"), false, "construction failed".into());
            };
            let sum_err = (h.iter().sum::<f64>() - std::f64::consts::SQRT_2).abs();
            let ortho_err = (0..v)
                .map(|shift| {
                    let dot: f64 = h
                        .iter()
                        .zip(h.iter().skip(2 * shift))
                        .map(|(a, b)| a * b)
                        .sum();
                    (dot - if shift == 0 { 1.0 } else { 0.0 }).abs()
                })
                .fold(0.0, f64::max);
            let worst = sum_err.max(ortho_err);
            check(
                format!("filter V={v}"),
                worst <= 1e-12,
                format!("max error {worst:.2e}"),
            )
        })
        .collect()
}

pub fn pyramid_equivalence() -> Vec<Check> {
    [(1usize, 12u32, 1e-12), (2, 20, 1e-5), (4, 12, 1e-5)]
        .iter()
        .map(|&(v, depth, tol)| {
            let name = format!("pyramid V={v}");
            let Ok(basis) = build_basis(v, depth) else {
                return check(name, false, "basis construction failed".into());
            };
            let mut worst: f64 = 0.0;
            for seed in 0..5 {
                let sample = DensityModel::m1().sample(150, seed);
                let Ok(pyramid) = CoefficientPyramid::from_sample(&basis, &sample, 6) else {
                    return check(name, false, "pyramid failed".into());
                };
                for level in 0..6 {
                    if let (Ok(direct), Ok(down)) = (
                        fit_top_level(&basis, &sample, level),
                        pyramid.approximation(level),
                    ) {
                        worst = worst.max(direct.max_abs_diff(down));
                    }
                }
            }
            check(name, worst <= tol, format!("max diff {worst:.2e}"))
        })
        .collect()
}

pub fn energy_balance() -> Vec<Check> {
    [1usize, 4, 10]
        .iter()
        .map(|&v| {
            let name = format!("energy V={v}");
            let outcome = build_basis(v, 12).and_then(|b| {
                CoefficientPyramid::from_sample(&b, &DensityModel::m3().sample(300, 2), 6)
            });
            match outcome {
                Ok(p) => {
                    let (top, split) = p.energy_balance();
                    let rel = (top - split).abs() / top;
                    check(name, rel <= 1e-10, format!("relative gap {rel:.2e}"))
                }
                Err(e) => check(name, false, e.to_string()),
            }
        })
        .collect()
}

pub fn run_all() -> Vec<Check> {
    let mut out = filter_algebra();
    out.extend(pyramid_equivalence());
    out.extend(energy_balance());
    out
}
