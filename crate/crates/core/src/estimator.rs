//! Pointwise and grid evaluation of the projection estimator `f̂_N`.

use alloc::vec::Vec;

use crate::coefficients::{CoefficientPyramid, LevelCoefficients};
use crate::error::{Error, Result};
use crate::grid::UniformGrid;
use crate::math::FloatExt;
use crate::wavelet_basis::WaveletBasis;

/// Nodes in the default plotting and quadrature grid.
pub const DEFAULT_GRID_NODES: usize = 1 << 12;

/// `f̂_N(x) = Σ_k α̂_{N,k} φ_{N,k}(x)` for a fitted pyramid.
///
/// Projection estimators are not constrained to be nonnegative or to integrate to one.
#[derive(Debug, Clone, Copy)]
pub struct DensityEstimate<'a> {
    basis: &'a WaveletBasis,
    pyramid: &'a CoefficientPyramid,
    level: u32,
}

impl<'a> DensityEstimate<'a> {
    pub fn new(
        basis: &'a WaveletBasis,
        pyramid: &'a CoefficientPyramid,
        level: u32,
    ) -> Result<Self> {
        if level > pyramid.n_max() {
            return Err(Error::LevelRange {
                level,
                max: pyramid.n_max(),
            });
        }
        Ok(Self {
            basis,
            pyramid,
            level,
        })
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn coefficients(&self) -> &'a LevelCoefficients {
        // level was checked in `new`
        self.pyramid
            .approximation(self.level)
            .expect("level within pyramid")
    }

    pub fn evaluate(&self, x: f64) -> f64 {
        expand(
            self.basis,
            self.coefficients(),
            self.level as i32,
            x,
            WaveletBasis::eval_phi,
        )
    }

    /// Same function through `Σ_k α̂_{0,k} φ(x-k) + Σ_{ℓ<N} Σ_k β̂_{ℓk} ψ_{ℓk}(x)`.
    pub fn evaluate_details_form(&self, x: f64) -> f64 {
        let mut total = expand(
            self.basis,
            self.pyramid.coarse_alpha(),
            0,
            x,
            WaveletBasis::eval_phi,
        );
        for level in 0..self.level {
            let details = self.pyramid.details(level).expect("level below n_max");
            total += expand(self.basis, details, level as i32, x, WaveletBasis::eval_psi);
        }
        total
    }

    pub fn evaluate_grid(&self, grid: &UniformGrid) -> Vec<f64> {
        grid.map(|x| self.evaluate(x))
    }

    /// Like [`evaluate_grid`](Self::evaluate_grid) but validates explicit nodes first.
    pub fn evaluate_nodes(&self, nodes: &[f64]) -> Result<Vec<f64>> {
        let grid = UniformGrid::from_nodes(nodes)?;
        Ok(self.evaluate_grid(&grid))
    }

    /// Closed interval outside which `f̂_N` vanishes identically.
    pub fn support(&self) -> (f64, f64) {
        let (k0, k1) = self.coefficients().window();
        let (lo, hi) = self.basis.support();
        let scale = f64::exp2i(-(self.level as i32));
        ((k0 + lo) as f64 * scale, (k1 + hi) as f64 * scale)
    }

    /// `2^12` nodes over the data range padded by the kernel reach `(2V-1)·2^{-N}`,
    /// which covers the whole support of `f̂_N`.
    pub fn default_grid(&self) -> UniformGrid {
        let (lo, hi) = self.pyramid.data_range();
        let pad = (self.basis.filter_len() - 1) as f64 * f64::exp2i(-(self.level as i32));
        UniformGrid::new(lo - pad, hi + pad, DEFAULT_GRID_NODES)
            .expect("padded data range is a nonempty interval")
    }
}

fn expand(
    basis: &WaveletBasis,
    coeffs: &LevelCoefficients,
    level: i32,
    x: f64,
    generator: fn(&WaveletBasis, f64) -> f64,
) -> f64 {
    let scale = f64::exp2i(level);
    let t = scale * x;
    let (k0, k1) = basis.translates_at(t);
    let sum: f64 = (k0..=k1)
        .map(|k| coeffs.get(k) * generator(basis, t - k as f64))
        .sum();
    scale.sqrt() * sum
}

/// Plot-only post-processing: clips negative values and rescales to unit trapezoid mass.
/// Never part of the risk pipeline.
pub fn clip_renormalize(grid: &UniformGrid, values: &mut [f64]) {
    values.iter_mut().for_each(|v| *v = v.max(0.0));
    let mass = grid.trapezoid(values);
    if mass > 0.0 {
        values.iter_mut().for_each(|v| *v /= mass);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wavelet_basis::build_basis;

    #[test]
    fn haar_two_point_estimates() {
        let b = build_basis(1, 10).unwrap();
        let p = CoefficientPyramid::from_sample(&b, &[0.25, 0.75], 1).unwrap();
        for level in [0, 1] {
            let e = DensityEstimate::new(&b, &p, level).unwrap();
            for x in [0.0, 0.1, 0.5, 0.99] {
                assert!((e.evaluate(x) - 1.0).abs() < 1e-15, "N={level} x={x}");
                assert!((e.evaluate_details_form(x) - 1.0).abs() < 1e-15);
            }
            assert_eq!(e.evaluate(1.0), 0.0);
            assert_eq!(e.evaluate(-0.01), 0.0);
        }
        assert!(DensityEstimate::new(&b, &p, 2).is_err());
    }

    #[test]
    fn haar_grid_example() {
        let b = build_basis(1, 10).unwrap();
        let p = CoefficientPyramid::from_sample(&b, &[0.25, 0.75], 1).unwrap();
        let e = DensityEstimate::new(&b, &p, 0).unwrap();
        let values = e.evaluate_nodes(&[0.0, 0.25, 0.5, 0.75, 1.0]).unwrap();
        let expected = [1.0, 1.0, 1.0, 1.0, 0.0];
        assert!(values
            .iter()
            .zip(expected)
            .all(|(a, b)| (a - b).abs() < 1e-15));
        assert_eq!(e.evaluate_nodes(&[5.0, 6.0, 7.0]).unwrap(), [0.0, 0.0, 0.0]);
        assert!(matches!(
            e.evaluate_nodes(&[0.0, 0.1, 0.5]),
            Err(Error::Grid(_))
        ));
    }

    #[test]
    fn vanishes_outside_support() {
        let b = build_basis(4, 10).unwrap();
        let sample = [-0.4, 0.0, 0.3, 1.2];
        let p = CoefficientPyramid::from_sample(&b, &sample, 3).unwrap();
        for level in 0..=3 {
            let e = DensityEstimate::new(&b, &p, level).unwrap();
            // The projection kernel K_N(x, y) reaches |x - y| < (2V - 1)·2^-N.
            let pad = (b.filter_len() - 1) as f64 * f64::exp2i(-(level as i32));
            assert_eq!(e.evaluate(-0.4 - pad - 1e-9), 0.0);
            assert_eq!(e.evaluate(1.2 + pad + 1e-9), 0.0);
            let (lo, hi) = e.support();
            assert_eq!(e.evaluate(lo - 1e-9), 0.0);
            assert_eq!(e.evaluate(hi + 1e-9), 0.0);
        }
    }

    #[test]
    fn clip_renormalize_gives_unit_mass() {
        let g = UniformGrid::new(0.0, 1.0, 5).unwrap();
        let mut v = [-1.0, 2.0, 2.0, 2.0, -1.0];
        clip_renormalize(&g, &mut v);
        assert!(v.iter().all(|&x| x >= 0.0));
        assert!((g.trapezoid(&v) - 1.0).abs() < 1e-15);
    }
}
