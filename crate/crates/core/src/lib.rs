//! Adaptive wavelet density estimation.
//!
//! Builds linear wavelet projection estimators `f̂_N` at every resolution level from a single
//! top-level fit, then picks the level by penalized comparison to the most overfitted estimator
//! (PCO). The crate is `no_std` and only needs `alloc`; file formats, the CLI and parallel
//! replication live in the companion `wavedens-cli` crate.
//!
//! ```
//! use wavedens::{build_basis, fit_and_select, DensityModel, PcoConfig};
//!
//! let basis = build_basis(4, 10).unwrap();
//! let model = DensityModel::m1();
//! let sample = model.sample(2048, 7);
//! let cfg = PcoConfig::new(10.0, 8).unwrap();
//! let (pyramid, report) = fit_and_select(&basis, &sample, &cfg).unwrap();
//! let estimate = wavedens::DensityEstimate::new(&basis, &pyramid, report.selected).unwrap();
//! assert!(estimate.evaluate(0.0) > 0.2);
//! ```
#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

mod error;
mod linalg;
mod math;

pub mod coefficients;
pub mod estimator;
pub mod grid;
pub mod models;
pub mod pco;
pub mod risk;
pub mod wavelet_basis;

pub use error::{Error, Result};

pub use coefficients::{fit_top_level, pyramid_down, CoefficientPyramid, LevelCoefficients};
pub use estimator::DensityEstimate;
pub use grid::UniformGrid;
pub use models::DensityModel;
pub use pco::{candidate_set, fit_and_select, select, PcoConfig, SelectionReport};
pub use risk::RiskReport;
pub use wavelet_basis::{build_basis, daubechies_filter, WaveletBasis};
