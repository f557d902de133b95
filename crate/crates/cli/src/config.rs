//! Experiment settings: defaults, TOML files, validation.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use wavedens::wavelet_basis::{MAX_CASCADE_DEPTH, MIN_CASCADE_DEPTH};
use wavedens::{DensityModel, PcoConfig};

use crate::UsageError;

pub const DEFAULT_N: usize = 4096;
pub const DEFAULT_REPS: usize = 50;
pub const DEFAULT_LAMBDA: f64 = 10.0;
pub const DEFAULT_VANISHING_MOMENTS: usize = 10;
pub const DEFAULT_LEVEL_CAP: u32 = 15;
pub const DEFAULT_CASCADE_DEPTH: u32 = 12;
pub const DEFAULT_SEED: u64 = 20240101;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(with = "model_spec")]
    pub model: DensityModel,
    pub n: usize,
    pub reps: usize,
    pub lambda: f64,
    pub vanishing_moments: usize,
    pub level_cap: u32,
    pub cascade_depth: u32,
    pub seed: u64,
    pub out: PathBuf,
    /// Also write the grid evaluation of the first replication's estimate.
    pub emit_grid: bool,
    /// Clip negative values and renormalize plotted curves. Risk numbers always use the raw estimate.
    pub clip_renormalize: bool,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            model: DensityModel::m1(),
            n: DEFAULT_N,
            reps: DEFAULT_REPS,
            lambda: DEFAULT_LAMBDA,
            vanishing_moments: DEFAULT_VANISHING_MOMENTS,
            level_cap: DEFAULT_LEVEL_CAP,
            cascade_depth: DEFAULT_CASCADE_DEPTH,
            seed: DEFAULT_SEED,
            out: PathBuf::from("out"),
            emit_grid: false,
            clip_renormalize: false,
        }
    }
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self, UsageError> {
        let cfg: Self = toml::from_str(text).map_err(|e| UsageError(format!("config: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, UsageError> {
        let text =
            fs::read_to_string(path).map_err(|e| UsageError(format!("{}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    pub fn to_toml(&self) -> Result<String, UsageError> {
        toml::to_string(self).map_err(|e| UsageError(format!("config: {e}")))
    }

    pub fn validate(&self) -> Result<(), UsageError> {
        let fail = |msg: &str| Err(UsageError(msg.to_string()));
        self.model
            .validate()
            .map_err(|e| UsageError(format!("model: {e}")))?;
        if self.n < 2 {
            return fail("n must be at least 2");
        }
        if self.reps == 0 {
            return fail("reps must be at least 1");
        }
        if !(self.lambda.is_finite() && self.lambda > 0.0) {
            return fail("lambda must be positive and finite");
        }
        if !(1..=10).contains(&self.vanishing_moments) {
            return fail("vanishing-moments must lie in 1..=10");
        }
        if !(MIN_CASCADE_DEPTH..=MAX_CASCADE_DEPTH).contains(&self.cascade_depth) {
            return fail("cascade-depth must lie in 4..=20");
        }
        if self.seed > i64::MAX as u64 {
            return fail("seed must fit in a signed 64-bit integer");
        }
        self.pco().map(|_| ())
    }

    pub fn pco(&self) -> Result<PcoConfig, UsageError> {
        let cfg =
            PcoConfig::new(self.lambda, self.level_cap).map_err(|e| UsageError(format!("{e}")))?;
        cfg.candidates(self.n)
            .map_err(|e| UsageError(format!("{e}")))?;
        Ok(cfg)
    }
}

mod model_spec {
    use serde::{de::Error, Deserialize, Deserializer, Serializer};
    use wavedens::DensityModel;

    pub fn serialize<S: Serializer>(model: &DensityModel, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(model)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<DensityModel, D::Error> {
        let text = String::deserialize(d)?;
        text.parse()
            .map_err(|e| D::Error::custom(format!("{text}: {e}")))
    }
}
