//! Test densities with closed-form pdf/cdf and reproducible seeded sampling.

use alloc::vec::Vec;
use core::f64::consts::{PI, SQRT_2};
use core::fmt;
use core::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Beta, Distribution, Normal};

use crate::error::{Error, Result};
#[allow(unused_imports)]
use crate::math::{erf, FloatExt};

/// Density below which the tails count as outside the effective support.
pub const TAIL_DENSITY: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "kind", rename_all = "snake_case"))]
pub enum DensityModel {
    Gaussian {
        mean: f64,
        variance: f64,
    },
    /// With probability `weight` draw `N(mean1, var1)`, otherwise `N(mean2, var2)`.
    Mixture {
        weight: f64,
        mean1: f64,
        var1: f64,
        mean2: f64,
        var2: f64,
    },
    Beta {
        alpha: f64,
        beta: f64,
    },
}

impl DensityModel {
    /// Standard normal.
    pub fn m1() -> Self {
        DensityModel::Gaussian {
            mean: 0.0,
            variance: 1.0,
        }
    }

    /// `0.25·N(0, 1) + 0.75·N(10, 4)`, the second component with variance 4.
    pub fn m2() -> Self {
        DensityModel::Mixture {
            weight: 0.25,
            mean1: 0.0,
            var1: 1.0,
            mean2: 10.0,
            var2: 4.0,
        }
    }

    /// `Beta(2, 5)`.
    pub fn m3() -> Self {
        DensityModel::Beta {
            alpha: 2.0,
            beta: 5.0,
        }
    }

    pub fn gaussian(mean: f64, variance: f64) -> Result<Self> {
        let m = DensityModel::Gaussian { mean, variance };
        m.validate()?;
        Ok(m)
    }

    pub fn mixture(weight: f64, mean1: f64, var1: f64, mean2: f64, var2: f64) -> Result<Self> {
        let m = DensityModel::Mixture {
            weight,
            mean1,
            var1,
            mean2,
            var2,
        };
        m.validate()?;
        Ok(m)
    }

    pub fn beta(alpha: f64, beta: f64) -> Result<Self> {
        let m = DensityModel::Beta { alpha, beta };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        let finite = |v: f64| v.is_finite();
        match *self {
            DensityModel::Gaussian { mean, variance } => {
                if !finite(mean) || !(variance > 0.0 && finite(variance)) {
                    return Err(Error::ModelParameter(
                        "gaussian needs finite mean and positive variance",
                    ));
                }
            }
            DensityModel::Mixture {
                weight,
                mean1,
                var1,
                mean2,
                var2,
            } => {
                if !(0.0..=1.0).contains(&weight) {
                    return Err(Error::ModelParameter("mixture weight must lie in [0, 1]"));
                }
                if !finite(mean1)
                    || !finite(mean2)
                    || !(var1 > 0.0 && finite(var1))
                    || !(var2 > 0.0 && finite(var2))
                {
                    return Err(Error::ModelParameter(
                        "mixture components need finite means and positive variances",
                    ));
                }
            }
            DensityModel::Beta { alpha, beta } => {
                if !(alpha > 0.0 && beta > 0.0 && finite(alpha) && finite(beta)) {
                    return Err(Error::ModelParameter("beta shapes must be positive"));
                }
            }
        }
        Ok(())
    }

    pub fn pdf(&self, x: f64) -> f64 {
        match *self {
            DensityModel::Gaussian { mean, variance } => normal_pdf(x, mean, variance),
            DensityModel::Mixture {
                weight,
                mean1,
                var1,
                mean2,
                var2,
            } => weight * normal_pdf(x, mean1, var1) + (1.0 - weight) * normal_pdf(x, mean2, var2),
            DensityModel::Beta { alpha, beta } => {
                if !(0.0..=1.0).contains(&x) {
                    return 0.0;
                }
                let log_norm = ln_beta(alpha, beta);
                let value = |x: f64| {
                    ((alpha - 1.0) * x.ln() + (beta - 1.0) * (1.0 - x).ln() - log_norm).exp()
                };
                match (x, alpha, beta) {
                    (x, a, _) if x == 0.0 && a > 1.0 => 0.0,
                    (x, _, b) if x == 1.0 && b > 1.0 => 0.0,
                    (x, a, _) if x == 0.0 && a == 1.0 => (-log_norm).exp(),
                    (x, _, b) if x == 1.0 && b == 1.0 => (-log_norm).exp(),
                    (x, _, _) if x == 0.0 || x == 1.0 => f64::INFINITY,
                    (x, _, _) => value(x),
                }
            }
        }
    }

    /// Closed-form cdf; Beta is supported for integer shapes only.
    pub fn cdf(&self, x: f64) -> Option<f64> {
        match *self {
            DensityModel::Gaussian { mean, variance } => Some(normal_cdf(x, mean, variance)),
            DensityModel::Mixture {
                weight,
                mean1,
                var1,
                mean2,
                var2,
            } => Some(
                weight * normal_cdf(x, mean1, var1) + (1.0 - weight) * normal_cdf(x, mean2, var2),
            ),
            DensityModel::Beta { alpha, beta } => {
                if alpha != alpha.floor() || beta != beta.floor() {
                    return None;
                }
                if x <= 0.0 {
                    return Some(0.0);
                }
                if x >= 1.0 {
                    return Some(1.0);
                }
                // P(X ≤ x) = P(Bin(a + b - 1, x) ≥ a)
                let (a, trials) = (alpha as u32, (alpha + beta) as u32 - 1);
                let mut tail = 0.0;
                let mut choose = 1.0;
                for j in 0..=trials {
                    if j > 0 {
                        choose *= (trials - j + 1) as f64 / j as f64;
                    }
                    if j >= a {
                        tail += choose * x.powi(j as i32) * (1.0 - x).powi((trials - j) as i32);
                    }
                }
                Some(tail)
            }
        }
    }

    /// `∫ f²` in closed form.
    pub fn norm_sq(&self) -> f64 {
        let cross = |m1: f64, v1: f64, m2: f64, v2: f64| normal_pdf(m1 - m2, 0.0, v1 + v2);
        match *self {
            DensityModel::Gaussian { variance, .. } => 1.0 / (2.0 * (PI * variance).sqrt()),
            DensityModel::Mixture {
                weight,
                mean1,
                var1,
                mean2,
                var2,
            } => {
                let w2 = 1.0 - weight;
                weight * weight * cross(mean1, var1, mean1, var1)
                    + 2.0 * weight * w2 * cross(mean1, var1, mean2, var2)
                    + w2 * w2 * cross(mean2, var2, mean2, var2)
            }
            DensityModel::Beta { alpha, beta } => {
                if alpha <= 0.5 || beta <= 0.5 {
                    return f64::INFINITY;
                }
                (ln_beta(2.0 * alpha - 1.0, 2.0 * beta - 1.0) - 2.0 * ln_beta(alpha, beta)).exp()
            }
        }
    }

    /// Interval outside which the pdf stays below [`TAIL_DENSITY`].
    pub fn effective_support(&self) -> (f64, f64) {
        let gaussian = |mean: f64, variance: f64, weight: f64| {
            let sd = variance.sqrt();
            let level = TAIL_DENSITY * sd * (2.0 * PI).sqrt() / weight.max(f64::MIN_POSITIVE);
            let z = if level >= 1.0 {
                0.0
            } else {
                (-2.0 * level.ln()).sqrt()
            };
            (mean - z * sd, mean + z * sd)
        };
        match *self {
            DensityModel::Gaussian { mean, variance } => gaussian(mean, variance, 1.0),
            DensityModel::Mixture {
                weight,
                mean1,
                var1,
                mean2,
                var2,
            } => {
                let parts = [(weight, mean1, var1), (1.0 - weight, mean2, var2)];
                parts
                    .iter()
                    .filter(|(w, _, _)| *w > 0.0)
                    .map(|&(w, m, v)| gaussian(m, v, w))
                    .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), (a, b)| {
                        (lo.min(a), hi.max(b))
                    })
            }
            DensityModel::Beta { .. } => (0.0, 1.0),
        }
    }

    /// `n` draws from the stream selected by `seed`; identical on every call.
    pub fn sample(&self, n: usize, seed: u64) -> Vec<f64> {
        self.sample_stream(n, seed, 0)
    }

    /// `n` draws from an independent substream, used for per-replication sampling.
    pub fn sample_stream(&self, n: usize, seed: u64, stream: u64) -> Vec<f64> {
        let mut rng = stream_rng(seed, stream);
        self.sample_with(n, &mut rng)
    }

    pub fn sample_with<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> Vec<f64> {
        match *self {
            DensityModel::Gaussian { mean, variance } => {
                let d = Normal::new(mean, variance.sqrt()).expect("validated gaussian");
                d.sample_iter(rng).take(n).collect()
            }
            DensityModel::Mixture {
                weight,
                mean1,
                var1,
                mean2,
                var2,
            } => {
                let first = Normal::new(mean1, var1.sqrt()).expect("validated mixture");
                let second = Normal::new(mean2, var2.sqrt()).expect("validated mixture");
                (0..n)
                    .map(|_| {
                        if rng.random::<f64>() < weight {
                            first.sample(rng)
                        } else {
                            second.sample(rng)
                        }
                    })
                    .collect()
            }
            DensityModel::Beta { alpha, beta } => {
                let d = Beta::new(alpha, beta).expect("validated beta");
                d.sample_iter(rng).take(n).collect()
            }
        }
    }
}

/// ChaCha stream `stream` under key `seed`.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

impl fmt::Display for DensityModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if *self == Self::m1() {
            return f.write_str("m1");
        }
        if *self == Self::m2() {
            return f.write_str("m2");
        }
        if *self == Self::m3() {
            return f.write_str("m3");
        }
        match *self {
            DensityModel::Gaussian { mean, variance } => write!(f, "mix:1,{mean},{variance},0,1"),
            DensityModel::Mixture {
                weight,
                mean1,
                var1,
                mean2,
                var2,
            } => {
                write!(f, "mix:{weight},{mean1},{var1},{mean2},{var2}")
            }
            DensityModel::Beta { alpha, beta } => write!(f, "beta:{alpha},{beta}"),
        }
    }
}

impl FromStr for DensityModel {
    type Err = Error;

    /// `m1 | m2 | m3 | mix:w,mu1,var1,mu2,var2 | beta:a,b`.
    fn from_str(s: &str) -> Result<Self> {
        let parse_list = |body: &str, expected: usize| -> Result<Vec<f64>> {
            let values = body
                .split(',')
                .map(|p| {
                    p.trim()
                        .parse::<f64>()
                        .map_err(|_| Error::ModelParameter("unparsable number"))
                })
                .collect::<Result<Vec<f64>>>()?;
            if values.len() != expected {
                return Err(Error::ModelParameter("wrong number of model parameters"));
            }
            Ok(values)
        };
        match s.trim() {
            "m1" => Ok(Self::m1()),
            "m2" => Ok(Self::m2()),
            "m3" => Ok(Self::m3()),
            other => {
                if let Some(body) = other.strip_prefix("mix:") {
                    let v = parse_list(body, 5)?;
                    Self::mixture(v[0], v[1], v[2], v[3], v[4])
                } else if let Some(body) = other.strip_prefix("beta:") {
                    let v = parse_list(body, 2)?;
                    Self::beta(v[0], v[1])
                } else {
                    Err(Error::ModelParameter("unknown model name"))
                }
            }
        }
    }
}

fn normal_pdf(x: f64, mean: f64, variance: f64) -> f64 {
    let z = x - mean;
    (-0.5 * z * z / variance).exp() / (2.0 * PI * variance).sqrt()
}

fn normal_cdf(x: f64, mean: f64, variance: f64) -> f64 {
    0.5 * (1.0 + erf((x - mean) / (SQRT_2 * variance.sqrt())))
}

fn ln_beta(a: f64, b: f64) -> f64 {
    libm::lgamma(a) + libm::lgamma(b) - libm::lgamma(a + b)
}
