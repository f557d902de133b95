use thiserror::Error;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("unsupported number of vanishing moments {0} (supported: 1..=10)")]
    UnsupportedOrder(usize),
    #[error("cascade depth {0} outside 4..=20")]
    CascadeDepth(u32),
    #[error("cascade table of {0} entries cannot be allocated")]
    Resource(usize),
    #[error("refinement matrix has no simple unit eigenvalue")]
    Refinement,
    #[error("empty sample")]
    EmptyInput,
    #[error("sample contains a non-finite value")]
    NonFinite,
    #[error("level {level} outside 0..={max}")]
    LevelRange { level: u32, max: u32 },
    #[error("sample size {0} too small (need at least 2)")]
    SampleSize(usize),
    #[error("invalid configuration: {0}")]
    Config(&'static str),
    #[error("invalid grid: {0}")]
    Grid(&'static str),
    #[error("invalid model parameter: {0}")]
    ModelParameter(&'static str),
    #[error("quadrature grid misses {0:.3e} of the probability mass")]
    Coverage(f64),
}
