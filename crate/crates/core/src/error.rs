use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("non-finite field")]
    NonFinite,

    #[error("invalid exponent {0}")]
    InvalidExponent(f64),

    #[error("negative time {0}")]
    NegativeTime(f64),

    #[error("incompatible grids")]
    IncompatibleGrids,

    #[error("invalid initial data: {0}")]
    InitialData(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("blowup detected at t={t}: {reason}")]
    Blowup { t: f64, reason: String },

    #[error("resolution failure at t={t}: min(u)={min_u:e} below -{tol:e}·max(u)")]
    ResolutionFailure { t: f64, min_u: f64, tol: f64 },

    #[error("no contraction at this T={horizon}: ratios {ratios:?}")]
    NoContraction { horizon: f64, ratios: Vec<f64> },

    #[error("empty trajectory")]
    EmptyTrajectory,

    #[error("sample time {0} is not covered by the trajectory")]
    UncoveredSample(f64),

    #[error("geometry violation: {0}")]
    Geometry(String),

    #[error("empty disk: radius {radius} is below the grid spacing {spacing}")]
    EmptyDisk { radius: f64, spacing: f64 },

    #[error("insufficient rows: need {needed}, got {got}")]
    InsufficientRows { needed: usize, got: usize },

    #[error("f not supported in D")]
    NotSupported,

    #[error("zero mass: M = 0")]
    ZeroMass,

    #[error("exponent ordering violated: need 1 <= q <= p, got q={q}, p={p}")]
    ExponentOrdering { p: f64, q: f64 },

    #[error("trial amplitude {0} exceeds the exp overflow guard of 500")]
    Overflow(f64),

    #[error("config key `{key}`: {message}")]
    Config { key: String, message: String },

    #[error("malformed snapshot: {0}")]
    Snapshot(String),

    #[error("unwritable directory {path}: {source}")]
    Unwritable {
        path: PathBuf,
        source: std::io::Error,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn config(key: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Config {
            key: key.into(),
            message: message.into(),
        }
    }
}
