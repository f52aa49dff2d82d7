use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("target is within {min_range_km} km of radar {radar_id}; range/azimuth undefined")]
    CoLocated { radar_id: usize, min_range_km: f64 },

    #[error("unknown target id {target_id} (radar knows {n_targets} targets)")]
    UnknownTarget { target_id: usize, n_targets: usize },

    #[error("unknown radar id {0}")]
    UnknownRadar(usize),

    #[error("measurement for target {got} (time {got_time}) applied to track {expected} (time {expected_time})")]
    MeasurementMismatch {
        expected: usize,
        got: usize,
        expected_time: u64,
        got_time: u64,
    },

    #[error("innovation covariance is not invertible")]
    SingularInnovation,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid strategy profile: {0}")]
    InvalidProfile(String),

    #[error("gain table for target {target_id} has depth {depth}, requested {requested}")]
    GainTableDepth {
        target_id: usize,
        depth: usize,
        requested: usize,
    },

    #[error("instance too large: {count} profiles exceeds the limit of {limit}")]
    InstanceTooLarge { count: u128, limit: u128 },

    #[error("gain table does not satisfy case ({0}) required by this check")]
    CaseNotSatisfied(char),

    #[error("unknown strategy `{0}`")]
    UnknownStrategy(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }
}
