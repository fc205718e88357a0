use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// A mean or target value lies outside the family's closed mean interval.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("dimension mismatch: expected {expected} entries, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("arm {0} has not been pulled yet; index policies need one initial pull per arm")]
    UninitializedArm(usize),

    #[error("policy {policy} cannot run on this instance: {reason}")]
    UnsupportedPolicy { policy: String, reason: String },

    #[error("reward {reward} is outside the support of arm {arm}")]
    RewardOutOfSupport { arm: usize, reward: f64 },

    #[error("round {round}: expected spend {spend} exceeds budget {budget}")]
    BudgetViolation { round: u64, spend: f64, budget: f64 },

    #[error("round {round}: threshold above indifference but spend {spend} leaves budget {budget} unsaturated")]
    Unsaturated { round: u64, spend: f64, budget: f64 },

    #[error("invalid run configuration: {0}")]
    InvalidRun(String),

    #[error("traces do not share the same checkpoints")]
    CheckpointMismatch,

    #[error("config field `{field}`: {message}")]
    Config { field: String, message: String },

    #[error("unknown preset `{0}` (expected sim1, sim2, sim3 or sim4)")]
    UnknownPreset(String),

    #[error("failed to parse {path}: {message}")]
    Parse { path: PathBuf, message: String },

    #[error("worker pool: {0}")]
    WorkerPool(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn config(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Config {
            field: field.into(),
            message: message.into(),
        }
    }
}
