use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("unknown setting id `{0}` (expected one of 1.a..1.e, 2.a..2.e)")]
    UnknownSetting(String),

    #[error("unknown policy `{0}`")]
    UnknownPolicy(String),

    #[error("invalid config: {0}")]
    InvalidConfig(String),

    #[error("channel {channel} out of range for K={k}")]
    InvalidChannel { channel: usize, k: usize },

    #[error("slot {slot} outside schedule of length {len}")]
    InvalidSlot { slot: usize, len: usize },

    #[error("pre-history channel {0} has zero success probability; the age tail diverges")]
    DivergentTail(usize),

    #[error("gap between best and second-best channel is zero")]
    ZeroGap,

    #[error("non-finite KL divergence KL({p}, {q})")]
    NonFiniteKl { p: f64, q: f64 },

    #[error("invalid bound parameters: {0}")]
    InvalidBoundParams(String),

    #[error("refusing to overwrite {0} (pass --force)")]
    WouldOverwrite(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error("thread pool: {0}")]
    ThreadPool(String),
}

impl Error {
    /// Errors caused by bad user input rather than a failure while running.
    pub fn is_usage(&self) -> bool {
        matches!(
            self,
            Error::InvalidInstance(_)
                | Error::UnknownSetting(_)
                | Error::UnknownPolicy(_)
                | Error::InvalidConfig(_)
                | Error::InvalidChannel { .. }
                | Error::InvalidBoundParams(_)
                | Error::WouldOverwrite(_)
                | Error::Json(_)
        )
    }
}
