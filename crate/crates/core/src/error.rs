use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("degenerate instance: direct gain g[{player}][{player}][{channel}] is zero")]
    DegenerateInstance { player: usize, channel: usize },

    #[error("invalid gain g[{receiver}][{transmitter}][{channel}] = {value}: gains must be finite and nonnegative")]
    InvalidGain {
        receiver: usize,
        transmitter: usize,
        channel: usize,
        value: f64,
    },

    #[error("power fraction {0} is outside [0, 1]")]
    InvalidAction(f64),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("oracle mismatch (snr index {snr_index}, trial {trial}): {detail}")]
    OracleMismatch {
        snr_index: usize,
        trial: u64,
        detail: String,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("malformed instance: {0}")]
    Json(#[from] serde_json::Error),
}
