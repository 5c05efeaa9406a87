use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid fuzzy set: {0}")]
    InvalidSet(String),
    #[error("invalid rule base: {0}")]
    InvalidRuleBase(String),
    #[error("every rule has zero upper firing strength")]
    AllRulesSilent,
    #[error("unknown wind configuration label {0:?}; valid labels are A, B, C, D, E, F, G, H, I")]
    UnknownLabel(String),
    #[error("invalid course offset {0} m; valid offsets are 25, 50, 100")]
    InvalidOffset(u32),
    #[error("boat position coincides with the waypoint")]
    CoincidentPoint,
    #[error("log contains no samples")]
    EmptyLog,
    #[error("series is empty")]
    EmptySeries,
    #[error("relative performance denominator is zero")]
    ZeroDenominator,
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("invalid experiment grid: {0}")]
    InvalidGrid(String),
    #[error("malformed log {path}: {reason}")]
    MalformedLog { path: String, reason: String },
    #[error("config file: {0}")]
    Config(#[from] toml::de::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
