use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown campaign `{0}`")]
    UnknownCampaign(String),
    #[error("unknown format `{0}` (expected jsonl, csv or table)")]
    UnknownFormat(String),
    #[error("campaign `{campaign}` does not take a parameter `{key}`")]
    UnknownParam { campaign: String, key: String },
    #[error("bad parameter `{0}` (expected key=value)")]
    BadParam(String),
    #[error("parameter `{key}` = `{value}` is not a valid value")]
    BadParamValue { key: String, value: String },
    #[error("campaign `{0}` does not take a bound")]
    NoBound(String),
    #[error("bound {value} for `{campaign}` is outside {min}..={max}")]
    BoundOutOfRange { campaign: String, value: u64, min: u64, max: u64 },
    #[error("fixture `{name}`: {reason}")]
    Fixture { name: String, reason: String },
    #[error("{0}")]
    Usage(String),
    #[error("cannot read `{path}`: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("jsonl line {line}: {reason}")]
    Jsonl { line: usize, reason: String },
    #[error(transparent)]
    Core(#[from] qhpp_core::Error),
}
