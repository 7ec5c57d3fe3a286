//! Error types shared across the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CryoError {
    #[error("temperature {t_k} K outside valid range [{lo_k}, {hi_k}] K of material `{material}`")]
    TemperatureRange {
        material: String,
        t_k: f64,
        lo_k: f64,
        hi_k: f64,
    },

    #[error("frequency {frequency_hz} Hz outside attenuation curve span [{lo_hz}, {hi_hz}] Hz of cable `{cable}`")]
    FrequencyRange {
        cable: String,
        frequency_hz: f64,
        lo_hz: f64,
        hi_hz: f64,
    },

    #[error("unknown {kind} `{name}`")]
    UnknownEntry { kind: &'static str, name: String },

    #[error("line topology: {0}")]
    Topology(String),

    #[error("config: {0}")]
    Config(String),

    #[error("fit: {0}")]
    Fit(String),

    #[error("domain: {0}")]
    Domain(String),

    #[error("response coefficients required for {0} but none were provided")]
    MissingCoefficients(&'static str),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, CryoError>;

impl CryoError {
    /// CLI exit code class: 1 for usage/config problems, 2 for computation failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            CryoError::Config(_) | CryoError::UnknownEntry { .. } | CryoError::Io(_) => 1,
            _ => 2,
        }
    }
}
