use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("periodization risk: boundary shell maximum {shell_max:e} exceeds 1e-10 of global maximum {global_max:e}")]
    Periodization { shell_max: f64, global_max: f64 },

    #[error("Nyquist saturation: edge value {edge:e} exceeds 1e-8 of peak {peak:e}")]
    NyquistSaturation { edge: f64, peak: f64 },

    #[error("spectrum does not decay before Nyquist: edge {edge:e} vs peak {peak:e}")]
    SpectralDecay { edge: f64, peak: f64 },

    #[error("data error: {0}")]
    Data(String),

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("parameter error: {0}")]
    Parameter(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("too few retained entries: have {have}, need {need}")]
    TooFewEntries { have: usize, need: usize },

    #[error("coefficient cap exceeded: {count} > {cap}")]
    CapExceeded { count: usize, cap: usize },

    #[error("spectral support {support} exceeds radius {radius}")]
    SupportExceedsRadius { support: f64, radius: f64 },

    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// True for the numerical guards that map to exit code 3.
    pub fn is_guard(&self) -> bool {
        matches!(
            self,
            Error::Periodization { .. } | Error::NyquistSaturation { .. } | Error::SpectralDecay { .. }
        )
    }

    /// Short stable name used in failure lists.
    pub fn guard_name(&self) -> &'static str {
        match self {
            Error::Periodization { .. } => "periodization",
            Error::NyquistSaturation { .. } => "nyquist_saturation",
            Error::SpectralDecay { .. } => "spectral_decay",
            Error::Config(_) | Error::Parameter(_) => "config",
            _ => "error",
        }
    }
}
