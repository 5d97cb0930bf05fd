use thiserror::Error;

/// Errors raised anywhere in the lab.
#[derive(Debug, Error)]
pub enum Error {
    #[error("point at r = {r} lies inside the excised region (r must exceed {r_min})")]
    Domain { r: f64, r_min: f64 },
    #[error("metric is degenerate at the requested point")]
    Degenerate,
    #[error("null frame undefined at r = 0")]
    FrameUndefined,
    #[error("numeric procedure did not converge: {0}")]
    NonConvergence(String),
    #[error("invalid input: {0}")]
    Input(String),
    #[error("invalid mode: l = {l} with spin s = {s}")]
    InvalidMode { l: u32, s: u32 },
    #[error("CFL violated: dt = {dt} exceeds 0.5 * dr* = {limit}")]
    Cfl { dt: f64, limit: f64 },
    #[error("evolution became unstable at grid index {index}, t = {time}")]
    Instability { index: usize, time: f64 },
    #[error("causal purity violated: {0}")]
    CausalPurity(String),
    #[error("tail regime not reached: {0}")]
    TailNotReached(String),
    #[error("insufficient span: {0}")]
    InsufficientSpan(String),
    #[error("unsupported configuration: {0}")]
    Unsupported(String),
    #[error("formulation error: {0}")]
    Formulation(String),
    #[error("configuration error: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Process exit code for the CLI: 2 for schema/input problems, 3 for numeric failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) | Error::Input(_) | Error::InvalidMode { .. } | Error::Json(_) => 2,
            Error::Io(_) => 2,
            _ => 3,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
