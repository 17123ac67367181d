use thiserror::Error;

/// Errors raised by the solver, the diagnostics and the run harness.
#[derive(Debug, Error)]
pub enum WkgError {
    #[error("invalid grid: {0}")]
    Grid(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("multiplier is not finite at mode {index} (xi = {xi:?}): {value}")]
    NonFiniteMultiplier {
        index: usize,
        xi: [f64; 3],
        value: String,
    },

    #[error("field is not contained in the box: relative mass {mass:.3e} within two cells of the boundary")]
    Containment { mass: f64 },

    #[error("numerical abort at t = {t}: {what}")]
    Numerical { t: f64, what: String },

    #[error("atom (j = {j}, k = {k}) is outside the admissible set k + j >= 0, j >= 0")]
    InadmissibleAtom { j: i32, k: i32 },

    #[error("bad input: {0}")]
    Input(String),

    #[error("snapshot format: {0}")]
    Snapshot(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl WkgError {
    /// Process exit code used by the command line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            WkgError::Numerical { .. } => 2,
            _ => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, WkgError>;
