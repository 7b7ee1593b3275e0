//! Crate-wide error type.

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Invalid configuration: bad truncation, unresolved grids, malformed input files.
    #[error("configuration error: {0}")]
    Config(String),

    /// A precondition on operation inputs was violated.
    #[error("domain error: {0}")]
    Domain(String),

    /// Two states live on incompatible grids.
    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    /// A band is not simple where simplicity is required.
    #[error("near-degenerate band {band} at k = {k:?}: gap {gap:.3e} below tolerance {tolerance:.3e}")]
    NearDegeneracy {
        k: Vec<f64>,
        band: usize,
        gap: f64,
        tolerance: f64,
    },

    /// The dense eigensolver failed to converge.
    #[error("eigensolver did not converge (dimension {dim}, max iterations {max_iter})")]
    EigenNonConvergence { dim: usize, max_iter: usize },

    /// The evolved solution exceeded the blow-up threshold.
    #[error("finite-time blow-up detected: sup |u| = {sup_abs:.3e} exceeded threshold {threshold:.3e} at t ≈ {t_c:.6}")]
    BlowUp {
        t_c: f64,
        sup_abs: f64,
        threshold: f64,
    },

    /// A wave packet left the computational box.
    #[error("packet support violation: {0}")]
    OutOfBox(String),

    /// Functionality outside the supported regime.
    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),

    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Exit-code class used by the CLI: true for numerical failures (exit 2),
    /// false for usage/configuration problems (exit 1).
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::NearDegeneracy { .. }
                | Error::EigenNonConvergence { .. }
                | Error::BlowUp { .. }
                | Error::OutOfBox(_)
        )
    }
}
