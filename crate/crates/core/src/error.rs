use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("singular normalization: |chi_ZF| vanishes at omega = {omega}")]
    SingularNormalization { omega: f64 },

    #[error("unstable network: {0}")]
    Unstable(String),

    /// Z does not commute with itself at different times (chi_ZZ or chi_FZ nonzero).
    #[error("not a valid detector at omega = {omega}: |chi_ZZ| = {chi_zz:e}, |chi_FZ| = {chi_fz:e}")]
    InvalidDetector { omega: f64, chi_zz: f64, chi_fz: f64 },

    #[error("invalid spectral matrix: {0}")]
    InvalidMatrix(String),

    #[error("degenerate readout: chi_ZF(0) vanishes (delta*cos(theta) = gamma*sin(theta))")]
    DegenerateReadout,

    #[error("optical-spring instability: {0}")]
    Instability(String),
}

impl Error {
    /// True for errors that signal a physically degenerate or unstable setup
    /// rather than malformed input.
    pub fn is_physics_degenerate(&self) -> bool {
        matches!(
            self,
            Error::DegenerateReadout
                | Error::Instability(_)
                | Error::Unstable(_)
                | Error::SingularNormalization { .. }
        )
    }
}
