use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("outside supported range: {0}")]
    Capability(String),
    #[error("no root found: {0}")]
    NoRoot(String),
    #[error("pole of the transform at theta = {root}")]
    Pole { root: f64 },
    #[error("branch cut: {0}")]
    BranchCut(String),
    #[error("no convergence: {0}")]
    Convergence(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_finite(name: &str, x: f64) -> Result<()> {
    if x.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("{name} must be finite, got {x}")))
    }
}
