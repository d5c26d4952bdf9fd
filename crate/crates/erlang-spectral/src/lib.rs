//! Relaxation rates of the Erlang A (M/M/s+M) queue in the Halfin-Whitt regime.

pub mod asymptotic;
pub mod characteristic;
pub mod cli;
pub mod dd;
pub mod discrete;
pub mod error;
pub mod real;
mod quad;
mod roots;
pub mod specfun;
pub mod tables;
pub mod transient;
pub mod validate;

pub use characteristic::{
    char_v, char_v_beta0, eigenvalues, gap_beta_derivative_sign, spectral_gap, spectral_gap_with,
    CharEval, EigenSet, GapResult, ModelParams,
};
pub use dd::Dd;
pub use error::{Error, Result};
pub use real::{Precision, Real};
