//! Special functions of a real variable.

pub mod airy;
pub mod gamma;
pub mod hermite;
pub mod pcf;
pub(crate) mod taylor;
pub mod uniform;

pub use airy::{airy_ai, airy_zero, AiryZeroKind};
pub use gamma::{digamma, gamma, ln_gamma, rgamma};
pub use hermite::hermite_he;
pub use pcf::{pcf_d, pcf_d_dp, pcf_d_dz, pcf_eval, pcf_eval_with, PcfEval, PcfQuery, PcfScaled};
pub use uniform::pcf_uniform_airy;
