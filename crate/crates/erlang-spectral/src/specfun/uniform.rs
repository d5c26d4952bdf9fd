//! Airy-type uniform approximation of D_{−A}(B) near the turning point
//! A ≈ −B²/4, with the first correction term.

use crate::error::{check_finite, Error, Result};
use crate::specfun::airy::airy_ai;

/// Smallest B for which the approximation is offered.
pub const MIN_B: f64 = 8.0;

/// δ such that A = −B²/4 + (B/2)^{2/3} δ.
#[must_use]
pub fn uniform_delta(a: f64, b: f64) -> f64 {
    (a + b * b / 4.0) / (b / 2.0).powf(2.0 / 3.0)
}

/// Approximations to (D_{−A}(B), D'_{−A}(B)).
pub fn pcf_uniform_airy(a: f64, b: f64) -> Result<(f64, f64)> {
    check_finite("A", a)?;
    check_finite("B", b)?;
    if b < MIN_B {
        return Err(Error::Capability(format!(
            "uniform Airy approximation needs B >= {MIN_B}, got {b}"
        )));
    }
    let delta = uniform_delta(a, b);
    let (ai, aip) = airy_ai(delta)?;
    let ln_pre = -b * b / 8.0 + a * (2.0 / b).ln() + 0.5 * (2.0 * std::f64::consts::PI).ln();
    let k = 1.0 / (2f64.powf(4.0 / 3.0) * b.powf(2.0 / 3.0));
    let h = b / 2.0;
    let d = (ln_pre + h.ln() / 3.0).exp() * (ai + k * (delta * delta * ai - 2.0 * aip));
    let dp = (ln_pre + h.ln() * 2.0 / 3.0).exp()
        * (aip + k * (delta * delta * aip - 2.0 * delta * ai));
    Ok((d, dp))
}
