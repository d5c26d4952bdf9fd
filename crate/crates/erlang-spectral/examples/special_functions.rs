//! Parabolic cylinder, Airy and Gamma functions in double and double-double.

use erlang_spectral::specfun::pcf::pcf_scaled;
use erlang_spectral::specfun::{airy_zero, gamma, pcf_eval, AiryZeroKind, PcfQuery};
use erlang_spectral::Dd;

pub fn run_example() -> erlang_spectral::Result<()> {
    for (p, z) in [(0.5, 1.0), (-2.3, -4.0), (7.0, 3.0), (-0.5, 12.0)] {
        let e = pcf_eval(PcfQuery::new(p, z))?;
        println!("D_{p}({z}) = {:.15e}  D' = {:.15e}", e.value, e.dz);
    }
    let s = pcf_scaled(Dd::from_f64(-0.5), Dd::from_f64(12.0));
    println!("double-double: D_-0.5(12) = {} * exp({})", s.d, s.ln_scale);
    println!("a0 = {:.12}, b0 = {:.12}", airy_zero(AiryZeroKind::OfAi, 0)?, airy_zero(AiryZeroKind::OfAiPrime, 0)?);
    println!("Gamma(0.5)^2 = {:.15}", gamma(0.5).powi(2));
    Ok(())
}

#[allow(dead_code)]
fn main() -> erlang_spectral::Result<()> {
    run_example()
}
