//! Spectral gap and relaxation time at a few operating points.

use erlang_spectral::{spectral_gap, spectral_gap_with, ModelParams, Precision};

pub fn run_example() -> erlang_spectral::Result<()> {
    for (beta, eta) in [(2.0, 0.1), (1.0, 0.5), (0.0, 1.0), (-1.0, 0.3), (0.5, 4.0)] {
        let g = spectral_gap(ModelParams::new(beta, eta)?)?;
        println!(
            "beta={beta:5} eta={eta:4}  r={:.10}  tau={:.6}  ({:?})",
            g.r,
            g.relaxation_time(),
            g.method
        );
    }
    // r - eta is exponentially small for negative beta; extended precision keeps its digits
    let g = spectral_gap_with(ModelParams::new(-1.0, 0.025)?, Precision::Extended)?;
    println!("beta=-1 eta=0.025  r-eta={:.6e}", g.r_minus_eta);
    Ok(())
}

#[allow(dead_code)]
fn main() -> erlang_spectral::Result<()> {
    run_example()
}
