//! The finite-server queue: determinant root, generator eigenvalue and the
//! approach to the diffusion gap.

use erlang_spectral::discrete::{
    convergence_study, default_truncation, discrete_gap, generator_gap, DiscreteParams,
};

pub fn run_example() -> erlang_spectral::Result<()> {
    for (m, rho, eta) in [(9, 6.0, 0.7), (20, 15.5, 0.5), (5, 7.0, 2.0)] {
        let dp = DiscreteParams::new(m, rho, eta)?;
        let g = generator_gap(dp, default_truncation(dp))?;
        println!(
            "m={m:2} rho={rho:4} eta={eta}: determinant {:.12}  generator {:.12}",
            discrete_gap(dp)?,
            g.gap
        );
    }
    for row in convergence_study(1.0, 0.5, &[25, 100, 400])? {
        println!("m={:3}  discrete {:.8}  diffusion {:.8}  diff {:+.2e}", row.m, row.discrete, row.diffusion, row.difference);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> erlang_spectral::Result<()> {
    run_example()
}
