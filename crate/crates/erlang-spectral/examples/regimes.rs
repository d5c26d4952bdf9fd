//! Small-η asymptotics in each regime against the exact gap.

use erlang_spectral::asymptotic::{beta_star, r0_of_beta, r_of_gamma, regime_select};
use erlang_spectral::{spectral_gap, ModelParams};

pub fn run_example() -> erlang_spectral::Result<()> {
    println!("beta* = {:.12}", beta_star());
    println!("r0(2) = {:.6}", r0_of_beta(2.0)?.unwrap_or(f64::NAN));
    println!("R(0) = {:.6}, R(-1) = {:.6}", r_of_gamma(0.0)?, r_of_gamma(-1.0)?);
    let bs = beta_star();
    for (beta, eta) in [(-1.0, 0.05), (0.05, 0.01), (1.0, 0.001), (bs, 0.001), (2.5, 0.001)] {
        let p = ModelParams::new(beta, eta)?;
        let est = regime_select(p)?;
        let r = spectral_gap(p)?.r;
        println!(
            "{:>14}  beta={beta:.4} eta={eta}  exact={r:.6}  estimate={:.6}",
            est.regime.to_string(),
            est.value
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> erlang_spectral::Result<()> {
    run_example()
}
