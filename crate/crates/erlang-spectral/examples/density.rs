//! Transient density: stationary law, Laplace transform, spectral expansion
//! and the η → 0 limit.

use erlang_spectral::transient::{
    hw_laplace_limit, laplace_density, spectral_density, steady_density, DensityQuery,
};
use erlang_spectral::ModelParams;

pub fn run_example() -> erlang_spectral::Result<()> {
    let p = ModelParams::new(1.0, 0.5)?;
    let q = DensityQuery::new(0.3, -0.5, p)?;
    println!("p(0.3, inf) = {:.10}", steady_density(0.3, p));
    for t in [0.2, 1.0, 4.0, 12.0] {
        let d = spectral_density(q, t, 30)?;
        println!("p(0.3, {t:4}) = {:.10}  (tail <= {:.1e})", d.value, d.tail_bound);
    }
    println!("Laplace transform at theta=1: {:.10}", laplace_density(q, 1.0, false)?);
    for eta in [1e-2, 1e-3, 1e-4] {
        let q = DensityQuery::new(0.5, -0.5, ModelParams::new(1.0, eta)?)?;
        println!("eta={eta:e}: {:.8}", laplace_density(q, 1.0, false)?);
    }
    println!("eta=0 limit: {:.8}", hw_laplace_limit(0.5, 1.0, -0.5, 1.0)?);
    Ok(())
}

#[allow(dead_code)]
fn main() -> erlang_spectral::Result<()> {
    run_example()
}
