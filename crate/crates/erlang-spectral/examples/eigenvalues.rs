//! The first few eigenvalues, and the η = 1 case where λₙ = n.

use erlang_spectral::{eigenvalues, ModelParams};

pub fn run_example() -> erlang_spectral::Result<()> {
    for (beta, eta) in [(1.0, 0.5), (0.3, 1.0), (-0.5, 2.0)] {
        let set = eigenvalues(ModelParams::new(beta, eta)?, 6)?;
        let shown: Vec<String> = set.lambdas.iter().map(|l| format!("{l:.8}")).collect();
        println!("beta={beta} eta={eta}: {}", shown.join(" "));
        if let Some(d) = set.diagnostic {
            println!("  note: {d}");
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> erlang_spectral::Result<()> {
    run_example()
}
