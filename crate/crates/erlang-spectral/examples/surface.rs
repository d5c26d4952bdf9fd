//! A coarse r(β, η) surface as CSV on stdout, ready for plotting.

use erlang_spectral::cli::surface_grid;

pub fn run_example() -> erlang_spectral::Result<()> {
    let grid = surface_grid((-2.0, 3.0), (0.25, 3.0), 6)?;
    println!("beta,eta,r,row_monotone");
    for (b, e, r, ok) in grid {
        println!("{b},{e},{r:.12},{ok}");
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> erlang_spectral::Result<()> {
    run_example()
}
