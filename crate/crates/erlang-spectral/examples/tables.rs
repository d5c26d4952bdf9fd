//! Recompute the published tables and list any cell outside five units in
//! its last printed digit.

use erlang_spectral::tables::{reproduce, TABLE_IDS};

pub fn run_example() -> erlang_spectral::Result<()> {
    for id in TABLE_IDS {
        let rep = reproduce(id)?;
        let misses: Vec<_> = rep.cells.iter().filter(|c| !c.pass).collect();
        println!("table {id} ({}): {} cells, {} off", rep.title, rep.cells.len(), misses.len());
        for c in misses {
            println!(
                "  {} eta={:?}: computed {:.6e}, printed {}  [{}]",
                c.column,
                c.eta,
                c.computed,
                c.published_text,
                c.deviation.unwrap_or("unexplained")
            );
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> erlang_spectral::Result<()> {
    run_example()
}
