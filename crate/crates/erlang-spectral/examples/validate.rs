//! The quick self-check suite, one line per check.

use erlang_spectral::validate::{all_pass, run, Suite};

pub fn run_example() -> erlang_spectral::Result<()> {
    let checks = run(Suite::Quick);
    for c in &checks {
        println!("{} {}  ({:.3e})", if c.pass { "ok  " } else { "FAIL" }, c.check, c.value);
    }
    println!("all pass: {}", all_pass(&checks));
    Ok(())
}

#[allow(dead_code)]
fn main() -> erlang_spectral::Result<()> {
    run_example()
}
