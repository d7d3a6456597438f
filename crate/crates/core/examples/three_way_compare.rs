//! Monte Carlo, splitting and Crank-Nicolson solutions of the same problem
//! side by side, through the same entry point the `feykac compare` command uses.
//!
//! cargo run --release --example three_way_compare

use feykac::cli::{execute, Cell, Command, RunConfig};

fn main() -> feykac::Result<()> {
    let cfg = RunConfig::load(
        None,
        &["potential=gauss_cos(1,1)".into(), "n_paths=50000".into()],
    )?;
    let table = execute(Command::Compare, &cfg)?;
    for row in &table.rows {
        let num = |i: usize| match row[i] {
            Cell::Num(v) => v,
            _ => f64::NAN,
        };
        println!(
            "x = {}: mc {:.6} ± {:.1e}, split {:.6}, cn {:.6}",
            num(1),
            num(2),
            num(3),
            num(4),
            num(5)
        );
    }
    println!("all pairwise checks pass: {}", table.passed);
    Ok(())
}
