//! Convergence of the splitting scheme along dyadic refinements `n = 2^p`.
//!
//! cargo run --release --example dyadic_convergence

use feykac::splitting::dyadic_study;
use feykac::{Grid, InitialCondition, Potential};

fn main() -> feykac::Result<()> {
    let c = Potential::GaussCos {
        amplitude: 1.0,
        omega: 1.0,
    };
    let study = dyadic_study(
        0.5,
        8,
        &InitialCondition::Gaussian(1.0),
        &c,
        &Grid::default(),
        &[0.0, 1.0],
    )?;
    println!(
        "{:>2} {:>4} {:>14} {:>14} {:>10} {:>6}",
        "p", "n", "v(x=0)", "v(x=1)", "diff", "order"
    );
    for r in &study.rows {
        let diff = r.diff.map_or(String::new(), |d| format!("{d:.3e}"));
        let order = r.local_order.map_or(String::new(), |q| format!("{q:.3}"));
        println!(
            "{:>2} {:>4} {:>14.10} {:>14.10} {diff:>10} {order:>6}",
            r.p, r.n, r.values[0], r.values[1]
        );
    }
    if let (Some(q), Some(limit)) = (study.fitted_order, study.extrapolated()) {
        println!(
            "fitted order {q:.3}; extrapolated limit {:.8}, {:.8}",
            limit[0], limit[1]
        );
    }
    Ok(())
}
