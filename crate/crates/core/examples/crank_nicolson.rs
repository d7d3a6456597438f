//! Crank-Nicolson reference solution and the L² bound it satisfies.
//!
//! cargo run --release --example crank_nicolson

use feykac::mehler::closed_form_gaussian;
use feykac::pde::{l2_inequality_check, solve_cn, PdeConfig};
use feykac::{InitialCondition, Potential};

fn main() -> feykac::Result<()> {
    let cfg = PdeConfig::default();
    let v0 = InitialCondition::Gaussian(1.0);

    let free = solve_cn(&v0, &Potential::Zero, 0.5, &cfg)?;
    println!(
        "c = 0: v(0.5, 1) = {:.10}, exact {:.10}",
        free.interpolate(1.0),
        closed_form_gaussian(0.5, 1.0, 1.0)
    );

    let c = Potential::GaussCos {
        amplitude: 1.0,
        omega: 1.0,
    };
    let v = solve_cn(&v0, &c, 0.5, &cfg)?;
    println!(
        "gauss_cos: v(0.5, 0) = {:.10}, v(0.5, 1) = {:.10}",
        v.interpolate(0.0),
        v.interpolate(1.0)
    );

    for c in [Potential::Zero, Potential::Constant(2.0), c] {
        let r = l2_inequality_check(&v0, &c, 0.1, 0.5, &cfg)?;
        println!(
            "{c}: ∫∫|v|² = {:.6} ≤ {:.6} (ratio {:.4})",
            r.lhs, r.rhs, r.ratio
        );
    }
    Ok(())
}
