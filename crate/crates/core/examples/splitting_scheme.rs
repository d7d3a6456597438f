//! The splitting scheme: alternate exact Mehler steps with multiplication
//! by `exp(−dt·c)`, compared with its brute-force iterated-integral form.
//!
//! cargo run --release --example splitting_scheme

use feykac::splitting::{iterated_integral_vn, run_vn};
use feykac::{Grid, InitialCondition, Potential};

fn main() -> feykac::Result<()> {
    let grid = Grid::default();
    let v0 = InitialCondition::Gaussian(1.0);
    let c = Potential::GaussCos {
        amplitude: 1.0,
        omega: 1.0,
    };
    let t = 0.5;

    for n in [1, 2, 3] {
        let v = run_vn(t, n, &v0, &c, &grid)?;
        for x in [0.0, 1.0] {
            let brute = iterated_integral_vn(t, n, x, &v0, &c, 48)?;
            println!(
                "n = {n}, x = {x}: grid {:.10}  iterated {:.10}",
                v.interpolate(x),
                brute
            );
        }
    }
    for n in [8, 64, 256] {
        println!(
            "n = {n:>3}: v(0.5, 0) ≈ {:.8}",
            run_vn(t, n, &v0, &c, &grid)?.interpolate(0.0)
        );
    }
    Ok(())
}
