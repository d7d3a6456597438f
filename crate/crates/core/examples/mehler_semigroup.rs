//! The unperturbed semigroup `U_t = e^{t(∂² − x²)}` through the Mehler
//! kernel, pointwise and on a grid.
//!
//! cargo run --example mehler_semigroup

use feykac::mehler::{apply_semigroup, apply_semigroup_grid, closed_form_gaussian};
use feykac::{Grid, GridFunction, InitialCondition};

fn main() -> feykac::Result<()> {
    let v0 = InitialCondition::Gaussian(1.0);
    for x in [0.0, 0.5, 1.0, 2.0] {
        let q = apply_semigroup(&v0, 0.5, x, 128)?;
        let exact = closed_form_gaussian(0.5, x, 1.0);
        println!("U_0.5 v0({x}) = {q:.12}  closed form {exact:.12}");
    }

    let grid = Grid::default();
    let f = GridFunction::from_initial(grid, &v0)?;
    let composed = apply_semigroup_grid(&apply_semigroup_grid(&f, 0.25)?, 0.1)?;
    let direct = apply_semigroup_grid(&f, 0.35)?;
    println!(
        "‖U_0.1 U_0.25 v0 − U_0.35 v0‖∞ = {:.3e}",
        composed.max_abs_diff(&direct)
    );
    println!(
        "‖U_0.35 v0‖₂ = {:.6} ≤ ‖v0‖₂ = {:.6}",
        direct.l2_norm(),
        f.l2_norm()
    );
    Ok(())
}
