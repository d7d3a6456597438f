//! Closed forms for `k = U_t 1` and the first two moments, checked against
//! a direct quadrature of the Mehler kernel.
//!
//! cargo run --example closed_form_oracles

use feykac::mehler::{closed_form_k, closed_form_moment1, closed_form_moment2, kernel_marginal};

fn main() -> feykac::Result<()> {
    println!(
        "{:>5} {:>5} {:>14} {:>14} {:>14} {:>10}",
        "t", "x", "k", "m1", "m2", "|∫q − k|"
    );
    for t in [0.1, 0.5, 1.0] {
        for x in [0.0, 1.0, 2.0] {
            let k = closed_form_k(t, x);
            let gap = (kernel_marginal(t, x)? - k).abs();
            println!(
                "{t:>5} {x:>5} {k:>14.10} {:>14.10} {:>14.10} {gap:>10.2e}",
                closed_form_moment1(t, x),
                closed_form_moment2(t, x)
            );
        }
    }
    Ok(())
}
