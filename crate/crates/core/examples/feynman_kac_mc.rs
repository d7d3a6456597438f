//! Monte Carlo estimates of `v(t, x)` from the Wiener-integral
//! representation, with and without variance reduction.
//!
//! cargo run --release --example feynman_kac_mc

use feykac::fkmc::{estimate_v, estimate_v_alt, McConfig};
use feykac::mehler::closed_form_k;
use feykac::{InitialCondition, Potential};

fn main() -> feykac::Result<()> {
    let (t, x) = (0.5, 1.0);
    let base = McConfig {
        n_paths: 50_000,
        m_steps: 256,
        ..McConfig::default()
    };

    let plain = estimate_v(t, x, &InitialCondition::One, &Potential::Zero, &base)?;
    let anti = estimate_v(
        t,
        x,
        &InitialCondition::One,
        &Potential::Zero,
        &McConfig {
            antithetic: true,
            ..base.clone()
        },
    )?;
    println!("k({t}, {x}) = {:.6}", closed_form_k(t, x));
    println!("plain       {:.6} ± {:.2e}", plain.mean, plain.std_error);
    println!("antithetic  {:.6} ± {:.2e}", anti.mean, anti.std_error);

    let c = Potential::GaussCos {
        amplitude: 1.0,
        omega: 1.0,
    };
    let v0 = InitialCondition::Gaussian(1.0);
    let cv = McConfig {
        control_variate: true,
        ..base.clone()
    };
    let main = estimate_v(0.25, x, &v0, &c, &cv)?;
    let alt = estimate_v_alt(0.25, x, &v0, &c, &base)?;
    println!(
        "gauss_cos, t = 0.25: main {:.6} ± {:.2e}, small-time {:.6} ± {:.2e}",
        main.mean, main.std_error, alt.mean, alt.std_error
    );
    Ok(())
}
