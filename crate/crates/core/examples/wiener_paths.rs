//! Sampling Brownian paths from counter-based streams and evaluating the
//! path functionals that enter the Feynman-Kac weight.
//!
//! cargo run --example wiener_paths

use feykac::wiener::{
    finite_dim_integral, potential_functional, quadratic_functional, sample_path, SeedSpec,
};
use feykac::Potential;

fn main() -> feykac::Result<()> {
    let seed = 42;
    let path = sample_path(1024, 1.0, SeedSpec::new(seed, 0))?;
    println!("w(1) = {:.6}", path.endpoint());
    println!(
        "∫(x + √(2t) w)² ds at t = 0.5, x = 1: {:.6}",
        quadratic_functional(&path, 0.5, 1.0)?
    );
    let c = Potential::GaussCos {
        amplitude: 1.0,
        omega: 1.0,
    };
    println!(
        "∫ c(t(1−s), √(2t) w + x) ds:          {:.6}",
        potential_functional(&path, 0.5, 1.0, &c)?
    );

    // the same stream always yields the same path
    assert_eq!(path, sample_path(1024, 1.0, SeedSpec::new(seed, 0))?);

    let n = 20_000;
    let var =
        (0..n).map(|i| sample_path(64, 1.0, SeedSpec::new(seed, i)).map(|p| p.endpoint().powi(2)));
    let var = var.sum::<feykac::Result<f64>>()? / n as f64;
    println!("sample E[w(1)²] over {n} paths: {var:.4}");

    // E[w(0.3) w(1)] = 0.3, by tensor Gauss-Hermite quadrature
    let cov = finite_dim_integral(|w| w[0] * w[1], &[0.3, 1.0], 32)?;
    println!("E[w(0.3) w(1)] by quadrature: {cov:.12}");
    Ok(())
}
