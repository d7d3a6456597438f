//! Gauss–Hermite quadrature against the standard normal density.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{Error, Result};

pub const DEFAULT_ORDER: usize = 128;

/// Nodes and weights such that `Σ wᵢ f(zᵢ) ≈ E[f(Z)]`, `Z ~ N(0,1)`.
#[derive(Clone, Debug)]
pub struct GaussHermite {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussHermite {
    /// Computes the rule by Newton iteration on orthonormal Hermite
    /// polynomials (physicists' convention), then rescales to the
    /// probabilists' weight.
    pub fn new(order: usize) -> Result<Self> {
        if order == 0 {
            return Err(Error::Parameter(
                "quadrature order must be at least 1".into(),
            ));
        }
        const PIM4: f64 = 0.751_125_544_464_942_5; // π^{-1/4}
        let n = order;
        let nf = n as f64;
        let mut x = vec![0.0; n];
        let mut w = vec![0.0; n];
        let mut z = 0.0_f64;
        for i in 0..n.div_ceil(2) {
            z = match i {
                0 => (2.0 * nf + 1.0).sqrt() - 1.85575 * (2.0 * nf + 1.0).powf(-0.16667),
                1 => z - 1.14 * nf.powf(0.426) / z,
                2 => 1.86 * z - 0.86 * x[0],
                3 => 1.91 * z - 0.91 * x[1],
                _ => 2.0 * z - x[i - 2],
            };
            let mut pp = 0.0;
            for _ in 0..200 {
                let mut p1 = PIM4;
                let mut p2 = 0.0;
                for j in 1..=n {
                    let p3 = p2;
                    p2 = p1;
                    let jf = j as f64;
                    p1 = z * (2.0 / jf).sqrt() * p2 - ((jf - 1.0) / jf).sqrt() * p3;
                }
                pp = (2.0 * nf).sqrt() * p2;
                // deflate the roots already found so Newton cannot fall back onto them
                let shift: f64 = x[..i].iter().map(|&r| 1.0 / (z - r) + 1.0 / (z + r)).sum();
                let dz = p1 / (pp - p1 * shift);
                z -= dz;
                if dz.abs() <= 1e-15 * z.abs().max(1.0) {
                    break;
                }
            }
            x[i] = z;
            x[n - 1 - i] = -z;
            w[i] = 2.0 / (pp * pp);
            w[n - 1 - i] = w[i];
        }
        if n % 2 == 1 {
            x[n / 2] = 0.0;
        }
        let sqrt_pi = std::f64::consts::PI.sqrt();
        let sqrt2 = std::f64::consts::SQRT_2;
        let mut pairs: Vec<(f64, f64)> = x
            .iter()
            .zip(&w)
            .map(|(v, wt)| (v * sqrt2, wt / sqrt_pi))
            .collect();
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        let (nodes, weights) = pairs.into_iter().unzip();
        Ok(Self { nodes, weights })
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.nodes.iter().copied().zip(self.weights.iter().copied())
    }

    /// `E[f(Z)]` for `Z ~ N(0,1)`.
    pub fn expectation<F: FnMut(f64) -> f64>(&self, mut f: F) -> f64 {
        self.iter().map(|(z, w)| w * f(z)).sum()
    }
}

/// Shared, lazily built rule of the given order.
pub fn gauss_hermite(order: usize) -> Result<Arc<GaussHermite>> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<GaussHermite>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(rule) = cache.lock().unwrap().get(&order) {
        return Ok(rule.clone());
    }
    let rule = Arc::new(GaussHermite::new(order)?);
    cache.lock().unwrap().insert(order, rule.clone());
    Ok(rule)
}

/// Tensor-product expectation `E[f(Z₁,…,Z_d)]` over independent standard normals.
pub fn tensor_expectation<F: FnMut(&[f64]) -> f64>(
    rule: &GaussHermite,
    dim: usize,
    mut f: F,
) -> f64 {
    let n = rule.order();
    if dim == 0 {
        return f(&[]);
    }
    let mut idx = vec![0usize; dim];
    let mut z = vec![rule.nodes[0]; dim];
    let mut total = 0.0;
    loop {
        let weight: f64 = idx.iter().map(|&i| rule.weights[i]).product();
        total += weight * f(&z);
        let mut k = dim;
        loop {
            if k == 0 {
                return total;
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < n {
                z[k] = rule.nodes[idx[k]];
                break;
            }
            idx[k] = 0;
            z[k] = rule.nodes[0];
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn low_orders_match_known_rules() {
        let r2 = GaussHermite::new(2).unwrap();
        assert!((r2.nodes()[0] + 1.0).abs() < 1e-14 && (r2.nodes()[1] - 1.0).abs() < 1e-14);
        assert!((r2.weights()[0] - 0.5).abs() < 1e-14);

        let r3 = GaussHermite::new(3).unwrap();
        assert!((r3.nodes()[2] - 3f64.sqrt()).abs() < 1e-14);
        assert_eq!(r3.nodes()[1], 0.0);
        assert!((r3.weights()[1] - 2.0 / 3.0).abs() < 1e-14);
        assert!((r3.weights()[0] - 1.0 / 6.0).abs() < 1e-14);
    }

    #[test]
    fn normal_moments_exact() {
        for order in [10, 33, 64, 128, 200, 300] {
            let rule = GaussHermite::new(order).unwrap();
            let s = rule.expectation(|_| 1.0);
            assert!((s - 1.0).abs() < 1e-13, "order {order}: {s}");
            assert!((rule.expectation(|z| z * z) - 1.0).abs() < 1e-12);
            assert!((rule.expectation(|z| z.powi(4)) - 3.0).abs() < 1e-11);
            assert!((rule.expectation(|z| z.powi(6)) - 15.0).abs() < 1e-10);
            assert!(rule.expectation(|z| z.powi(3)).abs() < 1e-12);
            assert!(rule.nodes().windows(2).all(|p| p[0] < p[1]));
        }
    }

    #[test]
    fn gaussian_integrand() {
        // E[exp(-a Z²)] = (1+2a)^{-1/2}
        let rule = gauss_hermite(128).unwrap();
        let got = rule.expectation(|z| (-0.3 * z * z).exp());
        assert!((got - 1.6f64.powf(-0.5)).abs() < 1e-14);
    }

    #[test]
    fn tensor_product() {
        let rule = GaussHermite::new(8).unwrap();
        let got = tensor_expectation(&rule, 3, |z| (z[0] * z[1]).powi(2) + z[2].powi(4));
        assert!((got - 4.0).abs() < 1e-12);
    }

    #[test]
    fn zero_order_rejected() {
        assert!(GaussHermite::new(0).is_err());
    }
}
