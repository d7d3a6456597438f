//! Exact harmonic-oscillator heat flow `U_t = e^{−t(−∂² + x²)}`.
//!
//! All quadratures use the shifted form
//!
//! ```text
//! (U_t v)(x) = ∫ q(t,x,y) v(y + x/ch 2t) dy,
//! q(t,x,y)   = (2π sh 2t)^{−1/2} exp(−½ coth(2t) y² − ½ th(2t) x²)
//! ```
//!
//! whose Gaussian weight in `y` has variance `th 2t` independent of `x`, so a
//! single Gauss–Hermite rule serves every evaluation point. `t = 0` is the
//! identity and is left to callers; every entry point here requires `t > 0`.

use crate::error::{ensure_positive, Result};
use crate::grid::{cubic_stencil, GridFunction};
use crate::potentials::InitialCondition;
use crate::quadrature::{gauss_hermite, GaussHermite, DEFAULT_ORDER};

/// Mehler kernel in the shifted variable.
pub fn kernel_q(t: f64, x: f64, y: f64) -> Result<f64> {
    ensure_positive("t", t)?;
    let (sh, ch) = ((2.0 * t).sinh(), (2.0 * t).cosh());
    Ok((2.0 * std::f64::consts::PI * sh).powf(-0.5)
        * (-0.5 * (ch / sh) * y * y - 0.5 * (sh / ch) * x * x).exp())
}

/// `∫ q(t,x,y) dy` by a composite trapezoid rule over `±14` kernel widths.
///
/// This deliberately avoids the Gaussian algebra behind
/// [`closed_form_k`] so the two can be compared.
pub fn kernel_marginal(t: f64, x: f64) -> Result<f64> {
    ensure_positive("t", t)?;
    let width = (2.0 * t).tanh().sqrt();
    let cells = 2800;
    let a = 14.0 * width;
    let h = 2.0 * a / cells as f64;
    let mut sum = 0.5 * (kernel_q(t, x, -a)? + kernel_q(t, x, a)?);
    for i in 1..cells {
        sum += kernel_q(t, x, -a + i as f64 * h)?;
    }
    Ok(sum * h)
}

/// `k(t,x) = ch(2t)^{−1/2} exp(−½ th(2t) x²)`, the Wiener integral of the
/// quadratic exponential alone (equivalently `U_t 1`).
pub fn closed_form_k(t: f64, x: f64) -> f64 {
    let ch = (2.0 * t).cosh();
    ch.powf(-0.5) * (-0.5 * (2.0 * t).tanh() * x * x).exp()
}

/// `∫ w(1) exp(−t∫₀¹(x+√(2t) w)²) dm_W`.
pub fn closed_form_moment1(t: f64, x: f64) -> f64 {
    let ch = (2.0 * t).cosh();
    x * (1.0 - ch) / ((2.0 * t).sqrt() * ch) * closed_form_k(t, x)
}

/// `∫ w(1)² exp(−t∫₀¹(x+√(2t) w)²) dm_W`.
pub fn closed_form_moment2(t: f64, x: f64) -> f64 {
    let ch = (2.0 * t).cosh();
    let th = (2.0 * t).tanh();
    ((1.0 - ch).powi(2) * x * x / (ch * ch) + th) / (2.0 * t) * closed_form_k(t, x)
}

/// `U_t` applied to `exp(−x²/2σ²)`, by completing the square.
pub fn closed_form_gaussian(t: f64, x: f64, sigma: f64) -> f64 {
    let ch = (2.0 * t).cosh();
    let th = (2.0 * t).tanh();
    let s2 = sigma * sigma;
    closed_form_k(t, x) * (s2 / (s2 + th)).sqrt() * (-x * x / (2.0 * ch * ch * (s2 + th))).exp()
}

/// `(U_t f)(x)` for an arbitrary callable `f` growing at most polynomially.
pub fn apply_semigroup_fn<F: Fn(f64) -> f64>(
    f: F,
    t: f64,
    x: f64,
    rule: &GaussHermite,
) -> Result<f64> {
    ensure_positive("t", t)?;
    let ch = (2.0 * t).cosh();
    let th = (2.0 * t).tanh();
    let (scale, shift) = (th.sqrt(), x / ch);
    let mean = rule.expectation(|z| f(scale * z + shift));
    Ok(ch.powf(-0.5) * (-0.5 * th * x * x).exp() * mean)
}

/// `(U_t v₀)(x)` by Gauss–Hermite quadrature of order `quad_order`.
pub fn apply_semigroup(v0: &InitialCondition, t: f64, x: f64, quad_order: usize) -> Result<f64> {
    let rule = gauss_hermite(quad_order)?;
    apply_semigroup_fn(|y| v0.evaluate(y), t, x, &rule)
}

/// `U_t` restricted to a grid: the sparse linear map from grid values to grid
/// values obtained by quadrature against the piecewise-cubic interpolant.
/// Building it once and applying it repeatedly is how the splitting scheme
/// advances its even sub-steps.
#[derive(Clone, Debug)]
pub struct MehlerOperator {
    t: f64,
    n_points: usize,
    // per output point: (first stencil index, 4 coefficients) for every quadrature node
    taps: Vec<Vec<(usize, [f64; 4])>>,
}

impl MehlerOperator {
    pub fn new(grid: &crate::grid::Grid, t: f64, quad_order: usize) -> Result<Self> {
        ensure_positive("t", t)?;
        grid.validate()?;
        let rule = gauss_hermite(quad_order)?;
        let ch = (2.0 * t).cosh();
        let th = (2.0 * t).tanh();
        let scale = th.sqrt();
        let taps = grid
            .points()
            .map(|x| {
                let pref = ch.powf(-0.5) * (-0.5 * th * x * x).exp();
                rule.iter()
                    .filter_map(|(z, w)| {
                        cubic_stencil(grid, scale * z + x / ch)
                            .map(|(i0, c)| (i0, c.map(|ck| ck * w * pref)))
                    })
                    .collect()
            })
            .collect();
        Ok(Self {
            t,
            n_points: grid.n_points,
            taps,
        })
    }

    pub fn time(&self) -> f64 {
        self.t
    }

    pub fn apply(&self, v: &GridFunction) -> GridFunction {
        assert_eq!(v.len(), self.n_points, "grid mismatch");
        let values = self
            .taps
            .iter()
            .map(|row| {
                row.iter()
                    .map(|(i0, c)| {
                        let s = &v.values[*i0..*i0 + 4];
                        c[0] * s[0] + c[1] * s[1] + c[2] * s[2] + c[3] * s[3]
                    })
                    .sum()
            })
            .collect();
        GridFunction {
            grid: v.grid,
            values,
        }
    }
}

/// `U_t v` for grid data, at the default quadrature order.
pub fn apply_semigroup_grid(v: &GridFunction, t: f64) -> Result<GridFunction> {
    apply_semigroup_grid_with(v, t, DEFAULT_ORDER)
}

pub fn apply_semigroup_grid_with(
    v: &GridFunction,
    t: f64,
    quad_order: usize,
) -> Result<GridFunction> {
    Ok(MehlerOperator::new(&v.grid, t, quad_order)?.apply(v))
}

/// Tabulates `U_t v₀` on `grid` from the continuous quadrature.
pub fn tabulate_semigroup(
    v0: &InitialCondition,
    t: f64,
    grid: &crate::grid::Grid,
    quad_order: usize,
) -> Result<GridFunction> {
    let rule = gauss_hermite(quad_order)?;
    let values = grid
        .points()
        .map(|x| apply_semigroup_fn(|y| v0.evaluate(y), t, x, &rule))
        .collect::<Result<Vec<_>>>()?;
    GridFunction::new(*grid, values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Grid;

    const TS: [f64; 3] = [0.1, 0.5, 1.0];
    const XS: [f64; 5] = [0.0, 1.0, -1.0, 2.0, -2.0];

    #[test]
    fn kernel_basics() {
        for t in TS {
            let at0 = kernel_q(t, 0.0, 0.0).unwrap();
            assert!(
                (at0 - (2.0 * std::f64::consts::PI * (2.0 * t).sinh()).powf(-0.5)).abs() < 1e-15
            );
        }
        assert!(kernel_q(0.0, 0.0, 0.0).is_err());
        assert!(kernel_q(-1.0, 0.0, 0.0).is_err());
        // q(0.5, 1, 0) = (2π sh 1)^{-1/2} e^{-th(1)/2}; digits from an independent
        // 30-digit evaluation (mpmath)
        let q = kernel_q(0.5, 1.0, 0.0).unwrap();
        assert!((q - 0.251_464_037_436_188_84).abs() < 1e-13, "{q}");
    }

    #[test]
    fn kernel_marginal_is_k() {
        for t in TS {
            for x in XS {
                let m = kernel_marginal(t, x).unwrap();
                assert!((m - closed_form_k(t, x)).abs() < 1e-8, "t={t} x={x}");
            }
        }
    }

    #[test]
    fn closed_forms() {
        for t in TS {
            assert!((closed_form_k(t, 0.0) - (2.0 * t).cosh().powf(-0.5)).abs() < 1e-15);
            assert_eq!(closed_form_moment1(t, 0.0), 0.0);
        }
        assert!((closed_form_k(1e-8, 0.7) - 1.0).abs() < 1e-6);
        // independent 30-digit evaluations of the printed formulas
        assert!((closed_form_k(0.5, 1.0) - 0.550_082_235_292_168_2).abs() < 1e-14);
        let m2 = closed_form_moment2(0.5, 0.0);
        assert!((m2 - 1f64.tanh() * closed_form_k(0.5, 0.0)).abs() < 1e-15);
        assert!((closed_form_moment1(0.5, 1.0) - (-0.193_599_091_844_495_63)).abs() < 1e-14);
        assert!((closed_form_moment2(0.5, 1.0) - 0.487_075_788_690_822_49).abs() < 1e-14);
    }

    #[test]
    fn semigroup_on_monomials_matches_closed_forms() {
        // U_t x = k x / ch,  U_t x² = k (th + x²/ch²)
        for t in TS {
            for x in XS {
                let ch = (2.0 * t).cosh();
                let k = closed_form_k(t, x);
                let one = apply_semigroup(&InitialCondition::One, t, x, 128).unwrap();
                let id = apply_semigroup(&InitialCondition::Identity, t, x, 128).unwrap();
                let sq = apply_semigroup(&InitialCondition::Square, t, x, 128).unwrap();
                assert!((one - k).abs() < 1e-8);
                assert!((id - k * x / ch).abs() < 1e-8);
                assert!((sq - k * ((2.0 * t).tanh() + x * x / (ch * ch))).abs() < 1e-8);
                // moment identities follow by linearity
                let m1 = (id - x * one) / (2.0 * t).sqrt();
                assert!((m1 - closed_form_moment1(t, x)).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn semigroup_on_gaussians() {
        for sigma in [0.5, 1.0, 2.0] {
            for t in [0.05, 0.25, 1.0] {
                for x in XS {
                    let q = apply_semigroup(&InitialCondition::Gaussian(sigma), t, x, 128).unwrap();
                    assert!((q - closed_form_gaussian(t, x, sigma)).abs() < 1e-12);
                }
            }
        }
        let g = InitialCondition::Gaussian(1.0);
        for x in XS {
            let near0 = apply_semigroup(&g, 1e-6, x, 128).unwrap();
            assert!((near0 - g.evaluate(x)).abs() < 1e-4);
        }
        assert!(apply_semigroup(&g, 0.0, 0.0, 128).is_err());
    }

    #[test]
    fn continuous_semigroup_law() {
        // U_t (U_τ g) vs U_{t+τ} g, inner application by closed form
        for t in [0.1, 0.25] {
            for tau in [0.1, 0.25] {
                let rule = gauss_hermite(128).unwrap();
                for x in XS {
                    let lhs =
                        apply_semigroup_fn(|y| closed_form_gaussian(tau, y, 1.0), t, x, &rule)
                            .unwrap();
                    let rhs = closed_form_gaussian(t + tau, x, 1.0);
                    assert!((lhs - rhs).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn grid_application() {
        let grid = Grid::default();
        let zero = grid.zeros();
        assert_eq!(apply_semigroup_grid(&zero, 0.3).unwrap(), zero);

        let v = GridFunction::from_initial(grid, &InitialCondition::Gaussian(1.0)).unwrap();
        let u = apply_semigroup_grid(&v, 0.25).unwrap();
        let exact = tabulate_semigroup(&InitialCondition::Gaussian(1.0), 0.25, &grid, 128).unwrap();
        assert!(u.max_abs_diff(&exact) < 1e-6, "{}", u.max_abs_diff(&exact));
        assert!(apply_semigroup_grid(&v, 0.0).is_err());
    }

    #[test]
    fn grid_semigroup_law_and_contraction() {
        let grid = Grid::default();
        let v = GridFunction::from_initial(grid, &InitialCondition::Gaussian(1.0)).unwrap();
        for t in [0.1, 0.25] {
            for tau in [0.1, 0.25] {
                let two = apply_semigroup_grid(&apply_semigroup_grid(&v, tau).unwrap(), t).unwrap();
                let one = apply_semigroup_grid(&v, t + tau).unwrap();
                assert!(two.max_abs_diff(&one) < 1e-6);
            }
        }
        for v0 in [
            InitialCondition::Gaussian(0.5),
            InitialCondition::Gaussian(2.0),
            InitialCondition::Hat(1.0),
        ] {
            let v = GridFunction::from_initial(grid, &v0).unwrap();
            for t in [0.01, 0.1, 1.0] {
                let u = apply_semigroup_grid(&v, t).unwrap();
                assert!(u.l2_norm() <= v.l2_norm() + 1e-8, "{v0} t={t}");
            }
        }
    }

    #[test]
    fn pde_residual_is_second_order() {
        let g = InitialCondition::Gaussian(1.0);
        let (t, x) = (0.3, 0.7);
        let v = |t: f64, x: f64| apply_semigroup(&g, t, x, 128).unwrap();
        let residual = |h: f64| {
            let dt = (v(t + h, x) - v(t - h, x)) / (2.0 * h);
            let dxx = (v(t, x + h) - 2.0 * v(t, x) + v(t, x - h)) / (h * h);
            (dt - dxx + x * x * v(t, x)).abs()
        };
        let r: Vec<f64> = [0.04, 0.02, 0.01].iter().map(|&h| residual(h)).collect();
        assert!(r[0] / r[1] >= 3.0 && r[1] / r[2] >= 3.0, "{r:?}");
    }
}
