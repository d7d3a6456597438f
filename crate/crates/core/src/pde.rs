//! Crank–Nicolson reference solver on a truncated domain with zero
//! Dirichlet boundaries:
//!
//! ```text
//! ∂_t v = ∂²_x v − (x² + c(τ + dt/2, x)) v
//! ```
//!
//! Second-order central differences in space; each step solves one
//! tridiagonal system by the Thomas algorithm.

use serde::{Deserialize, Serialize};

use crate::error::{ensure_positive, Error, Result};
use crate::grid::{Grid, GridFunction};
use crate::potentials::{InitialCondition, Potential};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PdeConfig {
    pub grid: Grid,
    pub dt: f64,
}

impl Default for PdeConfig {
    fn default() -> Self {
        Self {
            grid: Grid::default(),
            dt: 1e-4,
        }
    }
}

impl PdeConfig {
    pub fn validate(&self) -> Result<()> {
        self.grid.validate()?;
        if self.grid.n_points < 3 {
            return Err(Error::Parameter(
                "Crank-Nicolson needs at least one interior point".into(),
            ));
        }
        ensure_positive("dt", self.dt)
    }

    /// Number of steps to reach `t`; `t` must be an integer multiple of `dt`.
    pub fn steps_to(&self, t: f64) -> Result<usize> {
        let steps = (t / self.dt).round();
        if steps < 0.0 || ((steps * self.dt) - t).abs() > 1e-9 * t.abs().max(self.dt) {
            return Err(Error::Parameter(format!(
                "t = {t} is not an integer multiple of dt = {}",
                self.dt
            )));
        }
        Ok(steps as usize)
    }
}

fn initial_on_grid(v0: &InitialCondition, grid: &Grid) -> Result<GridFunction> {
    let mut v = GridFunction::from_initial(*grid, v0)?;
    if v.edge_ratio() > 1e-6 {
        return Err(Error::Parameter(format!(
            "grid [{}, {}] does not resolve `{v0}` at its edges",
            grid.x_min, grid.x_max
        )));
    }
    let n = v.len();
    v.values[0] = 0.0;
    v.values[n - 1] = 0.0;
    Ok(v)
}

/// Thomas algorithm for a constant off-diagonal `off` and diagonal `diag`.
fn solve_tridiagonal(off: f64, diag: &[f64], rhs: &mut [f64], scratch: &mut [f64]) {
    let n = diag.len();
    scratch[0] = off / diag[0];
    rhs[0] /= diag[0];
    for i in 1..n {
        let denom = diag[i] - off * scratch[i - 1];
        scratch[i] = off / denom;
        rhs[i] = (rhs[i] - off * rhs[i - 1]) / denom;
    }
    for i in (0..n - 1).rev() {
        rhs[i] -= scratch[i] * rhs[i + 1];
    }
}

/// Marches `steps` Crank–Nicolson steps from `v`, calling `visit(k, v)` after
/// each step `k = 1..=steps`.
fn march<F: FnMut(usize, &GridFunction)>(
    mut v: GridFunction,
    c: &Potential,
    steps: usize,
    cfg: &PdeConfig,
    mut visit: F,
) -> Result<GridFunction> {
    let grid = cfg.grid;
    let (h, dt) = (grid.spacing(), cfg.dt);
    let r = dt / (2.0 * h * h);
    let inner = grid.n_points - 2;
    let x2: Vec<f64> = (1..=inner).map(|i| grid.x(i).powi(2)).collect();
    let mut potential = vec![0.0; inner];
    let mut diag = vec![0.0; inner];
    let mut rhs = vec![0.0; inner];
    let mut scratch = vec![0.0; inner];
    let norm0 = v.l2_norm();
    let m = c.inf_bound();
    let time_dependent = c.as_constant().is_none() && c.hoelder_l() > 0.0;
    let mut filled = false;
    for k in 0..steps {
        if time_dependent || !filled {
            let tau = (k as f64 + 0.5) * dt;
            for (i, p) in potential.iter_mut().enumerate() {
                *p = x2[i] + c.evaluate(tau, grid.x(i + 1));
            }
            filled = true;
        }
        let u = &v.values;
        for i in 0..inner {
            let half = 0.5 * dt * potential[i];
            diag[i] = 1.0 + 2.0 * r + half;
            rhs[i] = r * u[i] + (1.0 - 2.0 * r - half) * u[i + 1] + r * u[i + 2];
        }
        solve_tridiagonal(-r, &diag, &mut rhs, &mut scratch);
        v.values[1..=inner].copy_from_slice(&rhs);

        let norm = v.l2_norm();
        let bound = 10.0 * (-m * dt * (k + 1) as f64).exp() * norm0;
        if !norm.is_finite() || norm > bound.max(f64::MIN_POSITIVE) && norm0 > 0.0 {
            return Err(Error::Instability {
                step: k + 1,
                norm,
                bound,
            });
        }
        visit(k + 1, &v);
    }
    Ok(v)
}

/// `v(t, ·)` on `cfg.grid`.
pub fn solve_cn(
    v0: &InitialCondition,
    c: &Potential,
    t: f64,
    cfg: &PdeConfig,
) -> Result<GridFunction> {
    cfg.validate()?;
    ensure_positive("t", t)?;
    let steps = cfg.steps_to(t)?;
    march(initial_on_grid(v0, &cfg.grid)?, c, steps, cfg, |_, _| {})
}

/// Both sides of `∫_α^β ∫ |v|² dx dt ≤ ‖v₀‖² ∫_α^β e^{−2t·inf c} dt`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct L2Report {
    pub lhs: f64,
    pub rhs: f64,
    /// `lhs / rhs`, or 0 when both vanish.
    pub ratio: f64,
}

pub fn l2_inequality_check(
    v0: &InitialCondition,
    c: &Potential,
    alpha: f64,
    beta: f64,
    cfg: &PdeConfig,
) -> Result<L2Report> {
    cfg.validate()?;
    if !v0.is_l2() {
        return Err(Error::Parameter(format!("`{v0}` is not square integrable")));
    }
    if !(alpha >= 0.0 && beta > alpha) {
        return Err(Error::Parameter(format!(
            "need 0 ≤ α < β, got [{alpha}, {beta}]"
        )));
    }
    let first = if alpha == 0.0 {
        0
    } else {
        cfg.steps_to(alpha)?
    };
    let last = cfg.steps_to(beta)?;
    let v = initial_on_grid(v0, &cfg.grid)?;
    let norm0_sq = v.l2_norm().powi(2);

    let mut lhs = 0.0;
    let weight = |k: usize| if k == first || k == last { 0.5 } else { 1.0 };
    if first == 0 {
        lhs += weight(0) * norm0_sq;
    }
    march(v, c, last, cfg, |k, u| {
        if k >= first {
            lhs += weight(k) * u.l2_norm().powi(2);
        }
    })?;
    lhs *= cfg.dt;

    let m = c.inf_bound();
    let time_integral = if m == 0.0 {
        beta - alpha
    } else {
        ((-2.0 * alpha * m).exp() - (-2.0 * beta * m).exp()) / (2.0 * m)
    };
    let rhs = norm0_sq * time_integral;
    let ratio = if rhs == 0.0 && lhs == 0.0 {
        0.0
    } else {
        lhs / rhs
    };
    Ok(L2Report { lhs, rhs, ratio })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mehler::{apply_semigroup_grid, tabulate_semigroup};

    fn gauss() -> InitialCondition {
        InitialCondition::Gaussian(1.0)
    }

    #[test]
    fn matches_mehler_without_potential() {
        let cfg = PdeConfig::default();
        let v = solve_cn(&gauss(), &Potential::Zero, 0.5, &cfg).unwrap();
        let v0 = GridFunction::from_initial(cfg.grid, &gauss()).unwrap();
        let exact = apply_semigroup_grid(&v0, 0.5).unwrap();
        assert!(v.max_abs_diff(&exact) < 1e-4, "{}", v.max_abs_diff(&exact));
    }

    #[test]
    fn zero_stays_zero() {
        let v = solve_cn(
            &InitialCondition::Zero,
            &Potential::Bump(1.0),
            0.01,
            &PdeConfig::default(),
        )
        .unwrap();
        assert_eq!(v.max_abs(), 0.0);
    }

    #[test]
    fn step_count_must_be_integral() {
        let cfg = PdeConfig {
            dt: 0.03,
            ..PdeConfig::default()
        };
        assert!(matches!(
            solve_cn(&gauss(), &Potential::Zero, 0.1, &cfg),
            Err(Error::Parameter(_))
        ));
        assert!(solve_cn(&InitialCondition::One, &Potential::Zero, 0.09, &cfg).is_err());
    }

    #[test]
    fn constant_potential_shift() {
        // The CN amplification of the shifted operator differs from e^{−κ dt}
        // times the unshifted one by O(dt²) per unit time; the gap must shrink
        // fourfold when dt halves.
        let kappa = 2.0;
        let t = 0.1;
        let gap = |dt: f64| {
            let cfg = PdeConfig {
                dt,
                ..PdeConfig::default()
            };
            let base = solve_cn(&gauss(), &Potential::Zero, t, &cfg).unwrap();
            let shifted = solve_cn(&gauss(), &Potential::Constant(kappa), t, &cfg).unwrap();
            shifted.max_abs_diff(&base.scaled((-kappa * t).exp()))
        };
        let (g1, g2) = (gap(1e-3), gap(5e-4));
        assert!(g1 < 1e-6 && g2 < g1 / 3.5, "{g1} {g2}");
    }

    #[test]
    fn second_order_convergence() {
        let t = 0.2;
        let err = |h: f64, dt: f64| {
            let cfg = PdeConfig {
                grid: Grid::symmetric(12.0, h).unwrap(),
                dt,
            };
            let v = solve_cn(&gauss(), &Potential::Zero, t, &cfg).unwrap();
            let exact = tabulate_semigroup(&gauss(), t, &cfg.grid, 128).unwrap();
            v.max_abs_diff(&exact)
        };
        let (e1, e2) = (err(0.08, 0.01), err(0.04, 0.005));
        assert!(e1 / e2 >= 3.5, "{e1} {e2}");
    }

    #[test]
    fn decay_bound() {
        let cfg = PdeConfig {
            dt: 1e-3,
            ..PdeConfig::default()
        };
        for c in [
            Potential::Zero,
            Potential::Constant(2.0),
            Potential::GaussCos {
                amplitude: 1.0,
                omega: 1.0,
            },
            Potential::Bump(-1.0),
        ] {
            let v0 = GridFunction::from_initial(cfg.grid, &gauss()).unwrap();
            let v = solve_cn(&gauss(), &c, 0.5, &cfg).unwrap();
            assert!(
                v.l2_norm() <= (-c.inf_bound() * 0.5).exp() * v0.l2_norm() * (1.0 + 1e-6),
                "{c}"
            );
        }
    }

    #[test]
    fn l2_inequality() {
        let cfg = PdeConfig {
            dt: 1e-3,
            ..PdeConfig::default()
        };
        for c in [Potential::Zero, Potential::Constant(2.0)] {
            let r = l2_inequality_check(&gauss(), &c, 0.1, 0.5, &cfg).unwrap();
            assert!(r.ratio <= 1.0 + 1e-3, "{c}: {r:?}");
            assert!(r.lhs > 0.0);
        }
        let z =
            l2_inequality_check(&InitialCondition::Zero, &Potential::Zero, 0.1, 0.5, &cfg).unwrap();
        assert_eq!((z.lhs, z.rhs, z.ratio), (0.0, 0.0, 0.0));
        // right side for constant(2) uses e^{−4t}
        let r = l2_inequality_check(&gauss(), &Potential::Constant(2.0), 0.1, 0.5, &cfg).unwrap();
        let norm0 = GridFunction::from_initial(cfg.grid, &gauss())
            .unwrap()
            .l2_norm()
            .powi(2);
        let expect = norm0 * ((-0.4f64).exp() - (-2.0f64).exp()) / 4.0;
        assert!((r.rhs - expect).abs() < 1e-14);
        assert!(l2_inequality_check(&gauss(), &Potential::Zero, 0.5, 0.1, &cfg).is_err());
        assert!(
            l2_inequality_check(&InitialCondition::One, &Potential::Zero, 0.1, 0.5, &cfg).is_err()
        );
    }

    #[test]
    fn thomas_solver() {
        // [[4,1,0],[1,4,1],[0,1,4]] x = [5,6,5] → x = [1,1,1]
        let mut rhs = [5.0, 6.0, 5.0];
        let mut scratch = [0.0; 3];
        solve_tridiagonal(1.0, &[4.0, 4.0, 4.0], &mut rhs, &mut scratch);
        for v in rhs {
            assert!((v - 1.0).abs() < 1e-14);
        }
    }
}
