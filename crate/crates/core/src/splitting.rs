//! Alternating approximation `v_n^{(t)}`.
//!
//! `[0,t]` is cut into `2n` pieces of length `dt = t/2n` with boundaries
//! `τ_k = k·dt`. On even pieces the solution follows the harmonic-oscillator
//! heat flow at double speed (exactly `U_{2dt}`); on odd pieces it follows
//! `∂_τ v = −2 c(τ_{2k+2}, x) v` with the potential frozen at the right end of
//! the piece. Each full round therefore applies `U_{t/n}` followed by the
//! multiplier `exp(−(t/n) c((k+1)t/n, x))`.

use serde::Serialize;

use crate::error::{ensure_positive, Error, Result};
use crate::grid::{Grid, GridFunction};
use crate::mehler::MehlerOperator;
use crate::potentials::{InitialCondition, Potential};
use crate::quadrature::{gauss_hermite, tensor_expectation, DEFAULT_ORDER};

/// Largest `n` accepted by [`iterated_integral_vn`].
pub const MAX_ITERATED_N: usize = 3;
/// Largest `p` accepted by [`dyadic_study`].
pub const MAX_DYADIC_P: u32 = 8;
/// Relative edge magnitude above which a grid is considered too narrow for `v₀`.
const EDGE_TOLERANCE: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SplitSchedule {
    pub t: f64,
    pub n: usize,
}

impl SplitSchedule {
    pub fn new(t: f64, n: usize) -> Result<Self> {
        ensure_positive("t", t)?;
        if n == 0 {
            return Err(Error::Parameter(
                "splitting level n must be at least 1".into(),
            ));
        }
        Ok(Self { t, n })
    }

    /// Length `t/2n` of each sub-interval.
    pub fn dt(&self) -> f64 {
        self.t / (2 * self.n) as f64
    }

    /// `τ_k = k t / 2n` for `k = 0, …, 2n`, with `τ_{2n} = t` exactly.
    pub fn boundaries(&self) -> Vec<f64> {
        let m = 2 * self.n;
        (0..=m)
            .map(|k| {
                if k == m {
                    self.t
                } else {
                    k as f64 * self.t / m as f64
                }
            })
            .collect()
    }
}

/// Even sub-step: `U_{2dt} v`.
pub fn step_even(v: &GridFunction, dt: f64) -> Result<GridFunction> {
    ensure_positive("dt", dt)?;
    crate::mehler::apply_semigroup_grid(v, 2.0 * dt)
}

/// Odd sub-step: `v · exp(−2 c(τ_next, x) dt)`.
pub fn step_odd(v: &GridFunction, dt: f64, c: &Potential, tau_next: f64) -> Result<GridFunction> {
    ensure_positive("dt", dt)?;
    let mut out = v.clone();
    apply_potential(&mut out, dt, c, tau_next);
    Ok(out)
}

fn apply_potential(v: &mut GridFunction, dt: f64, c: &Potential, tau_next: f64) {
    if c.is_zero() {
        return;
    }
    let grid = v.grid;
    for (i, value) in v.values.iter_mut().enumerate() {
        *value *= (-2.0 * c.evaluate(tau_next, grid.x(i)) * dt).exp();
    }
}

fn tabulate_checked(v0: &InitialCondition, grid: &Grid) -> Result<GridFunction> {
    let v = GridFunction::from_initial(*grid, v0)?;
    if v.edge_ratio() > EDGE_TOLERANCE {
        return Err(Error::Parameter(format!(
            "grid [{}, {}] does not resolve `{v0}`: edge value ratio {:.3e}",
            grid.x_min,
            grid.x_max,
            v.edge_ratio()
        )));
    }
    Ok(v)
}

/// `v_n^{(t)}` at each round boundary `τ_{2k} = k t/n`, `k = 0, …, n`.
pub fn run_vn_snapshots(
    t: f64,
    n: usize,
    v0: &InitialCondition,
    c: &Potential,
    grid: &Grid,
    quad_order: usize,
) -> Result<Vec<GridFunction>> {
    let schedule = SplitSchedule::new(t, n)?;
    let tau = schedule.boundaries();
    let dt = schedule.dt();
    let mehler = MehlerOperator::new(grid, 2.0 * dt, quad_order)?;
    let mut v = tabulate_checked(v0, grid)?;
    let mut out = Vec::with_capacity(n + 1);
    out.push(v.clone());
    for k in 0..n {
        v = mehler.apply(&v);
        apply_potential(&mut v, dt, c, tau[2 * k + 2]);
        out.push(v.clone());
    }
    Ok(out)
}

/// `v_n^{(t)}(t, ·)` on `grid`.
pub fn run_vn(
    t: f64,
    n: usize,
    v0: &InitialCondition,
    c: &Potential,
    grid: &Grid,
) -> Result<GridFunction> {
    run_vn_with(t, n, v0, c, grid, DEFAULT_ORDER)
}

pub fn run_vn_with(
    t: f64,
    n: usize,
    v0: &InitialCondition,
    c: &Potential,
    grid: &Grid,
    quad_order: usize,
) -> Result<GridFunction> {
    let schedule = SplitSchedule::new(t, n)?;
    let tau = schedule.boundaries();
    let dt = schedule.dt();
    let mehler = MehlerOperator::new(grid, 2.0 * dt, quad_order)?;
    let mut v = tabulate_checked(v0, grid)?;
    for k in 0..n {
        v = mehler.apply(&v);
        apply_potential(&mut v, dt, c, tau[2 * k + 2]);
    }
    Ok(v)
}

/// `v_n^{(t)}(t,x)` from its explicit `n`-fold integral representation.
///
/// With `h = t/n` and `σ₀ = 0`, the integrand is
///
/// ```text
/// (2π sh 2h)^{−n/2} v₀(σ_n + x/ch(2h)^n)
///   · exp(−½ coth(2h) Σ_{i=1}^{n} (σ_i − σ_{i−1}/ch 2h)²)
///   · exp(−½ th(2h)   Σ_{j=1}^{n} (σ_{n−j} + x/ch(2h)^{n−j})²)
///   · exp(−h Σ_{j=1}^{n} c(j h, σ_{n−j} + x/ch(2h)^{n−j}))
/// ```
///
/// The unit-Jacobian substitution `uᵢ = σᵢ − σᵢ₋₁/ch 2h` turns the first
/// exponential into a product of independent `N(0, th 2h)` weights, which are
/// integrated by tensor Gauss–Hermite.
pub fn iterated_integral_vn(
    t: f64,
    n: usize,
    x: f64,
    v0: &InitialCondition,
    c: &Potential,
    quad_order: usize,
) -> Result<f64> {
    if n > MAX_ITERATED_N {
        return Err(Error::DimensionGuard {
            n,
            max: MAX_ITERATED_N,
        });
    }
    SplitSchedule::new(t, n)?;
    if v0.sup_norm().is_none() {
        return Err(Error::Parameter(format!("`{v0}` is unbounded")));
    }
    let rule = gauss_hermite(quad_order)?;
    let h = t / n as f64;
    let (ch, th) = ((2.0 * h).cosh(), (2.0 * h).tanh());
    let sd = th.sqrt();
    // x / ch^j for j = 0..=n
    let shifts: Vec<f64> = (0..=n).map(|j| x / ch.powi(j as i32)).collect();
    let mut sigma = vec![0.0; n + 1];
    let mean = tensor_expectation(&rule, n, |z| {
        for i in 1..=n {
            sigma[i] = sd * z[i - 1] + sigma[i - 1] / ch;
        }
        let mut quad = 0.0;
        let mut pot = 0.0;
        for j in 1..=n {
            let y = sigma[n - j] + shifts[n - j];
            quad += y * y;
            pot += c.evaluate(j as f64 * h, y);
        }
        v0.evaluate(sigma[n] + shifts[n]) * (-0.5 * th * quad - h * pot).exp()
    });
    Ok(ch.powf(-0.5 * n as f64) * mean)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DyadicRow {
    pub p: u32,
    pub n: usize,
    /// `v_{2^p}^{(t)}(t, x)` at each probe point.
    pub values: Vec<f64>,
    /// `max_x |v_{2^p} − v_{2^{p−1}}|` over the probes (absent for the first row).
    pub diff: Option<f64>,
    /// `log₂(diff_{p−1} / diff_p)`.
    pub local_order: Option<f64>,
    /// `(τ, values at probes)` at dyadic times `τ = j t / 2^q`, `q = min(p, 2)`.
    pub dyadic: Vec<(f64, Vec<f64>)>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DyadicStudy {
    pub t: f64,
    pub probes: Vec<f64>,
    pub rows: Vec<DyadicRow>,
    /// Least-squares slope of `−log₂ diff_p` against `p`.
    pub fitted_order: Option<f64>,
}

impl DyadicStudy {
    /// Finest-level values at the probes.
    pub fn limit(&self) -> &[f64] {
        &self.rows.last().expect("study has at least one row").values
    }

    /// First-order Richardson extrapolation `2 v_{2^P} − v_{2^{P−1}}`.
    pub fn extrapolated(&self) -> Option<Vec<f64>> {
        let [.., a, b] = self.rows.as_slice() else {
            return None;
        };
        Some(
            a.values
                .iter()
                .zip(&b.values)
                .map(|(a, b)| 2.0 * b - a)
                .collect(),
        )
    }

    /// Successive differences are non-increasing from `p_from` on.
    pub fn monotone_from(&self, p_from: u32) -> bool {
        let diffs: Vec<f64> = self
            .rows
            .iter()
            .filter(|r| r.p >= p_from)
            .filter_map(|r| r.diff)
            .collect();
        diffs.windows(2).all(|d| d[1] <= d[0])
    }
}

/// Runs `v_{2^p}^{(t)}` for `p = 1, …, p_max` and tabulates convergence.
pub fn dyadic_study(
    t: f64,
    p_max: u32,
    v0: &InitialCondition,
    c: &Potential,
    grid: &Grid,
    probes: &[f64],
) -> Result<DyadicStudy> {
    if !(1..=MAX_DYADIC_P).contains(&p_max) {
        return Err(Error::Parameter(format!(
            "p_max must be in 1..={MAX_DYADIC_P}, got {p_max}"
        )));
    }
    if probes.is_empty() {
        return Err(Error::Parameter(
            "at least one probe point is required".into(),
        ));
    }
    let mut rows: Vec<DyadicRow> = Vec::with_capacity(p_max as usize);
    for p in 1..=p_max {
        let n = 1usize << p;
        let snaps = run_vn_snapshots(t, n, v0, c, grid, DEFAULT_ORDER)?;
        let at = |v: &GridFunction| probes.iter().map(|&x| v.interpolate(x)).collect::<Vec<_>>();
        let values = at(&snaps[n]);
        let q = p.min(2);
        let dyadic = (1..=1usize << q)
            .map(|j| {
                let k = j * (n >> q);
                (j as f64 * t / (1usize << q) as f64, at(&snaps[k]))
            })
            .collect();
        let diff = rows.last().map(|prev| {
            prev.values
                .iter()
                .zip(&values)
                .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()))
        });
        let local_order = match (rows.last().and_then(|r| r.diff), diff) {
            (Some(a), Some(b)) if a > 0.0 && b > 0.0 => Some((a / b).log2()),
            _ => None,
        };
        rows.push(DyadicRow {
            p,
            n,
            values,
            diff,
            local_order,
            dyadic,
        });
    }
    let pts: Vec<(f64, f64)> = rows
        .iter()
        .filter_map(|r| r.diff.filter(|d| *d > 0.0).map(|d| (r.p as f64, -d.log2())))
        .collect();
    let fitted_order = (pts.len() >= 2).then(|| {
        let k = pts.len() as f64;
        let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
        let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
        let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
        let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
        sxy / sxx
    });
    Ok(DyadicStudy {
        t,
        probes: probes.to_vec(),
        rows,
        fitted_order,
    })
}
