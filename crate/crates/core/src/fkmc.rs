//! Monte Carlo estimators of the Wiener-integral representations.
//!
//! The main representation, for `t > 0`,
//!
//! ```text
//! v(t,x) = E[ v₀(√(2t) w(1) + x) · exp(−t ∫₀¹ (x + √(2t) w(s))² ds)
//!                                · exp(−t ∫₀¹ c(t(1−s), √(2t) w(s) + x) ds) ]
//! ```
//!
//! uses Brownian paths on `[0,1]`; the small-time variant uses paths on
//! `[0,2t]`. Path `i` of an estimate is drawn from stream `i` of the master
//! seed (see [`SeedSpec`]). Samples are evaluated in parallel but stored by
//! index and reduced sequentially, so results are bit-identical for any
//! number of workers.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{ensure_positive, Error, Result};
use crate::mehler::closed_form_k;
use crate::potentials::{InitialCondition, Potential};
use crate::wiener::{
    alt_exponents, potential_unchecked, quadratic_unchecked, zero_path, Path, SeedSpec,
};

/// Streams of the small-time representation live in their own half of the
/// stream space so its samples are independent of the main estimator's.
const ALT_STREAM_DOMAIN: u64 = 1 << 63;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct McConfig {
    /// Path budget. With antithetic pairing this counts both members of a pair.
    pub n_paths: usize,
    pub m_steps: usize,
    pub seed: u64,
    pub antithetic: bool,
    /// Use `exp(−t∫(x+√(2t)w)²)`, whose mean is `k(t,x)`, as a control variate.
    pub control_variate: bool,
    /// Largest `t` accepted by [`estimate_v_alt`].
    pub t_max_alt: f64,
}

impl Default for McConfig {
    fn default() -> Self {
        Self {
            n_paths: 200_000,
            m_steps: 512,
            seed: 20_240_917,
            antithetic: false,
            control_variate: false,
            t_max_alt: 0.5,
        }
    }
}

impl McConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_paths == 0 {
            return Err(Error::Parameter("n_paths must be at least 1".into()));
        }
        if self.m_steps == 0 {
            return Err(Error::Parameter("m_steps must be at least 1".into()));
        }
        ensure_positive("t_max_alt", self.t_max_alt)
    }

    /// Number of independent samples: pairs when antithetic, paths otherwise.
    pub fn n_samples(&self) -> usize {
        if self.antithetic {
            self.n_paths.div_ceil(2)
        } else {
            self.n_paths
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct McEstimate {
    pub mean: f64,
    /// Sample standard deviation over `√n_samples`.
    pub std_error: f64,
    pub n_paths: usize,
    pub n_samples: usize,
    pub m_steps: usize,
}

impl McEstimate {
    /// `|mean − target| ≤ k·std_error`.
    pub fn within(&self, target: f64, k: f64) -> bool {
        (self.mean - target).abs() <= k * self.std_error
    }
}

/// One per-path value of the main integrand (no averaging).
pub fn integrand_v(path: &Path, t: f64, x: f64, v0: &InitialCondition, c: &Potential) -> f64 {
    let end = (2.0 * t).sqrt() * path.endpoint() + x;
    let v = v0.evaluate(end);
    if v == 0.0 {
        return 0.0;
    }
    v * (-t * quadratic_unchecked(path, t, x)).exp()
        * (-t * potential_unchecked(path, t, x, c)).exp()
}

/// One per-path value of the small-time integrand on a path over `[0,2t]`.
pub fn integrand_v_alt(path: &Path, t: f64, x: f64, v0: &InitialCondition, c: &Potential) -> f64 {
    let v = v0.evaluate(path.endpoint() + x);
    if v == 0.0 {
        return 0.0;
    }
    let (quad, pot) = alt_exponents(path, t, x, c);
    v * (-quad).exp() * (-pot).exp()
}

fn check_v0(v0: &InitialCondition) -> Result<()> {
    if v0.sup_norm().is_none() {
        return Err(Error::Parameter(format!(
            "initial condition `{v0}` is unbounded; use estimate_moment for polynomial data"
        )));
    }
    Ok(())
}

/// Draws all samples and reduces them. `sample(buf, i)` returns
/// `(value, control)` for sample `i`, reusing `buf` as path storage.
fn run<F>(cfg: &McConfig, horizon: f64, control_mean: Option<f64>, sample: F) -> Result<McEstimate>
where
    F: Fn(&mut Path, u64) -> (f64, f64) + Sync,
{
    cfg.validate()?;
    let template = zero_path(cfg.m_steps, horizon)?;
    let n = cfg.n_samples();
    let draws: Vec<(f64, f64)> = (0..n)
        .into_par_iter()
        .map_init(|| template.clone(), |buf, i| sample(buf, i as u64))
        .collect();
    let (mean, std_error) = match control_mean {
        Some(mu) => reduce_with_control(&draws, mu),
        None => reduce(draws.iter().map(|d| d.0), n),
    };
    Ok(McEstimate {
        mean,
        std_error,
        n_paths: cfg.n_paths,
        n_samples: n,
        m_steps: cfg.m_steps,
    })
}

fn reduce<I: Iterator<Item = f64> + Clone>(values: I, n: usize) -> (f64, f64) {
    let mean = values.clone().sum::<f64>() / n as f64;
    if n < 2 {
        return (mean, 0.0);
    }
    let ss: f64 = values.map(|v| (v - mean) * (v - mean)).sum();
    (mean, (ss / (n - 1) as f64 / n as f64).sqrt())
}

fn reduce_with_control(draws: &[(f64, f64)], control_mean: f64) -> (f64, f64) {
    let n = draws.len();
    let (fm, _) = reduce(draws.iter().map(|d| d.0), n);
    let (ym, _) = reduce(draws.iter().map(|d| d.1), n);
    let (mut cov, mut var) = (0.0, 0.0);
    for (f, y) in draws {
        cov += (f - fm) * (y - ym);
        var += (y - ym) * (y - ym);
    }
    let beta = if var > 0.0 { cov / var } else { 0.0 };
    let (mean, se) = reduce(draws.iter().map(|(f, y)| f - beta * y), n);
    (mean + beta * control_mean, se)
}

/// Evaluates `f` on the path drawn from `seed` and, when antithetic, on its
/// reflection; returns the pair average.
fn paired<F: FnMut(&Path) -> (f64, f64)>(
    buf: &mut Path,
    seed: SeedSpec,
    antithetic: bool,
    mut f: F,
) -> (f64, f64) {
    buf.resample(seed);
    let a = f(buf);
    if !antithetic {
        return a;
    }
    buf.negate_in_place();
    let b = f(buf);
    (0.5 * (a.0 + b.0), 0.5 * (a.1 + b.1))
}

fn estimate_v_streams<S>(
    t: f64,
    x: f64,
    v0: &InitialCondition,
    c: &Potential,
    cfg: &McConfig,
    stream: S,
) -> Result<McEstimate>
where
    S: Fn(u64) -> u64 + Sync,
{
    ensure_positive("t", t)?;
    check_v0(v0)?;
    let control = cfg.control_variate.then(|| closed_form_k(t, x));
    run(cfg, 1.0, control, |buf, i| {
        paired(
            buf,
            SeedSpec::new(cfg.seed, stream(i)),
            cfg.antithetic,
            |p| {
                let value = integrand_v(p, t, x, v0, c);
                let y = if control.is_some() {
                    (-t * quadratic_unchecked(p, t, x)).exp()
                } else {
                    0.0
                };
                (value, y)
            },
        )
    })
}

/// Monte Carlo estimate of `v(t,x)` from the main representation.
pub fn estimate_v(
    t: f64,
    x: f64,
    v0: &InitialCondition,
    c: &Potential,
    cfg: &McConfig,
) -> Result<McEstimate> {
    estimate_v_streams(t, x, v0, c, cfg, |i| i)
}

/// Estimates `∫ w(1)^order exp(−t∫₀¹(x+√(2t)w)²) dm_W` for `order ∈ {1, 2}`.
pub fn estimate_moment(t: f64, x: f64, order: u32, cfg: &McConfig) -> Result<McEstimate> {
    ensure_positive("t", t)?;
    if !(1..=2).contains(&order) {
        return Err(Error::Parameter(format!(
            "moment order must be 1 or 2, got {order}"
        )));
    }
    run(cfg, 1.0, None, |buf, i| {
        paired(buf, SeedSpec::new(cfg.seed, i), cfg.antithetic, |p| {
            let g = (-t * quadratic_unchecked(p, t, x)).exp();
            (p.endpoint().powi(order as i32) * g, 0.0)
        })
    })
}

/// Monte Carlo estimate of `v(t,x)` from the small-time representation over
/// Brownian paths on `[0, 2t]`.
pub fn estimate_v_alt(
    t: f64,
    x: f64,
    v0: &InitialCondition,
    c: &Potential,
    cfg: &McConfig,
) -> Result<McEstimate> {
    ensure_positive("t", t)?;
    if t > cfg.t_max_alt {
        return Err(Error::SmallTime {
            t,
            t_max: cfg.t_max_alt,
        });
    }
    check_v0(v0)?;
    run(cfg, 2.0 * t, None, |buf, i| {
        paired(
            buf,
            SeedSpec::new(cfg.seed, ALT_STREAM_DOMAIN | i),
            cfg.antithetic,
            |p| (integrand_v_alt(p, t, x, v0, c), 0.0),
        )
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FieldCell {
    pub t_index: usize,
    pub x_index: usize,
    pub t: f64,
    pub x: f64,
    pub estimate: McEstimate,
}

/// Stream of path `i` at grid cell `(ti, xi)`; cell `(0,0)` reuses the
/// streams of a single [`estimate_v`] call.
pub fn field_stream(ti: usize, xi: usize, i: u64) -> u64 {
    debug_assert!(ti < 1 << 15 && xi < 1 << 16 && i < 1 << 32);
    ((ti as u64) << 48) | ((xi as u64) << 32) | i
}

/// Estimates `v` on the tensor grid `ts × xs`, row-major in `t`.
pub fn estimate_field(
    ts: &[f64],
    xs: &[f64],
    v0: &InitialCondition,
    c: &Potential,
    cfg: &McConfig,
) -> Result<Vec<FieldCell>> {
    if ts.len() >= 1 << 15 || xs.len() >= 1 << 16 || cfg.n_samples() as u64 >= 1 << 32 {
        return Err(Error::Parameter(
            "field too large for the stream layout".into(),
        ));
    }
    let mut out = Vec::with_capacity(ts.len() * xs.len());
    for (ti, &t) in ts.iter().enumerate() {
        for (xi, &x) in xs.iter().enumerate() {
            let estimate = estimate_v_streams(t, x, v0, c, cfg, |i| field_stream(ti, xi, i))?;
            out.push(FieldCell {
                t_index: ti,
                x_index: xi,
                t,
                x,
                estimate,
            });
        }
    }
    Ok(out)
}
