//! Brownian paths, path functionals and finite-dimensional Wiener integrals.
//!
//! Paths are sampled at equally spaced times and treated as piecewise linear
//! in between, so every time integral along a path is a trapezoid sum.
//! Each path draws from its own ChaCha8 stream selected by
//! [`SeedSpec`], which makes a path a pure function of `(master_seed,
//! stream_id)` no matter which worker produces it.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{ensure_positive, Error, Result};
use crate::potentials::Potential;
use crate::quadrature::{gauss_hermite, tensor_expectation};

/// Largest dimension accepted by [`finite_dim_integral`].
pub const MAX_TENSOR_DIM: usize = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SeedSpec {
    pub master_seed: u64,
    pub stream_id: u64,
}

impl SeedSpec {
    pub fn new(master_seed: u64, stream_id: u64) -> Self {
        Self {
            master_seed,
            stream_id,
        }
    }

    pub fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.master_seed);
        rng.set_stream(self.stream_id);
        rng
    }
}

/// A sampled trajectory `w(t₀=0), …, w(t_m)` with `w(0) = 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct Path {
    times: Vec<f64>,
    values: Vec<f64>,
    horizon: f64,
}

impl Path {
    /// Builds a path from explicit samples.
    pub fn new(times: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if times.len() != values.len() || times.len() < 2 {
            return Err(Error::Parameter(format!(
                "path needs matching times/values with at least 2 samples, got {} and {}",
                times.len(),
                values.len()
            )));
        }
        if times[0] != 0.0 || values[0] != 0.0 {
            return Err(Error::Parameter("path must start at w(0) = 0".into()));
        }
        if !times.windows(2).all(|p| p[0] < p[1]) {
            return Err(Error::Parameter(
                "path times must be strictly increasing".into(),
            ));
        }
        let horizon = *times.last().unwrap();
        Ok(Self {
            times,
            values,
            horizon,
        })
    }

    fn uniform(m_steps: usize, horizon: f64) -> Self {
        let dt = horizon / m_steps as f64;
        let mut times: Vec<f64> = (0..=m_steps).map(|j| j as f64 * dt).collect();
        times[m_steps] = horizon;
        Self {
            times,
            values: vec![0.0; m_steps + 1],
            horizon,
        }
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    pub fn m_steps(&self) -> usize {
        self.times.len() - 1
    }

    pub fn endpoint(&self) -> f64 {
        *self.values.last().unwrap()
    }

    /// The reflected path `−w`.
    pub fn negated(&self) -> Path {
        Path {
            times: self.times.clone(),
            values: self.values.iter().map(|v| -v).collect(),
            horizon: self.horizon,
        }
    }

    /// Redraws the increments in place from `seed`, keeping the time grid.
    pub fn resample(&mut self, seed: SeedSpec) {
        let mut rng = seed.rng();
        let mut w = 0.0;
        self.values[0] = 0.0;
        for j in 1..self.times.len() {
            let sd = (self.times[j] - self.times[j - 1]).sqrt();
            let z: f64 = StandardNormal.sample(&mut rng);
            w += sd * z;
            self.values[j] = w;
        }
    }

    pub fn negate_in_place(&mut self) {
        for v in &mut self.values {
            *v = -*v;
        }
    }

    /// Trapezoid rule for `∫ f(s, w(s)) ds` over the sampled times.
    #[inline]
    pub fn trapezoid<F: FnMut(f64, f64) -> f64>(&self, mut f: F) -> f64 {
        let mut prev = f(self.times[0], self.values[0]);
        let mut acc = 0.0;
        for j in 1..self.times.len() {
            let cur = f(self.times[j], self.values[j]);
            acc += 0.5 * (prev + cur) * (self.times[j] - self.times[j - 1]);
            prev = cur;
        }
        acc
    }

    fn require_unit_horizon(&self) -> Result<()> {
        if (self.horizon - 1.0).abs() > 1e-12 {
            return Err(Error::Parameter(format!(
                "expected a path on [0,1], horizon is {}",
                self.horizon
            )));
        }
        Ok(())
    }
}

/// Samples Brownian motion at `m_steps` equally spaced times on `[0, horizon]`.
pub fn sample_path(m_steps: usize, horizon: f64, seed: SeedSpec) -> Result<Path> {
    if m_steps == 0 {
        return Err(Error::Parameter("m_steps must be at least 1".into()));
    }
    ensure_positive("horizon", horizon)?;
    let mut path = Path::uniform(m_steps, horizon);
    path.resample(seed);
    Ok(path)
}

/// An all-zero path on `[0, horizon]`; useful as a reusable buffer.
pub fn zero_path(m_steps: usize, horizon: f64) -> Result<Path> {
    if m_steps == 0 {
        return Err(Error::Parameter("m_steps must be at least 1".into()));
    }
    ensure_positive("horizon", horizon)?;
    Ok(Path::uniform(m_steps, horizon))
}

fn check_times(times: &[f64]) -> Result<()> {
    if times.is_empty() {
        return Err(Error::Parameter(
            "at least one time point is required".into(),
        ));
    }
    let mut prev = 0.0;
    for &t in times {
        if t.is_nan() || t <= prev {
            return Err(Error::Parameter(format!(
                "times must satisfy 0 < t₁ < … < t_n, got {times:?}"
            )));
        }
        prev = t;
    }
    if prev > 1.0 {
        return Err(Error::Parameter(format!(
            "times must lie in (0, 1], got {times:?}"
        )));
    }
    Ok(())
}

/// Joint density of `(w(t₁), …, w(t_n))` under Wiener measure.
pub fn normal_density(times: &[f64], xs: &[f64]) -> Result<f64> {
    check_times(times)?;
    if xs.len() != times.len() {
        return Err(Error::Parameter(format!(
            "{} times but {} points",
            times.len(),
            xs.len()
        )));
    }
    let n = times.len() as i32;
    let (mut prod, mut quad) = (1.0, 0.0);
    let (mut t_prev, mut x_prev) = (0.0, 0.0);
    for (&t, &x) in times.iter().zip(xs) {
        let dt = t - t_prev;
        prod *= dt;
        quad += (x - x_prev).powi(2) / dt;
        t_prev = t;
        x_prev = x;
    }
    Ok(((2.0 * std::f64::consts::PI).powi(n) * prod).powf(-0.5) * (-0.5 * quad).exp())
}

/// `∫_{ℝⁿ} φ(ξ) f_{t₁…t_n}(ξ) dξ` by tensor Gauss–Hermite in the independent
/// increment coordinates `zᵢ = (ξᵢ − ξᵢ₋₁)/√(tᵢ − tᵢ₋₁)`.
pub fn finite_dim_integral<F: FnMut(&[f64]) -> f64>(
    mut phi: F,
    times: &[f64],
    quad_order: usize,
) -> Result<f64> {
    if times.len() > MAX_TENSOR_DIM {
        return Err(Error::DimensionGuard {
            n: times.len(),
            max: MAX_TENSOR_DIM,
        });
    }
    check_times(times)?;
    let rule = gauss_hermite(quad_order)?;
    let sd: Vec<f64> = std::iter::once(times[0])
        .chain(times.windows(2).map(|p| p[1] - p[0]))
        .map(f64::sqrt)
        .collect();
    let mut xi = vec![0.0; times.len()];
    Ok(tensor_expectation(&rule, times.len(), |z| {
        let mut acc = 0.0;
        for i in 0..z.len() {
            acc += sd[i] * z[i];
            xi[i] = acc;
        }
        phi(&xi)
    }))
}

/// Trapezoid value of `∫₀¹ (x + √(2t) w(s))² ds`.
pub fn quadratic_functional(path: &Path, t: f64, x: f64) -> Result<f64> {
    path.require_unit_horizon()?;
    ensure_positive("t", t)?;
    Ok(quadratic_unchecked(path, t, x))
}

/// Trapezoid value of `∫₀¹ c(t(1−s), √(2t) w(s) + x) ds`.
pub fn potential_functional(path: &Path, t: f64, x: f64, c: &Potential) -> Result<f64> {
    path.require_unit_horizon()?;
    ensure_positive("t", t)?;
    Ok(potential_unchecked(path, t, x, c))
}

#[inline]
pub(crate) fn quadratic_unchecked(path: &Path, t: f64, x: f64) -> f64 {
    let scale = (2.0 * t).sqrt();
    path.trapezoid(|_, w| {
        let y = x + scale * w;
        y * y
    })
}

#[inline]
pub(crate) fn potential_unchecked(path: &Path, t: f64, x: f64, c: &Potential) -> f64 {
    if let Some(k) = c.as_constant() {
        return k;
    }
    let scale = (2.0 * t).sqrt();
    path.trapezoid(|s, w| c.evaluate(t * (1.0 - s), scale * w + x))
}

/// Small-time representation exponents on a path over `[0, 2t]`:
/// `(½∫₀^{2t} (x + w(s))² ds, ½∫₀^{2t} c(t − s/2, w(s) + x) ds)`.
pub(crate) fn alt_exponents(path: &Path, t: f64, x: f64, c: &Potential) -> (f64, f64) {
    let quad = 0.5 * path.trapezoid(|_, w| (x + w) * (x + w));
    let pot = match c.as_constant() {
        Some(k) => k * t,
        None => 0.5 * path.trapezoid(|s, w| c.evaluate(t - 0.5 * s, w + x)),
    };
    (quad, pot)
}
