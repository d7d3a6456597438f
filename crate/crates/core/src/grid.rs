//! Uniform truncated grids and functions sampled on them.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::potentials::InitialCondition;

/// Uniform grid `x_min = x₀ < x₁ < … < x_{N−1} = x_max`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub x_min: f64,
    pub x_max: f64,
    pub n_points: usize,
}

impl Default for Grid {
    /// `[−12, 12]` with 1201 points (h = 0.02).
    fn default() -> Self {
        Self {
            x_min: -12.0,
            x_max: 12.0,
            n_points: 1201,
        }
    }
}

impl Grid {
    pub fn new(x_min: f64, x_max: f64, n_points: usize) -> Result<Self> {
        let grid = Self {
            x_min,
            x_max,
            n_points,
        };
        grid.validate()?;
        Ok(grid)
    }

    /// Symmetric grid `[−extent, extent]` with spacing as close to `h` as divides evenly.
    pub fn symmetric(extent: f64, h: f64) -> Result<Self> {
        if !(extent > 0.0 && h > 0.0) {
            return Err(Error::Parameter(format!(
                "grid extent {extent} and spacing {h} must be positive"
            )));
        }
        let cells = (2.0 * extent / h).round().max(1.0) as usize;
        Self::new(-extent, extent, cells + 1)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_points < 2
            || !self.x_min.is_finite()
            || !self.x_max.is_finite()
            || self.x_min >= self.x_max
        {
            return Err(Error::Parameter(format!(
                "grid needs x_min < x_max and at least 2 points, got [{}, {}] with {}",
                self.x_min, self.x_max, self.n_points
            )));
        }
        Ok(())
    }

    #[inline]
    pub fn spacing(&self) -> f64 {
        (self.x_max - self.x_min) / (self.n_points - 1) as f64
    }

    #[inline]
    pub fn x(&self, i: usize) -> f64 {
        self.x_min + i as f64 * self.spacing()
    }

    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n_points).map(move |i| self.x(i))
    }

    pub fn sample<F: FnMut(f64) -> f64>(&self, mut f: F) -> GridFunction {
        GridFunction {
            grid: *self,
            values: self.points().map(&mut f).collect(),
        }
    }

    pub fn zeros(&self) -> GridFunction {
        GridFunction {
            grid: *self,
            values: vec![0.0; self.n_points],
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GridFunction {
    pub grid: Grid,
    pub values: Vec<f64>,
}

impl GridFunction {
    pub fn new(grid: Grid, values: Vec<f64>) -> Result<Self> {
        grid.validate()?;
        if values.len() != grid.n_points {
            return Err(Error::Parameter(format!(
                "grid has {} points but {} values were given",
                grid.n_points,
                values.len()
            )));
        }
        if let Some(v) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::Parameter(format!("non-finite grid value {v}")));
        }
        Ok(Self { grid, values })
    }

    /// Tabulates `v₀` on `grid`. Oracle-only initial conditions are rejected.
    pub fn from_initial(grid: Grid, v0: &InitialCondition) -> Result<Self> {
        grid.validate()?;
        if v0.oracle_only() {
            return Err(Error::Parameter(format!(
                "initial condition `{v0}` is not square integrable; use the closed-form oracles"
            )));
        }
        Ok(grid.sample(|x| v0.evaluate(x)))
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Discrete `L²` norm, `sqrt(h Σ vᵢ²)`.
    pub fn l2_norm(&self) -> f64 {
        (self.grid.spacing() * self.values.iter().map(|v| v * v).sum::<f64>()).sqrt()
    }

    pub fn max_abs_diff(&self, other: &GridFunction) -> f64 {
        debug_assert_eq!(self.len(), other.len());
        self.values
            .iter()
            .zip(&other.values)
            .fold(0.0, |m, (a, b)| m.max((a - b).abs()))
    }

    pub fn scaled(&self, factor: f64) -> GridFunction {
        GridFunction {
            grid: self.grid,
            values: self.values.iter().map(|v| v * factor).collect(),
        }
    }

    /// `max(|v(x_min)|, |v(x_max)|) / max|v|`; zero for the zero function.
    pub fn edge_ratio(&self) -> f64 {
        let max = self.max_abs();
        if max == 0.0 {
            return 0.0;
        }
        self.values[0].abs().max(self.values[self.len() - 1].abs()) / max
    }

    /// Piecewise-cubic (4-point Lagrange) interpolant, zero outside the grid.
    pub fn interpolate(&self, x: f64) -> f64 {
        let (i0, w) = match cubic_stencil(&self.grid, x) {
            Some(s) => s,
            None => return 0.0,
        };
        w.iter()
            .enumerate()
            .map(|(k, wk)| wk * self.values[i0 + k])
            .sum()
    }
}

/// First index and weights of the 4-point Lagrange stencil for `x`, or `None`
/// outside `[x_min, x_max]`. Grids with fewer than 4 points fall back to
/// linear interpolation (weights padded with zeros).
pub(crate) fn cubic_stencil(grid: &Grid, x: f64) -> Option<(usize, [f64; 4])> {
    if !(x >= grid.x_min && x <= grid.x_max) {
        return None;
    }
    let n = grid.n_points;
    let h = grid.spacing();
    let s = (x - grid.x_min) / h;
    let cell = (s.floor() as usize).min(n - 2);
    if n < 4 {
        let u = s - cell as f64;
        return Some((cell, [1.0 - u, u, 0.0, 0.0]));
    }
    let i0 = cell.saturating_sub(1).min(n - 4);
    let u = s - i0 as f64; // position relative to node i0, in units of h
    let (a, b, c, d) = (u, u - 1.0, u - 2.0, u - 3.0);
    Some((
        i0,
        [
            -b * c * d / 6.0,
            a * c * d / 2.0,
            -a * b * d / 2.0,
            a * b * c / 6.0,
        ],
    ))
}
