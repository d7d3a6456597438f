//! Catalog of admissible perturbations `c(t,x)` and initial conditions `v₀`.
//!
//! Every entry is a closed-form callable together with the analytic metadata
//! the solvers rely on: a lower bound `m` (which drives every exponential
//! bound of the form `e^{-m t}`), an upper bound, and Hölder data in time
//! `|c(t,x) − c(s,x)| ≤ L |t−s|^α`.
//!
//! Entries are addressed by short textual specs such as `gauss_cos(1,1)` or
//! `gaussian(0.5)`, which is how the CLI refers to them.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const POTENTIAL_NAMES: &str = "zero, constant(k), gauss_cos(a,w), bump(a)";
const V0_NAMES: &str = "zero, one, identity, square, gaussian(sigma), hat(a)";

/// Perturbation `c(t,x)` of the harmonic-oscillator potential.
///
/// | entry            | c(t,x)                  | m        | sup      | L      | α |
/// |------------------|-------------------------|----------|----------|--------|---|
/// | `zero`           | 0                       | 0        | 0        | 0      | 1 |
/// | `constant(k)`    | k                       | k        | k        | 0      | 1 |
/// | `gauss_cos(a,w)` | a cos(wt) e^{−x²}       | −\|a\|   | \|a\|    | \|a\|w | 1 |
/// | `bump(a)`        | a / (1+x²)              | min(0,a) | max(0,a) | 0      | 1 |
///
/// All entries are continuous, bounded and Lipschitz in time, so they satisfy
/// the hypotheses of the weak-solution result. `zero`, `gauss_cos` and `bump`
/// are additionally square integrable on `]0,T[×ℝ` and satisfy the hypotheses
/// of the main representation theorem; `constant(k)` with `k ≠ 0` does not
/// (see [`Potential::square_integrable`]).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum Potential {
    Zero,
    Constant(f64),
    GaussCos { amplitude: f64, omega: f64 },
    Bump(f64),
}

impl Potential {
    /// Looks up a catalog entry by its textual spec.
    pub fn builtin(spec: &str) -> Result<Self> {
        spec.parse()
    }

    #[inline]
    pub fn evaluate(&self, t: f64, x: f64) -> f64 {
        match *self {
            Potential::Zero => 0.0,
            Potential::Constant(k) => k,
            Potential::GaussCos { amplitude, omega } => {
                amplitude * (omega * t).cos() * (-x * x).exp()
            }
            Potential::Bump(a) => a / (1.0 + x * x),
        }
    }

    /// Lower bound `m` of `c`.
    pub fn inf_bound(&self) -> f64 {
        match *self {
            Potential::Zero => 0.0,
            Potential::Constant(k) => k,
            Potential::GaussCos { amplitude, .. } => -amplitude.abs(),
            Potential::Bump(a) => a.min(0.0),
        }
    }

    pub fn sup_bound(&self) -> f64 {
        match *self {
            Potential::Zero => 0.0,
            Potential::Constant(k) => k,
            Potential::GaussCos { amplitude, .. } => amplitude.abs(),
            Potential::Bump(a) => a.max(0.0),
        }
    }

    pub fn hoelder_l(&self) -> f64 {
        match *self {
            Potential::GaussCos { amplitude, omega } => amplitude.abs() * omega.abs(),
            _ => 0.0,
        }
    }

    pub fn hoelder_alpha(&self) -> f64 {
        1.0
    }

    /// Whether `c ∈ L²(]0,T[×ℝ)` for every `T`.
    pub fn square_integrable(&self) -> bool {
        match *self {
            Potential::Constant(k) => k == 0.0,
            _ => true,
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Potential::Zero) || matches!(self, Potential::Constant(k) if *k == 0.0)
    }

    /// Returns `Some(k)` when `c ≡ k`.
    pub fn as_constant(&self) -> Option<f64> {
        match *self {
            Potential::Zero => Some(0.0),
            Potential::Constant(k) => Some(k),
            _ => None,
        }
    }
}

/// Coarse regularity class of an initial condition.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InitialClass {
    /// Square integrable, no further regularity claimed.
    L2,
    /// Continuous and vanishing at infinity (hence also bounded).
    ContinuousVanishing,
    /// Four times differentiable with bounded derivatives.
    C4Bounded,
    /// Polynomial growth; only meaningful for closed-form oracles.
    Polynomial,
}

/// Initial condition `v₀`.
///
/// `zero` is included so that linearity checks (`v₀ = 0 ⇒ v = 0`) can be
/// run through the same entry points as every other initial condition.
///
/// `one`, `identity` and `square` are not square integrable and are tagged
/// oracle-only: the Mehler quadrature and the Monte Carlo moment estimators
/// accept them, the grid solvers do not.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum InitialCondition {
    Zero,
    One,
    Identity,
    Square,
    /// `exp(−x²/2σ²)`
    Gaussian(f64),
    /// `max(0, 1 − |x|/a)`
    Hat(f64),
}

impl InitialCondition {
    pub fn builtin(spec: &str) -> Result<Self> {
        spec.parse()
    }

    #[inline]
    pub fn evaluate(&self, x: f64) -> f64 {
        match *self {
            InitialCondition::Zero => 0.0,
            InitialCondition::One => 1.0,
            InitialCondition::Identity => x,
            InitialCondition::Square => x * x,
            InitialCondition::Gaussian(sigma) => (-0.5 * x * x / (sigma * sigma)).exp(),
            InitialCondition::Hat(a) => (1.0 - x.abs() / a).max(0.0),
        }
    }

    pub fn class(&self) -> InitialClass {
        match self {
            InitialCondition::Zero => InitialClass::C4Bounded,
            InitialCondition::One => InitialClass::C4Bounded,
            InitialCondition::Identity | InitialCondition::Square => InitialClass::Polynomial,
            InitialCondition::Gaussian(_) => InitialClass::C4Bounded,
            InitialCondition::Hat(_) => InitialClass::ContinuousVanishing,
        }
    }

    /// `sup |v₀|`, when finite.
    pub fn sup_norm(&self) -> Option<f64> {
        match self {
            InitialCondition::Identity | InitialCondition::Square => None,
            InitialCondition::Zero => Some(0.0),
            _ => Some(1.0),
        }
    }

    /// `‖v₀‖²_{L²}`, when finite.
    pub fn l2_norm_sq(&self) -> Option<f64> {
        match *self {
            InitialCondition::Zero => Some(0.0),
            InitialCondition::Gaussian(sigma) => Some(sigma * std::f64::consts::PI.sqrt()),
            InitialCondition::Hat(a) => Some(2.0 * a / 3.0),
            _ => None,
        }
    }

    pub fn is_l2(&self) -> bool {
        self.l2_norm_sq().is_some()
    }

    pub fn oracle_only(&self) -> bool {
        !self.is_l2()
    }

    pub fn is_nonnegative(&self) -> bool {
        !matches!(self, InitialCondition::Identity)
    }
}

fn split_call(spec: &str) -> Result<(&str, Vec<f64>)> {
    let spec = spec.trim();
    let Some(open) = spec.find('(') else {
        return Ok((spec, Vec::new()));
    };
    let name = spec[..open].trim();
    let inner = spec[open + 1..]
        .strip_suffix(')')
        .ok_or_else(|| Error::Parameter(format!("unbalanced parentheses in `{spec}`")))?;
    let args = inner
        .split(',')
        .map(|a| {
            a.trim()
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| Error::Parameter(format!("bad numeric argument `{a}` in `{spec}`")))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((name, args))
}

fn arity(spec: &str, args: &[f64], n: usize) -> Result<()> {
    if args.len() == n {
        Ok(())
    } else {
        Err(Error::Parameter(format!(
            "`{spec}` takes {n} argument(s), got {}",
            args.len()
        )))
    }
}

impl FromStr for Potential {
    type Err = Error;

    fn from_str(spec: &str) -> Result<Self> {
        let (name, args) = split_call(spec)?;
        match name {
            "zero" => arity(spec, &args, 0).map(|_| Potential::Zero),
            "constant" => arity(spec, &args, 1).map(|_| Potential::Constant(args[0])),
            "gauss_cos" => arity(spec, &args, 2).map(|_| Potential::GaussCos {
                amplitude: args[0],
                omega: args[1],
            }),
            "bump" => arity(spec, &args, 1).map(|_| Potential::Bump(args[0])),
            _ => Err(Error::Catalog {
                kind: "potential",
                name: spec.to_string(),
                valid: POTENTIAL_NAMES,
            }),
        }
    }
}

impl FromStr for InitialCondition {
    type Err = Error;

    fn from_str(spec: &str) -> Result<Self> {
        let (name, args) = split_call(spec)?;
        let positive = |v: f64| {
            if v > 0.0 {
                Ok(v)
            } else {
                Err(Error::Parameter(format!("`{spec}` needs a positive width")))
            }
        };
        match name {
            "zero" => arity(spec, &args, 0).map(|_| InitialCondition::Zero),
            "one" => arity(spec, &args, 0).map(|_| InitialCondition::One),
            "identity" => arity(spec, &args, 0).map(|_| InitialCondition::Identity),
            "square" => arity(spec, &args, 0).map(|_| InitialCondition::Square),
            "gaussian" => {
                arity(spec, &args, 1)?;
                Ok(InitialCondition::Gaussian(positive(args[0])?))
            }
            "hat" => {
                arity(spec, &args, 1)?;
                Ok(InitialCondition::Hat(positive(args[0])?))
            }
            _ => Err(Error::Catalog {
                kind: "initial condition",
                name: spec.to_string(),
                valid: V0_NAMES,
            }),
        }
    }
}

impl fmt::Display for Potential {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Potential::Zero => write!(f, "zero"),
            Potential::Constant(k) => write!(f, "constant({k})"),
            Potential::GaussCos { amplitude, omega } => write!(f, "gauss_cos({amplitude},{omega})"),
            Potential::Bump(a) => write!(f, "bump({a})"),
        }
    }
}

impl fmt::Display for InitialCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InitialCondition::Zero => write!(f, "zero"),
            InitialCondition::One => write!(f, "one"),
            InitialCondition::Identity => write!(f, "identity"),
            InitialCondition::Square => write!(f, "square"),
            InitialCondition::Gaussian(s) => write!(f, "gaussian({s})"),
            InitialCondition::Hat(a) => write!(f, "hat({a})"),
        }
    }
}

impl TryFrom<String> for Potential {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<Potential> for String {
    fn from(p: Potential) -> String {
        p.to_string()
    }
}

impl TryFrom<String> for InitialCondition {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<InitialCondition> for String {
    fn from(v: InitialCondition) -> String {
        v.to_string()
    }
}
