//! Solvers for the time-dependently perturbed harmonic-oscillator heat equation
//!
//! ```text
//! ∂v/∂t − ∂²v/∂x² + (x² + c(t,x)) v = 0,    v(0,·) = v₀
//! ```
//!
//! Three independent routes compute `v(t,x)`:
//!
//! - [`fkmc`]: Monte Carlo over Brownian paths on `[0,1]` of the explicit
//!   Wiener-integral representation (plus the small-time variant on `[0,2t]`);
//! - [`splitting`]: an alternating scheme of exact harmonic-oscillator heat
//!   flow (via the Mehler kernel) and a frozen-time potential ODE;
//! - [`pde`]: a Crank–Nicolson finite-difference reference on a truncated domain.
//!
//! [`mehler`] holds the exact unperturbed semigroup and the closed-form Wiener
//! integrals used as oracles throughout. The [`cli`] module drives the
//! `feykac` binary.

pub mod cli;
pub mod error;
pub mod fkmc;
pub mod grid;
pub mod mehler;
pub mod pde;
pub mod potentials;
pub mod quadrature;
pub mod splitting;
pub mod wiener;

pub use error::{Error, Result};
pub use fkmc::{McConfig, McEstimate};
pub use grid::{Grid, GridFunction};
pub use potentials::{InitialCondition, Potential};
pub use wiener::{Path, SeedSpec};
