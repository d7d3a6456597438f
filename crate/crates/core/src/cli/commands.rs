//! One function per subcommand. Each returns a [`Table`] whose `passed`
//! flag becomes the process exit status.

use super::config::RunConfig;
use super::output::{Cell, Table};
use crate::error::Result;
use crate::fkmc::{estimate_field, FieldCell};
use crate::mehler::{
    apply_semigroup, closed_form_k, closed_form_moment1, closed_form_moment2, kernel_marginal,
};
use crate::pde::solve_cn;
use crate::splitting::{dyadic_study, run_vn_with};

/// Largest tolerated gap between ∫q dy and the closed form for `k`.
pub const MARGINAL_TOL: f64 = 1e-8;
/// Absolute tolerance between deterministic solvers.
pub const SOLVER_TOL: f64 = 1e-3;
/// Width of the Monte Carlo acceptance band in standard errors.
pub const MC_SIGMAS: f64 = 3.0;
/// Differences below this sit at the grid-interpolation noise floor and
/// mean the scheme is already exact (constant potentials).
const CONVERGED_DIFF: f64 = 1e-6;
pub const ORDER_BAND: (f64, f64) = (0.7, 1.3);

fn pairs(cfg: &RunConfig) -> impl Iterator<Item = (f64, f64)> + '_ {
    cfg.t
        .iter()
        .flat_map(move |&t| cfg.x.iter().map(move |&x| (t, x)))
}

/// `e^{−κt} U_t v₀(x)` when the potential is a constant `κ`, otherwise `None`.
fn reference(cfg: &RunConfig, t: f64, x: f64) -> Result<Option<f64>> {
    match cfg.potential.as_constant() {
        Some(kappa) => Ok(Some(
            (-kappa * t).exp() * apply_semigroup(&cfg.v0, t, x, cfg.quad_order)?,
        )),
        None => Ok(None),
    }
}

fn mc_cells(cfg: &RunConfig) -> Result<Vec<FieldCell>> {
    estimate_field(&cfg.t, &cfg.x, &cfg.v0, &cfg.potential, &cfg.mc())
}

/// Solver values at every `(t, x)`, one solve per `t`.
fn solver_values<F>(cfg: &RunConfig, mut solve: F) -> Result<Vec<f64>>
where
    F: FnMut(f64) -> Result<crate::grid::GridFunction>,
{
    let mut out = Vec::with_capacity(cfg.t.len() * cfg.x.len());
    for &t in &cfg.t {
        let v = solve(t)?;
        out.extend(cfg.x.iter().map(|&x| v.interpolate(x)));
    }
    Ok(out)
}

pub fn cmd_oracle(cfg: &RunConfig) -> Result<Table> {
    let mut table = Table::new(
        "oracle",
        &["t", "x", "k", "m1", "m2", "q_marginal", "marginal_error"],
    );
    for (t, x) in pairs(cfg) {
        let k = closed_form_k(t, x);
        let q = kernel_marginal(t, x)?;
        let err = (q - k).abs();
        table.passed &= err < MARGINAL_TOL;
        table.push(vec![
            t.into(),
            x.into(),
            k.into(),
            closed_form_moment1(t, x).into(),
            closed_form_moment2(t, x).into(),
            q.into(),
            err.into(),
        ]);
    }
    Ok(table)
}

pub fn cmd_mc(cfg: &RunConfig) -> Result<Table> {
    let mut table = Table::new(
        "mc",
        &[
            "t",
            "x",
            "mean",
            "std_error",
            "n_samples",
            "m_steps",
            "reference",
            "within_3sigma",
        ],
    );
    for cell in mc_cells(cfg)? {
        let e = cell.estimate;
        let r = reference(cfg, cell.t, cell.x)?;
        let within = r.map(|r| e.within(r, MC_SIGMAS));
        table.passed &= within.unwrap_or(true);
        table.push(vec![
            cell.t.into(),
            cell.x.into(),
            e.mean.into(),
            e.std_error.into(),
            e.n_samples.into(),
            e.m_steps.into(),
            r.into(),
            within.map_or(Cell::Empty, Cell::Bool),
        ]);
    }
    Ok(table)
}

fn deterministic_table(
    cfg: &RunConfig,
    command: &'static str,
    values: Vec<f64>,
    with_n: bool,
) -> Result<Table> {
    let columns: &[&'static str] = if with_n {
        &["t", "x", "n", "value", "reference", "delta"]
    } else {
        &["t", "x", "value", "reference", "delta"]
    };
    let mut table = Table::new(command, columns);
    for ((t, x), v) in pairs(cfg).zip(values) {
        let r = reference(cfg, t, x)?;
        let delta = r.map(|r| v - r);
        table.passed &= delta.is_none_or(|d| d.abs() <= SOLVER_TOL);
        let mut row: Vec<Cell> = vec![t.into(), x.into()];
        if with_n {
            row.push(cfg.n.into());
        }
        row.extend([v.into(), r.into(), delta.into()]);
        table.push(row);
    }
    Ok(table)
}

pub fn cmd_split(cfg: &RunConfig) -> Result<Table> {
    let grid = cfg.grid()?;
    let values = solver_values(cfg, |t| {
        run_vn_with(t, cfg.n, &cfg.v0, &cfg.potential, &grid, cfg.quad_order)
    })?;
    deterministic_table(cfg, "split", values, true)
}

pub fn cmd_pde(cfg: &RunConfig) -> Result<Table> {
    let pde = cfg.pde()?;
    let values = solver_values(cfg, |t| solve_cn(&cfg.v0, &cfg.potential, t, &pde))?;
    deterministic_table(cfg, "pde", values, false)
}

pub fn cmd_compare(cfg: &RunConfig) -> Result<Table> {
    let grid = cfg.grid()?;
    let pde = cfg.pde()?;
    let split = solver_values(cfg, |t| {
        run_vn_with(t, cfg.n, &cfg.v0, &cfg.potential, &grid, cfg.quad_order)
    })?;
    let cn = solver_values(cfg, |t| solve_cn(&cfg.v0, &cfg.potential, t, &pde))?;
    let mc = mc_cells(cfg)?;
    let mut table = Table::new(
        "compare",
        &[
            "t",
            "x",
            "mc_mean",
            "mc_stderr",
            "split_value",
            "pde_value",
            "mehler_value",
            "d_mc_split",
            "d_mc_pde",
            "d_split_pde",
            "d_mc_mehler",
            "d_split_mehler",
            "d_pde_mehler",
            "pass",
        ],
    );
    for ((cell, s), p) in mc.iter().zip(split).zip(cn) {
        let (m, se) = (cell.estimate.mean, cell.estimate.std_error);
        let band = MC_SIGMAS * se;
        let mehler = reference(cfg, cell.t, cell.x)?;
        let mut pass = (m - s).abs() <= band
            && (m - p).abs() <= band + SOLVER_TOL
            && (s - p).abs() <= SOLVER_TOL;
        if let Some(r) = mehler {
            pass &=
                (m - r).abs() <= band && (s - r).abs() <= SOLVER_TOL && (p - r).abs() <= SOLVER_TOL;
        }
        table.passed &= pass;
        table.push(vec![
            cell.t.into(),
            cell.x.into(),
            m.into(),
            se.into(),
            s.into(),
            p.into(),
            mehler.into(),
            (m - s).into(),
            (m - p).into(),
            (s - p).into(),
            mehler.map(|r| m - r).into(),
            mehler.map(|r| s - r).into(),
            mehler.map(|r| p - r).into(),
            pass.into(),
        ]);
    }
    Ok(table)
}

pub fn cmd_converge(cfg: &RunConfig) -> Result<Table> {
    let grid = cfg.grid()?;
    let mut table = Table::new(
        "converge",
        &[
            "t",
            "p",
            "n",
            "x",
            "value",
            "diff",
            "local_order",
            "fitted_order",
        ],
    );
    let mut orders = Vec::new();
    for &t in &cfg.t {
        let study = dyadic_study(t, cfg.p_max, &cfg.v0, &cfg.potential, &grid, &cfg.x)?;
        let converged = study
            .rows
            .iter()
            .filter_map(|r| r.diff)
            .all(|d| d < CONVERGED_DIFF);
        if !converged {
            table.passed &= study.monotone_from(2)
                && study
                    .fitted_order
                    .is_none_or(|q| (ORDER_BAND.0..=ORDER_BAND.1).contains(&q));
        }
        for row in &study.rows {
            for (&x, &v) in study.probes.iter().zip(&row.values) {
                table.push(vec![
                    t.into(),
                    row.p.into(),
                    row.n.into(),
                    x.into(),
                    v.into(),
                    row.diff.into(),
                    row.local_order.into(),
                    study.fitted_order.into(),
                ]);
            }
        }
        orders.push(study.fitted_order);
    }
    if let [only] = orders.as_slice() {
        table.summary.push(("fitted_order", (*only).into()));
    }
    Ok(table)
}
