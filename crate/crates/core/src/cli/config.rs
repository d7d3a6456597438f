//! Run configuration: one declarative TOML file plus `key=value` overrides.
//! Every default lives in [`RunConfig::default`].

use serde::{Deserialize, Serialize};

use crate::error::{ensure_positive, Error, Result};
use crate::fkmc::McConfig;
use crate::grid::Grid;
use crate::pde::PdeConfig;
use crate::potentials::{InitialCondition, Potential};
use crate::quadrature::DEFAULT_ORDER;
use crate::splitting::MAX_DYADIC_P;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub potential: Potential,
    pub v0: InitialCondition,
    pub t: Vec<f64>,
    pub x: Vec<f64>,
    pub n_paths: usize,
    pub m_steps: usize,
    pub seed: u64,
    pub antithetic: bool,
    pub control_variate: bool,
    pub t_max_alt: f64,
    pub quad_order: usize,
    /// Number of splitting rounds.
    pub n: usize,
    /// Grid half-width and spacing shared by the splitting and PDE solvers.
    pub extent: f64,
    pub h: f64,
    pub dt: f64,
    /// Finest dyadic level `p` of the convergence study.
    pub p_max: u32,
    pub format: Format,
    /// Output file; standard output when empty.
    pub out: String,
}

impl Default for RunConfig {
    fn default() -> Self {
        let mc = McConfig::default();
        Self {
            potential: Potential::Zero,
            v0: InitialCondition::Gaussian(1.0),
            t: vec![0.5],
            x: vec![0.0, 1.0],
            n_paths: mc.n_paths,
            m_steps: mc.m_steps,
            seed: mc.seed,
            antithetic: mc.antithetic,
            control_variate: mc.control_variate,
            t_max_alt: mc.t_max_alt,
            quad_order: DEFAULT_ORDER,
            n: 64,
            extent: 12.0,
            h: 0.02,
            dt: PdeConfig::default().dt,
            p_max: 6,
            format: Format::Csv,
            out: String::new(),
        }
    }
}

impl RunConfig {
    /// Merges `file` (TOML text) and then `overrides` over the defaults.
    ///
    /// An override value is read as TOML when it parses as such and as a
    /// bare string otherwise, so `t=[0.1,0.5]` and `potential=bump(2)` both work.
    pub fn load(file: Option<&str>, overrides: &[String]) -> Result<Self> {
        let toml::Value::Table(mut table) =
            toml::Value::try_from(Self::default()).map_err(|e| Error::Config(e.to_string()))?
        else {
            unreachable!("a struct serializes to a table")
        };
        if let Some(text) = file {
            let parsed: toml::Table = text
                .parse()
                .map_err(|e: toml::de::Error| Error::Config(e.to_string()))?;
            for (k, v) in parsed {
                table.insert(k, v);
            }
        }
        for item in overrides {
            let (key, value) = item.split_once('=').ok_or_else(|| {
                Error::Config(format!("override `{item}` is not of the form key=value"))
            })?;
            let key = key.trim();
            let value = value.trim();
            let parsed = format!("v = {value}")
                .parse::<toml::Table>()
                .ok()
                .and_then(|mut t| t.remove("v"))
                .unwrap_or_else(|| toml::Value::String(value.to_string()));
            table.insert(key.to_string(), parsed);
        }
        let cfg: Self = toml::Value::Table(table)
            .try_into()
            .map_err(|e: toml::de::Error| Error::Config(e.message().to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Config(msg));
        for &t in &self.t {
            ensure_positive("t", t).or_else(|e| bad(e.to_string()))?;
        }
        if let Some(x) = self.x.iter().find(|x| !x.is_finite()) {
            return bad(format!("x = {x} is not finite"));
        }
        if self.quad_order == 0 || self.n == 0 {
            return bad("quad_order and n must be at least 1".into());
        }
        if !(1..=MAX_DYADIC_P).contains(&self.p_max) {
            return bad(format!("p_max must be in 1..={MAX_DYADIC_P}"));
        }
        self.mc().validate().or_else(|e| bad(e.to_string()))?;
        self.pde()?.validate().or_else(|e| bad(e.to_string()))
    }

    pub fn mc(&self) -> McConfig {
        McConfig {
            n_paths: self.n_paths,
            m_steps: self.m_steps,
            seed: self.seed,
            antithetic: self.antithetic,
            control_variate: self.control_variate,
            t_max_alt: self.t_max_alt,
        }
    }

    pub fn grid(&self) -> Result<Grid> {
        Grid::symmetric(self.extent, self.h).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn pde(&self) -> Result<PdeConfig> {
        Ok(PdeConfig {
            grid: self.grid()?,
            dt: self.dt,
        })
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config always serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_round_trip_through_toml() {
        let cfg = RunConfig::default();
        assert_eq!(RunConfig::load(Some(&cfg.to_toml()), &[]).unwrap(), cfg);
        assert_eq!(cfg.grid().unwrap(), Grid::default());
    }

    #[test]
    fn overrides_apply_after_file() {
        let file = "potential = \"constant(2)\"\nn_paths = 10\n";
        let cfg = RunConfig::load(
            Some(file),
            &[
                "n_paths=20".into(),
                "t=[0.1, 0.25]".into(),
                "v0=hat(2)".into(),
                "format=json".into(),
            ],
        )
        .unwrap();
        assert_eq!(cfg.potential, Potential::Constant(2.0));
        assert_eq!(cfg.n_paths, 20);
        assert_eq!(cfg.t, vec![0.1, 0.25]);
        assert_eq!(cfg.v0, InitialCondition::Hat(2.0));
        assert_eq!(cfg.format, Format::Json);
    }

    #[test]
    fn malformed_inputs_are_rejected() {
        for (file, sets) in [
            (Some("n_paths = "), vec![]),
            (Some("bogus_key = 1"), vec![]),
            (None, vec!["potential=warp(1)".to_string()]),
            (None, vec!["n_paths=-3".to_string()]),
            (None, vec!["n_paths".to_string()]),
            (None, vec!["t=[0.5, -1]".to_string()]),
            (None, vec!["p_max=0".to_string()]),
            (None, vec!["h=0".to_string()]),
        ] {
            let r = RunConfig::load(file, &sets);
            assert!(
                matches!(r, Err(Error::Config(_))),
                "{file:?} {sets:?} gave {r:?}"
            );
        }
    }

    #[test]
    fn empty_t_list_is_allowed() {
        assert!(RunConfig::load(None, &["t=[]".into()])
            .unwrap()
            .t
            .is_empty());
    }
}
