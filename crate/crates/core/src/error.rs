use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("outside domain: {0}")]
    Domain(String),

    #[error("unknown {kind} `{name}`; valid entries: {valid}")]
    Catalog {
        kind: &'static str,
        name: String,
        valid: &'static str,
    },

    #[error("dimension {n} exceeds the tensor-quadrature limit of {max}")]
    DimensionGuard { n: usize, max: usize },

    #[error(
        "t = {t} exceeds t_max_alt = {t_max}; the alternate representation is only \
         established for sufficiently small t"
    )]
    SmallTime { t: f64, t_max: f64 },

    #[error("Crank-Nicolson instability at step {step}: norm {norm:e} exceeds bound {bound:e}")]
    Instability { step: usize, norm: f64, bound: f64 },

    #[error("config: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn ensure_positive(name: &str, value: f64) -> Result<()> {
    if value > 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "{name} must be positive and finite, got {value}"
        )))
    }
}
