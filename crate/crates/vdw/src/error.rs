use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum VdwError {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("singularity: {0}")]
    Singularity(String),

    #[error("{what} requires the {needed} regime, got x_a = {x_a:.4e}, x_b = {x_b:.4e}")]
    Regime {
        what: &'static str,
        needed: &'static str,
        x_a: f64,
        x_b: f64,
    },

    #[error("degenerate resonance: omega_a = omega_b = {0} puts the formula on its pole")]
    DegenerateResonance(f64),

    #[error("quadrature did not converge: estimate {value:e}, error {error:e} after {evals} evaluations")]
    Quadrature { value: f64, error: f64, evals: usize },

    #[error("finite difference did not converge at R = {r:e}: estimate {value:e}, error {error:e}")]
    Derivative { r: f64, value: f64, error: f64 },

    #[error("config: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, VdwError>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(VdwError::Domain(msg.into()))
}
