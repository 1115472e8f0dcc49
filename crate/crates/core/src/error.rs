use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("argument out of domain: {0}")]
    Domain(String),

    #[error("singular below-plate ratio at kappa = {kappa}, eta = {eta}")]
    Singular { kappa: f64, eta: f64 },

    #[error("tail model not admissible at kappa_max = {kappa_max} (relative deviation {deviation:.3e})")]
    TailInadmissible { kappa_max: f64, deviation: f64 },

    #[error("quadrature missed tolerance: value {value}, error estimate {err_est:.3e}, {n_evals} evaluations")]
    Tolerance { value: f64, err_est: f64, n_evals: usize },

    #[error("integrand returned a non-finite value at x = {0}")]
    NonFinite(f64),

    #[error("oracle integration failed: {0}")]
    Oracle(String),

    #[error("grid too coarse: Richardson levels disagree by {gap:.3e} (limit {limit:.1e})")]
    GridTooCoarse { gap: f64, limit: f64 },

    #[error("insufficient resolution: {0}")]
    Resolution(String),
}

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
