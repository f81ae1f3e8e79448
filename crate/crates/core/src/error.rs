use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("leading coefficient is zero; the series has no reciprocal")]
    ZeroLeadingCoefficient,

    #[error("parameter out of domain: {0}")]
    ParameterDomain(String),

    #[error("pole of the gamma function at x = {0}")]
    Pole(f64),

    #[error("{function}: series did not converge within {terms} terms")]
    NonConvergence { function: &'static str, terms: usize },

    #[error("{function}: cancellation too severe (condition estimate {condition:.3e})")]
    PrecisionLoss { function: &'static str, condition: f64 },

    #[error("series argument {argument:.6e} exceeds the usable radius {radius:.6e}")]
    RadiusExceeded { argument: f64, radius: f64 },

    #[error("operation needs the derivative of the operand, but none was supplied")]
    MissingDerivative,

    #[error("grid too coarse: estimated quadrature error {estimate:.3e} exceeds {tolerance:.3e}")]
    GridTooCoarse { estimate: f64, tolerance: f64 },

    #[error("coefficient condition violated at n = {n} (residual {residual:.3e})")]
    CoefficientConditionViolated { n: usize, residual: f64 },

    #[error("Laplace abscissa violated: {0}")]
    AbscissaViolation(String),

    #[error("Laplace tail estimate {estimate:.3e} exceeds the bound {bound:.3e}")]
    TailBoundExceeded { estimate: f64, bound: f64 },

    #[error("Sonin spot check failed at x = {x}: |(kappa*k)(x) - 1| = {residual:.3e}")]
    SoninSpotCheck { x: f64, residual: f64 },
}

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::ParameterDomain(msg.into())
}
