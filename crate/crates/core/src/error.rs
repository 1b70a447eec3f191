use thiserror::Error;

/// Errors raised by curve construction and the numerical routines.
///
/// Variants other than [`Error::Internal`] are domain errors: the inputs are
/// outside the region where the requested quantity is defined or computable.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("unsupported dimension {0} (curves live in R^2 or R^3)")]
    UnsupportedDimension(usize),

    #[error("reality constraint violated at mode {n}: |c_-n - conj(c_n)| = {defect:e}")]
    RealityViolation { n: i32, defect: f64 },

    #[error("all Fourier coefficients vanish")]
    ZeroCoefficients,

    #[error("speed vanishes near t = {t:.6} (min |dG/dt| = {speed:e}); cannot reparametrize")]
    SingularReparametrization { t: f64, speed: f64 },

    #[error("closure defect {defect:e} exceeds tolerance {tol:e}")]
    ClosureDefect { defect: f64, tol: f64 },

    #[error("chord vanishes at s = {s:.6}, u = {u:.6}; p = {p} makes the integral divergent")]
    DivergentIntegral { s: f64, u: f64, p: f64 },

    #[error("degenerate curve: {0}")]
    DegenerateCurve(String),

    #[error("curve must be of class C2: {0}")]
    NotSmooth(String),

    #[error("no sign change of lambda_max - 1 on the scanned kappa grid {scanned:?}")]
    BracketFailure { scanned: Vec<(f64, f64)> },

    #[error("eigensolver did not converge after {iterations} iterations")]
    EigenNonConvergence { iterations: usize },

    #[error(
        "perturbation family is not orthogonal to e^(is): overlap {overlap:e} at gamma = {gamma}"
    )]
    NotOrthogonal { gamma: f64, overlap: f64 },

    #[error("least-squares fit is ill-conditioned: {0}")]
    FitConditioning(String),

    #[error("quadrature noise {noise:e} exceeds finite-difference signal {signal:e}")]
    FiniteDifferenceNoise { noise: f64, signal: f64 },

    #[error("internal failure: {0}")]
    Internal(String),
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }

    /// Whether the error is caused by the inputs rather than a numerical
    /// breakdown inside the library.
    pub fn is_domain_error(&self) -> bool {
        !matches!(self, Error::Internal(_) | Error::EigenNonConvergence { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
