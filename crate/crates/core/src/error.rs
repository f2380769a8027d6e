use num_complex::Complex64;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("parameter {name} = {value} is zero or a negative integer")]
    ParameterPole { name: &'static str, value: Complex64 },

    #[error("series diverges: max |x_i| = {max_modulus} is not below 1")]
    DivergentSeries { max_modulus: f64 },

    #[error("no convergence after {evaluations} evaluations (value {value}, error estimate {err_estimate:e})")]
    NotConverged {
        value: Complex64,
        err_estimate: f64,
        evaluations: usize,
    },

    #[error("factor 1 - u*x[{index}] crosses the negative real axis for u in (0,1) (x = {x})")]
    BranchCrossing { index: usize, x: Complex64 },

    #[error("integrand tail decays too slowly to be integrable (local exponent {exponent:.3})")]
    SlowDecay { exponent: f64 },

    #[error("power base vanishes with a negative exponent at {at}")]
    PoleHit { at: Complex64 },

    #[error("wavefunction vanishes at x = {x}, f^(1-q) is undefined")]
    ZeroAmplitude { x: f64 },

    #[error("{quantity} requires {lower} < q < {upper}, got q = {q}")]
    OutOfValidityWindow {
        quantity: &'static str,
        q: f64,
        lower: f64,
        upper: f64,
    },

    #[error("{quantity} at (q = {q}, alpha = {alpha}): closed form {closed_form} vs oracle {oracle}, relative deviation {deviation:e}")]
    ConventionMismatch {
        quantity: String,
        q: f64,
        alpha: Complex64,
        closed_form: Complex64,
        oracle: Complex64,
        deviation: f64,
    },

    #[error("invariant violated: {0}")]
    InvariantViolation(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
