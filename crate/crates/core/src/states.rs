//! Ordinary coherent states and Tsallis pseudo-coherent states
//!
//! `psi(x) = A(q, alpha) [1 + ((q-1)/2) P(x)]^(1/(1-q))`,
//! `P(x) = x^2 - 2 sqrt2 alpha x + |alpha|^2 + alpha^2`,
//!
//! which reduces to the Gaussian `pi^(-1/4) e^(-P/2)` at q = 1.

use std::f64::consts::{PI, SQRT_2};

use num_complex::Complex64;
use serde::Serialize;

use crate::closed_form::{self, Convention};
use crate::error::{Error, Result};
use crate::quadrature::{integrate_line, IntegrandSpec, QuadratureResult};

/// Relative tolerance of the position-space oracles.
pub const ORACLE_TOL: f64 = 1e-11;
/// Largest closed-form vs oracle deviation accepted after calibration.
pub const CONVENTION_TOL: f64 = 1e-5;

/// Upper q bounds of the quantities that need power-law decay.
pub mod window {
    /// `|psi|^2 ~ |x|^(4/(1-q))` is integrable.
    pub const NORMALIZABLE: f64 = 5.0;
    /// `x^2 |psi|^2` is integrable.
    pub const SECOND_MOMENT: f64 = 7.0 / 3.0;
    /// The `|k|` exponent of the printed momentum closed form is positive.
    pub const MOMENTUM_CLOSED: f64 = 3.0;
}

pub(crate) fn check_window(quantity: &'static str, q: f64, upper: f64) -> Result<()> {
    if q == 1.0 || (q > 1.0 && q < upper) {
        Ok(())
    } else {
        Err(Error::OutOfValidityWindow { quantity, q, lower: 1.0, upper })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    ClosedForm,
    Oracle,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::ClosedForm => "closed-form",
            Method::Oracle => "oracle",
        }
    }
}

/// Closed-form value compared against its oracle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleCheck {
    pub oracle: Complex64,
    pub deviation: f64,
    pub convention: Convention,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Evaluation {
    pub value: Complex64,
    pub method: Method,
    pub check: Option<OracleCheck>,
}

pub fn relative_deviation(value: Complex64, reference: Complex64) -> f64 {
    let diff = (value - reference).norm();
    if reference.norm() > 0.0 {
        diff / reference.norm()
    } else {
        diff
    }
}

/// `e_q(z) = [1 + (1-q) z]^(1/(1-q))`, principal branch; `e^z` at q = 1.
pub fn q_exponential(q: f64, z: Complex64) -> Result<Complex64> {
    if q == 1.0 {
        return Ok(z.exp());
    }
    let base = 1.0 + (1.0 - q) * z;
    let exponent = 1.0 / (1.0 - q);
    if base == Complex64::new(0.0, 0.0) {
        if exponent < 0.0 {
            return Err(Error::PoleHit { at: z });
        }
        return Ok(base);
    }
    Ok(base.powf(exponent))
}

/// Normalized coherent state `pi^(-1/4) e^(-alpha^2/2 - |alpha|^2/2 - x^2/2 + sqrt2 alpha x)`.
pub fn coherent_psi(alpha: Complex64, x: f64) -> Complex64 {
    let exponent = -0.5 * alpha * alpha - 0.5 * alpha.norm_sqr() - 0.5 * x * x + SQRT_2 * alpha * x;
    PI.powf(-0.25) * exponent.exp()
}

/// Fock-basis coefficients `a_n = alpha^n e^(-|alpha|^2/2) / sqrt(n!)`, n = 0..=n_max.
pub fn coherent_coefficients(alpha: Complex64, n_max: usize) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(n_max + 1);
    let mut a = Complex64::new((-0.5 * alpha.norm_sqr()).exp(), 0.0);
    out.push(a);
    for n in 1..=n_max {
        a *= alpha / (n as f64).sqrt();
        out.push(a);
    }
    out
}

/// Roots of the two quadratic factors of `|bracket|^2 (2/(q-1))^2`:
/// `beta1,2` factor the bra (conjugate) bracket, `beta3,4` the ket bracket.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BetaRoots {
    pub beta1: Complex64,
    pub beta2: Complex64,
    pub beta3: Complex64,
    pub beta4: Complex64,
}

impl BetaRoots {
    pub fn as_array(&self) -> [Complex64; 4] {
        [self.beta1, self.beta2, self.beta3, self.beta4]
    }
}

/// `beta1,2 = sqrt2 conj(alpha) +- sqrt(conj(alpha)^2 - |alpha|^2 - 2/(q-1))`,
/// `beta3,4 = sqrt2 alpha +- sqrt(alpha^2 - |alpha|^2 - 2/(q-1))`.
pub fn beta_roots(q: f64, alpha: Complex64) -> Result<BetaRoots> {
    if !(q > 1.0) {
        return Err(Error::InvalidArgument(format!("beta roots need q > 1, got {q}")));
    }
    Ok(closed_form::roots(q, alpha.conj(), alpha, closed_form::Radicand::MinusModulus))
}

/// Wavefunction value with its first two x-derivatives.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WaveFunctionSample {
    pub x: f64,
    pub value: Complex64,
    pub d1: Complex64,
    pub d2: Complex64,
}

impl WaveFunctionSample {
    pub fn scaled(self, factor: f64) -> Self {
        Self {
            x: self.x,
            value: self.value * factor,
            d1: self.d1 * factor,
            d2: self.d2 * factor,
        }
    }
}

fn quadratic(alpha: Complex64, x: f64) -> Complex64 {
    x * x - 2.0 * SQRT_2 * alpha * x + alpha.norm_sqr() + alpha * alpha
}

/// The bracket `[1 + ((q-1)/2) P(x)]^(1/(1-q))` without its normalization,
/// or `e^(-P/2)` at q = 1.
pub fn psi_unnormalized(q: f64, alpha: Complex64, x: f64) -> Result<WaveFunctionSample> {
    check_window("psi", q, window::NORMALIZABLE)?;
    let shift = x - SQRT_2 * alpha;
    if q == 1.0 {
        let value = (-0.5 * quadratic(alpha, x)).exp();
        return Ok(WaveFunctionSample {
            x,
            value,
            d1: -shift * value,
            d2: (shift * shift - 1.0) * value,
        });
    }
    let base = 1.0 + 0.5 * (q - 1.0) * quadratic(alpha, x);
    if base == Complex64::new(0.0, 0.0) {
        return Err(Error::PoleHit { at: Complex64::new(x, 0.0) });
    }
    let s = 1.0 / (1.0 - q);
    let value = base.powf(s);
    // base' = (q-1) shift, base'' = q-1
    let log_d = (q - 1.0) * shift / base;
    let d1 = s * log_d * value;
    let d2 = value * (s * (s - 1.0) * log_d * log_d + s * (q - 1.0) / base);
    Ok(WaveFunctionSample { x, value, d1, d2 })
}

/// Something that can be sampled with derivatives, for [`apply_aq`].
pub trait WaveFunction {
    fn sample(&self, x: f64) -> Result<WaveFunctionSample>;
}

/// The non-normalized state `phi = psi / A`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnnormalizedState {
    pub q: f64,
    pub alpha: Complex64,
}

impl WaveFunction for UnnormalizedState {
    fn sample(&self, x: f64) -> Result<WaveFunctionSample> {
        psi_unnormalized(self.q, self.alpha, x)
    }
}

/// The normalized ordinary coherent state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoherentState {
    pub alpha: Complex64,
}

impl WaveFunction for CoherentState {
    fn sample(&self, x: f64) -> Result<WaveFunctionSample> {
        let shift = x - SQRT_2 * self.alpha;
        let value = coherent_psi(self.alpha, x);
        Ok(WaveFunctionSample {
            x,
            value,
            d1: -shift * value,
            d2: (shift * shift - 1.0) * value,
        })
    }
}

/// `a_q f = (x/sqrt2) f + (f^(1-q)/sqrt2) f'`, principal branch for the power.
pub fn apply_aq<W: WaveFunction + ?Sized>(q: f64, f: &W, x: f64) -> Result<Complex64> {
    let s = f.sample(x)?;
    let power = if q == 1.0 {
        Complex64::new(1.0, 0.0)
    } else {
        if s.value == Complex64::new(0.0, 0.0) {
            return Err(Error::ZeroAmplitude { x });
        }
        s.value.powf(1.0 - q)
    };
    Ok((x * s.value + power * s.d1) / SQRT_2)
}

/// Integral over the real line of a function of x, with a breakpoint at the
/// packet centre.
pub(crate) fn line_integral<F: Fn(f64) -> Complex64>(
    alpha: Complex64,
    tol: f64,
    f: F,
) -> Result<QuadratureResult> {
    let centre = SQRT_2 * alpha.re;
    let spec = IntegrandSpec::whole_line(f).with_hints([centre]);
    integrate_line(&spec, tol)
}

/// Sample with failures mapped to NaN, so a quadrature over it reports
/// non-convergence.
pub(crate) fn sample_or_nan(q: f64, alpha: Complex64, x: f64) -> WaveFunctionSample {
    psi_unnormalized(q, alpha, x).unwrap_or(WaveFunctionSample {
        x,
        value: Complex64::new(f64::NAN, f64::NAN),
        d1: Complex64::new(f64::NAN, f64::NAN),
        d2: Complex64::new(f64::NAN, f64::NAN),
    })
}

/// `int |phi|^2 dx` by quadrature.
pub fn norm_integral_oracle(q: f64, alpha: Complex64, tol: f64) -> Result<f64> {
    check_window("normalization", q, window::NORMALIZABLE)?;
    let r = line_integral(alpha, tol, |x| sample_or_nan(q, alpha, x).value.norm_sqr().into())?;
    if !(r.value.re > 0.0) || !r.value.re.is_finite() {
        return Err(Error::NotConverged {
            value: r.value,
            err_estimate: r.err_estimate,
            evaluations: r.evaluations,
        });
    }
    Ok(r.value.re)
}

/// Oracle normalization constant `(int |phi|^2 dx)^(-1/2)`.
fn oracle_constant(q: f64, alpha: Complex64) -> Result<f64> {
    Ok(norm_integral_oracle(q, alpha, ORACLE_TOL)?.powf(-0.5))
}

/// A state `(q, alpha)` with its oracle normalization constant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateLabel {
    q: f64,
    alpha: Complex64,
    norm_constant: Option<f64>,
}

impl StateLabel {
    /// Builds the label and computes `A(q, alpha)` by quadrature.
    pub fn new(q: f64, alpha: Complex64) -> Result<Self> {
        let mut label = Self::bare(q, alpha)?;
        label.norm_constant = Some(oracle_constant(q, alpha)?);
        Ok(label)
    }

    /// Label without a cached constant.
    pub fn bare(q: f64, alpha: Complex64) -> Result<Self> {
        check_window("state", q, window::NORMALIZABLE)?;
        if !alpha.re.is_finite() || !alpha.im.is_finite() {
            return Err(Error::InvalidArgument(format!("alpha = {alpha} is not finite")));
        }
        Ok(Self { q, alpha, norm_constant: None })
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn alpha(&self) -> Complex64 {
        self.alpha
    }

    pub fn norm_constant(&self) -> Option<f64> {
        self.norm_constant
    }

    pub fn is_coherent(&self) -> bool {
        self.q == 1.0
    }

    /// The cached constant, or a fresh oracle evaluation.
    pub fn constant(&self) -> Result<f64> {
        match self.norm_constant {
            Some(a) => Ok(a),
            None => oracle_constant(self.q, self.alpha),
        }
    }

    pub fn unnormalized(&self) -> UnnormalizedState {
        UnnormalizedState { q: self.q, alpha: self.alpha }
    }

    /// Normalized wavefunction sample.
    pub fn psi(&self, x: f64) -> Result<WaveFunctionSample> {
        Ok(psi_unnormalized(self.q, self.alpha, x)?.scaled(self.constant()?))
    }
}

/// `A(q, alpha)` such that `A * bracket` has unit norm.
///
/// The oracle path integrates the bracket. The closed-form path evaluates the
/// Lauricella expression under the calibrated convention and compares it with
/// the oracle, failing with `ConventionMismatch` beyond [`CONVENTION_TOL`].
pub fn normalization_constant(q: f64, alpha: Complex64, method: Method) -> Result<Evaluation> {
    check_window("normalization", q, window::NORMALIZABLE)?;
    let oracle = Complex64::new(oracle_constant(q, alpha)?, 0.0);
    match method {
        Method::Oracle => Ok(Evaluation { value: oracle, method, check: None }),
        Method::ClosedForm => {
            let convention = closed_form::calibrated()?;
            let value = closed_form::norm_constant(q, alpha, convention)?;
            checked("normalization constant", q, alpha, value, oracle, convention)
        }
    }
}

pub(crate) fn checked(
    quantity: &str,
    q: f64,
    alpha: Complex64,
    value: Complex64,
    oracle: Complex64,
    convention: Convention,
) -> Result<Evaluation> {
    let deviation = relative_deviation(value, oracle);
    if !(deviation <= CONVENTION_TOL) {
        return Err(Error::ConventionMismatch {
            quantity: quantity.to_string(),
            q,
            alpha,
            closed_form: value,
            oracle,
            deviation,
        });
    }
    Ok(Evaluation {
        value,
        method: Method::ClosedForm,
        check: Some(OracleCheck { oracle, deviation, convention }),
    })
}

/// `<a|b> = int conj(psi_a) psi_b dx` between normalized states of equal q.
pub fn overlap(a: &StateLabel, b: &StateLabel, method: Method) -> Result<Evaluation> {
    if a.q != b.q {
        return Err(Error::InvalidArgument(format!(
            "overlaps are defined for equal q only ({} vs {})",
            a.q, b.q
        )));
    }
    let oracle = overlap_oracle(a, b, ORACLE_TOL)?;
    match method {
        Method::Oracle => Ok(Evaluation { value: oracle, method, check: None }),
        Method::ClosedForm => {
            let convention = closed_form::calibrated()?;
            let value = closed_form::overlap(a.q, a.alpha, b.alpha, convention)?
                * (a.constant()? * b.constant()?);
            checked("overlap", a.q, b.alpha, value, oracle, convention)
        }
    }
}

fn overlap_oracle(a: &StateLabel, b: &StateLabel, tol: f64) -> Result<Complex64> {
    let (q, alpha, beta) = (a.q, a.alpha, b.alpha);
    let centre = 0.5 * (alpha + beta);
    let r = line_integral(centre, tol, |x| {
        sample_or_nan(q, alpha, x).value.conj() * sample_or_nan(q, beta, x).value
    })?;
    Ok(r.value * (a.constant()? * b.constant()?))
}
