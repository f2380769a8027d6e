//! Momentum-space amplitude `<k|alpha, q> = (2 pi)^(-1/2) int e^(-ikx) psi(x) dx`
//! and its probability distribution.

use std::f64::consts::{PI, SQRT_2};

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::quadrature::{fourier_transform_line, IntegrandSpec};
use crate::specfun::{kummer_phi, ln_gamma_real};
use crate::states::{
    check_window, checked, coherent_psi, psi_unnormalized, relative_deviation, sample_or_nan,
    window, Evaluation, Method, StateLabel,
};

/// Default tolerance of the Fourier oracle.
pub const FOURIER_TOL: f64 = 1e-10;
/// Points in the default k grid.
pub const DEFAULT_K_POINTS: usize = 401;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentumSample {
    pub k: f64,
    pub amplitude: Complex64,
    pub pd: f64,
    pub method: Method,
}

/// Fourier oracle for one state, with its normalization computed once.
#[derive(Debug, Clone, Copy)]
pub struct MomentumOracle {
    label: StateLabel,
    constant: f64,
}

impl MomentumOracle {
    pub fn new(q: f64, alpha: Complex64) -> Result<Self> {
        check_window("momentum amplitude", q, window::NORMALIZABLE)?;
        let label = StateLabel::new(q, alpha)?;
        let constant = label.constant()?;
        Ok(Self { label, constant })
    }

    pub fn label(&self) -> &StateLabel {
        &self.label
    }

    pub fn amplitude(&self, k: f64, tol: f64) -> Result<Complex64> {
        let (q, alpha) = (self.label.q(), self.label.alpha());
        let centre = SQRT_2 * alpha.re;
        let value = if q == 1.0 {
            let spec = IntegrandSpec::whole_line(|x| coherent_psi(alpha, x)).with_hints([centre]);
            fourier_transform_line(&spec, k, tol)?.value
        } else {
            let spec = IntegrandSpec::whole_line(|x| sample_or_nan(q, alpha, x).value).with_hints([centre]);
            fourier_transform_line(&spec, k, tol)?.value * self.constant
        };
        if !(value.re.is_finite() && value.im.is_finite()) {
            return Err(Error::NotConverged { value, err_estimate: f64::INFINITY, evaluations: 0 });
        }
        Ok(value)
    }
}

pub fn momentum_amplitude_oracle(q: f64, alpha: Complex64, k: f64, tol: f64) -> Result<Complex64> {
    MomentumOracle::new(q, alpha)?.amplitude(k, tol)
}

/// `pi^(-1/4) e^(-(k^2 + 2 sqrt2 i alpha k - alpha^2 + |alpha|^2)/2)`.
pub fn coherent_amplitude(alpha: Complex64, k: f64) -> Complex64 {
    let i = Complex64::new(0.0, 1.0);
    let exponent = -0.5 * (k * k + 2.0 * SQRT_2 * i * alpha * k - alpha * alpha + alpha.norm_sqr());
    PI.powf(-0.25) * exponent.exp()
}

/// `pi^(-1/2) e^(-(k - p0)^2)` with `p0 = sqrt2 Im alpha`.
pub fn gaussian_limit_pd(alpha: Complex64, k: f64) -> f64 {
    let p0 = SQRT_2 * alpha.im;
    (-(k - p0) * (k - p0)).exp() / PI.sqrt()
}

fn radical(q: f64, w: Complex64) -> Complex64 {
    (w * w - w.norm_sqr() - 2.0 / (q - 1.0)).sqrt()
}

fn closed_inputs(q: f64, alpha: Complex64, k: f64) -> Result<f64> {
    if q != 1.0 {
        check_window("momentum closed form", q, window::MOMENTUM_CLOSED)?;
    }
    if k == 0.0 || !k.is_finite() {
        return Err(Error::InvalidArgument(format!("momentum closed form needs finite k != 0, got {k}")));
    }
    Ok(StateLabel::new(q, alpha)?.constant()?)
}

/// The printed Kummer-function amplitude,
///
/// `sgn(k) sqrt(2 pi) A |k|^((3-q)/(q-1)) / Gamma(2/(q-1)) e^(-i pi sgn(k)/(q-1))
///  e^(i (sqrt2 alpha + r)) phi(1/(q-1), 2/(q-1); -2 i r |k|)`,
/// `r = sqrt(alpha^2 - |alpha|^2 - 2/(q-1))`.
///
/// It tends to zero as `k -> 0` while the oracle does not; it is evaluated
/// as written and compared against the oracle by the verify report.
pub fn momentum_amplitude_closed(q: f64, alpha: Complex64, k: f64) -> Result<Complex64> {
    let a = closed_inputs(q, alpha, k)?;
    if q == 1.0 {
        return Ok(coherent_amplitude(alpha, k));
    }
    let b = 1.0 / (q - 1.0);
    let sgn = k.signum();
    let r = radical(q, alpha);
    let i = Complex64::new(0.0, 1.0);
    let magnitude = ((3.0 - q) / (q - 1.0) * k.abs().ln() - ln_gamma_real(2.0 * b)).exp();
    let phase = (-i * PI * sgn * b).exp() * (i * (SQRT_2 * alpha + r)).exp();
    let phi = kummer_phi(b.into(), (2.0 * b).into(), -2.0 * i * r * k.abs())?;
    Ok(sgn * (2.0 * PI).sqrt() * a * magnitude * phase * phi)
}

/// The printed probability distribution, a product of two Kummer functions.
pub fn momentum_pd_closed(q: f64, alpha: Complex64, k: f64) -> Result<Complex64> {
    let a = closed_inputs(q, alpha, k)?;
    if q == 1.0 {
        return Ok(coherent_amplitude(alpha, k).norm_sqr().into());
    }
    let b = 1.0 / (q - 1.0);
    let (r, rc) = (radical(q, alpha), radical(q, alpha.conj()));
    let i = Complex64::new(0.0, 1.0);
    let magnitude = ((6.0 - 2.0 * q) / (q - 1.0) * k.abs().ln() - 2.0 * ln_gamma_real(2.0 * b)).exp();
    let phase = (i * (SQRT_2 * (alpha - alpha.conj()) + r - rc)).exp();
    let phi1 = kummer_phi(b.into(), (2.0 * b).into(), -2.0 * i * r * k.abs())?;
    let phi2 = kummer_phi(b.into(), (2.0 * b).into(), 2.0 * i * rc * k.abs())?;
    Ok(2.0 * PI * a * a * magnitude * phase * phi1 * phi2)
}

/// Closed-form amplitude against the oracle; `ConventionMismatch` beyond 1e-5.
pub fn momentum_amplitude_checked(q: f64, alpha: Complex64, k: f64, tol: f64) -> Result<Evaluation> {
    let value = momentum_amplitude_closed(q, alpha, k)?;
    let oracle = momentum_amplitude_oracle(q, alpha, k, tol)?;
    checked("momentum amplitude", q, alpha, value, oracle, crate::closed_form::Convention::AS_PRINTED)
}

/// Symmetric uniform grid of `points` nodes over `[-half_width, half_width]`,
/// with k = 0 an exact node when `points` is odd.
pub fn symmetric_grid(half_width: f64, points: usize) -> Vec<f64> {
    if points < 2 {
        return vec![0.0; points];
    }
    let mid = (points - 1) as f64 / 2.0;
    (0..points).map(|i| half_width * (i as f64 - mid) / mid).collect()
}

/// 401 points over `[-8 - 2|alpha|, 8 + 2|alpha|]`.
pub fn default_k_grid(alpha: Complex64) -> Vec<f64> {
    symmetric_grid(8.0 + 2.0 * alpha.norm(), DEFAULT_K_POINTS)
}

/// `int f dk` over sampled values: composite Simpson on a uniform grid with an
/// even number of panels, trapezoid otherwise.
pub fn integrate_samples(ks: &[f64], values: &[f64]) -> f64 {
    let n = ks.len().min(values.len());
    if n < 2 {
        return 0.0;
    }
    let h = (ks[n - 1] - ks[0]) / (n - 1) as f64;
    let uniform = ks[..n]
        .windows(2)
        .all(|w| ((w[1] - w[0]) - h).abs() <= 1e-9 * h.abs());
    if uniform && n >= 3 && n % 2 == 1 {
        let inner: f64 = (1..n - 1)
            .map(|i| if i % 2 == 1 { 4.0 * values[i] } else { 2.0 * values[i] })
            .sum();
        return h / 3.0 * (values[0] + inner + values[n - 1]);
    }
    (0..n - 1)
        .map(|i| 0.5 * (ks[i + 1] - ks[i]) * (values[i] + values[i + 1]))
        .sum()
}

#[derive(Debug, Clone, PartialEq)]
pub struct MomentumPd {
    pub q: f64,
    pub alpha: Complex64,
    pub samples: Vec<MomentumSample>,
    /// `int pd dk` over the grid, attached for the oracle method.
    pub parseval: Option<f64>,
}

impl MomentumPd {
    /// `int k^n pd dk` over the grid.
    pub fn k_moment(&self, n: i32) -> f64 {
        let ks: Vec<f64> = self.samples.iter().map(|s| s.k).collect();
        let vals: Vec<f64> = self.samples.iter().map(|s| s.k.powi(n) * s.pd).collect();
        integrate_samples(&ks, &vals)
    }
}

/// `pd(k) = |<k|alpha, q>|^2` on `k_grid`.
///
/// The closed-form method evaluates the printed product formula for `pd` and
/// the printed amplitude separately; it needs every `k != 0`.
pub fn momentum_pd(q: f64, alpha: Complex64, k_grid: &[f64], method: Method) -> Result<MomentumPd> {
    momentum_pd_with(q, alpha, k_grid, method, FOURIER_TOL)
}

pub fn momentum_pd_with(
    q: f64,
    alpha: Complex64,
    k_grid: &[f64],
    method: Method,
    tol: f64,
) -> Result<MomentumPd> {
    psi_unnormalized(q, alpha, 0.0)?;
    let samples: Vec<MomentumSample> = match method {
        Method::Oracle => {
            let oracle = MomentumOracle::new(q, alpha)?;
            k_grid
                .par_iter()
                .map(|&k| {
                    let amplitude = oracle.amplitude(k, tol)?;
                    Ok(MomentumSample { k, amplitude, pd: amplitude.norm_sqr(), method })
                })
                .collect::<Result<_>>()?
        }
        Method::ClosedForm => k_grid
            .par_iter()
            .map(|&k| {
                let amplitude = momentum_amplitude_closed(q, alpha, k)?;
                let pd = momentum_pd_closed(q, alpha, k)?;
                Ok(MomentumSample { k, amplitude, pd: pd.re, method })
            })
            .collect::<Result<_>>()?,
    };
    let parseval = match method {
        Method::Oracle => {
            let ks: Vec<f64> = samples.iter().map(|s| s.k).collect();
            let pds: Vec<f64> = samples.iter().map(|s| s.pd).collect();
            Some(integrate_samples(&ks, &pds))
        }
        Method::ClosedForm => None,
    };
    Ok(MomentumPd { q, alpha, samples, parseval })
}

/// Largest `|pd - gaussian_limit_pd|` over `k_grid`.
pub fn gaussian_distance(pd: &MomentumPd) -> f64 {
    pd.samples
        .iter()
        .map(|s| (s.pd - gaussian_limit_pd(pd.alpha, s.k)).abs())
        .fold(0.0, f64::max)
}

/// Relative deviation between the printed amplitude and the oracle at one k.
pub fn amplitude_deviation(q: f64, alpha: Complex64, k: f64, tol: f64) -> Result<(Complex64, Complex64, f64)> {
    let closed = momentum_amplitude_closed(q, alpha, k)?;
    let oracle = momentum_amplitude_oracle(q, alpha, k, tol)?;
    Ok((closed, oracle, relative_deviation(closed, oracle)))
}
