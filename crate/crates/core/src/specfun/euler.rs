//! Beta-type integrals `int_0^1 t^(p-1) (1-t)^(r-1) exp(g(t)) dt` evaluated in
//! log-scaled form, shared by the Kummer and Lauricella integral
//! representations.

use num_complex::Complex64;

use crate::error::Result;
use crate::quadrature::{adaptive, QuadConfig};

/// `value * exp(ln_scale)`, for quantities whose magnitude leaves f64 range.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scaled {
    pub ln_scale: f64,
    pub value: Complex64,
}

impl Scaled {
    pub fn new(value: Complex64) -> Self {
        Self { ln_scale: 0.0, value }.normalized()
    }

    pub fn from_log(ln: Complex64) -> Self {
        Self {
            ln_scale: ln.re,
            value: Complex64::from_polar(1.0, ln.im),
        }
    }

    fn normalized(self) -> Self {
        let m = self.value.norm();
        if m == 0.0 || !m.is_finite() {
            return self;
        }
        Self {
            ln_scale: self.ln_scale + m.ln(),
            value: self.value / m,
        }
    }

    pub fn mul(self, other: Scaled) -> Self {
        Self {
            ln_scale: self.ln_scale + other.ln_scale,
            value: self.value * other.value,
        }
        .normalized()
    }

    pub fn scale(self, factor: Complex64) -> Self {
        self.mul(Scaled::new(factor))
    }

    pub fn div(self, other: Scaled) -> Self {
        Self {
            ln_scale: self.ln_scale - other.ln_scale,
            value: self.value / other.value,
        }
        .normalized()
    }

    pub fn add(self, other: Scaled) -> Self {
        if self.value.norm() == 0.0 {
            return other;
        }
        if other.value.norm() == 0.0 {
            return self;
        }
        let top = self.ln_scale.max(other.ln_scale);
        Self {
            ln_scale: top,
            value: self.value * (self.ln_scale - top).exp() + other.value * (other.ln_scale - top).exp(),
        }
        .normalized()
    }

    pub fn neg(self) -> Self {
        Self {
            ln_scale: self.ln_scale,
            value: -self.value,
        }
    }

    pub fn powf(self, exponent: f64) -> Self {
        Self {
            ln_scale: self.ln_scale * exponent,
            value: self.value.powf(exponent),
        }
        .normalized()
    }

    pub fn to_complex(self) -> Complex64 {
        self.value * self.ln_scale.exp()
    }
}

pub(crate) struct EulerIntegral {
    pub scaled: Scaled,
    /// Error estimate relative to `|scaled|`.
    pub rel_err: f64,
    pub evaluations: usize,
}

/// `int_0^1 t^(p-1) (1-t)^(r-1) exp(log_rest(t, 1-t)) dt` with `Re p, Re r > 0`.
///
/// The interval is split at 1/2. Near 0 the substitution `t = s^m` with
/// `m = 1/Re p` (when `Re p < 1`) removes the algebraic endpoint singularity;
/// near 1 the same is done with `1 - t = s^n`. The integrand is shifted by
/// its sampled log-maximum before exponentiation.
pub(crate) fn euler_integral<G>(p: Complex64, r: Complex64, log_rest: G, rel_tol: f64) -> Result<EulerIntegral>
where
    G: Fn(f64, f64) -> Complex64,
{
    let m = if p.re < 1.0 { 1.0 / p.re } else { 1.0 };
    let n = if r.re < 1.0 { 1.0 / r.re } else { 1.0 };
    let s_left = 0.5f64.powf(1.0 / m);
    let s_right = 0.5f64.powf(1.0 / n);

    let left = |s: f64| {
        let t = s.powf(m);
        m.ln() + (m * p - 1.0) * s.ln() + (r - 1.0) * (-t).ln_1p() + log_rest(t, 1.0 - t)
    };
    let right = |s: f64| {
        let omt = s.powf(n);
        n.ln() + (n * r - 1.0) * s.ln() + (p - 1.0) * (-omt).ln_1p() + log_rest(1.0 - omt, omt)
    };

    const SAMPLES: usize = 256;
    let mut shift = f64::NEG_INFINITY;
    for j in 1..=SAMPLES {
        let frac = j as f64 / SAMPLES as f64;
        for v in [left(s_left * frac).re, right(s_right * frac).re] {
            if v.is_finite() {
                shift = shift.max(v);
            }
        }
    }
    if !shift.is_finite() {
        shift = 0.0;
    }

    let cfg = QuadConfig::relative(rel_tol, 1e-15);
    let lhs = adaptive(&|s: f64| (left(s) - shift).exp(), &[0.0, s_left], &cfg)?;
    let rhs = adaptive(&|s: f64| (right(s) - shift).exp(), &[0.0, s_right], &cfg)?;

    let value = lhs.value + rhs.value;
    Ok(EulerIntegral {
        scaled: Scaled { ln_scale: shift, value }.normalized(),
        rel_err: (lhs.err_estimate + rhs.err_estimate) / value.norm().max(f64::MIN_POSITIVE),
        evaluations: lhs.evaluations + rhs.evaluations,
    })
}
