//! Lauricella closed forms for the normalization integral, overlaps and the
//! four moments, together with the branch/sign convention they are evaluated
//! under.
//!
//! Every closed form here is built from the half-line integral
//!
//! `H(alpha) = int_0^inf prod_i (x - beta_i)^(-b_i) (...) dx`,
//!
//! which the substitution `x = (1 - t)/t` turns into `F_D(...; 1 + beta_i)`.
//! A [`Convention`] fixes two choices:
//!
//! * the radicand inside the roots, `alpha^2 - |alpha|^2 - 2/(q-1)` or
//!   `alpha^2 + |alpha|^2 - 2/(q-1)`;
//! * whether the half-line value is used alone or completed to the full line
//!   by its mirror image `H(alpha) +- H(-alpha)`.
//!
//! The convention is calibrated once against the quadrature oracle at the
//! anchor `(q, alpha) = (1.2, 0.3)` and reused everywhere else.

use std::f64::consts::{PI, SQRT_2};
use std::fmt;
use std::sync::OnceLock;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::specfun::{lauricella_fd_scaled, ln_gamma, LauricellaArgs, Scaled};
use crate::states::{self, relative_deviation, BetaRoots, CONVENTION_TOL, ORACLE_TOL};

pub const ANCHOR_Q: f64 = 1.2;
pub const ANCHOR_ALPHA: f64 = 0.3;
/// Tolerance handed to every `F_D` evaluation.
pub const FD_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Radicand {
    /// `w^2 - |w|^2 - 2/(q-1)`
    MinusModulus,
    /// `w^2 + |w|^2 - 2/(q-1)`
    PlusModulus,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Coverage {
    PositiveHalf,
    ReflectedFull,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct Convention {
    pub radicand: Radicand,
    pub coverage: Coverage,
}

impl Convention {
    /// The formulas exactly as written: minus-modulus roots, half line only.
    pub const AS_PRINTED: Convention = Convention {
        radicand: Radicand::MinusModulus,
        coverage: Coverage::PositiveHalf,
    };

    pub const CANDIDATES: [Convention; 4] = [
        Convention::AS_PRINTED,
        Convention { radicand: Radicand::MinusModulus, coverage: Coverage::ReflectedFull },
        Convention { radicand: Radicand::PlusModulus, coverage: Coverage::PositiveHalf },
        Convention { radicand: Radicand::PlusModulus, coverage: Coverage::ReflectedFull },
    ];

    pub fn label(&self) -> &'static str {
        match (self.radicand, self.coverage) {
            (Radicand::MinusModulus, Coverage::PositiveHalf) => "minus-modulus/positive-half",
            (Radicand::MinusModulus, Coverage::ReflectedFull) => "minus-modulus/reflected-full",
            (Radicand::PlusModulus, Coverage::PositiveHalf) => "plus-modulus/positive-half",
            (Radicand::PlusModulus, Coverage::ReflectedFull) => "plus-modulus/reflected-full",
        }
    }
}

impl fmt::Display for Convention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Roots of the bra factor (built from `bra = conj(alpha_a)`) and of the ket
/// factor (built from `ket = alpha_b`).
pub(crate) fn roots(q: f64, bra: Complex64, ket: Complex64, radicand: Radicand) -> BetaRoots {
    let shift = 2.0 / (q - 1.0);
    let radical = |w: Complex64| {
        let modulus = w.norm_sqr();
        let inner = match radicand {
            Radicand::MinusModulus => w * w - modulus - shift,
            Radicand::PlusModulus => w * w + modulus - shift,
        };
        // + 0.0 maps a signed-zero imaginary part to +0 before the cut
        Complex64::new(inner.re, inner.im + 0.0).sqrt()
    };
    let (rb, rk) = (radical(bra), radical(ket));
    BetaRoots {
        beta1: SQRT_2 * bra + rb,
        beta2: SQRT_2 * bra - rb,
        beta3: SQRT_2 * ket + rk,
        beta4: SQRT_2 * ket - rk,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Kernel {
    Norm,
    MeanX,
    MeanX2,
    MeanP,
    MeanP2,
}

impl Kernel {
    /// Sign picked up by the integrand under `(x, alpha) -> (-x, -alpha)`.
    fn parity(self) -> f64 {
        match self {
            Kernel::Norm | Kernel::MeanX2 | Kernel::MeanP2 => 1.0,
            Kernel::MeanX | Kernel::MeanP => -1.0,
        }
    }
}

struct HalfLine {
    q: f64,
    b: f64,
    ln_pre: f64,
    x: [Complex64; 4],
    ket: Complex64,
}

impl HalfLine {
    fn new(q: f64, bra_alpha: Complex64, ket_alpha: Complex64, radicand: Radicand) -> Self {
        let b = 1.0 / (q - 1.0);
        let u = 0.5 * (q - 1.0);
        let beta = roots(q, bra_alpha.conj(), ket_alpha, radicand).as_array();
        Self {
            q,
            b,
            ln_pre: -2.0 * b * u.ln(),
            x: beta.map(|v| 1.0 + v),
            ket: ket_alpha,
        }
    }

    /// `Gamma(a)/Gamma(c) F_D(a; bs; c; x)`, scaled.
    fn term(&self, a: f64, bs: [f64; 4], c: f64) -> Result<Scaled> {
        let args = LauricellaArgs::real(a, bs, c, self.x)?;
        let fd = lauricella_fd_scaled(&args, FD_TOL)?;
        let ratio = ln_gamma(a.into()) - ln_gamma(c.into());
        Ok(fd.value.mul(Scaled::from_log(ratio)))
    }

    fn eval(&self, kernel: Kernel) -> Result<Scaled> {
        let (q, b) = (self.q, self.b);
        let c = 4.0 * b;
        let pre = Scaled::from_log(self.ln_pre.into());
        let plain = [b; 4];
        let value = match kernel {
            Kernel::Norm => self.term(c - 1.0, plain, c)?,
            Kernel::MeanX => self.term(c - 2.0, plain, c)?,
            Kernel::MeanX2 => self.term(c - 3.0, plain, c)?.scale(2.0.into()),
            Kernel::MeanP => {
                let bb = [b, b, b + 1.0, b + 1.0];
                let c1 = c + 2.0;
                let first = self.term(c1 - 2.0, bb, c1)?.scale(2.0.into());
                let second = self.term(c1 - 1.0, bb, c1)?.scale(-2.0 * SQRT_2 * self.ket);
                first.add(second).scale(Complex64::new(0.0, -1.0) / (1.0 - q))
            }
            Kernel::MeanP2 => {
                let bb = [b, b, b + 1.0, b + 1.0];
                let b2 = [b, b, b + 2.0, b + 2.0];
                let (c1, c2) = (c + 2.0, c + 4.0);
                let alpha = self.ket;
                let inner = self
                    .term(c2 - 3.0, b2, c2)?
                    .scale(8.0.into())
                    .add(self.term(c2 - 2.0, b2, c2)?.scale(-8.0 * SQRT_2 * alpha))
                    .add(self.term(c2 - 1.0, b2, c2)?.scale(8.0 * alpha * alpha))
                    .scale((q / (1.0 - q)).into());
                self.term(c1 - 1.0, bb, c1)?
                    .scale(2.0.into())
                    .add(inner)
                    .scale((-1.0 / (1.0 - q)).into())
            }
        };
        Ok(value.mul(pre))
    }
}

fn integral(
    kernel: Kernel,
    q: f64,
    bra_alpha: Complex64,
    ket_alpha: Complex64,
    convention: Convention,
) -> Result<Scaled> {
    let direct = HalfLine::new(q, bra_alpha, ket_alpha, convention.radicand).eval(kernel)?;
    match convention.coverage {
        Coverage::PositiveHalf => Ok(direct),
        Coverage::ReflectedFull => {
            let mirror = HalfLine::new(q, -bra_alpha, -ket_alpha, convention.radicand).eval(kernel)?;
            Ok(direct.add(mirror.scale(kernel.parity().into())))
        }
    }
}

fn check_q(q: f64) -> Result<()> {
    states::check_window("closed-form normalization", q, states::window::NORMALIZABLE)
}

/// `int |bracket|^2 dx` from the closed form; `sqrt(pi)` at q = 1.
pub fn norm_integral(q: f64, alpha: Complex64, convention: Convention) -> Result<Complex64> {
    check_q(q)?;
    if q == 1.0 {
        return Ok(PI.sqrt().into());
    }
    Ok(integral(Kernel::Norm, q, alpha, alpha, convention)?.to_complex())
}

/// `A(q, alpha)` from the closed form.
pub fn norm_constant(q: f64, alpha: Complex64, convention: Convention) -> Result<Complex64> {
    check_q(q)?;
    if q == 1.0 {
        return Ok(PI.powf(-0.25).into());
    }
    Ok(integral(Kernel::Norm, q, alpha, alpha, convention)?.powf(-0.5).to_complex())
}

/// Bracket overlap `int conj(bracket_a) bracket_b dx`, without the constants.
pub fn overlap(q: f64, alpha_a: Complex64, alpha_b: Complex64, convention: Convention) -> Result<Complex64> {
    check_q(q)?;
    if q == 1.0 {
        let exponent = -0.5 * alpha_a.norm_sqr() - 0.5 * alpha_b.norm_sqr() + alpha_a.conj() * alpha_b;
        return Ok(PI.sqrt() * exponent.exp());
    }
    Ok(integral(Kernel::Norm, q, alpha_a, alpha_b, convention)?.to_complex())
}

/// Expectation values from the closed forms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClosedMoments {
    pub mean_x: Complex64,
    pub mean_x2: Complex64,
    pub mean_p: Complex64,
    pub mean_p2: Complex64,
}

/// The four moments, each divided by the closed-form norm integral.
pub fn moments(q: f64, alpha: Complex64, convention: Convention) -> Result<ClosedMoments> {
    states::check_window("closed-form moments", q, states::window::SECOND_MOMENT)?;
    if q == 1.0 {
        let r = crate::limits::coherent_reference_moments(alpha);
        return Ok(ClosedMoments {
            mean_x: r.mean_x,
            mean_x2: r.mean_x2,
            mean_p: r.mean_p,
            mean_p2: r.mean_p2,
        });
    }
    let norm = integral(Kernel::Norm, q, alpha, alpha, convention)?;
    let ratio = |k: Kernel| -> Result<Complex64> {
        Ok(integral(k, q, alpha, alpha, convention)?.div(norm).to_complex())
    };
    Ok(ClosedMoments {
        mean_x: ratio(Kernel::MeanX)?,
        mean_x2: ratio(Kernel::MeanX2)?,
        mean_p: ratio(Kernel::MeanP)?,
        mean_p2: ratio(Kernel::MeanP2)?,
    })
}

/// Result of the anchor calibration.
#[derive(Debug, Clone, PartialEq)]
pub struct Calibration {
    pub convention: Convention,
    pub anchor_q: f64,
    pub anchor_alpha: Complex64,
    pub oracle: f64,
    /// Relative deviation of every candidate's norm integral from the oracle.
    pub candidates: Vec<(Convention, f64)>,
}

/// Calibrates at the anchor on the norm integral. Computed once per process.
pub fn calibration() -> Result<&'static Calibration> {
    static CELL: OnceLock<Result<Calibration>> = OnceLock::new();
    CELL.get_or_init(calibrate).as_ref().map_err(Clone::clone)
}

pub fn calibrated() -> Result<Convention> {
    Ok(calibration()?.convention)
}

fn calibrate() -> Result<Calibration> {
    let (q, alpha) = (ANCHOR_Q, Complex64::new(ANCHOR_ALPHA, 0.0));
    let oracle = states::norm_integral_oracle(q, alpha, ORACLE_TOL)?;
    let mut candidates = Vec::with_capacity(Convention::CANDIDATES.len());
    let mut best: Option<(Convention, Complex64, f64)> = None;
    for convention in Convention::CANDIDATES {
        let deviation = match norm_integral(q, alpha, convention) {
            Ok(value) => {
                let d = relative_deviation(value, oracle.into());
                if best.map_or(true, |(_, _, bd)| d < bd) {
                    best = Some((convention, value, d));
                }
                d
            }
            Err(_) => f64::INFINITY,
        };
        candidates.push((convention, deviation));
    }
    match best {
        Some((convention, _, d)) if d <= CONVENTION_TOL => Ok(Calibration {
            convention,
            anchor_q: q,
            anchor_alpha: alpha,
            oracle,
            candidates,
        }),
        Some((_, value, deviation)) => Err(Error::ConventionMismatch {
            quantity: "norm integral at the calibration anchor".into(),
            q,
            alpha,
            closed_form: value,
            oracle: oracle.into(),
            deviation,
        }),
        None => Err(Error::InvariantViolation(
            "no closed-form convention could be evaluated at the anchor".into(),
        )),
    }
}
