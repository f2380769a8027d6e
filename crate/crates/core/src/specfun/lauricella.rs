//! Fourth Lauricella function of four variables,
//!
//! `F_D(a; b1..b4; c; x1..x4) = sum (a)_|m| prod (b_i)_{m_i} x_i^{m_i} / ((c)_|m| prod m_i!)`,
//!
//! by its multiple series (inside the unit polydisc) and by the Euler
//! integral
//!
//! `Gamma(c) / (Gamma(a) Gamma(c-a)) int_0^1 u^(a-1) (1-u)^(c-a-1) prod (1 - u x_i)^(-b_i) du`.

use num_complex::Complex64;

use super::euler::{euler_integral, Scaled};
use super::gamma::{is_nonpositive_integer, ln_gamma};
use crate::error::{Error, Result};
use crate::quadrature::QuadratureResult;

/// Quiet shells required before the series stops.
pub const SERIES_QUIET_SHELLS: usize = 3;
/// Largest total degree summed by the series.
pub const SERIES_MAX_DEGREE: usize = 400;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LauricellaArgs {
    a: Complex64,
    b: [Complex64; 4],
    c: Complex64,
    x: [Complex64; 4],
}

impl LauricellaArgs {
    pub fn new(a: Complex64, b: [Complex64; 4], c: Complex64, x: [Complex64; 4]) -> Result<Self> {
        if is_nonpositive_integer(c) {
            return Err(Error::ParameterPole { name: "c", value: c });
        }
        Ok(Self { a, b, c, x })
    }

    /// All-real parameters with complex arguments, the common case.
    pub fn real(a: f64, b: [f64; 4], c: f64, x: [Complex64; 4]) -> Result<Self> {
        Self::new(a.into(), b.map(Complex64::from), c.into(), x)
    }

    pub fn a(&self) -> Complex64 {
        self.a
    }

    pub fn b(&self) -> [Complex64; 4] {
        self.b
    }

    pub fn c(&self) -> Complex64 {
        self.c
    }

    pub fn x(&self) -> [Complex64; 4] {
        self.x
    }

    pub fn max_modulus(&self) -> f64 {
        self.x.iter().map(|x| x.norm()).fold(0.0, f64::max)
    }

    pub fn series_admissible(&self) -> bool {
        self.max_modulus() < 1.0
    }

    pub fn integral_admissible(&self) -> bool {
        self.a.re > 0.0 && (self.c - self.a).re > 0.0 && self.branch_crossing().is_none()
    }

    /// First argument whose factor `1 - u x_i` leaves through the cut on `u in (0, 1)`.
    fn branch_crossing(&self) -> Option<usize> {
        (0..4).find(|&i| {
            let x = self.x[i];
            x.im == 0.0 && x.re > 1.0 && !is_nonpositive_integer(self.b[i])
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FdStrategy {
    Series,
    Integral,
}

impl FdStrategy {
    pub fn as_str(self) -> &'static str {
        match self {
            FdStrategy::Series => "series",
            FdStrategy::Integral => "integral",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FdValue {
    pub result: QuadratureResult,
    pub strategy: FdStrategy,
}

/// Log-scaled `F_D` value, for parameters where the value leaves f64 range.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FdScaled {
    pub value: Scaled,
    pub rel_err: f64,
    pub evaluations: usize,
    pub strategy: FdStrategy,
}

pub fn lauricella_fd_series(args: &LauricellaArgs, tol: f64) -> Result<QuadratureResult> {
    let max_modulus = args.max_modulus();
    if max_modulus >= 1.0 {
        return Err(Error::DivergentSeries { max_modulus });
    }
    let zero = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);

    // e[i][m] = (b_i)_m x_i^m / m!, convolved shell by shell
    let mut e: [Vec<Complex64>; 4] = std::array::from_fn(|_| vec![one]);
    let mut c12 = vec![one];
    let mut c123 = vec![one];

    let mut ratio = one;
    let mut sum = one;
    let mut quiet = 0;
    let mut last = one;
    for n in 1..=SERIES_MAX_DEGREE {
        let nf = n as f64;
        for i in 0..4 {
            let prev = e[i][n - 1];
            e[i].push(prev * (args.b[i] + (nf - 1.0)) * args.x[i] / nf);
        }
        let conv = |lhs: &[Complex64], rhs: &[Complex64]| {
            (0..=n).fold(zero, |acc, k| acc + lhs[k] * rhs[n - k])
        };
        let next12 = conv(&e[0], &e[1]);
        c12.push(next12);
        let next123 = conv(&c12, &e[2]);
        c123.push(next123);
        let shell_sum = conv(&c123, &e[3]);

        ratio *= (args.a + (nf - 1.0)) / (args.c + (nf - 1.0));
        let shell = ratio * shell_sum;
        sum += shell;
        last = shell;

        if shell.norm() <= tol * sum.norm() {
            quiet += 1;
            if quiet >= SERIES_QUIET_SHELLS {
                return Ok(QuadratureResult {
                    value: sum,
                    err_estimate: shell.norm(),
                    evaluations: n + 1,
                    tail: None,
                });
            }
        } else {
            quiet = 0;
        }
    }
    Err(Error::NotConverged {
        value: sum,
        err_estimate: last.norm(),
        evaluations: SERIES_MAX_DEGREE + 1,
    })
}

pub fn lauricella_fd_integral(args: &LauricellaArgs, tol: f64) -> Result<QuadratureResult> {
    let scaled = lauricella_fd_integral_scaled(args, tol)?;
    let value = scaled.value.to_complex();
    Ok(QuadratureResult {
        value,
        err_estimate: scaled.rel_err * value.norm(),
        evaluations: scaled.evaluations,
        tail: None,
    })
}

/// Euler-integral evaluation with the result kept in log-scaled form.
pub fn lauricella_fd_integral_scaled(args: &LauricellaArgs, tol: f64) -> Result<FdScaled> {
    let (a, c) = (args.a, args.c);
    if a.re <= 0.0 || (c - a).re <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "integral representation needs Re a > 0 and Re(c - a) > 0 (a = {a}, c = {c})"
        )));
    }
    if let Some(index) = args.branch_crossing() {
        return Err(Error::BranchCrossing { index, x: args.x[index] });
    }
    if args.b.iter().all(|b| *b == Complex64::new(0.0, 0.0)) {
        return Ok(FdScaled {
            value: Scaled::new(Complex64::new(1.0, 0.0)),
            rel_err: 0.0,
            evaluations: 0,
            strategy: FdStrategy::Integral,
        });
    }

    let (b, x) = (args.b, args.x);
    let log_rest = |t: f64, _: f64| {
        (0..4).fold(Complex64::new(0.0, 0.0), |acc, i| {
            if b[i] == Complex64::new(0.0, 0.0) {
                acc
            } else {
                acc - b[i] * (1.0 - t * x[i]).ln()
            }
        })
    };
    let euler = euler_integral(a, c - a, log_rest, tol)?;
    let prefactor = Scaled::from_log(ln_gamma(c) - ln_gamma(a) - ln_gamma(c - a));
    Ok(FdScaled {
        value: euler.scaled.mul(prefactor),
        rel_err: euler.rel_err,
        evaluations: euler.evaluations,
        strategy: FdStrategy::Integral,
    })
}

/// Series inside the open unit polydisc, Euler integral otherwise. A series
/// that exhausts its degree cap falls back to the integral when that is
/// admissible.
pub fn lauricella_fd(args: &LauricellaArgs, tol: f64) -> Result<FdValue> {
    if args.series_admissible() {
        match lauricella_fd_series(args, tol) {
            Ok(result) => {
                return Ok(FdValue { result, strategy: FdStrategy::Series });
            }
            Err(err @ Error::NotConverged { .. }) => {
                if !args.integral_admissible() {
                    return Err(err);
                }
            }
            Err(err) => return Err(err),
        }
    }
    let result = lauricella_fd_integral(args, tol)?;
    Ok(FdValue { result, strategy: FdStrategy::Integral })
}

/// Scaled counterpart of [`lauricella_fd`].
pub fn lauricella_fd_scaled(args: &LauricellaArgs, tol: f64) -> Result<FdScaled> {
    if args.series_admissible() {
        match lauricella_fd_series(args, tol) {
            Ok(result) => {
                return Ok(FdScaled {
                    value: Scaled::new(result.value),
                    rel_err: result.err_estimate / result.value.norm().max(f64::MIN_POSITIVE),
                    evaluations: result.evaluations,
                    strategy: FdStrategy::Series,
                });
            }
            Err(err @ Error::NotConverged { .. }) => {
                if !args.integral_admissible() {
                    return Err(err);
                }
            }
            Err(err) => return Err(err),
        }
    }
    lauricella_fd_integral_scaled(args, tol)
}
