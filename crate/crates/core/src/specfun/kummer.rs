//! Confluent hypergeometric function `phi(a, b; z) = 1F1(a; b; z)`.
//!
//! Evaluation path, after mapping `Re z < 0` to `Re z >= 0` through Kummer's
//! transformation `phi(a,b;z) = e^z phi(b-a, b; -z)`:
//!
//! | condition (on the transformed `z`)          | method                         |
//! |---------------------------------------------|--------------------------------|
//! | `a` a non-positive integer                  | terminating series             |
//! | `|z| - Re z <= 12` and `|z| <= 700`         | power series                   |
//! | otherwise, `Re b > Re a > 0`                | Euler integral by quadrature   |
//! | otherwise                                   | two-sided asymptotic expansion |
//!
//! `|z| - Re z` bounds the cancellation in the power series: its terms reach
//! roughly `e^|z|` while the sum is of order `e^Re z`, so the crossover at 12
//! keeps the loss below about five digits.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::euler::euler_integral;
use super::gamma::{is_nonpositive_integer, ln_gamma};
use crate::error::{Error, Result};

const SERIES_LOSS_LIMIT: f64 = 12.0;
const SERIES_MAX_MODULUS: f64 = 700.0;
const MAX_TERMS: usize = 20_000;

pub fn kummer_phi(a: Complex64, b: Complex64, z: Complex64) -> Result<Complex64> {
    if is_nonpositive_integer(b) {
        return Err(Error::ParameterPole { name: "b", value: b });
    }
    if z == Complex64::new(0.0, 0.0) {
        return Ok(Complex64::new(1.0, 0.0));
    }
    if is_nonpositive_integer(a) {
        return series(a, b, z);
    }
    if z.re < 0.0 {
        return Ok(z.exp() * kummer_nonnegative(b - a, b, -z)?);
    }
    kummer_nonnegative(a, b, z)
}

fn kummer_nonnegative(a: Complex64, b: Complex64, z: Complex64) -> Result<Complex64> {
    if is_nonpositive_integer(a) || (z.norm() - z.re <= SERIES_LOSS_LIMIT && z.norm() <= SERIES_MAX_MODULUS) {
        return series(a, b, z);
    }
    if b.re > a.re && a.re > 0.0 {
        return integral(a, b, z);
    }
    asymptotic(a, b, z)
}

fn series(a: Complex64, b: Complex64, z: Complex64) -> Result<Complex64> {
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = term;
    let mut quiet = 0;
    for m in 0..MAX_TERMS {
        let mf = m as f64;
        term *= (a + mf) * z / ((b + mf) * (mf + 1.0));
        sum += term;
        if term.norm() <= f64::EPSILON * 0.5 * sum.norm() {
            quiet += 1;
            // two consecutive negligible terms once the ratio has turned below one
            let ratio = ((a + mf + 1.0) / (b + mf + 1.0)).norm() * z.norm() / (mf + 2.0);
            if quiet >= 2 && ratio < 1.0 {
                return Ok(sum);
            }
        } else {
            quiet = 0;
        }
        if term.norm() == 0.0 {
            return Ok(sum);
        }
    }
    Err(Error::NotConverged {
        value: sum,
        err_estimate: term.norm(),
        evaluations: MAX_TERMS,
    })
}

fn integral(a: Complex64, b: Complex64, z: Complex64) -> Result<Complex64> {
    let euler = euler_integral(a, b - a, |t, _| z * t, 1e-12)?;
    let prefactor = ln_gamma(b) - ln_gamma(a) - ln_gamma(b - a);
    let ln_total = prefactor + euler.scaled.ln_scale;
    Ok(euler.scaled.value * ln_total.exp())
}

fn asymptotic(a: Complex64, b: Complex64, z: Complex64) -> Result<Complex64> {
    let one = Complex64::new(1.0, 0.0);
    let s1 = asymptotic_sum(b - a, one - a, z)?;
    let s2 = asymptotic_sum(a, a - b + 1.0, -z)?;

    let ln_gb = ln_gamma(b);
    let mut total = Complex64::new(0.0, 0.0);
    if !is_nonpositive_integer(a) {
        total += (ln_gb - ln_gamma(a) + z + (a - b) * z.ln()).exp() * s1;
    }
    if !is_nonpositive_integer(b - a) {
        let sign = if z.im >= 0.0 { 1.0 } else { -1.0 };
        let phase = Complex64::new(0.0, sign * PI) * a;
        total += (ln_gb - ln_gamma(b - a) + phase - a * z.ln()).exp() * s2;
    }
    Ok(total)
}

/// `sum_n (p)_n (r)_n / (n! w^n)`, truncated at the smallest term.
fn asymptotic_sum(p: Complex64, r: Complex64, w: Complex64) -> Result<Complex64> {
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = term;
    let mut smallest = f64::INFINITY;
    for n in 0..200 {
        let nf = n as f64;
        let next = term * (p + nf) * (r + nf) / ((nf + 1.0) * w);
        if next.norm() >= smallest || next.norm() == 0.0 {
            break;
        }
        smallest = next.norm();
        term = next;
        sum += term;
        if term.norm() <= f64::EPSILON * sum.norm() {
            return Ok(sum);
        }
    }
    if smallest <= 1e-10 * sum.norm() || smallest == f64::INFINITY {
        Ok(sum)
    } else {
        Err(Error::NotConverged {
            value: sum,
            err_estimate: smallest,
            evaluations: 200,
        })
    }
}
