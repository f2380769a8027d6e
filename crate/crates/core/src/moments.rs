use num_complex::Complex64;
use serde::Serialize;

use crate::closed_form::{self, Convention};
use crate::error::{Error, Result};
use crate::states::{
    check_window, coherent_psi, line_integral, relative_deviation, sample_or_nan, window, Method,
    CONVENTION_TOL, ORACLE_TOL,
};

/// Per-moment relative deviation of a closed form from the oracle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MomentDeviations {
    pub mean_x: f64,
    pub mean_x2: f64,
    pub mean_p: f64,
    pub mean_p2: f64,
}

impl MomentDeviations {
    pub fn max(&self) -> f64 {
        self.mean_x.max(self.mean_x2).max(self.mean_p).max(self.mean_p2)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentReport {
    pub q: f64,
    pub alpha: Complex64,
    pub mean_x: Complex64,
    pub mean_x2: Complex64,
    pub mean_p: Complex64,
    pub mean_p2: Complex64,
    pub var_x: f64,
    pub var_p: f64,
    pub product: f64,
    pub method: Method,
    pub deviations: Option<MomentDeviations>,
}

impl MomentReport {
    pub fn from_means(
        q: f64,
        alpha: Complex64,
        means: [Complex64; 4],
        method: Method,
    ) -> Result<Self> {
        let [mean_x, mean_x2, mean_p, mean_p2] = means;
        let var_x = variance(mean_x, mean_x2, "x")?;
        let var_p = variance(mean_p, mean_p2, "p")?;
        Ok(Self {
            q,
            alpha,
            mean_x,
            mean_x2,
            mean_p,
            mean_p2,
            var_x,
            var_p,
            product: (var_x * var_p).sqrt(),
            method,
            deviations: None,
        })
    }

    pub fn dx(&self) -> f64 {
        self.var_x.sqrt()
    }

    pub fn dp(&self) -> f64 {
        self.var_p.sqrt()
    }

    pub fn means(&self) -> [Complex64; 4] {
        [self.mean_x, self.mean_x2, self.mean_p, self.mean_p2]
    }
}

fn variance(mean: Complex64, second: Complex64, name: &str) -> Result<f64> {
    let var = second.re - mean.re * mean.re;
    if var < -1e-12 * second.re.abs().max(1.0) {
        return Err(Error::InvariantViolation(format!(
            "negative {name} variance {var:e} (<{name}^2> = {second}, <{name}> = {mean})"
        )));
    }
    Ok(var.max(0.0))
}

fn check_imaginary(name: &str, v: Complex64) -> Result<()> {
    if v.im.abs() > 1e-6 * (1.0 + v.re.abs()) {
        return Err(Error::InvariantViolation(format!(
            "<{name}> has imaginary part {:e} (real part {})",
            v.im, v.re
        )));
    }
    Ok(())
}

/// Moments by quadrature of the normalized state.
///
/// `<p^2>` is taken from `int |psi'|^2` and cross-checked against
/// `-int conj(psi) psi''` to `max(tol, 1e-6)` relative.
pub fn moments_oracle(q: f64, alpha: Complex64, tol: f64) -> Result<MomentReport> {
    check_window("moments", q, window::SECOND_MOMENT)?;
    let tol = tol.max(ORACLE_TOL);
    let sample = |x: f64| {
        if q == 1.0 {
            let v = coherent_psi(alpha, x);
            let shift = x - std::f64::consts::SQRT_2 * alpha;
            (v, -shift * v, (shift * shift - 1.0) * v)
        } else {
            let s = sample_or_nan(q, alpha, x);
            (s.value, s.d1, s.d2)
        }
    };
    let integral = |f: &dyn Fn(f64) -> Complex64| -> Result<Complex64> {
        Ok(line_integral(alpha, tol, f)?.value)
    };

    // at alpha = 0 the state is real and even, so both odd moments vanish
    let even = alpha == Complex64::new(0.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    let norm = integral(&|x| sample(x).0.norm_sqr().into())?;
    let mean_x = if even { zero } else { integral(&|x| (x * sample(x).0.norm_sqr()).into())? / norm };
    let mean_x2 = integral(&|x| (x * x * sample(x).0.norm_sqr()).into())? / norm;
    let mean_p = if even {
        zero
    } else {
        integral(&|x| {
            let (v, d1, _) = sample(x);
            Complex64::new(0.0, -1.0) * v.conj() * d1
        })? / norm
    };
    let mean_p2 = integral(&|x| sample(x).1.norm_sqr().into())? / norm;
    let mean_p2_alt = integral(&|x| {
        let (v, _, d2) = sample(x);
        -v.conj() * d2
    })? / norm;

    let cross = relative_deviation(mean_p2_alt, mean_p2);
    if cross > tol.max(1e-6) {
        return Err(Error::InvariantViolation(format!(
            "<p^2> routes disagree at q = {q}, alpha = {alpha}: {mean_p2} vs {mean_p2_alt}"
        )));
    }
    for (name, v) in [("x", mean_x), ("x^2", mean_x2), ("p", mean_p), ("p^2", mean_p2_alt)] {
        check_imaginary(name, v)?;
    }
    MomentReport::from_means(q, alpha, [mean_x, mean_x2, mean_p, mean_p2], Method::Oracle)
}

/// Closed-form moments under an explicit convention, with no oracle check.
pub fn moments_closed_with(q: f64, alpha: Complex64, convention: Convention) -> Result<MomentReport> {
    let m = closed_form::moments(q, alpha, convention)?;
    MomentReport::from_means(
        q,
        alpha,
        [m.mean_x, m.mean_x2, m.mean_p, m.mean_p2],
        Method::ClosedForm,
    )
}

/// Closed-form moments under the calibrated convention, with deviations from
/// an oracle run. Fails with `ConventionMismatch` on the first moment that
/// deviates by more than 1e-5.
pub fn moments_closed(q: f64, alpha: Complex64) -> Result<MomentReport> {
    let convention = closed_form::calibrated()?;
    let mut report = moments_closed_with(q, alpha, convention)?;
    let oracle = moments_oracle(q, alpha, ORACLE_TOL)?;
    let deviations = deviations(&report, &oracle);
    let names = ["<x>", "<x^2>", "<p>", "<p^2>"];
    let devs = [deviations.mean_x, deviations.mean_x2, deviations.mean_p, deviations.mean_p2];
    for i in 0..4 {
        if !(devs[i] <= CONVENTION_TOL) {
            return Err(Error::ConventionMismatch {
                quantity: names[i].into(),
                q,
                alpha,
                closed_form: report.means()[i],
                oracle: oracle.means()[i],
                deviation: devs[i],
            });
        }
    }
    report.deviations = Some(deviations);
    Ok(report)
}

/// Below this modulus a mean counts as vanishing and is compared absolutely.
pub const PARITY_FLOOR: f64 = 1e-6;

/// Relative deviation of `value` from `reference`, absolute below [`PARITY_FLOOR`].
pub fn mean_deviation(value: Complex64, reference: Complex64) -> f64 {
    (value - reference).norm() / reference.norm().max(PARITY_FLOOR)
}

/// Relative deviation of each closed-form mean from the oracle.
pub fn deviations(closed: &MomentReport, oracle: &MomentReport) -> MomentDeviations {
    let d = mean_deviation;
    MomentDeviations {
        mean_x: d(closed.mean_x, oracle.mean_x),
        mean_x2: d(closed.mean_x2, oracle.mean_x2),
        mean_p: d(closed.mean_p, oracle.mean_p),
        mean_p2: d(closed.mean_p2, oracle.mean_p2),
    }
}

/// `dx dp` from the selected method.
pub fn uncertainty_product(q: f64, alpha: Complex64, method: Method) -> Result<f64> {
    let report = match method {
        Method::Oracle => moments_oracle(q, alpha, ORACLE_TOL)?,
        Method::ClosedForm => moments_closed(q, alpha)?,
    };
    Ok(report.product)
}
