//! Ordinary coherent-state reference values and the q -> 1 convergence harness.

use std::f64::consts::SQRT_2;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::moments::{moments_oracle, MomentReport};
use crate::momentum::{gaussian_distance, momentum_pd, symmetric_grid};
use crate::quadrature::{integrate_line, IntegrandSpec};
use crate::states::{check_window, psi_unnormalized, window, Method, ORACLE_TOL};

/// Default half-width of the small-(q-1) regime.
pub const EXPANSION_REGIME: f64 = 0.1;
/// Gap threshold of a converged verdict at the last q.
pub const FINAL_GAP: f64 = 1e-2;
/// Points of the k grid on `[-6, 6]` used for the momentum distance.
pub const PD_DISTANCE_POINTS: usize = 121;

/// Exact moments of the ordinary coherent state.
pub fn coherent_reference_moments(alpha: Complex64) -> MomentReport {
    let i = Complex64::new(0.0, 1.0);
    let sum = alpha + alpha.conj();
    let diff = alpha - alpha.conj();
    let mean_x = sum / SQRT_2;
    let mean_x2 = 0.5 + sum * sum / 2.0;
    let mean_p = diff / (i * SQRT_2);
    let mean_p2 = 0.5 - diff * diff / 2.0;
    MomentReport {
        q: 1.0,
        alpha,
        mean_x,
        mean_x2,
        mean_p,
        mean_p2,
        var_x: 0.5,
        var_p: 0.5,
        product: 0.5,
        method: Method::ClosedForm,
        deviations: None,
    }
}

/// `e_q(w) ~ e^w (1 + (q-1) w^2 / 2)`, the second-order expansion about q = 1.
pub fn q_exponential_second_order(q: f64, w: Complex64) -> Complex64 {
    w.exp() * (1.0 + 0.5 * (q - 1.0) * w * w)
}

/// Set when `|q - 1|` exceeds the configured regime.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegimeWarning {
    pub offset: f64,
    pub max_offset: f64,
}

/// `(1 + (q-1) P^2 / 8) e^(-P/2)`, the state expanded to first order in
/// `q - 1`, normalized numerically.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QExpansionState {
    q: f64,
    alpha: Complex64,
    constant: f64,
    warning: Option<RegimeWarning>,
}

impl QExpansionState {
    pub fn new(q: f64, alpha: Complex64) -> Result<Self> {
        Self::with_regime(q, alpha, EXPANSION_REGIME)
    }

    pub fn with_regime(q: f64, alpha: Complex64, max_offset: f64) -> Result<Self> {
        if !q.is_finite() || !(max_offset > 0.0) {
            return Err(Error::InvalidArgument(format!("q = {q}, regime = {max_offset}")));
        }
        let offset = (q - 1.0).abs();
        let warning = (offset > max_offset + 1e-12).then_some(RegimeWarning { offset, max_offset });
        let raw = |x: f64| raw_expansion(q, alpha, x);
        let spec = IntegrandSpec::whole_line(|x| raw(x).norm_sqr().into()).with_hints([SQRT_2 * alpha.re]);
        let norm = integrate_line(&spec, ORACLE_TOL)?.value.re;
        Ok(Self { q, alpha, constant: norm.powf(-0.5), warning })
    }

    pub fn warning(&self) -> Option<RegimeWarning> {
        self.warning
    }

    pub fn eval(&self, x: f64) -> Complex64 {
        raw_expansion(self.q, self.alpha, x) * self.constant
    }
}

fn raw_expansion(q: f64, alpha: Complex64, x: f64) -> Complex64 {
    let p = x * x - 2.0 * SQRT_2 * alpha * x + alpha.norm_sqr() + alpha * alpha;
    (1.0 + (q - 1.0) * p * p / 8.0) * (-0.5 * p).exp()
}

/// Value of the normalized expansion state at one point.
pub fn q_expansion_state(q: f64, alpha: Complex64, x: f64) -> Result<(Complex64, Option<RegimeWarning>)> {
    let state = QExpansionState::new(q, alpha)?;
    Ok((state.eval(x), state.warning()))
}

/// `|| expansion - psi ||_2` between the normalized expansion and the exact
/// normalized state, both with their phase at the packet centre removed.
pub fn expansion_l2_distance(q: f64, alpha: Complex64) -> Result<f64> {
    let state = QExpansionState::new(q, alpha)?;
    let label = crate::states::StateLabel::new(q, alpha)?;
    let a = label.constant()?;
    let exact = |x: f64| psi_unnormalized(q, alpha, x).map(|s| s.value * a).unwrap_or(Complex64::new(f64::NAN, 0.0));
    let spec = IntegrandSpec::whole_line(|x| (state.eval(x) - exact(x)).norm_sqr().into())
        .with_hints([SQRT_2 * alpha.re]);
    Ok(integrate_line(&spec, 1e-9)?.value.re.max(0.0).sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Converged,
    NotConverged,
}

/// Gaps of one quantity along the q sequence.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GapSeries {
    pub name: &'static str,
    pub gaps: Vec<f64>,
    pub verdict: Verdict,
}

impl GapSeries {
    fn new(name: &'static str, gaps: Vec<f64>) -> Self {
        let verdict = verdict(&gaps);
        Self { name, gaps, verdict }
    }

    pub fn last(&self) -> f64 {
        self.gaps.last().copied().unwrap_or(f64::NAN)
    }
}

/// Converged iff the gaps strictly decrease and the last one is below
/// [`FINAL_GAP`]. Consecutive gaps that are both below 1e-12 count as
/// decreasing, so quantities fixed by symmetry converge.
pub fn verdict(gaps: &[f64]) -> Verdict {
    let negligible = 1e-12;
    let decreasing = gaps
        .windows(2)
        .all(|w| w[1] < w[0] || (w[0] <= negligible && w[1] <= negligible));
    match gaps.last() {
        Some(&last) if decreasing && last < FINAL_GAP => Verdict::Converged,
        _ => Verdict::NotConverged,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LimitReport {
    pub alpha: [f64; 2],
    pub q_sequence: Vec<f64>,
    pub mean_x: GapSeries,
    pub mean_x2: GapSeries,
    pub mean_p: GapSeries,
    pub mean_p2: GapSeries,
    /// Signed `product - 1/2`.
    pub product: GapSeries,
    pub pd_distance: GapSeries,
}

impl LimitReport {
    pub fn series(&self) -> [&GapSeries; 6] {
        [&self.mean_x, &self.mean_x2, &self.mean_p, &self.mean_p2, &self.product, &self.pd_distance]
    }

    pub fn all_converged(&self) -> bool {
        self.series().iter().all(|s| s.verdict == Verdict::Converged)
    }

    /// Largest growth of `gap / (q - 1)` between consecutive q values.
    pub fn ratio_growth(&self, series: &GapSeries) -> f64 {
        let scaled: Vec<f64> = series
            .gaps
            .iter()
            .zip(&self.q_sequence)
            .map(|(g, q)| g.abs() / (q - 1.0))
            .collect();
        scaled
            .windows(2)
            .map(|w| if w[0] > 1e-12 { w[1] / w[0] } else { 1.0 })
            .fold(1.0, f64::max)
    }
}

/// Runs the oracles along `q_sequence` and measures every gap to the
/// coherent-state limit.
pub fn limit_convergence_check(alpha: Complex64, q_sequence: &[f64]) -> Result<LimitReport> {
    if q_sequence.is_empty() {
        return Err(Error::InvalidArgument("empty q sequence".into()));
    }
    if q_sequence.windows(2).any(|w| !(w[1] < w[0])) {
        return Err(Error::InvalidArgument("q sequence must strictly decrease".into()));
    }
    for &q in q_sequence {
        if q == 1.0 {
            return Err(Error::InvalidArgument("q sequence must stay above 1".into()));
        }
        check_window("limit check", q, window::SECOND_MOMENT)?;
    }

    let reference = coherent_reference_moments(alpha);
    let k_grid = symmetric_grid(6.0, PD_DISTANCE_POINTS);
    let rows: Vec<(MomentReport, f64)> = q_sequence
        .par_iter()
        .map(|&q| {
            let m = moments_oracle(q, alpha, ORACLE_TOL)?;
            let pd = momentum_pd(q, alpha, &k_grid, Method::Oracle)?;
            Ok((m, gaussian_distance(&pd)))
        })
        .collect::<Result<_>>()?;

    let gaps = |f: &dyn Fn(&MomentReport) -> f64| rows.iter().map(|(m, _)| f(m)).collect::<Vec<_>>();
    Ok(LimitReport {
        alpha: [alpha.re, alpha.im],
        q_sequence: q_sequence.to_vec(),
        mean_x: GapSeries::new("mean_x", gaps(&|m| (m.mean_x - reference.mean_x).norm())),
        mean_x2: GapSeries::new("mean_x2", gaps(&|m| (m.mean_x2 - reference.mean_x2).norm())),
        mean_p: GapSeries::new("mean_p", gaps(&|m| (m.mean_p - reference.mean_p).norm())),
        mean_p2: GapSeries::new("mean_p2", gaps(&|m| (m.mean_p2 - reference.mean_p2).norm())),
        product: GapSeries::new("product", gaps(&|m| m.product - 0.5)),
        pd_distance: GapSeries::new("pd_distance", rows.iter().map(|(_, d)| *d).collect()),
    })
}
