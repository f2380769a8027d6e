//! Adaptive Gauss-Kronrod quadrature used as the independent oracle for
//! every closed form in the crate.
//!
//! Three entry points share one adaptive core:
//!
//! * [`integrate_interval`] - finite interval, split at singularity hints.
//! * [`integrate_line`] - whole real line through the compactification
//!   `x = t/(1 - t^2)`, `t in (-1, 1)`. The map is evaluated in terms of the
//!   distance `w = 1 - |t|` to the endpoint so that the far tails keep full
//!   floating-point resolution.
//! * [`fourier_transform_line`] - `(2 pi)^(-1/2) int e^(-ikx) f(x) dx`, with a
//!   central region panelized by the local half-period and tails summed panel
//!   by panel under Wynn epsilon extrapolation.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Default evaluation budget per integral.
pub const DEFAULT_MAX_EVALS: usize = 1_000_000;

/// Half-width of the central Fourier region beyond the outermost hint.
const FOURIER_CORE: f64 = 20.0;
const FOURIER_MAX_PANELS: usize = 2_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureResult {
    pub value: Complex64,
    pub err_estimate: f64,
    pub evaluations: usize,
    /// Local power-law decay exponents of `|f|` sampled far out on each side,
    /// only filled in by [`integrate_line`].
    pub tail: Option<TailDecay>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailDecay {
    pub left_exponent: f64,
    pub right_exponent: f64,
}

/// Stopping rule: success when `err <= max(abs_tol, rel_tol * |value|)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_evals: usize,
}

impl QuadConfig {
    /// `err <= tol * max(1, |value|)`.
    pub fn tol(tol: f64) -> Self {
        Self {
            abs_tol: tol,
            rel_tol: tol,
            max_evals: DEFAULT_MAX_EVALS,
        }
    }

    pub fn relative(rel_tol: f64, abs_tol: f64) -> Self {
        Self {
            abs_tol,
            rel_tol,
            max_evals: DEFAULT_MAX_EVALS,
        }
    }

    fn target(&self, value: Complex64) -> f64 {
        self.abs_tol.max(self.rel_tol * value.norm())
    }

    fn validate(&self) -> Result<()> {
        if !(self.abs_tol > 0.0 || self.rel_tol > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "tolerance must be positive (abs {}, rel {})",
                self.abs_tol, self.rel_tol
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Domain {
    WholeLine,
    Interval(f64, f64),
}

/// An integrand together with its domain and the points where it is known to
/// be singular or sharply structured.
pub struct IntegrandSpec<F> {
    evaluator: F,
    domain: Domain,
    hints: Vec<f64>,
}

impl<F: Fn(f64) -> Complex64> IntegrandSpec<F> {
    pub fn whole_line(evaluator: F) -> Self {
        Self {
            evaluator,
            domain: Domain::WholeLine,
            hints: Vec::new(),
        }
    }

    pub fn interval(evaluator: F, a: f64, b: f64) -> Self {
        Self {
            evaluator,
            domain: Domain::Interval(a, b),
            hints: Vec::new(),
        }
    }

    pub fn with_hints(mut self, hints: impl IntoIterator<Item = f64>) -> Self {
        self.hints.extend(hints.into_iter().filter(|h| h.is_finite()));
        self
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn hints(&self) -> &[f64] {
        &self.hints
    }

    pub fn eval(&self, x: f64) -> Complex64 {
        (self.evaluator)(x)
    }
}

/// Integrates over the integrand's own domain.
pub fn integrate<F: Fn(f64) -> Complex64>(
    spec: &IntegrandSpec<F>,
    tol: f64,
) -> Result<QuadratureResult> {
    match spec.domain {
        Domain::WholeLine => integrate_line(spec, tol),
        Domain::Interval(a, b) => integrate_interval(spec, a, b, tol),
    }
}

pub fn integrate_interval<F: Fn(f64) -> Complex64>(
    spec: &IntegrandSpec<F>,
    a: f64,
    b: f64,
    tol: f64,
) -> Result<QuadratureResult> {
    integrate_interval_with(spec, a, b, &QuadConfig::tol(tol))
}

pub fn integrate_interval_with<F: Fn(f64) -> Complex64>(
    spec: &IntegrandSpec<F>,
    a: f64,
    b: f64,
    cfg: &QuadConfig,
) -> Result<QuadratureResult> {
    if !(a < b) || !a.is_finite() || !b.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "interval [{a}, {b}] must be finite with a < b"
        )));
    }
    cfg.validate()?;
    let points = breakpoints(a, b, spec.hints.iter().copied());
    adaptive(&spec.evaluator, &points, cfg)
}

pub fn integrate_line<F: Fn(f64) -> Complex64>(
    spec: &IntegrandSpec<F>,
    tol: f64,
) -> Result<QuadratureResult> {
    integrate_line_with(spec, &QuadConfig::tol(tol))
}

pub fn integrate_line_with<F: Fn(f64) -> Complex64>(
    spec: &IntegrandSpec<F>,
    cfg: &QuadConfig,
) -> Result<QuadratureResult> {
    cfg.validate()?;
    let tail = tail_decay(&spec.evaluator);
    for exponent in [tail.left_exponent, tail.right_exponent] {
        if exponent <= 1.0 {
            return Err(Error::SlowDecay { exponent });
        }
    }

    let mapped = |p: f64| {
        let (x, jac) = compact_map(p);
        let fx = (spec.evaluator)(x);
        if fx == Complex64::new(0.0, 0.0) {
            return fx;
        }
        fx * jac
    };
    let hints = spec.hints.iter().map(|&h| line_to_param(h));
    let mut points = breakpoints(-1.0, 1.0, hints.chain(std::iter::once(0.0)));
    points.dedup();
    let mut result = adaptive(&mapped, &points, cfg)?;
    result.tail = Some(tail);
    Ok(result)
}

/// `(2 pi)^(-1/2) int e^(-ikx) f(x) dx` over the whole line.
pub fn fourier_transform_line<F: Fn(f64) -> Complex64>(
    spec: &IntegrandSpec<F>,
    k: f64,
    tol: f64,
) -> Result<QuadratureResult> {
    fourier_transform_line_with(spec, k, &QuadConfig::tol(tol))
}

pub fn fourier_transform_line_with<F: Fn(f64) -> Complex64>(
    spec: &IntegrandSpec<F>,
    k: f64,
    cfg: &QuadConfig,
) -> Result<QuadratureResult> {
    cfg.validate()?;
    let norm = (2.0 * PI).sqrt().recip();
    if !k.is_finite() {
        return Err(Error::InvalidArgument(format!("wavenumber {k} is not finite")));
    }
    if k == 0.0 {
        let mut r = integrate_line_with(spec, cfg)?;
        r.value *= norm;
        r.err_estimate *= norm;
        return Ok(r);
    }

    let half = PI / k.abs();
    let reach = spec.hints.iter().fold(0.0_f64, |m, h| m.max(h.abs())) + FOURIER_CORE;
    let n_half = (reach / half).ceil().max(1.0) as usize;
    if n_half > FOURIER_MAX_PANELS {
        return Err(Error::InvalidArgument(format!(
            "|k| = {k} needs {n_half} central panels (max {FOURIER_MAX_PANELS})"
        )));
    }
    let edge = n_half as f64 * half;

    let integrand = |x: f64| (spec.evaluator)(x) * Complex64::from_polar(1.0, -k * x);
    let panels = (0..=2 * n_half).map(|i| -edge + i as f64 * half);
    let mut points = breakpoints(-edge, edge, panels.chain(spec.hints.iter().copied()));
    points.dedup();
    let central = adaptive(&integrand, &points, cfg)?;

    let tail_cfg = QuadConfig {
        abs_tol: cfg.target(central.value) * 0.25,
        rel_tol: 0.0,
        max_evals: cfg.max_evals,
    };
    let right = oscillatory_tail(&integrand, edge, half, &tail_cfg)?;
    let left = oscillatory_tail(&integrand, -edge, -half, &tail_cfg)?;

    let value = (central.value + right.value + left.value) * norm;
    Ok(QuadratureResult {
        value,
        err_estimate: (central.err_estimate + right.err_estimate + left.err_estimate) * norm,
        evaluations: central.evaluations + right.evaluations + left.evaluations,
        tail: None,
    })
}

/// Sums `int_{start + j step}^{start + (j+1) step}` for j = 0, 1, ... and
/// extrapolates the partial sums. `step` may be negative (left tail).
fn oscillatory_tail<G: Fn(f64) -> Complex64>(
    f: &G,
    start: f64,
    step: f64,
    cfg: &QuadConfig,
) -> Result<QuadratureResult> {
    const MIN_PANELS: usize = 6;
    const MAX_PANELS: usize = 600;

    let mut sums: Vec<Complex64> = Vec::new();
    let mut total = Complex64::new(0.0, 0.0);
    let mut evaluations = 0;
    let mut quad_err = 0.0;
    let mut last_estimate: Option<Complex64> = None;
    let mut quiet = 0;

    for j in 0..MAX_PANELS {
        let (lo, hi) = {
            let a = start + j as f64 * step;
            let b = a + step;
            if step > 0.0 {
                (a, b)
            } else {
                (b, a)
            }
        };
        let panel_cfg = QuadConfig {
            abs_tol: cfg.abs_tol * 1e-2,
            rel_tol: 0.0,
            max_evals: cfg.max_evals,
        };
        let piece = adaptive(f, &[lo, hi], &panel_cfg)?;
        evaluations += piece.evaluations;
        quad_err += piece.err_estimate;
        total += piece.value;
        sums.push(total);

        if piece.value.norm() <= cfg.abs_tol * 1e-3 {
            quiet += 1;
        } else {
            quiet = 0;
        }
        if quiet >= 3 && j + 1 >= MIN_PANELS {
            return Ok(QuadratureResult {
                value: total,
                err_estimate: quad_err + piece.value.norm() * 3.0,
                evaluations,
                tail: None,
            });
        }

        if sums.len() >= 3 {
            let window = &sums[sums.len().saturating_sub(24)..];
            let estimate = wynn_epsilon(window);
            if let Some(prev) = last_estimate {
                let change = (estimate - prev).norm();
                if j + 1 >= MIN_PANELS && change <= cfg.abs_tol {
                    return Ok(QuadratureResult {
                        value: estimate,
                        err_estimate: quad_err + change,
                        evaluations,
                        tail: None,
                    });
                }
            }
            last_estimate = Some(estimate);
        }
    }
    Err(Error::NotConverged {
        value: last_estimate.unwrap_or(total),
        err_estimate: f64::INFINITY,
        evaluations,
    })
}

/// Wynn's epsilon algorithm; returns the deepest even-column entry.
pub(crate) fn wynn_epsilon(sums: &[Complex64]) -> Complex64 {
    let n = sums.len();
    let mut best = sums[n - 1];
    let mut prev = vec![Complex64::new(0.0, 0.0); n + 1];
    let mut cur = sums.to_vec();
    for col in 1..n {
        let len = n - col;
        let mut next = Vec::with_capacity(len);
        for j in 0..len {
            let d = cur[j + 1] - cur[j];
            if d.norm() <= f64::EPSILON * cur[j + 1].norm().max(f64::MIN_POSITIVE) {
                // exact convergence in this column
                return if col % 2 == 1 { cur[j + 1] } else { best };
            }
            next.push(prev[j + 1] + d.inv());
        }
        if col % 2 == 0 {
            let candidate = next[len - 1];
            if candidate.re.is_finite() && candidate.im.is_finite() {
                best = candidate;
            }
        }
        prev = cur;
        cur = next;
    }
    best
}

/// `p in (-1, 1)` to `x`; `p -> 0` is `|x| -> infinity`, `|p| = 1` is `x = 0`.
/// Returns `(x, |dx/dp|)`.
fn compact_map(p: f64) -> (f64, f64) {
    let w = p.abs();
    let t = 1.0 - w;
    let denom = w * (2.0 - w);
    let x = p.signum() * t / denom;
    let jac = (1.0 + t * t) / (denom * denom);
    (x, jac)
}

fn line_to_param(x: f64) -> f64 {
    if x == 0.0 {
        return 1.0;
    }
    // w = 1 - t with t = 2|x| / (1 + sqrt(1 + 4x^2)), arranged without cancellation
    let ax = x.abs();
    let root = (1.0 + 4.0 * ax * ax).sqrt();
    let w = (1.0 + 1.0 / (root + 2.0 * ax)) / (1.0 + root);
    x.signum() * w
}

fn tail_decay<F: Fn(f64) -> Complex64>(f: &F) -> TailDecay {
    let exponent = |side: f64| {
        let (x1, x2) = (1e5, 1e6);
        let f1 = f(side * x1).norm();
        let f2 = f(side * x2).norm();
        if f1 > 0.0 && f2 > 0.0 && f1.is_finite() && f2.is_finite() {
            -(f2.ln() - f1.ln()) / (x2 / x1).ln()
        } else {
            f64::INFINITY
        }
    };
    TailDecay {
        left_exponent: exponent(-1.0),
        right_exponent: exponent(1.0),
    }
}

fn breakpoints(a: f64, b: f64, interior: impl Iterator<Item = f64>) -> Vec<f64> {
    let mut pts: Vec<f64> = std::iter::once(a)
        .chain(interior.filter(|&h| h > a && h < b))
        .chain(std::iter::once(b))
        .collect();
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    pts
}

// Gauss-Kronrod 10/21 abscissae and weights.
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_208_707_644_860,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];
const GK_POINTS: usize = 21;

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: Complex64,
    err: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.err.total_cmp(&other.err) == Ordering::Equal
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.err.total_cmp(&other.err)
    }
}

fn gk21<G: Fn(f64) -> Complex64>(f: &G, a: f64, b: f64) -> Segment {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut res_k = fc * WGK[10];
    let mut res_g = Complex64::new(0.0, 0.0);
    let mut res_abs = fc.norm() * WGK[10];
    let mut fv1 = [Complex64::new(0.0, 0.0); 10];
    let mut fv2 = [Complex64::new(0.0, 0.0); 10];

    for j in 0..10 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        res_k += (f1 + f2) * WGK[j];
        res_abs += (f1.norm() + f2.norm()) * WGK[j];
        if j % 2 == 1 {
            res_g += (f1 + f2) * WG[j / 2];
        }
    }

    let mean = res_k * 0.5;
    let mut res_asc = (fc - mean).norm() * WGK[10];
    for j in 0..10 {
        res_asc += ((fv1[j] - mean).norm() + (fv2[j] - mean).norm()) * WGK[j];
    }

    let value = res_k * half;
    let res_abs = res_abs * half.abs();
    let res_asc = res_asc * half.abs();
    let mut err = ((res_k - res_g) * half).norm();
    if res_asc != 0.0 && err != 0.0 {
        err = res_asc * (200.0 * err / res_asc).powf(1.5).min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * res_abs);
    }
    if !(value.re.is_finite() && value.im.is_finite()) || !err.is_finite() {
        return Segment {
            a,
            b,
            value: Complex64::new(0.0, 0.0),
            err: f64::INFINITY,
        };
    }
    Segment { a, b, value, err }
}

/// Global adaptive bisection over the panels delimited by `points`.
/// Sum of the accepted partition with every live segment bisected once more.
/// The error estimate stays that of the unpolished partition.
fn polish<G: Fn(f64) -> Complex64>(f: &G, heap: &BinaryHeap<Segment>, done: &[Segment]) -> (Complex64, usize) {
    let mut value = done.iter().fold(Complex64::new(0.0, 0.0), |v, s| v + s.value);
    let mut evaluations = 0;
    for seg in heap.iter() {
        let mid = 0.5 * (seg.a + seg.b);
        if !(mid > seg.a && mid < seg.b) {
            value += seg.value;
            continue;
        }
        let (left, right) = (gk21(f, seg.a, mid), gk21(f, mid, seg.b));
        evaluations += 2 * GK_POINTS;
        if left.err.is_finite() && right.err.is_finite() {
            value += left.value + right.value;
        } else {
            value += seg.value;
        }
    }
    (value, evaluations)
}

pub(crate) fn adaptive<G: Fn(f64) -> Complex64>(
    f: &G,
    points: &[f64],
    cfg: &QuadConfig,
) -> Result<QuadratureResult> {
    let mut heap = BinaryHeap::new();
    let mut done: Vec<Segment> = Vec::new();
    let mut evaluations = 0;
    let mut value = Complex64::new(0.0, 0.0);
    let mut err = 0.0;

    for w in points.windows(2) {
        let seg = gk21(f, w[0], w[1]);
        evaluations += GK_POINTS;
        value += seg.value;
        err += seg.err;
        heap.push(seg);
    }

    let exact_totals = |heap: &BinaryHeap<Segment>, done: &[Segment]| {
        heap.iter()
            .chain(done.iter())
            .fold((Complex64::new(0.0, 0.0), 0.0), |(v, e), s| (v + s.value, e + s.err))
    };

    let mut iteration = 0usize;
    loop {
        iteration += 1;
        if iteration % 64 == 0 || err <= cfg.target(value) {
            (value, err) = exact_totals(&heap, &done);
        }
        if err <= cfg.target(value) {
            let (value, polish_evals) = polish(f, &heap, &done);
            return Ok(QuadratureResult {
                value,
                err_estimate: err,
                evaluations: evaluations + polish_evals,
                tail: None,
            });
        }
        if evaluations + 2 * GK_POINTS > cfg.max_evals {
            break;
        }
        let Some(seg) = heap.pop() else { break };
        let mid = 0.5 * (seg.a + seg.b);
        let width = seg.b - seg.a;
        if !(mid > seg.a && mid < seg.b) || width <= 1e3 * f64::EPSILON * mid.abs() {
            done.push(seg);
            continue;
        }
        let left = gk21(f, seg.a, mid);
        let right = gk21(f, mid, seg.b);
        evaluations += 2 * GK_POINTS;
        value += left.value + right.value - seg.value;
        err += left.err + right.err - seg.err;
        heap.push(left);
        heap.push(right);
    }
    let (value, err) = exact_totals(&heap, &done);
    Err(Error::NotConverged {
        value,
        err_estimate: err,
        evaluations,
    })
}
