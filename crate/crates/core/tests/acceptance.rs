//! Acceptance run: one line per criterion, non-zero exit on any failure.

mod common;

use std::f64::consts::{PI, SQRT_2};
use std::time::{Duration, Instant};

use common::{bracket_norm_tails, c, hyp2f1_real, rel, simpson};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tsallis_coherent::cli::{run_verify, EntryStatus, VerifyConfig};
use tsallis_coherent::closed_form;
use tsallis_coherent::moments::{moments_closed_with, moments_oracle, uncertainty_product};
use tsallis_coherent::momentum::{default_k_grid, momentum_pd, symmetric_grid};
use tsallis_coherent::specfun::{hermite_function, lauricella_fd_integral, lauricella_fd_series, LauricellaArgs};
use tsallis_coherent::states::{
    apply_aq, coherent_coefficients, coherent_psi, normalization_constant, StateLabel, UnnormalizedState,
    WaveFunction,
};
use tsallis_coherent::Method;

type Outcome = Result<String, String>;

const LIMIT_SEQUENCE: [f64; 4] = [1.2, 1.1, 1.05, 1.02];
const GRID_Q: [f64; 6] = [1.05, 1.2, 1.4, 1.6, 2.0, 2.2];
const FD_SEED: u64 = 20_241_018;

fn grid_alphas() -> [Complex64; 4] {
    [c(0.0, 0.0), c(0.5, 0.0), c(0.5, 0.2), c(0.0, 0.3)]
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn classical_limit_product() -> Outcome {
    let start = Instant::now();
    let mut worst = 0.0f64;
    for alpha in [c(0.0, 0.0), c(0.5, 0.0), c(0.5, 0.2)] {
        let gaps = LIMIT_SEQUENCE
            .iter()
            .map(|&q| uncertainty_product(q, alpha, Method::Oracle).map(|p| p - 0.5))
            .collect::<Result<Vec<f64>, _>>()
            .map_err(err)?;
        ensure(gaps.windows(2).all(|w| w[1] < w[0]), || format!("alpha={alpha}: gaps {gaps:?} not decreasing"))?;
        ensure(gaps.iter().all(|&g| g >= 0.0), || format!("alpha={alpha}: negative gap {gaps:?}"))?;
        ensure(gaps[3] < 1e-2, || format!("alpha={alpha}: final gap {}", gaps[3]))?;
        let sentinel = uncertainty_product(1.0, alpha, Method::Oracle).map_err(err)?;
        ensure((sentinel - 0.5).abs() <= 1e-10, || format!("alpha={alpha}: sentinel {sentinel}"))?;
        worst = worst.max(gaps[3]);
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(60), || format!("took {elapsed:?}"))?;
    Ok(format!("largest final gap {worst:.3e}"))
}

fn heisenberg_bound() -> Outcome {
    let mut lowest = f64::INFINITY;
    for q in GRID_Q {
        for alpha in grid_alphas() {
            let p = uncertainty_product(q, alpha, Method::Oracle).map_err(err)?;
            ensure(p >= 0.5 - 1e-6, || format!("q={q} alpha={alpha}: product {p}"))?;
            lowest = lowest.min(p);
        }
    }
    Ok(format!("lowest product {lowest:.12}"))
}

fn normalization_closure() -> Outcome {
    let mut worst = 0.0f64;
    for q in GRID_Q.iter().chain(&[2.5, 3.5]).copied() {
        for alpha in grid_alphas() {
            let a = normalization_constant(q, alpha, Method::Oracle).map_err(err)?.value.re;
            let norm = a * a * bracket_norm_tails(q, alpha);
            ensure((norm - 1.0).abs() <= 1e-8, || format!("q={q} alpha={alpha}: norm {norm}"))?;
            worst = worst.max((norm - 1.0).abs());
        }
    }
    Ok(format!("max |norm - 1| {worst:.3e}"))
}

fn hermite_expansion() -> Outcome {
    let alpha = c(0.7, 0.3);
    let coeffs = coherent_coefficients(alpha, 10);
    let mut worst = 0.0f64;
    let mut factorial = 1.0;
    for n in 0..=10u32 {
        if n > 0 {
            factorial *= n as f64;
        }
        let expected = alpha.powu(n) * (-0.5 * alpha.norm_sqr()).exp() / factorial.sqrt();
        let projected = simpson(|x| hermite_function(n, x) * coherent_psi(alpha, x), -16.0, 16.0, 8000);
        let d = (projected - expected).norm().max((coeffs[n as usize] - expected).norm());
        ensure(d <= 1e-8, || format!("n={n}: projected {projected}, library {}, exact {expected}", coeffs[n as usize]))?;
        worst = worst.max(d);
    }
    Ok(format!("max coefficient error {worst:.3e}"))
}

fn reference_moments() -> Outcome {
    let i = c(0.0, 1.0);
    let mut worst = 0.0f64;
    for alpha in [c(0.0, 0.0), c(1.0, 0.0), c(0.0, 1.0), c(0.7, 0.3)] {
        let centre = SQRT_2 * alpha.re;
        let integral = |f: &dyn Fn(f64) -> Complex64| simpson(f, centre - 14.0, centre + 14.0, 8000);
        let psi = |x: f64| coherent_psi(alpha, x);
        let d1 = |x: f64| (SQRT_2 * alpha - x) * psi(x);
        let measured = [
            integral(&|x| (x * psi(x).norm_sqr()).into()),
            integral(&|x| (x * x * psi(x).norm_sqr()).into()),
            integral(&|x| -i * psi(x).conj() * d1(x)),
            integral(&|x| d1(x).norm_sqr().into()),
        ];
        let (s, d) = (alpha + alpha.conj(), alpha - alpha.conj());
        let exact = [s / SQRT_2, 0.5 + s * s / 2.0, d / (i * SQRT_2), 0.5 - d * d / 2.0];
        let library = moments_oracle(1.0, alpha, 1e-12).map_err(err)?.means();
        for k in 0..4 {
            let e = (measured[k] - exact[k]).norm().max((library[k] - exact[k]).norm());
            ensure(e <= 1e-8, || format!("alpha={alpha} moment {k}: {} / {} vs {}", measured[k], library[k], exact[k]))?;
            worst = worst.max(e);
        }
    }
    Ok(format!("max moment error {worst:.3e}"))
}

fn annihilation_eigenvalue() -> Outcome {
    let mut worst = 0.0f64;
    for q in [1.3, 1.7] {
        for alpha in [c(0.3, 0.0), c(0.3, 0.1)] {
            let phi = UnnormalizedState { q, alpha };
            for x in [-2.0, -1.0, 0.0, 0.5, 2.0] {
                let value = phi.sample(x).map_err(err)?.value;
                let residual = (apply_aq(q, &phi, x).map_err(err)? - alpha * value).norm();
                let scale = (alpha * value).norm();
                ensure(residual <= 1e-8 * scale, || format!("q={q} alpha={alpha} x={x}: residual {residual:e}"))?;
                worst = worst.max(residual / scale);
            }
        }
    }
    Ok(format!("max relative residual {worst:.3e}"))
}

fn random_fd_args(rng: &mut ChaCha8Rng) -> LauricellaArgs {
    let a = rng.gen_range(0.2..3.0);
    let cc = a + rng.gen_range(0.2..3.0);
    let b = [0; 4].map(|_| rng.gen_range(-1.0..2.0));
    let x = [0; 4].map(|_| Complex64::from_polar(0.5 * rng.gen::<f64>().sqrt(), rng.gen_range(-PI..PI)));
    LauricellaArgs::real(a, b, cc, x).unwrap()
}

fn lauricella_consistency() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(FD_SEED);
    let mut worst = 0.0f64;
    for i in 0..50 {
        let args = random_fd_args(&mut rng);
        let s = lauricella_fd_series(&args, 1e-14).map_err(err)?.value;
        let v = lauricella_fd_integral(&args, 1e-13).map_err(err)?.value;
        ensure(rel(s, v) <= 1e-8, || format!("set {i}: series {s} vs integral {v}"))?;
        worst = worst.max(rel(s, v));
    }
    for i in 0..20 {
        let args = random_fd_args(&mut rng);
        let slot = i % 4;
        let mut b = [0.0; 4];
        b[slot] = args.b()[slot].re;
        let reduced = LauricellaArgs::real(args.a().re, b, args.c().re, args.x()).unwrap();
        let exact = hyp2f1_real(args.a().re, b[slot], args.c().re, args.x()[slot]);
        let s = lauricella_fd_series(&reduced, 1e-14).map_err(err)?.value;
        let v = lauricella_fd_integral(&reduced, 1e-13).map_err(err)?.value;
        ensure(rel(s, exact) <= 1e-8 && rel(v, exact) <= 1e-8, || format!("reduction {i}: {s} / {v} vs {exact}"))?;
        worst = worst.max(rel(s, exact)).max(rel(v, exact));
    }
    Ok(format!("max relative disagreement {worst:.3e}"))
}

/// Composite Simpson over the uniform odd-length sample grid.
fn simpson_samples(ks: &[f64], vals: &[f64]) -> f64 {
    let h = ks[1] - ks[0];
    let n = vals.len() - 1;
    let inner: f64 = (1..n).map(|j| if j % 2 == 1 { 4.0 } else { 2.0 } * vals[j]).sum();
    h / 3.0 * (vals[0] + vals[n] + inner)
}

fn parseval_and_routes() -> Outcome {
    let mut worst = 0.0f64;
    for q in [1.2, 1.5, 2.0] {
        for alpha in [c(0.0, 0.0), c(0.5, 0.0), c(0.0, 0.3)] {
            let pd = momentum_pd(q, alpha, &default_k_grid(alpha), Method::Oracle).map_err(err)?;
            let ks: Vec<f64> = pd.samples.iter().map(|s| s.k).collect();
            let moment = |n: i32| simpson_samples(&ks, &pd.samples.iter().map(|s| s.k.powi(n) * s.pd).collect::<Vec<_>>());
            let m = moments_oracle(q, alpha, 1e-11).map_err(err)?;
            let errors = [moment(0) - 1.0, moment(1) - m.mean_p.re, moment(2) - m.mean_p2.re];
            for (name, e) in ["parseval", "<k>", "<k^2>"].iter().zip(errors) {
                ensure(e.abs() <= 1e-4, || format!("q={q} alpha={alpha}: {name} off by {e:e}"))?;
                worst = worst.max(e.abs());
            }
        }
    }
    Ok(format!("max deviation {worst:.3e}"))
}

fn momentum_gaussian_limit() -> Outcome {
    let alpha = Complex64::new(1.0, 1.0) / SQRT_2 * 0.5;
    let p0 = SQRT_2 * alpha.im;
    let grid = symmetric_grid(6.0, 121);
    let distances = LIMIT_SEQUENCE
        .iter()
        .map(|&q| {
            let pd = momentum_pd(q, alpha, &grid, Method::Oracle).map_err(err)?;
            Ok(pd
                .samples
                .iter()
                .map(|s| (s.pd - (-(s.k - p0).powi(2)).exp() / PI.sqrt()).abs())
                .fold(0.0, f64::max))
        })
        .collect::<Result<Vec<f64>, String>>()?;
    ensure(distances.windows(2).all(|w| w[1] < w[0]), || format!("distances {distances:?}"))?;
    ensure(distances[3] < 1e-2, || format!("final distance {}", distances[3]))?;
    Ok(format!("distances {}", distances.iter().map(|d| format!("{d:.3e}")).collect::<Vec<_>>().join(" > ")))
}

fn closed_form_calibration() -> Outcome {
    let convention = closed_form::calibrated().map_err(err)?;
    let mut worst = 0.0f64;
    for q in [1.2, 1.3, 1.6] {
        for alpha in [c(0.3, 0.0), c(0.3, 0.1)] {
            let oracle_a = StateLabel::new(q, alpha).map_err(err)?.constant().map_err(err)?;
            let closed_a = closed_form::norm_constant(q, alpha, convention).map_err(err)?;
            let checked = normalization_constant(q, alpha, Method::ClosedForm).map_err(err)?;
            let oracle_x = moments_oracle(q, alpha, 1e-11).map_err(err)?.mean_x;
            let closed_x = moments_closed_with(q, alpha, convention).map_err(err)?.mean_x;
            let da = rel(closed_a, oracle_a.into()).max(rel(checked.value, oracle_a.into()));
            let dx = rel(closed_x, oracle_x);
            ensure(da <= 1e-5 && dx <= 1e-5, || format!("q={q} alpha={alpha}: A dev {da:e}, <x> dev {dx:e}"))?;
            worst = worst.max(da).max(dx);
        }
    }
    let report = run_verify(&VerifyConfig {
        q_values: vec![1.2, 1.3, 1.6],
        alphas: vec![c(0.3, 0.0), c(0.3, 0.1)],
        tol: 1e-10,
    })
    .map_err(err)?;
    ensure(report.mandatory_passed(), || "verify report has failing mandatory checks".into())?;
    let findings = report.entries.iter().filter(|e| e.status == EntryStatus::Finding).count();
    ensure(findings > 0, || "no findings recorded for the as-printed forms".into())?;
    Ok(format!("max deviation {worst:.3e}; {findings} findings in verify report"))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("classical-limit uncertainty product", classical_limit_product),
        ("Heisenberg bound on the grid", heisenberg_bound),
        ("normalization closure", normalization_closure),
        ("Hermite expansion coefficients", hermite_expansion),
        ("coherent-state reference moments", reference_moments),
        ("a_q eigenvalue residual", annihilation_eigenvalue),
        ("Lauricella series vs integral", lauricella_consistency),
        ("Parseval and momentum routes", parseval_and_routes),
        ("momentum Gaussian limit", momentum_gaussian_limit),
        ("closed-form calibration", closed_form_calibration),
    ];
    let suite = Instant::now();
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS ({secs:6.2} s) {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} FAIL ({secs:6.2} s) {name}: {detail}", i + 1);
            }
        }
    }
    let total = suite.elapsed();
    if total < Duration::from_secs(600) {
        println!("criterion 11 PASS ({:6.2} s) full acceptance run under 10 min", total.as_secs_f64());
    } else {
        failed += 1;
        println!("criterion 11 FAIL ({:6.2} s) full acceptance run under 10 min", total.as_secs_f64());
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
    println!("all acceptance criteria passed");
}

