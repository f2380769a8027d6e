//! Test-side oracles that share no code with the library.

#![allow(dead_code)]

use num_complex::Complex64;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn rel(value: Complex64, reference: Complex64) -> f64 {
    let d = (value - reference).norm();
    if reference.norm() > 0.0 {
        d / reference.norm()
    } else {
        d
    }
}

/// Gauss series for `2F1(a, b; c; z)`, valid for `|z| < 1`.
pub fn hyp2f1_series(a: Complex64, b: Complex64, cc: Complex64, z: Complex64) -> Complex64 {
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = term;
    for n in 0..5000 {
        let n = n as f64;
        term *= (a + n) * (b + n) / ((cc + n) * (n + 1.0)) * z;
        sum += term;
        if term.norm() <= 1e-17 * sum.norm() && n > 4.0 {
            break;
        }
    }
    sum
}

/// `2F1` with the Pfaff transformation
/// `2F1(a,b;c;z) = (1-z)^(-a) 2F1(a, c-b; c; z/(z-1))`
/// applied whenever it shrinks the series argument.
pub fn hyp2f1(a: Complex64, b: Complex64, cc: Complex64, z: Complex64) -> Complex64 {
    let w = z / (z - 1.0);
    if w.norm() < z.norm() {
        (1.0 - z).powc(-a) * hyp2f1_series(a, cc - b, cc, w)
    } else {
        hyp2f1_series(a, b, cc, z)
    }
}

pub fn hyp2f1_real(a: f64, b: f64, cc: f64, z: Complex64) -> Complex64 {
    hyp2f1(a.into(), b.into(), cc.into(), z)
}

/// Composite Simpson rule with `n` (even) panels on `[a, b]`.
pub fn simpson<F: Fn(f64) -> Complex64>(f: F, a: f64, b: f64, n: usize) -> Complex64 {
    assert!(n % 2 == 0);
    let h = (b - a) / n as f64;
    let mut sum = f(a) + f(b);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        sum += w * f(a + i as f64 * h);
    }
    sum * h / 3.0
}

/// Physicists' Hermite polynomial by the three-term recurrence, as a
/// normalized Hermite function.
pub fn hermite_function_direct(n: u32, x: f64) -> f64 {
    let (mut h0, mut h1) = (1.0_f64, 2.0 * x);
    let hn = match n {
        0 => h0,
        1 => h1,
        _ => {
            for k in 1..n {
                let h2 = 2.0 * x * h1 - 2.0 * k as f64 * h0;
                h0 = h1;
                h1 = h2;
            }
            h1
        }
    };
    let mut fact = 1.0_f64;
    for k in 1..=n {
        fact *= k as f64;
    }
    let norm = (std::f64::consts::PI.sqrt() * 2f64.powi(n as i32) * fact).sqrt();
    hn * (-0.5 * x * x).exp() / norm
}

/// `pi^(-1/4) exp(-x^2/2 + sqrt2 alpha x - alpha^2/2 - |alpha|^2/2)`.
pub fn gaussian_coherent(alpha: Complex64, x: f64) -> Complex64 {
    let e = -0.5 * x * x + std::f64::consts::SQRT_2 * alpha * x - 0.5 * alpha * alpha - 0.5 * alpha.norm_sqr();
    std::f64::consts::PI.powf(-0.25) * e.exp()
}

/// The raw bracket `[1 + (q-1)/2 (x^2 - 2 sqrt2 alpha x + alpha^2 + |alpha|^2)]^(1/(1-q))`.
pub fn bracket(q: f64, alpha: Complex64, x: f64) -> Complex64 {
    let p = x * x - 2.0 * std::f64::consts::SQRT_2 * alpha * x + alpha * alpha + alpha.norm_sqr();
    (1.0 + 0.5 * (q - 1.0) * p).powf(1.0 / (1.0 - q))
}

/// `int |bracket|^2 dx` by Simpson on `x = tan(t)`.
pub fn bracket_norm(q: f64, alpha: Complex64) -> f64 {
    let centre = std::f64::consts::SQRT_2 * alpha.re;
    let f = |t: f64| {
        let x = centre + t.tan();
        let jac = 1.0 / t.cos().powi(2);
        Complex64::from(bracket(q, alpha, x).norm_sqr() * jac)
    };
    let h = std::f64::consts::FRAC_PI_2 - 1e-9;
    simpson(f, -h, h, 40_000).re
}

/// `int f dx` over the whole line for `f ~ |x|^(-decay)`, `decay > 1`: Simpson
/// on `[centre - r, centre + r]` plus both tails mapped by `x = r s^(-g)`, with
/// `g` chosen so the mapped tail integrand vanishes like `s^3`.
pub fn power_tail_integral(f: impl Fn(f64) -> f64, centre: f64, r: f64, decay: f64, panels: usize) -> f64 {
    let core = simpson(|x| f(x).into(), centre - r, centre + r, panels).re;
    let g = 4.0 / (decay - 1.0);
    let tail = |sign: f64| {
        simpson(
            |s: f64| {
                if s == 0.0 {
                    return Complex64::new(0.0, 0.0);
                }
                let x = r * s.powf(-g);
                (f(centre + sign * x) * r * g * s.powf(-g - 1.0)).into()
            },
            0.0,
            1.0,
            panels,
        )
        .re
    };
    core + tail(1.0) + tail(-1.0)
}

/// `int |bracket|^2 dx` for any normalizable q, tails included.
pub fn bracket_norm_tails(q: f64, alpha: Complex64) -> f64 {
    let centre = std::f64::consts::SQRT_2 * alpha.re;
    let decay = 4.0 / (q - 1.0);
    power_tail_integral(|x| bracket(q, alpha, x).norm_sqr(), centre, 8.0 + 2.0 * alpha.norm(), decay, 40_000)
}
