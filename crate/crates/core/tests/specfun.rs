mod common;

use std::f64::consts::{E, PI};

use common::{c, hermite_function_direct, hyp2f1_real, rel, simpson};
use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tsallis_coherent::specfun::*;
use tsallis_coherent::states::beta_roots;
use tsallis_coherent::Error;

#[test]
fn hermite_poly_examples() {
    assert_eq!(hermite_poly(0, 3.7), 1.0);
    assert!((hermite_poly(2, 1.0) - 2.0).abs() < 1e-14);
    assert!((hermite_poly(3, 0.5) + 5.0).abs() < 1e-14);
}

#[test]
fn hermite_function_examples() {
    assert!((hermite_function(0, 0.0) - PI.powf(-0.25)).abs() < 1e-15);
    assert!((hermite_function(0, 0.0) - 0.7511255).abs() < 1e-7);
    assert_eq!(hermite_function(1, 0.0), 0.0);
    let norm = simpson(|x| hermite_function(2, x).powi(2).into(), -12.0, 12.0, 4000).re;
    assert!((norm - 1.0).abs() < 1e-10, "{norm}");
}

#[test]
fn hermite_function_matches_direct_form() {
    for n in 0..=30 {
        for i in 0..=48 {
            let x = -6.0 + 0.25 * i as f64;
            let lib = hermite_function(n, x);
            let direct = hermite_function_direct(n, x);
            assert!((lib - direct).abs() <= 1e-12 * direct.abs() + 1e-15,
                "n={n} x={x}: {lib} vs {direct}");
        }
    }
}

#[test]
fn hermite_orthonormality() {
    for m in 0..=10u32 {
        for n in m..=10u32 {
            let v = simpson(|x| (hermite_function(m, x) * hermite_function(n, x)).into(), -14.0, 14.0, 6000).re;
            let expected = if m == n { 1.0 } else { 0.0 };
            assert!((v - expected).abs() < 1e-8, "<{m}|{n}> = {v}");
        }
    }
}

#[test]
fn gamma_values() {
    assert!(rel(gamma(c(0.5, 0.0)), PI.sqrt().into()) < 1e-14);
    assert!(rel(gamma(c(5.0, 0.0)), 24.0.into()) < 1e-14);
    assert!(rel(gamma(c(-0.5, 0.0)), (-2.0 * PI.sqrt()).into()) < 1e-13);
    // Gamma(1+i) Gamma(1-i) = pi / sinh(pi)
    let z = gamma(c(1.0, 1.0)) * gamma(c(1.0, -1.0));
    assert!(rel(z, (PI / PI.sinh()).into()) < 1e-13);
    assert!((ln_gamma_real(200.0) - 857.9336698258574).abs() < 1e-10);
    assert!(rgamma(c(-3.0, 0.0)).norm() < 1e-300);
    assert!(is_nonpositive_integer(c(-2.0, 0.0)));
    assert!(!is_nonpositive_integer(c(-2.0, 1e-3)));
}

#[test]
fn pochhammer_examples() {
    assert_eq!(pochhammer(c(0.3, -1.2), 0), c(1.0, 0.0));
    assert!(rel(pochhammer(c(1.0, 0.0), 5), 120.0.into()) < 1e-15);
    assert!(rel(pochhammer(c(0.5, 0.0), 3), 1.875.into()) < 1e-15);
}

#[test]
fn kummer_examples() {
    assert_eq!(kummer_phi(c(0.7, 0.2), c(1.9, 0.0), c(0.0, 0.0)).unwrap(), c(1.0, 0.0));
    assert!(rel(kummer_phi(1.0.into(), 1.0.into(), 1.0.into()).unwrap(), E.into()) < 1e-14);
    assert!(rel(kummer_phi(1.0.into(), 2.0.into(), 1.0.into()).unwrap(), (E - 1.0).into()) < 1e-14);
    assert!((kummer_phi(1.0.into(), 1.0.into(), 1.0.into()).unwrap().re - 2.7182818).abs() < 1e-7);
    assert!((kummer_phi(1.0.into(), 2.0.into(), 1.0.into()).unwrap().re - 1.7182818).abs() < 1e-7);
}

#[test]
fn kummer_rejects_pole_in_b() {
    assert!(matches!(kummer_phi(1.0.into(), (-2.0).into(), 0.5.into()), Err(Error::ParameterPole { .. })));
}

#[test]
fn kummer_elementary_cases() {
    // phi(a, a; z) = e^z on a grid reaching the asymptotic regime
    for z in [c(3.0, 4.0), c(-30.0, 2.0), c(0.0, 50.0), c(120.0, 0.0)] {
        let v = kummer_phi(c(0.6, 0.0), c(0.6, 0.0), z).unwrap();
        assert!(rel(v, z.exp()) < 1e-9, "z={z}: {v}");
    }
    // phi(1, 2; z) = (e^z - 1)/z
    for z in [c(0.5, -2.0), c(-15.0, 0.0), c(0.0, 30.0), c(40.0, 10.0)] {
        let v = kummer_phi(1.0.into(), 2.0.into(), z).unwrap();
        assert!(rel(v, (z.exp() - 1.0) / z) < 1e-9, "z={z}: {v}");
    }
}

fn kummer_derivative_fd(a: Complex64, b: Complex64, z: Complex64) -> Complex64 {
    let h = 1e-3;
    let f = |dz: f64| kummer_phi(a, b, z + dz).unwrap();
    (f(-2.0 * h) - 8.0 * f(-h) + 8.0 * f(h) - f(2.0 * h)) / (12.0 * h)
}

#[test]
fn kummer_derivative_recurrence() {
    let params = [(c(0.7, 0.0), c(1.9, 0.0)), (c(1.5, 0.5), c(3.2, 0.0)), (c(2.5, 0.0), c(5.0, 0.0))];
    let zs = [c(0.3, 0.0), c(-2.0, 1.0), c(1.0, 3.0), c(4.0, -0.5)];
    for (a, b) in params {
        for z in zs {
            let lhs = kummer_derivative_fd(a, b, z);
            let rhs = a / b * kummer_phi(a + 1.0, b + 1.0, z).unwrap();
            assert!(rel(lhs, rhs) < 1e-8, "a={a} b={b} z={z}: {lhs} vs {rhs}");
        }
    }
}

#[test]
fn lauricella_series_trivial_cases() {
    let x = [c(0.3, 0.1), c(-0.2, 0.0), c(0.1, 0.4), c(0.25, -0.1)];
    let zero_b = LauricellaArgs::real(1.3, [0.0; 4], 2.7, x).unwrap();
    assert!(rel(lauricella_fd_series(&zero_b, 1e-14).unwrap().value, 1.0.into()) < 1e-15);
    let zero_x = LauricellaArgs::real(1.3, [0.4, 0.3, 0.2, 0.1], 2.7, [c(0.0, 0.0); 4]).unwrap();
    assert!(rel(lauricella_fd_series(&zero_x, 1e-14).unwrap().value, 1.0.into()) < 1e-15);
}

#[test]
fn lauricella_series_diagonal_reduces_to_2f1() {
    let x = c(0.2, 0.0);
    let args = LauricellaArgs::real(1.0, [0.5; 4], 3.0, [x; 4]).unwrap();
    let v = lauricella_fd_series(&args, 1e-14).unwrap().value;
    let expected = hyp2f1_real(1.0, 2.0, 3.0, x);
    assert!(rel(v, expected) < 1e-12, "{v} vs {expected}");
    // 2F1(1, 2; 3; x) = -2 (x + ln(1 - x)) / x^2
    let closed = -2.0 * (0.2 + (0.8f64).ln()) / 0.04;
    assert!((expected.re - closed).abs() < 1e-14);
}

#[test]
fn lauricella_integral_trivial_case() {
    let x = [c(0.9, 0.0), c(-3.0, 1.0), c(0.1, 0.4), c(2.0, -1.0)];
    let args = LauricellaArgs::real(1.7, [0.0; 4], 4.1, x).unwrap();
    assert!(rel(lauricella_fd_integral(&args, 1e-12).unwrap().value, 1.0.into()) < 1e-12);
}

#[test]
fn lauricella_series_matches_integral_example() {
    let x = [c(0.3, 0.0), c(-0.2, 0.0), c(0.1, 0.0), c(0.25, 0.0)];
    let args = LauricellaArgs::real(1.2, [0.4, 0.3, 0.2, 0.1], 2.5, x).unwrap();
    let s = lauricella_fd_series(&args, 1e-14).unwrap().value;
    let i = lauricella_fd_integral(&args, 1e-13).unwrap().value;
    assert!(rel(s, i) <= 1e-8, "{s} vs {i}");
}

#[test]
fn lauricella_single_variable_reduces_to_2f1() {
    let (a, b1, cc) = (1.3, 0.7, 2.9);
    let x = [c(0.5, 0.0), c(0.3, 0.2), c(-0.4, 0.0), c(0.1, 0.1)];
    let args = LauricellaArgs::real(a, [b1, 0.0, 0.0, 0.0], cc, x).unwrap();
    let expected = hyp2f1_real(a, b1, cc, c(0.5, 0.0));
    let s = lauricella_fd_series(&args, 1e-14).unwrap().value;
    let i = lauricella_fd_integral(&args, 1e-13).unwrap().value;
    assert!(rel(s, expected) < 1e-8, "{s} vs {expected}");
    assert!(rel(i, expected) < 1e-8, "{i} vs {expected}");
}

#[test]
fn dispatcher_contract() {
    let interior = LauricellaArgs::real(1.2, [0.4, 0.3, 0.2, 0.1], 2.5, [c(0.3, 0.0), c(-0.2, 0.1), c(0.1, 0.0), c(0.25, 0.0)]).unwrap();
    let d = lauricella_fd(&interior, 1e-13).unwrap();
    assert_eq!(d.strategy, FdStrategy::Series);
    assert!(rel(d.result.value, lauricella_fd_series(&interior, 1e-13).unwrap().value) < 1e-15);

    let exterior = LauricellaArgs::real(1.2, [0.4, 0.3, 0.2, 0.1], 2.5, [c(1.5, 2.0), c(-3.0, 0.1), c(0.1, 0.0), c(0.25, -4.0)]).unwrap();
    assert!(!exterior.series_admissible());
    let d = lauricella_fd(&exterior, 1e-12).unwrap();
    assert_eq!(d.strategy, FdStrategy::Integral);
    assert!(rel(d.result.value, lauricella_fd_integral(&exterior, 1e-12).unwrap().value) < 1e-15);
}

#[test]
fn dispatcher_on_normalization_arguments() {
    let (q, alpha) = (1.3, c(0.3, 0.0));
    let b = 1.0 / (q - 1.0);
    let cc = 4.0 * b;
    let roots = beta_roots(q, alpha).unwrap().as_array();
    let x = roots.map(|r| 1.0 + r);
    let args = LauricellaArgs::real(cc - 1.0, [b; 4], cc, x).unwrap();
    let v = lauricella_fd(&args, 1e-12).unwrap();
    let value = v.result.value;
    assert!(value.re.is_finite() && value.im.is_finite());
    assert!(v.result.err_estimate < 1e-8 * value.norm(), "{:?}", v.result);
}

#[test]
fn lauricella_rejects_pole_in_c() {
    assert!(matches!(
        LauricellaArgs::real(1.0, [0.5; 4], -1.0, [c(0.1, 0.0); 4]),
        Err(Error::ParameterPole { .. })
    ));
}

#[test]
fn lauricella_integral_rejects_inadmissible() {
    let args = LauricellaArgs::real(3.0, [0.5; 4], 2.5, [c(0.1, 0.0); 4]).unwrap();
    assert!(lauricella_fd_integral(&args, 1e-12).is_err());
}

fn random_args(rng: &mut ChaCha8Rng) -> LauricellaArgs {
    let a = rng.gen_range(0.2..3.0);
    let cc = a + rng.gen_range(0.2..3.0);
    let b = [0; 4].map(|_| rng.gen_range(-1.0..2.0));
    let x = [0; 4].map(|_| {
        let r = 0.5 * rng.gen::<f64>().sqrt();
        let t = rng.gen_range(-PI..PI);
        Complex64::from_polar(r, t)
    });
    LauricellaArgs::real(a, b, cc, x).unwrap()
}

#[test]
fn series_matches_integral_on_random_sets() {
    let mut rng = ChaCha8Rng::seed_from_u64(20_240_611);
    for i in 0..50 {
        let args = random_args(&mut rng);
        let s = lauricella_fd_series(&args, 1e-14).unwrap().value;
        let v = lauricella_fd_integral(&args, 1e-13).unwrap().value;
        assert!(rel(s, v) <= 1e-8, "set {i}: {args:?}: {s} vs {v}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn reduction_to_2f1(a in 0.2f64..3.0, gap in 0.2f64..3.0, b1 in -1.0f64..2.0,
                        r in 0.0f64..0.5, t in -3.1f64..3.1) {
        let x1 = Complex64::from_polar(r, t);
        let args = LauricellaArgs::real(a, [b1, 0.0, 0.0, 0.0], a + gap, [x1, c(0.2, 0.1), c(-0.3, 0.0), c(0.0, 0.4)]).unwrap();
        let expected = hyp2f1_real(a, b1, a + gap, x1);
        let s = lauricella_fd_series(&args, 1e-14).unwrap().value;
        prop_assert!(rel(s, expected) < 1e-8, "series {} vs {}", s, expected);
        let i = lauricella_fd_integral(&args, 1e-13).unwrap().value;
        prop_assert!(rel(i, expected) < 1e-8, "integral {} vs {}", i, expected);
    }

    #[test]
    fn series_integral_agree(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let args = random_args(&mut rng);
        let s = lauricella_fd_series(&args, 1e-14).unwrap().value;
        let i = lauricella_fd_integral(&args, 1e-13).unwrap().value;
        prop_assert!(rel(s, i) <= 1e-8);
    }

    #[test]
    fn kummer_transformation(a in 0.1f64..3.0, db in 0.1f64..3.0, re in -20.0f64..20.0, im in -20.0f64..20.0) {
        // phi(a, b; z) = e^z phi(b - a, b; -z)
        let (a, b, z) = (Complex64::from(a), Complex64::from(a + db), c(re, im));
        let lhs = kummer_phi(a, b, z).unwrap();
        let rhs = z.exp() * kummer_phi(b - a, b, -z).unwrap();
        prop_assert!(rel(lhs, rhs) < 1e-9, "{} vs {}", lhs, rhs);
    }

    #[test]
    fn gamma_recurrence(re in -4.5f64..8.0, im in -5.0f64..5.0) {
        let z = c(re, im);
        prop_assume!(!is_nonpositive_integer(z) && (z - z.re.round()).norm() > 1e-3);
        prop_assert!(rel(gamma(z + 1.0), z * gamma(z)) < 1e-12);
    }
}
