use std::f64::consts::PI;

/// Physicists' Hermite polynomial `H_n(x)` by the three-term recurrence.
pub fn hermite_poly(n: u32, x: f64) -> f64 {
    let mut prev = 1.0;
    if n == 0 {
        return prev;
    }
    let mut cur = 2.0 * x;
    for k in 1..n {
        let next = 2.0 * x * cur - 2.0 * k as f64 * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Normalized Hermite function `(sqrt(pi) 2^n n!)^(-1/2) e^(-x^2/2) H_n(x)`.
///
/// Runs the recurrence on the normalized functions themselves,
/// `h_{k+1} = sqrt(2/(k+1)) x h_k - sqrt(k/(k+1)) h_{k-1}`, with the Gaussian
/// factor and any overflow rescaling carried in a separate log-scale. No
/// factorial is ever formed, so large `n` and `|x|` stay finite.
pub fn hermite_function(n: u32, x: f64) -> f64 {
    const RESCALE: f64 = 1e150;
    let mut log_scale = -0.5 * x * x;
    let mut prev = PI.powf(-0.25);
    if n == 0 {
        return prev * log_scale.exp();
    }
    let mut cur = 2f64.sqrt() * x * prev;
    for k in 1..n {
        let kf = k as f64;
        let next = (2.0 / (kf + 1.0)).sqrt() * x * cur - (kf / (kf + 1.0)).sqrt() * prev;
        prev = cur;
        cur = next;
        if cur.abs() > RESCALE {
            cur /= RESCALE;
            prev /= RESCALE;
            log_scale += RESCALE.ln();
        }
    }
    cur * log_scale.exp()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn low_order_polynomials() {
        assert_eq!(hermite_poly(0, 3.7), 1.0);
        assert_eq!(hermite_poly(2, 1.0), 2.0);
        assert_eq!(hermite_poly(3, 0.5), -5.0);
        assert_eq!(hermite_poly(4, 1.0), 16.0 - 48.0 + 12.0);
    }

    #[test]
    fn function_at_origin() {
        assert!((hermite_function(0, 0.0) - PI.powf(-0.25)).abs() < 1e-15);
        assert_eq!(hermite_function(1, 0.0), 0.0);
        assert!((hermite_function(0, 0.0) - 0.751_125_5).abs() < 1e-7);
    }

    #[test]
    fn matches_direct_form_up_to_thirty() {
        let mut fact = 1.0;
        for n in 0..=30u32 {
            if n > 0 {
                fact *= n as f64;
            }
            let norm = (PI.sqrt() * 2f64.powi(n as i32) * fact).powf(-0.5);
            for i in 0..=24 {
                let x = -6.0 + 0.5 * i as f64;
                let direct = norm * (-0.5 * x * x).exp() * hermite_poly(n, x);
                let stable = hermite_function(n, x);
                let scale = direct.abs().max(1e-300);
                if direct.abs() > 1e-280 {
                    assert!(
                        (stable - direct).abs() <= 1e-12 * scale.max(1e-3 * norm_peak(n)),
                        "n={n} x={x}: {stable} vs {direct}"
                    );
                }
            }
        }
    }

    // rough peak magnitude of the n-th function, used to judge near-zeros
    fn norm_peak(n: u32) -> f64 {
        (0..=400)
            .map(|i| hermite_function(n, -10.0 + 0.05 * i as f64).abs())
            .fold(0.0, f64::max)
    }

    #[test]
    fn high_order_stays_finite() {
        for &n in &[200u32, 500, 1000] {
            for &x in &[0.0, 5.0, 20.0, 45.0, 60.0] {
                let v = hermite_function(n, x);
                assert!(v.is_finite(), "n={n} x={x}");
                assert!(v.abs() < 1.0);
            }
        }
        // far outside the oscillatory region the function is negligible
        assert!(hermite_function(200, 60.0).abs() < 1e-100);
    }
}
