//! Real trigonometric series on the circle.
//!
//! Coefficients are stored as `[a0, a1..aK, b1..bK]` and represent
//! `a0 + sum_k a_k cos(k t) + b_k sin(k t)`.

use std::f64::consts::PI;

pub fn uniform_angles(n: usize) -> Vec<f64> {
    (0..n).map(|i| 2.0 * PI * i as f64 / n as f64).collect()
}

/// `(cos, sin)` of `2πj/n` for `j < n`.
fn table(n: usize) -> Vec<(f64, f64)> {
    (0..n)
        .map(|j| {
            let (s, c) = (2.0 * PI * j as f64 / n as f64).sin_cos();
            (c, s)
        })
        .collect()
}

pub fn modes_of(coeffs: &[f64]) -> usize {
    (coeffs.len() - 1) / 2
}

/// Value, first and second derivative of the series at `theta`.
pub fn eval3(coeffs: &[f64], theta: f64) -> (f64, f64, f64) {
    let k_max = modes_of(coeffs);
    let (s1, c1) = theta.sin_cos();
    let (mut s, mut c) = (0.0_f64, 1.0_f64);
    let mut v = coeffs[0];
    let mut d1 = 0.0;
    let mut d2 = 0.0;
    for k in 1..=k_max {
        let (sn, cn) = (s * c1 + c * s1, c * c1 - s * s1);
        s = sn;
        c = cn;
        let a = coeffs[k];
        let b = coeffs[k_max + k];
        let kf = k as f64;
        v += a * c + b * s;
        d1 += kf * (b * c - a * s);
        d2 -= kf * kf * (a * c + b * s);
    }
    (v, d1, d2)
}

pub fn eval(coeffs: &[f64], theta: f64) -> f64 {
    let k_max = modes_of(coeffs);
    let (s1, c1) = theta.sin_cos();
    let (mut s, mut c) = (0.0_f64, 1.0_f64);
    let mut v = coeffs[0];
    for k in 1..=k_max {
        let (sn, cn) = (s * c1 + c * s1, c * c1 - s * s1);
        s = sn;
        c = cn;
        v += coeffs[k] * c + coeffs[k_max + k] * s;
    }
    v
}

/// Least-squares projection of uniform samples onto the first `k` modes.
///
/// With `k == n / 2` the result interpolates the samples exactly (the
/// Nyquist cosine gets weight `1/n` and its sine partner is zero).
pub fn analyze(samples: &[f64], k: usize) -> Vec<f64> {
    let n = samples.len();
    debug_assert!(2 * k <= n);
    let tab = table(n);
    let mut out = vec![0.0; 2 * k + 1];
    out[0] = samples.iter().sum::<f64>() / n as f64;
    for m in 1..=k {
        let mut a = 0.0;
        let mut b = 0.0;
        for (i, &x) in samples.iter().enumerate() {
            let (c, s) = tab[(m * i) % n];
            a += x * c;
            b += x * s;
        }
        if 2 * m == n {
            out[m] = a / n as f64;
            out[k + m] = 0.0;
        } else {
            out[m] = 2.0 * a / n as f64;
            out[k + m] = 2.0 * b / n as f64;
        }
    }
    out
}

/// Evaluate the series at the `n` uniform angles.
pub fn synthesize(coeffs: &[f64], n: usize) -> Vec<f64> {
    let k_max = modes_of(coeffs);
    let tab = table(n);
    (0..n)
        .map(|i| {
            let mut v = coeffs[0];
            for k in 1..=k_max {
                let (c, s) = tab[(k * i) % n];
                v += coeffs[k] * c + coeffs[k_max + k] * s;
            }
            v
        })
        .collect()
}

/// Spectral derivative of order `order` sampled at the `n` uniform angles.
pub fn derivative_samples(coeffs: &[f64], n: usize, order: u32) -> Vec<f64> {
    let k_max = modes_of(coeffs);
    let tab = table(n);
    (0..n)
        .map(|i| {
            let mut v = 0.0;
            for k in 1..=k_max {
                let (c, s) = tab[(k * i) % n];
                let (a, b) = (coeffs[k], coeffs[k_max + k]);
                let kf = (k as f64).powi(order as i32);
                v += kf
                    * match order % 4 {
                        0 => a * c + b * s,
                        1 => b * c - a * s,
                        2 => -(a * c + b * s),
                        _ => a * s - b * c,
                    };
            }
            v
        })
        .collect()
}

/// Copy of `coeffs` with the mode count changed (zero padded or truncated).
pub fn resize(coeffs: &[f64], k_new: usize) -> Vec<f64> {
    let k_old = modes_of(coeffs);
    let mut out = vec![0.0; 2 * k_new + 1];
    out[0] = coeffs[0];
    for k in 1..=k_new.min(k_old) {
        out[k] = coeffs[k];
        out[k_new + k] = coeffs[k_old + k];
    }
    out
}

/// Continuum `L^2(S^1)` and `H^1` weights of one coefficient slot.
pub fn slot_mode(index: usize, k_max: usize) -> usize {
    if index == 0 {
        0
    } else if index <= k_max {
        index
    } else {
        index - k_max
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn analyze_then_synthesize_interpolates() {
        let n = 16;
        let samples: Vec<f64> = (0..n).map(|i| 1.0 + 0.1 * ((i * 7 % 5) as f64)).collect();
        let c = analyze(&samples, n / 2);
        let back = synthesize(&c, n);
        for (a, b) in samples.iter().zip(&back) {
            assert!((a - b).abs() < 1e-13);
        }
    }

    #[test]
    fn derivatives_of_single_mode() {
        // 2 cos 3t + 0.5 sin t
        let mut c = vec![0.0; 7];
        c[3] = 2.0;
        c[4] = 0.5;
        let t = 0.37;
        let (v, d1, d2) = eval3(&c, t);
        assert!((v - (2.0 * (3.0 * t).cos() + 0.5 * t.sin())).abs() < 1e-14);
        assert!((d1 - (-6.0 * (3.0 * t).sin() + 0.5 * t.cos())).abs() < 1e-13);
        assert!((d2 - (-18.0 * (3.0 * t).cos() - 0.5 * t.sin())).abs() < 1e-12);
        let ds = derivative_samples(&c, 8, 1);
        let (_, d1s, _) = eval3(&c, 2.0 * PI * 3.0 / 8.0);
        assert!((ds[3] - d1s).abs() < 1e-12);
    }
}
