//! Derivative-free minimization (Nelder–Mead with dimension-adaptive
//! coefficients).

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, PartialEq)]
pub struct NelderMeadOptions {
    pub max_evals: usize,
    /// Stop when the spread of simplex values drops below this.
    pub f_tol: f64,
    /// Edge length of the initial simplex along each coordinate.
    pub steps: Vec<f64>,
    /// Seeds the orientation of the initial simplex.
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Minimum {
    pub x: Vec<f64>,
    pub f: f64,
    pub evals: usize,
    pub converged: bool,
}

/// Minimize `f` from `x0`. Non-finite values act as barriers.
pub fn nelder_mead(mut f: impl FnMut(&[f64]) -> f64, x0: &[f64], opts: &NelderMeadOptions) -> Minimum {
    let n = x0.len();
    let mut evals = 0usize;
    let mut eval = |x: &[f64], evals: &mut usize| {
        *evals += 1;
        let v = f(x);
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    };
    let f0 = eval(x0, &mut evals);
    if n == 0 {
        return Minimum { x: vec![], f: f0, evals, converged: true };
    }
    let nf = n as f64;
    let (alpha, gamma, rho, sigma) = (1.0, 1.0 + 2.0 / nf, 0.75 - 0.5 / nf, 1.0 - 1.0 / nf);

    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut simplex: Vec<(Vec<f64>, f64)> = vec![(x0.to_vec(), f0)];
    for i in 0..n {
        let mut x = x0.to_vec();
        let sign = if opts.seed == 0 || rng.gen_bool(0.5) { 1.0 } else { -1.0 };
        x[i] += sign * opts.steps.get(i).copied().unwrap_or(0.1);
        let v = eval(&x, &mut evals);
        simplex.push((x, v));
    }

    let mut converged = false;
    while evals < opts.max_evals {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let best = simplex[0].1;
        let worst = simplex[n].1;
        if worst.is_finite() && (worst - best).abs() <= opts.f_tol {
            converged = true;
            break;
        }
        let mut centroid = vec![0.0; n];
        for (x, _) in &simplex[..n] {
            for (c, v) in centroid.iter_mut().zip(x) {
                *c += v / nf;
            }
        }
        let along = |t: f64| -> Vec<f64> {
            centroid.iter().zip(&simplex[n].0).map(|(c, w)| c + t * (c - w)).collect()
        };
        let xr = along(alpha);
        let fr = eval(&xr, &mut evals);
        if fr < simplex[0].1 {
            let xe = along(alpha * gamma);
            let fe = eval(&xe, &mut evals);
            simplex[n] = if fe < fr { (xe, fe) } else { (xr, fr) };
        } else if fr < simplex[n - 1].1 {
            simplex[n] = (xr, fr);
        } else {
            let (xc, fc) = if fr < simplex[n].1 {
                let x = along(alpha * rho);
                let v = eval(&x, &mut evals);
                (x, v)
            } else {
                let x = along(-rho);
                let v = eval(&x, &mut evals);
                (x, v)
            };
            if fc < simplex[n].1.min(fr) {
                simplex[n] = (xc, fc);
            } else {
                let x0 = simplex[0].0.clone();
                for item in simplex.iter_mut().skip(1) {
                    let x: Vec<f64> = x0.iter().zip(&item.0).map(|(b, v)| b + sigma * (v - b)).collect();
                    let v = eval(&x, &mut evals);
                    *item = (x, v);
                }
            }
        }
    }
    simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
    let (x, f) = simplex.swap_remove(0);
    Minimum { x, f, evals, converged }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn opts(n: usize, seed: u64) -> NelderMeadOptions {
        NelderMeadOptions { max_evals: 20_000, f_tol: 1e-14, steps: vec![0.5; n], seed }
    }

    #[test]
    fn rosenbrock() {
        let f = |x: &[f64]| (1.0 - x[0]).powi(2) + 100.0 * (x[1] - x[0] * x[0]).powi(2);
        let m = nelder_mead(f, &[-1.2, 1.0], &opts(2, 0));
        assert!(m.converged);
        assert!((m.x[0] - 1.0).abs() < 1e-4 && (m.x[1] - 1.0).abs() < 1e-4, "{:?}", m.x);
    }

    #[test]
    fn quadratic_in_eight_dimensions() {
        let f = |x: &[f64]| x.iter().enumerate().map(|(i, v)| (i + 1) as f64 * (v - 0.3).powi(2)).sum::<f64>();
        let m = nelder_mead(f, &[0.0; 8], &opts(8, 7));
        assert!(m.x.iter().all(|v| (v - 0.3).abs() < 1e-4), "{:?}", m.x);
    }

    #[test]
    fn barrier_values_are_avoided() {
        let f = |x: &[f64]| if x[0] < 0.5 { f64::INFINITY } else { (x[0] - 1.0).powi(2) };
        let m = nelder_mead(f, &[2.0], &opts(1, 0));
        assert!((m.x[0] - 1.0).abs() < 1e-5);
    }

    #[test]
    fn same_seed_same_path() {
        let f = |x: &[f64]| (x[0] - 1.0).powi(2) + (x[1] + x[0]).powi(2) + x[2].abs();
        let a = nelder_mead(f, &[0.0; 3], &opts(3, 42));
        let b = nelder_mead(f, &[0.0; 3], &opts(3, 42));
        assert_eq!(a, b);
    }
}
