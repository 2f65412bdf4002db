//! Dense BFGS minimizer with a backtracking Armijo line search.

use alloc::vec;
use alloc::vec::Vec;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BfgsOptions {
    pub max_iters: usize,
    /// Stop after two consecutive iterations improving by less than this.
    pub f_tol: f64,
    /// Stop once the largest gradient component falls below this.
    pub g_tol: f64,
}

impl Default for BfgsOptions {
    fn default() -> Self {
        BfgsOptions {
            max_iters: 1000,
            f_tol: 1e-10,
            g_tol: 1e-9,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BfgsOutcome {
    pub x: Vec<f64>,
    pub value: f64,
    pub iterations: usize,
    pub evaluations: usize,
    /// True when a tolerance was met rather than `max_iters` or a failed line
    /// search.
    pub converged: bool,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn max_abs(a: &[f64]) -> f64 {
    a.iter().fold(0.0, |m, x| m.max(x.abs()))
}

/// Minimizes `f`, which returns the objective and writes the gradient into
/// its second argument.
pub fn minimize<F>(mut f: F, x0: Vec<f64>, opts: &BfgsOptions) -> BfgsOutcome
where
    F: FnMut(&[f64], &mut [f64]) -> f64,
{
    const ARMIJO: f64 = 1e-4;
    const MAX_HALVINGS: usize = 50;

    let n = x0.len();
    let mut x = x0;
    let mut g = vec![0.0; n];
    let mut fx = f(&x, &mut g);
    let mut evaluations = 1;
    // inverse Hessian approximation, row-major
    let mut h = identity(n);
    let mut fresh_h = true;
    let mut small_steps = 0;
    let mut converged = false;
    let mut iterations = 0;

    let mut x_new = vec![0.0; n];
    let mut g_new = vec![0.0; n];
    let mut dir = vec![0.0; n];

    while iterations < opts.max_iters {
        if max_abs(&g) < opts.g_tol {
            converged = true;
            break;
        }
        iterations += 1;
        mat_vec_neg(&h, &g, &mut dir);
        let mut slope = dot(&dir, &g);
        if slope >= 0.0 {
            // not a descent direction: fall back to steepest descent
            h = identity(n);
            fresh_h = true;
            for (d, gi) in dir.iter_mut().zip(&g) {
                *d = -gi;
            }
            slope = dot(&dir, &g);
        }

        let mut step = 1.0;
        let mut accepted = None;
        for _ in 0..MAX_HALVINGS {
            for i in 0..n {
                x_new[i] = x[i] + step * dir[i];
            }
            let f_new = f(&x_new, &mut g_new);
            evaluations += 1;
            if f_new.is_finite() && f_new <= fx + ARMIJO * step * slope {
                accepted = Some(f_new);
                break;
            }
            step *= 0.5;
        }
        let Some(f_new) = accepted else {
            if fresh_h {
                break;
            }
            h = identity(n);
            fresh_h = true;
            continue;
        };

        let s: Vec<f64> = (0..n).map(|i| x_new[i] - x[i]).collect();
        let y: Vec<f64> = (0..n).map(|i| g_new[i] - g[i]).collect();
        let sy = dot(&s, &y);
        if sy > 1e-14 * libm::sqrt(dot(&s, &s) * dot(&y, &y)) {
            if fresh_h {
                let scale = sy / dot(&y, &y);
                for (i, v) in h.iter_mut().enumerate() {
                    *v = if i / n == i % n { scale } else { 0.0 };
                }
                fresh_h = false;
            }
            bfgs_update(&mut h, &s, &y, sy);
        }

        let improvement = fx - f_new;
        core::mem::swap(&mut x, &mut x_new);
        core::mem::swap(&mut g, &mut g_new);
        fx = f_new;

        if improvement.abs() <= opts.f_tol * (1.0 + fx.abs()) {
            small_steps += 1;
            if small_steps >= 2 {
                converged = true;
                break;
            }
        } else {
            small_steps = 0;
        }
    }

    BfgsOutcome {
        x,
        value: fx,
        iterations,
        evaluations,
        converged,
    }
}

fn identity(n: usize) -> Vec<f64> {
    let mut h = vec![0.0; n * n];
    for i in 0..n {
        h[i * n + i] = 1.0;
    }
    h
}

fn mat_vec_neg(h: &[f64], g: &[f64], out: &mut [f64]) {
    let n = g.len();
    for i in 0..n {
        out[i] = -dot(&h[i * n..(i + 1) * n], g);
    }
}

/// `H ← (I - ρ s yᵀ) H (I - ρ y sᵀ) + ρ s sᵀ` with `ρ = 1/(sᵀy)`.
fn bfgs_update(h: &mut [f64], s: &[f64], y: &[f64], sy: f64) {
    let n = s.len();
    let rho = 1.0 / sy;
    let mut hy = vec![0.0; n];
    for i in 0..n {
        hy[i] = dot(&h[i * n..(i + 1) * n], y);
    }
    let yhy = dot(y, &hy);
    let coef = rho * rho * yhy + rho;
    for i in 0..n {
        for j in 0..n {
            h[i * n + j] += coef * s[i] * s[j] - rho * (hy[i] * s[j] + s[i] * hy[j]);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rosenbrock() {
        let out = minimize(
            |x, g| {
                let (a, b) = (x[0], x[1]);
                g[0] = -2.0 * (1.0 - a) - 400.0 * a * (b - a * a);
                g[1] = 200.0 * (b - a * a);
                (1.0 - a).powi(2) + 100.0 * (b - a * a).powi(2)
            },
            vec![-1.2, 1.0],
            &BfgsOptions::default(),
        );
        assert!(out.converged);
        assert!((out.x[0] - 1.0).abs() < 1e-5 && (out.x[1] - 1.0).abs() < 1e-5);
    }

    #[test]
    fn quadratic_in_few_iterations() {
        let out = minimize(
            |x, g| {
                g[0] = 2.0 * (x[0] - 3.0);
                g[1] = 20.0 * (x[1] + 1.0);
                (x[0] - 3.0).powi(2) + 10.0 * (x[1] + 1.0).powi(2)
            },
            vec![0.0, 0.0],
            &BfgsOptions::default(),
        );
        assert!(out.iterations < 20);
        assert!(out.value < 1e-12);
    }
}
