//! Limited-memory BFGS with finite-difference gradients, plus a coordinate
//! pattern search for nonsmooth polishing.

use std::collections::VecDeque;

/// Central-difference step.
pub const FD_STEP: f64 = 1e-6;

#[derive(Clone, Copy, Debug)]
pub struct LbfgsOptions {
    pub max_iters: usize,
    pub grad_tol: f64,
    pub step_tol: f64,
    pub value_tol: f64,
    pub memory: usize,
}

impl Default for LbfgsOptions {
    fn default() -> Self {
        Self {
            max_iters: 400,
            grad_tol: 1e-9,
            step_tol: 1e-10,
            value_tol: 1e-12,
            memory: 10,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Outcome {
    pub x: Vec<f64>,
    pub f: f64,
    pub iters: usize,
    pub converged: bool,
}

pub fn fd_gradient(f: &dyn Fn(&[f64]) -> f64, x: &[f64]) -> Vec<f64> {
    let mut xp = x.to_vec();
    let mut g = vec![0.0; x.len()];
    for i in 0..x.len() {
        let xi = xp[i];
        xp[i] = xi + FD_STEP;
        let fp = f(&xp);
        xp[i] = xi - FD_STEP;
        let fm = f(&xp);
        xp[i] = xi;
        g[i] = (fp - fm) / (2.0 * FD_STEP);
    }
    g
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn inf_norm(a: &[f64]) -> f64 {
    a.iter().fold(0.0, |m, v| m.max(v.abs()))
}

/// Two-loop recursion: approximate inverse Hessian applied to `g`.
fn direction(g: &[f64], mem: &VecDeque<(Vec<f64>, Vec<f64>, f64)>) -> Vec<f64> {
    let mut q = g.to_vec();
    let mut alphas = Vec::with_capacity(mem.len());
    for (s, y, rho) in mem.iter().rev() {
        let a = rho * dot(s, &q);
        for (qi, yi) in q.iter_mut().zip(y) {
            *qi -= a * yi;
        }
        alphas.push(a);
    }
    if let Some((s, y, _)) = mem.back() {
        let gamma = dot(s, y) / dot(y, y);
        for qi in q.iter_mut() {
            *qi *= gamma;
        }
    }
    for ((s, y, rho), a) in mem.iter().zip(alphas.iter().rev()) {
        let b = rho * dot(y, &q);
        for (qi, si) in q.iter_mut().zip(s) {
            *qi += (a - b) * si;
        }
    }
    q.iter_mut().for_each(|v| *v = -*v);
    q
}

pub fn minimize(f: &dyn Fn(&[f64]) -> f64, x0: Vec<f64>, opts: &LbfgsOptions) -> Outcome {
    let mut x = x0;
    let mut fx = f(&x);
    let mut g = fd_gradient(f, &x);
    let mut mem: VecDeque<(Vec<f64>, Vec<f64>, f64)> = VecDeque::new();
    let mut iters = 0;
    let mut converged = false;
    while iters < opts.max_iters {
        if !fx.is_finite() {
            break;
        }
        if inf_norm(&g) <= opts.grad_tol {
            converged = true;
            break;
        }
        let mut d = direction(&g, &mem);
        let mut slope = dot(&g, &d);
        if slope >= 0.0 || !slope.is_finite() {
            mem.clear();
            d = g.iter().map(|v| -v).collect();
            slope = dot(&g, &d);
        }
        let mut step = if mem.is_empty() {
            (1.0 / inf_norm(&g)).min(1.0)
        } else {
            1.0
        };
        let mut accepted = None;
        for _ in 0..50 {
            let xn: Vec<f64> = x.iter().zip(&d).map(|(a, b)| a + step * b).collect();
            let fnew = f(&xn);
            if fnew.is_finite() && fnew <= fx + 1e-4 * step * slope {
                accepted = Some((xn, fnew));
                break;
            }
            step *= 0.5;
        }
        iters += 1;
        let Some((xn, fnew)) = accepted else {
            if mem.is_empty() {
                converged = true;
                break;
            }
            mem.clear();
            continue;
        };
        let gn = fd_gradient(f, &xn);
        let s: Vec<f64> = xn.iter().zip(&x).map(|(a, b)| a - b).collect();
        let y: Vec<f64> = gn.iter().zip(&g).map(|(a, b)| a - b).collect();
        let sy = dot(&s, &y);
        if sy > 1e-16 {
            if mem.len() == opts.memory {
                mem.pop_front();
            }
            mem.push_back((s.clone(), y, 1.0 / sy));
        }
        let df = fx - fnew;
        x = xn;
        fx = fnew;
        g = gn;
        if inf_norm(&s) <= opts.step_tol || df.abs() <= opts.value_tol * (1.0 + fx.abs()) {
            converged = true;
            break;
        }
    }
    Outcome {
        x,
        f: fx,
        iters,
        converged,
    }
}

/// Coordinate pattern search; halves the step after a sweep without progress.
pub fn pattern_search(
    f: &dyn Fn(&[f64]) -> f64,
    x0: Vec<f64>,
    step0: f64,
    min_step: f64,
    max_evals: usize,
) -> Outcome {
    let mut x = x0;
    let mut fx = f(&x);
    let mut step = step0;
    let mut evals = 1;
    let mut sweeps = 0;
    while step > min_step && evals < max_evals {
        let mut improved = false;
        for i in 0..x.len() {
            for dir in [1.0, -1.0] {
                let old = x[i];
                x[i] = old + dir * step;
                let fnew = f(&x);
                evals += 1;
                if fnew < fx {
                    fx = fnew;
                    improved = true;
                    break;
                }
                x[i] = old;
            }
        }
        sweeps += 1;
        if !improved {
            step *= 0.5;
        }
    }
    Outcome {
        x,
        f: fx,
        iters: sweeps,
        converged: step <= min_step,
    }
}
