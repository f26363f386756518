//! Multistart driver: smooth-max continuation, augmented Lagrangian for
//! constraints, L-BFGS inner solves, and exact-max polishing.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::config::{OptimizerConfig, RestartRecord};
use super::lbfgs::{self, LbfgsOptions};
use super::model::{Init, Model};

/// Log-sum-exp sharpness schedule for smoothed maxima.
pub const SHARPNESS: [f64; 4] = [10.0, 1e2, 1e3, 1e4];

pub(crate) fn exact_max(v: &[f64]) -> f64 {
    v.iter().copied().fold(f64::NEG_INFINITY, f64::max)
}

/// `(1/beta) log2-free log-sum-exp`, an upper bound within `ln(k)/beta` of the max.
pub(crate) fn smooth_max(v: &[f64], beta: f64) -> f64 {
    let m = exact_max(v);
    if !m.is_finite() {
        return m;
    }
    m + v.iter().map(|x| ((x - m) * beta).exp()).sum::<f64>().ln() / beta
}

/// A scalar objective over a factor model, with optional constraints
/// `eq(joint) = 0` and `ineq(joint) <= 0`.
pub(crate) trait Objective: Sync {
    fn model(&self) -> &Model;
    /// Objective value with `smax` standing in for every maximum.
    fn value(&self, joint: &[f64], smax: &dyn Fn(&[f64]) -> f64) -> f64;
    fn uses_max(&self) -> bool {
        true
    }
    fn eq(&self, _joint: &[f64]) -> Vec<f64> {
        Vec::new()
    }
    fn ineq(&self, _joint: &[f64]) -> Vec<f64> {
        Vec::new()
    }
    /// Largest tolerated constraint violation for a restart to count as feasible.
    fn tolerance(&self) -> f64 {
        1e-6
    }
    /// Initial quadratic penalty weight of the augmented Lagrangian.
    fn initial_penalty(&self) -> f64 {
        10.0
    }
    /// Maps a starting point to the one the restart actually begins from.
    fn prepare(&self, theta: Vec<f64>) -> Vec<f64> {
        theta
    }
}

#[derive(Clone, Debug)]
pub(crate) struct RestartOutcome {
    pub index: usize,
    pub theta: Vec<f64>,
    pub value: f64,
    pub violation: f64,
    pub iterations: usize,
    pub converged: bool,
}

impl RestartOutcome {
    pub fn record(&self, tol: f64) -> RestartRecord {
        RestartRecord {
            index: self.index,
            value: self.value,
            violation: self.violation,
            iterations: self.iterations,
            converged: self.converged && self.violation <= tol,
        }
    }
}

pub(crate) fn violation(obj: &dyn Objective, joint: &[f64]) -> f64 {
    let e = obj.eq(joint).iter().fold(0.0f64, |m, c| m.max(c.abs()));
    let i = obj.ineq(joint).iter().fold(0.0f64, |m, c| m.max(*c));
    e.max(i)
}

struct Multipliers {
    eq: Vec<f64>,
    ineq: Vec<f64>,
    mu: f64,
}

fn penalty(obj: &dyn Objective, joint: &[f64], m: &Multipliers) -> f64 {
    let mut v = 0.0;
    if !m.eq.is_empty() {
        for (c, l) in obj.eq(joint).iter().zip(&m.eq) {
            v += l * c + 0.5 * m.mu * c * c;
        }
    }
    if !m.ineq.is_empty() {
        for (g, l) in obj.ineq(joint).iter().zip(&m.ineq) {
            let s = (l + m.mu * g).max(0.0);
            v += (s * s - l * l) / (2.0 * m.mu);
        }
    }
    v
}

fn penalized(obj: &dyn Objective, joint: &[f64], smax: &dyn Fn(&[f64]) -> f64, m: &Multipliers) -> f64 {
    obj.value(joint, smax) + penalty(obj, joint, m)
}

fn run_one(obj: &dyn Objective, theta0: Vec<f64>, cfg: &OptimizerConfig, index: usize) -> RestartOutcome {
    let model = obj.model();
    let opts = LbfgsOptions {
        max_iters: cfg.max_iters,
        step_tol: cfg.step_tol,
        value_tol: cfg.value_tol,
        ..Default::default()
    };
    let probe = model.joint(&theta0);
    let n_eq = obj.eq(&probe).len();
    let n_in = obj.ineq(&probe).len();
    let constrained = n_eq + n_in > 0;
    let mut m = Multipliers {
        eq: vec![0.0; n_eq],
        ineq: vec![0.0; n_in],
        mu: obj.initial_penalty(),
    };
    let schedule: Vec<Option<f64>> = if obj.uses_max() {
        SHARPNESS.iter().map(|&b| Some(b)).collect()
    } else {
        vec![None]
    };
    let mut theta = theta0;
    let mut iterations = 0;
    let mut converged = true;
    let outer = if constrained { 14 } else { 1 };
    for round in 0..outer {
        for beta in &schedule {
            let smax = |v: &[f64]| match beta {
                Some(b) => smooth_max(v, *b),
                None => exact_max(v),
            };
            let f = |t: &[f64]| penalized(obj, &model.joint(t), &smax, &m);
            let out = lbfgs::minimize(&f, theta, &opts);
            iterations += out.iters;
            converged = out.converged;
            theta = out.x;
        }
        if !constrained {
            break;
        }
        let joint = model.joint(&theta);
        let viol = violation(obj, &joint);
        for (l, c) in m.eq.iter_mut().zip(obj.eq(&joint)) {
            *l += m.mu * c;
        }
        for (l, g) in m.ineq.iter_mut().zip(obj.ineq(&joint)) {
            *l = (*l + m.mu * g).max(0.0);
        }
        if viol <= 0.1 * obj.tolerance() && round >= 2 {
            break;
        }
        m.mu = (m.mu * 4.0).min(1e6);
    }
    if obj.uses_max() {
        let f = |t: &[f64]| penalized(obj, &model.joint(t), &exact_max, &m);
        let before = f(&theta);
        let out = lbfgs::pattern_search(&f, theta.clone(), 0.05, 1e-7, 40 * (theta.len() + 1) * 20);
        if out.f < before {
            let joint = model.joint(&out.x);
            if !constrained || violation(obj, &joint) <= obj.tolerance() {
                theta = out.x;
            }
        }
    }
    let joint = model.joint(&theta);
    RestartOutcome {
        index,
        value: obj.value(&joint, &exact_max),
        violation: violation(obj, &joint),
        theta,
        iterations,
        converged,
    }
}

/// Runs `cfg.restarts` seeded restarts plus any `extra` starting points (indexed
/// after the seeded ones). Output is sorted best-first: feasible before
/// infeasible, then by value, then by index, so scheduling never matters.
pub(crate) fn multistart(
    obj: &dyn Objective,
    cfg: &OptimizerConfig,
    extra: &[Vec<f64>],
) -> Vec<RestartOutcome> {
    let model = obj.model();
    let starts: Vec<Vec<f64>> = (0..cfg.restarts)
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            rng.set_stream(i as u64);
            let kind = match i {
                0 => Init::NearUniform,
                1 => Init::Diagonal,
                _ => Init::Random,
            };
            model.init(kind, &mut rng)
        })
        .chain(extra.iter().cloned())
        .collect();
    let mut out: Vec<RestartOutcome> = starts
        .into_par_iter()
        .enumerate()
        .map(|(i, t)| run_one(obj, obj.prepare(t), cfg, i))
        .collect();
    let tol = obj.tolerance();
    out.sort_by(|a, b| {
        let fa = a.violation <= tol;
        let fb = b.violation <= tol;
        fb.cmp(&fa)
            .then(if fa && fb {
                a.value.total_cmp(&b.value)
            } else {
                a.violation.total_cmp(&b.violation)
            })
            .then(a.index.cmp(&b.index))
    });
    out
}
