//! Brute-force grid oracles for binary `X, Y` and a binary auxiliary, using
//! their own closed-loop formulas (independent of the tensor machinery).

use crate::error::{Error, Result};
use crate::info::JointPmf;

/// Default points per axis.
pub const DEFAULT_RESOLUTION: usize = 64;

const MAX_WYNER_RESOLUTION: usize = 4096;

#[derive(Clone, Debug, PartialEq)]
pub struct GridResult {
    pub value: f64,
    /// Wyner: `(p(u=0), p(x=0|u=0), p(x=0|u=1), p(y=0|u=0), p(y=0|u=1))`;
    /// channels: `p(u=0|x,y)` for `(x,y)` in row-major order.
    pub params: Vec<f64>,
}

fn h2(p: f64) -> f64 {
    let f = |v: f64| if v > 0.0 { -v * v.log2() } else { 0.0 };
    f(p) + f(1.0 - p)
}

fn hvec(v: &[f64]) -> f64 {
    v.iter().map(|&p| if p > 0.0 { -p * p.log2() } else { 0.0 }).sum()
}

fn binary_pair(q: &JointPmf) -> Result<[f64; 4]> {
    if q.sizes() != [2, 2] {
        return Err(Error::Argument("grid oracle needs a 2x2 pmf".into()));
    }
    let p = q.probs();
    Ok([p[0], p[1], p[2], p[3]])
}

/// `I(X,Y;U)` of `p(u) p(x|u) p(y|u)` for `p(u=0) = pi`, given `(alpha0, alpha1)` and
/// `(beta0, beta1)` as the `P(X=0|u)`, `P(Y=0|u)` values.
fn wyner_value(hq: f64, pi: f64, a: [f64; 2], b: [f64; 2]) -> f64 {
    hq - pi * (h2(a[0]) + h2(b[0])) - (1.0 - pi) * (h2(a[1]) + h2(b[1]))
}

/// Solves the marginal constraints for `(alpha1, beta0, beta1)`; `None` if infeasible.
fn wyner_point(q: &[f64; 4], pi: f64, a0: f64) -> Option<([f64; 2], [f64; 2])> {
    let qx0 = q[0] + q[1];
    let qy0 = q[0] + q[2];
    let a1 = (qx0 - pi * a0) / (1.0 - pi);
    let eps = 1e-12;
    if !(-eps..=1.0 + eps).contains(&a1) || (a1 - a0).abs() < 1e-9 {
        return None;
    }
    let b0 = (qy0 * a1 - q[0]) / (pi * (a1 - a0));
    let b1 = (q[0] - a0 * qy0) / ((1.0 - pi) * (a1 - a0));
    if !(-eps..=1.0 + eps).contains(&b0) || !(-eps..=1.0 + eps).contains(&b1) {
        return None;
    }
    let c = |v: f64| v.clamp(0.0, 1.0);
    Some(([a0, c(a1)], [c(b0), c(b1)]))
}

/// Wyner's common information with `|U| = 2`: an exhaustive grid over the exact
/// two-parameter family `(p(u=0), p(x=0|u=0))` satisfying the marginal
/// constraints, followed by zoomed refinement.
pub fn wyner_grid(q: &JointPmf, resolution: usize) -> Result<GridResult> {
    let q = binary_pair(q)?;
    let res = resolution.max(DEFAULT_RESOLUTION);
    let hq = hvec(&q);
    let qx0 = q[0] + q[1];
    let qy0 = q[0] + q[2];
    if (q[0] - qx0 * qy0).abs() < 1e-15 {
        return Ok(GridResult {
            value: 0.0,
            params: vec![1.0, qx0, qx0, qy0, qy0],
        });
    }
    let mut best: Option<(f64, f64, f64)> = None;
    let consider = |pi: f64, a0: f64, best: &mut Option<(f64, f64, f64)>| {
        if !(pi > 0.0 && pi < 1.0 && (0.0..=1.0).contains(&a0)) {
            return;
        }
        if let Some((a, b)) = wyner_point(&q, pi, a0) {
            let v = wyner_value(hq, pi, a, b);
            if best.is_none_or(|(bv, _, _)| v < bv) {
                *best = Some((v, pi, a0));
            }
        }
    };
    // thin feasible sets need finer grids
    let mut res = res;
    while best.is_none() && res <= MAX_WYNER_RESOLUTION {
        for i in 0..res {
            let pi = (i as f64 + 0.5) / res as f64;
            for j in 0..res {
                consider(pi, j as f64 / (res - 1) as f64, &mut best);
            }
        }
        res *= 4;
    }
    let (_, mut cpi, mut ca0) = best.ok_or_else(|| Error::Internal("empty Wyner grid".into()))?;
    let mut half = 8.0 / res as f64;
    for _ in 0..14 {
        let n = 24;
        for i in 0..=n {
            for j in 0..=n {
                let pi = cpi - half + 2.0 * half * i as f64 / n as f64;
                let a0 = (ca0 - half + 2.0 * half * j as f64 / n as f64).clamp(0.0, 1.0);
                consider(pi, a0, &mut best);
            }
        }
        let b = best.unwrap();
        cpi = b.1;
        ca0 = b.2;
        half /= 4.0;
    }
    let (v, pi, a0) = best.unwrap();
    let (a, b) = wyner_point(&q, pi, a0).unwrap();
    Ok(GridResult {
        value: v,
        params: vec![pi, a[0], a[1], b[0], b[1]],
    })
}

/// `(I(X,Y;U), I(X;Y|U))` for `p(u=0|x,y) = c[2x+y]`.
pub fn channel_terms(q: &[f64; 4], c: &[f64; 4]) -> (f64, f64) {
    let hq = hvec(q);
    let mut mi = hq;
    let mut cmi = 0.0;
    for u in 0..2 {
        let r: Vec<f64> = (0..4)
            .map(|i| q[i] * if u == 0 { c[i] } else { 1.0 - c[i] })
            .collect();
        let pu: f64 = r.iter().sum();
        if pu <= 0.0 {
            continue;
        }
        let hxy_u = hvec(&r.iter().map(|v| v / pu).collect::<Vec<_>>());
        let px = [(r[0] + r[1]) / pu, (r[2] + r[3]) / pu];
        let py = [(r[0] + r[2]) / pu, (r[1] + r[3]) / pu];
        mi -= pu * hxy_u;
        cmi += pu * (hvec(&px) + hvec(&py) - hxy_u);
    }
    (mi, cmi)
}

/// Minimizes `objective(mi, cmi)` (return `None` for infeasible points) over a
/// grid on `p(u=0|x,y)`, using the label symmetry `c[0] <= 1/2`, then zooms.
pub fn channel_grid(
    q: &JointPmf,
    resolution: usize,
    objective: impl Fn(f64, f64) -> Option<f64>,
) -> Result<GridResult> {
    let q = binary_pair(q)?;
    let res = resolution.max(2);
    let grid: Vec<f64> = (0..res).map(|i| i as f64 / (res - 1) as f64).collect();
    let mut best: Option<(f64, [f64; 4])> = None;
    let consider = |c: [f64; 4], best: &mut Option<(f64, [f64; 4])>| {
        let (mi, cmi) = channel_terms(&q, &c);
        if let Some(v) = objective(mi, cmi) {
            if best.is_none_or(|(bv, _)| v < bv) {
                *best = Some((v, c));
            }
        }
    };
    for &c0 in grid.iter().filter(|&&v| v <= 0.5) {
        for &c1 in &grid {
            for &c2 in &grid {
                for &c3 in &grid {
                    consider([c0, c1, c2, c3], &mut best);
                }
            }
        }
    }
    let (_, mut center) = best.ok_or_else(|| Error::Internal("no feasible grid point".into()))?;
    let mut half = 2.0 / (res - 1) as f64;
    let n = 8;
    for _ in 0..14 {
        let mut c = [0.0; 4];
        for idx in 0..(n + 1usize).pow(4) {
            let mut rem = idx;
            for (d, slot) in c.iter_mut().enumerate() {
                let step = rem % (n + 1);
                rem /= n + 1;
                *slot = (center[d] - half + 2.0 * half * step as f64 / n as f64).clamp(0.0, 1.0);
            }
            consider(c, &mut best);
        }
        center = best.unwrap().1;
        half /= 3.0;
    }
    let (v, c) = best.unwrap();
    Ok(GridResult {
        value: v,
        params: c.to_vec(),
    })
}

/// `min max{I(X;Y|U), I(X,Y;U)}` with `|U| = 2`.
pub fn r_opt_two_grid(q: &JointPmf, resolution: usize) -> Result<GridResult> {
    channel_grid(q, resolution, |mi, cmi| Some(mi.max(cmi)))
}

/// `min max{I(X;Y|U), (I(X,Y;U) + I(X;Y|U)) / 2}` with `|U| = 2`.
pub fn r_opt_two_alternate_grid(q: &JointPmf, resolution: usize) -> Result<GridResult> {
    channel_grid(q, resolution, |mi, cmi| Some(cmi.max(0.5 * (mi + cmi))))
}

/// `C_gamma` with `|U| = 2`.
pub fn relaxed_grid(q: &JointPmf, gamma: f64, resolution: usize) -> Result<GridResult> {
    channel_grid(q, resolution, |mi, cmi| (cmi <= gamma).then_some(mi))
}
