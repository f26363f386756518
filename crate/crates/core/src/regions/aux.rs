//! Region evaluations at a supplied auxiliary distribution.

use super::closed::{RateTuple, REGION_SLACK};
use crate::error::{Error, Result};
use crate::info::{conditional_mutual_information, dual_total_correlation, mutual_information, JointPmf};
use crate::info::tensor;

/// Largest tolerated Markov or factorization residual of a supplied auxiliary pmf.
pub const AUX_TOLERANCE: f64 = 1e-6;

/// Largest absolute gap between `p` and `prod_f p(child_f | parents_f)`.
/// The factors must cover every axis of `p` exactly once as a child.
pub fn factorization_gap(p: &JointPmf, factors: &[(Vec<&str>, Vec<&str>)]) -> Result<f64> {
    let n = p.axes().len();
    let mut covered = vec![false; n];
    let mut parts = Vec::with_capacity(factors.len());
    for (child, parents) in factors {
        for c in child {
            let i = p.axis_index(c)?;
            if covered[i] {
                return Err(Error::Argument(format!("axis {c} is a child of two factors")));
            }
            covered[i] = true;
        }
        let mut fam: Vec<&str> = parents.clone();
        fam.extend(child.iter().copied());
        let joint = p.marginal(&fam)?;
        let given = p.marginal(parents)?;
        let pos: Vec<usize> = fam.iter().map(|a| p.axis_index(a)).collect::<Result<_>>()?;
        parts.push((joint, given, pos, parents.len()));
    }
    if let Some(i) = covered.iter().position(|c| !c) {
        return Err(Error::Argument(format!("axis {} is in no factor", p.axes()[i].name)));
    }
    let sizes = p.sizes();
    let mut coords = vec![0usize; n];
    let mut gap = 0.0f64;
    for &pv in p.probs() {
        let mut prod = 1.0;
        for (joint, given, pos, np) in &parts {
            let sub: Vec<usize> = pos.iter().map(|&i| sizes[i]).collect();
            let st = tensor::strides(&sub);
            let fi: usize = pos.iter().zip(&st).map(|(&i, s)| coords[i] * s).sum();
            let gi: usize = pos[..*np]
                .iter()
                .zip(tensor::strides(&sub[..*np]).iter())
                .map(|(&i, s)| coords[i] * s)
                .sum();
            let d = given.probs()[gi];
            prod *= if d > 0.0 { joint.probs()[fi] / d } else { 0.0 };
        }
        gap = gap.max((pv - prod).abs());
        tensor::advance(&mut coords, &sizes);
    }
    Ok(gap)
}

/// The six right-hand sides of the two-processor achievable region at `aux`
/// over axes `X, Y, U, U1, U2`, in the order of the bounds on
/// `R+R1, R+R2, R, R+R1+R2, 2R+R1+R2, 2R`.
pub fn ach_two_bounds(aux: &JointPmf) -> Result<[f64; 6]> {
    let (x, y, u, u1, u2) = (&["X"][..], &["Y"][..], &["U"][..], &["U1"][..], &["U2"][..]);
    let xy = ["X", "Y"];
    let m1 = conditional_mutual_information(aux, x, &["U2", "Y"], &["U", "U1"])?;
    let m2 = conditional_mutual_information(aux, &["X", "U1"], y, &["U", "U2"])?;
    if m1.max(m2) > AUX_TOLERANCE {
        return Err(Error::Precondition(format!(
            "auxiliary pmf violates X-(U,U1)-(U,U2)-Y: I(X;U2,Y|U,U1) = {m1:.3e}, I(X,U1;Y|U,U2) = {m2:.3e}"
        )));
    }
    let c12 = conditional_mutual_information(aux, u1, u2, u)?;
    let i_u = mutual_information(aux, &xy, u)?;
    let i_u1 = mutual_information(aux, &xy, &["U", "U1"])?;
    let i_u2 = mutual_information(aux, &xy, &["U", "U2"])?;
    let i_all = mutual_information(aux, &xy, &["U", "U1", "U2"])?;
    Ok([i_u1, i_u2, c12, c12 + i_all, c12 + i_u + i_all, c12 + i_u])
}

/// Membership of `(R, R1, R2)` in the closure of the two-processor achievable
/// region evaluated at `aux`.
pub fn region_ach_two(aux: &JointPmf, rt: &RateTuple) -> Result<bool> {
    if rt.h() != 2 {
        return Err(Error::Argument(format!("expected (R, R1, R2), got {} shared rates", rt.h())));
    }
    let b = ach_two_bounds(aux)?;
    let (r, r1, r2) = (rt.r_common, rt.r_shared[0], rt.r_shared[1]);
    let lhs = [r + r1, r + r2, r, r + r1 + r2, 2.0 * r + r1 + r2, 2.0 * r];
    Ok(lhs.iter().zip(&b).all(|(l, b)| l + REGION_SLACK >= *b))
}

/// Number of processors of a forehead auxiliary pmf over `X1..Xt, U, U1..Ut`.
fn forehead_t(aux: &JointPmf) -> Result<usize> {
    let t = aux
        .axes()
        .iter()
        .filter(|a| a.name.starts_with('X'))
        .count();
    if t == 0 || aux.axes().len() != 2 * t + 1 {
        return Err(Error::Argument(
            "forehead auxiliary pmf needs axes X1..Xt, U, U1..Ut".into(),
        ));
    }
    for i in 1..=t {
        aux.axis_index(&format!("X{i}"))?;
        aux.axis_index(&format!("U{i}"))?;
    }
    aux.axis_index("U")?;
    Ok(t)
}

/// `(r_1, ..., r_t)` of the forehead upper bound at `aux`, after checking
/// `p = p(u, u_[1:t]) prod_m p(x_m | u, u_{-m})`.
pub fn forehead_terms(aux: &JointPmf) -> Result<Vec<f64>> {
    let t = forehead_t(aux)?;
    let xs: Vec<String> = (1..=t).map(|i| format!("X{i}")).collect();
    let us: Vec<String> = (1..=t).map(|i| format!("U{i}")).collect();
    let mut factors: Vec<(Vec<&str>, Vec<&str>)> = Vec::new();
    let mut base = vec!["U"];
    base.extend(us.iter().map(String::as_str));
    factors.push((base, Vec::new()));
    for m in 0..t {
        let mut parents = vec!["U"];
        parents.extend(us.iter().enumerate().filter(|(j, _)| *j != m).map(|(_, s)| s.as_str()));
        factors.push((vec![xs[m].as_str()], parents));
    }
    let gap = factorization_gap(aux, &factors)?;
    if gap > AUX_TOLERANCE {
        return Err(Error::Precondition(format!(
            "auxiliary pmf violates the forehead factorization by {gap:.3e}"
        )));
    }
    let mut r = Vec::with_capacity(t);
    for i in 1..t {
        let mut best = f64::NEG_INFINITY;
        for mask in 0u32..(1 << t) {
            if mask.count_ones() as usize != i + 1 {
                continue;
            }
            let chosen: Vec<&str> = (0..t).filter(|j| mask >> j & 1 == 1).map(|j| us[j].as_str()).collect();
            let groups: Vec<&[&str]> = chosen.iter().map(std::slice::from_ref).collect();
            let mut cond = vec!["U"];
            cond.extend((0..t).filter(|j| mask >> j & 1 == 0).map(|j| us[j].as_str()));
            best = best.max(dual_total_correlation(aux, &groups, &cond)?);
        }
        r.push(best);
    }
    let names: Vec<&str> = us.iter().map(String::as_str).collect();
    let all: Vec<&[&str]> = names.iter().map(std::slice::from_ref).collect();
    let xnames: Vec<&str> = xs.iter().map(String::as_str).collect();
    r.push(dual_total_correlation(aux, &all, &["U"])? + mutual_information(aux, &xnames, &["U"])?);
    Ok(r)
}

/// `max_i r_i / i` at `aux`: an upper bound on the forehead optimal rate.
pub fn forehead_upper_bound(aux: &JointPmf) -> Result<f64> {
    let r = forehead_terms(aux)?;
    Ok(r.iter()
        .enumerate()
        .map(|(i, v)| v / (i + 1) as f64)
        .fold(f64::NEG_INFINITY, f64::max))
}
