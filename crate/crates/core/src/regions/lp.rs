//! Dense two-phase simplex over exact rationals with Bland's rule.

use num::{Signed, Zero};

use super::rational::Rational;

#[derive(Clone, Debug, PartialEq)]
pub enum LpOutcome {
    Optimal { value: Rational, x: Vec<Rational> },
    Infeasible,
    Unbounded,
}

/// One constraint `coeffs . x >= rhs`.
#[derive(Clone, Debug, PartialEq)]
pub struct GeRow {
    pub coeffs: Vec<Rational>,
    pub rhs: Rational,
}

fn pivot(t: &mut [Vec<Rational>], r: usize, c: usize) {
    let p = t[r][c].clone();
    for v in t[r].iter_mut() {
        *v = &*v / &p;
    }
    let row = t[r].clone();
    for (i, ti) in t.iter_mut().enumerate() {
        if i == r || ti[c].is_zero() {
            continue;
        }
        let f = ti[c].clone();
        for (v, rv) in ti.iter_mut().zip(&row) {
            if !rv.is_zero() {
                *v -= &f * rv;
            }
        }
    }
}

/// Runs primal simplex on columns `< allowed`; false when unbounded.
fn simplex(t: &mut [Vec<Rational>], basis: &mut [usize], allowed: usize) -> bool {
    let m = basis.len();
    let rhs = t[0].len() - 1;
    loop {
        let Some(e) = (0..allowed).find(|&j| t[m][j].is_negative()) else {
            return true;
        };
        let mut best: Option<(usize, Rational)> = None;
        for i in 0..m {
            if t[i][e].is_positive() {
                let ratio = &t[i][rhs] / &t[i][e];
                let better = match &best {
                    None => true,
                    Some((bi, br)) => ratio < *br || (ratio == *br && basis[i] < basis[*bi]),
                };
                if better {
                    best = Some((i, ratio));
                }
            }
        }
        let Some((r, _)) = best else {
            return false;
        };
        pivot(t, r, e);
        basis[r] = e;
    }
}

/// Minimizes `cost . x` subject to `rows`, with `x_j >= 0` where `nonneg[j]`.
pub fn minimize(cost: &[Rational], nonneg: &[bool], rows: &[GeRow]) -> LpOutcome {
    let n = cost.len();
    assert_eq!(nonneg.len(), n);
    let mut cols: Vec<(usize, bool)> = Vec::new();
    for j in 0..n {
        cols.push((j, false));
        if !nonneg[j] {
            cols.push((j, true));
        }
    }
    let nx = cols.len();
    let m = rows.len();
    let ncol = nx + 2 * m;
    let zero = Rational::zero();
    let one = Rational::from_integer(1.into());
    let mut t = vec![vec![zero.clone(); ncol + 1]; m + 1];
    for (i, row) in rows.iter().enumerate() {
        assert_eq!(row.coeffs.len(), n);
        let flip = row.rhs.is_negative();
        for (c, &(j, neg)) in cols.iter().enumerate() {
            let mut v = row.coeffs[j].clone();
            if neg != flip {
                v = -v;
            }
            t[i][c] = v;
        }
        t[i][nx + i] = if flip { one.clone() } else { -one.clone() };
        t[i][nx + m + i] = one.clone();
        t[i][ncol] = if flip { -row.rhs.clone() } else { row.rhs.clone() };
    }
    let mut basis: Vec<usize> = (0..m).map(|i| nx + m + i).collect();
    for j in 0..=ncol {
        let mut d = if (nx + m..ncol).contains(&j) { one.clone() } else { zero.clone() };
        for row in t.iter().take(m) {
            d -= &row[j];
        }
        t[m][j] = d;
    }
    simplex(&mut t, &mut basis, ncol);
    if t[m][ncol].is_negative() {
        return LpOutcome::Infeasible;
    }
    for i in 0..m {
        if basis[i] >= nx + m {
            if let Some(j) = (0..nx + m).find(|&j| !t[i][j].is_zero()) {
                pivot(&mut t, i, j);
                basis[i] = j;
            }
        }
    }
    for j in 0..=ncol {
        t[m][j] = if j < nx {
            let (v, neg) = cols[j];
            if neg {
                -cost[v].clone()
            } else {
                cost[v].clone()
            }
        } else {
            zero.clone()
        };
    }
    for i in 0..m {
        let cb = t[m][basis[i]].clone();
        if !cb.is_zero() {
            for j in 0..=ncol {
                let v = &cb * &t[i][j];
                t[m][j] -= v;
            }
        }
    }
    if !simplex(&mut t, &mut basis, nx + m) {
        return LpOutcome::Unbounded;
    }
    let mut x = vec![zero.clone(); n];
    for (i, &b) in basis.iter().enumerate() {
        if b < nx {
            let (v, neg) = cols[b];
            if neg {
                x[v] -= &t[i][ncol];
            } else {
                x[v] += &t[i][ncol];
            }
        }
    }
    LpOutcome::Optimal {
        value: -t[m][ncol].clone(),
        x,
    }
}

/// A feasible point, if one exists.
pub fn feasible_point(n: usize, nonneg: &[bool], rows: &[GeRow]) -> Option<Vec<Rational>> {
    match minimize(&vec![Rational::zero(); n], nonneg, rows) {
        LpOutcome::Optimal { x, .. } => Some(x),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::regions::rational::q;

    fn row(c: &[i64], b: i64) -> GeRow {
        GeRow {
            coeffs: c.iter().map(|&v| q(v, 1)).collect(),
            rhs: q(b, 1),
        }
    }

    #[test]
    fn small_programs() {
        // min x + y s.t. x + 2y >= 4, 3x + y >= 6, x, y >= 0  -> (8/5, 6/5), value 14/5
        let out = minimize(&[q(1, 1), q(1, 1)], &[true, true], &[row(&[1, 2], 4), row(&[3, 1], 6)]);
        match out {
            LpOutcome::Optimal { value, x } => {
                assert_eq!(value, q(14, 5));
                assert_eq!(x, vec![q(8, 5), q(6, 5)]);
            }
            other => panic!("{other:?}"),
        }
        assert_eq!(
            minimize(&[q(1, 1)], &[false], &[row(&[1], 1), row(&[-1], 0)]),
            LpOutcome::Infeasible
        );
        assert_eq!(minimize(&[q(-1, 1)], &[true], &[row(&[1], 1)]), LpOutcome::Unbounded);
        // free variable with negative optimum
        match minimize(&[q(1, 1)], &[false], &[row(&[1], -3)]) {
            LpOutcome::Optimal { value, .. } => assert_eq!(value, q(-3, 1)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn degenerate_rows() {
        // duplicated and zero rows are harmless
        let rows = [row(&[1, 1], 1), row(&[1, 1], 1), row(&[0, 0], 0), row(&[2, 2], 2)];
        match minimize(&[q(1, 1), q(2, 1)], &[true, true], &rows) {
            LpOutcome::Optimal { value, .. } => assert_eq!(value, q(1, 1)),
            other => panic!("{other:?}"),
        }
        assert!(feasible_point(2, &[true, true], &rows).is_some());
    }
}
