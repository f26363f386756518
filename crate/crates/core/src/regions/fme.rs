//! Exact Fourier–Motzkin elimination with LP-based redundancy pruning.

use std::collections::{BTreeSet, HashMap};

use num::{Signed, Zero};

use super::linear::{canonicalize, is_trivially_true, Inequality, LinearForm, LinearSystem, Relation};
use super::lp::{minimize, GeRow, LpOutcome};
use super::rational::Rational;
use crate::error::{Error, Result};

/// Whether `target >= 0` holds on every point of `{ f >= 0 : f in given }`.
///
/// Closure semantics: strictness is ignored. An empty feasible set implies nothing
/// here, so contradictory systems are never emptied by pruning.
pub fn is_implied(target: &LinearForm, given: &[LinearForm]) -> bool {
    if is_trivially_true(target) {
        return true;
    }
    let symbols: Vec<String> = given
        .iter()
        .chain(std::iter::once(target))
        .flat_map(|f| f.symbols().map(str::to_string).collect::<Vec<_>>())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let index: HashMap<&str, usize> = symbols.iter().enumerate().map(|(i, s)| (s.as_str(), i)).collect();
    let dense = |f: &LinearForm| -> Vec<Rational> {
        let mut v = vec![Rational::zero(); symbols.len()];
        for (s, c) in f.coeffs() {
            v[index[s.as_str()]] = c.clone();
        }
        v
    };
    let rows: Vec<GeRow> = given
        .iter()
        .map(|f| GeRow {
            coeffs: dense(f),
            rhs: -f.constant_term().clone(),
        })
        .collect();
    match minimize(&dense(target), &vec![false; symbols.len()], &rows) {
        LpOutcome::Optimal { value, .. } => !(value + target.constant_term()).is_negative(),
        LpOutcome::Infeasible | LpOutcome::Unbounded => false,
    }
}

/// Drops, in order, every inequality implied by the others still kept plus the
/// system's assumptions. Syntactic duplicates (after canonical scaling) go first.
pub fn prune_redundant(sys: &LinearSystem) -> LinearSystem {
    let order = sys.symbol_order();
    let assumptions: Vec<LinearForm> = sys.assumptions.iter().map(Inequality::expr).collect();
    let mut seen = BTreeSet::new();
    let mut kept: Vec<(LinearForm, bool)> = Vec::new();
    for ineq in &sys.ineqs {
        let c = canonicalize(&ineq.expr(), &order);
        if is_trivially_true(&c) {
            continue;
        }
        if seen.insert(c.clone()) {
            kept.push((c, ineq.is_strict()));
        } else if ineq.is_strict() {
            if let Some(k) = kept.iter_mut().find(|k| k.0 == c) {
                k.1 = true;
            }
        }
    }
    let mut i = 0;
    while i < kept.len() {
        let others: Vec<LinearForm> = kept
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, k)| k.0.clone())
            .chain(assumptions.iter().cloned())
            .collect();
        if is_implied(&kept[i].0, &others) {
            kept.remove(i);
        } else {
            i += 1;
        }
    }
    LinearSystem {
        vars: sys.vars.clone(),
        ineqs: kept
            .into_iter()
            .map(|(e, strict)| {
                let rel = if strict { Relation::Gt } else { Relation::Ge };
                Inequality::from_expr(&e, rel, &sys.vars)
            })
            .collect(),
        assumptions: sys.assumptions.clone(),
    }
}

/// Projects out rate variable `var`: every lower bound is paired with every upper
/// bound, then redundant results are pruned.
pub fn fme_eliminate(sys: &LinearSystem, var: &str) -> Result<LinearSystem> {
    if !sys.is_var(var) {
        return Err(Error::Argument(format!("{var} is not a rate variable of the system")));
    }
    if sys.assumptions.iter().any(|a| !a.expr().coeff(var).is_zero()) {
        return Err(Error::Precondition(format!(
            "assumptions mention the eliminated variable {var}"
        )));
    }
    let mut lower = Vec::new();
    let mut upper = Vec::new();
    let mut rest = Vec::new();
    for ineq in &sys.ineqs {
        let e = ineq.expr();
        let c = e.coeff(var);
        let item = (e, c.clone(), ineq.is_strict());
        if c.is_positive() {
            lower.push(item);
        } else if c.is_negative() {
            upper.push(item);
        } else {
            rest.push(item);
        }
    }
    let vars: Vec<String> = sys.vars.iter().filter(|v| *v != var).cloned().collect();
    let mut out: Vec<Inequality> = rest
        .into_iter()
        .map(|(e, _, s)| Inequality::from_expr(&e, rel_of(s), &vars))
        .collect();
    for (le, lc, ls) in &lower {
        for (ue, uc, us) in &upper {
            let combined = le.scaled(&-uc.clone()).plus(&ue.scaled(lc));
            debug_assert!(combined.coeff(var).is_zero());
            out.push(Inequality::from_expr(&combined, rel_of(*ls || *us), &vars));
        }
    }
    let projected = LinearSystem {
        vars,
        ineqs: out,
        assumptions: sys.assumptions.clone(),
    };
    Ok(prune_redundant(&projected))
}

fn rel_of(strict: bool) -> Relation {
    if strict {
        Relation::Gt
    } else {
        Relation::Ge
    }
}

/// Closure membership of a point in the projection of `{ f >= 0 }` along `var`:
/// the interval of admissible `var` values must be non-empty.
pub fn extends(forms: &[LinearForm], var: &str, point: &HashMap<String, Rational>) -> Result<bool> {
    let mut lo: Option<Rational> = None;
    let mut hi: Option<Rational> = None;
    for f in forms {
        let c = f.coeff(var);
        let mut rest = f.clone();
        rest.add_term(var, -c.clone());
        let r = rest.evaluate_exact(point)?;
        if c.is_zero() {
            if r.is_negative() {
                return Ok(false);
            }
        } else {
            let bound = -r / &c;
            if c.is_positive() {
                if lo.as_ref().is_none_or(|l| bound > *l) {
                    lo = Some(bound);
                }
            } else if hi.as_ref().is_none_or(|h| bound < *h) {
                hi = Some(bound);
            }
        }
    }
    Ok(match (lo, hi) {
        (Some(l), Some(h)) => l <= h,
        _ => true,
    })
}
