//! Membership tests for the equal-output regions, in closed form and via the
//! existential LP over randomness splits.

use num::Zero;
use serde::{Deserialize, Serialize};

use super::lp::{feasible_point, GeRow};
use super::rational::{from_f64, Rational};
use crate::error::{Error, Result};

/// Numerical slack for every membership test.
pub const REGION_SLACK: f64 = 1e-9;

/// `(R, R_1, ..., R_h)` in bits per symbol.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RateTuple {
    pub r_common: f64,
    pub r_shared: Vec<f64>,
}

impl RateTuple {
    pub fn new(r_common: f64, r_shared: Vec<f64>) -> Result<Self> {
        if std::iter::once(&r_common)
            .chain(&r_shared)
            .any(|r| !r.is_finite() || *r < 0.0)
        {
            return Err(Error::Domain("rates must be finite and non-negative".into()));
        }
        Ok(Self { r_common, r_shared })
    }

    /// Parses `R,R1,...,Rh`.
    pub fn from_slice(rates: &[f64]) -> Result<Self> {
        let (first, rest) = rates
            .split_first()
            .ok_or_else(|| Error::Argument("a rate tuple needs at least R".into()))?;
        Self::new(*first, rest.to_vec())
    }

    pub fn h(&self) -> usize {
        self.r_shared.len()
    }

    fn min_shared(&self) -> f64 {
        self.r_shared.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

/// Which shared-randomness sources each processor sees (1-based source ids).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AccessStructure {
    pub h: usize,
    pub views: Vec<Vec<usize>>,
}

impl AccessStructure {
    pub fn new(h: usize, mut views: Vec<Vec<usize>>) -> Result<Self> {
        if views.is_empty() {
            return Err(Error::Validation("need at least one processor".into()));
        }
        for v in &mut views {
            v.sort_unstable();
            v.dedup();
            if v.iter().any(|&j| j == 0 || j > h) {
                return Err(Error::Validation(format!("view {v:?} outside sources 1..={h}")));
            }
        }
        Ok(Self { h, views })
    }

    /// Processor `i` sees source `i` only.
    pub fn individual(t: usize) -> Result<Self> {
        Self::new(t, (1..=t).map(|i| vec![i]).collect())
    }

    /// Processor `i` sees every source except `i`.
    pub fn forehead(t: usize) -> Result<Self> {
        Self::new(t, (1..=t).map(|i| (1..=t).filter(|&j| j != i).collect()).collect())
    }

    pub fn t(&self) -> usize {
        self.views.len()
    }

    pub fn sees(&self, processor: usize, source: usize) -> bool {
        self.views[processor].contains(&(source + 1))
    }
}

fn check_len(rt: &RateTuple, h: usize) -> Result<()> {
    if rt.h() != h {
        return Err(Error::Argument(format!(
            "rate tuple has {} shared rates, expected {h}",
            rt.h()
        )));
    }
    Ok(())
}

fn check_hx(hx: f64) -> Result<()> {
    if !hx.is_finite() || hx < 0.0 {
        return Err(Error::Domain(format!("entropy {hx} must be finite and non-negative")));
    }
    Ok(())
}

/// Two processors with identical outputs: `R + min(R1, R2) >= H` and `R >= H/2`.
pub fn region_two_equal(hx: f64, rt: &RateTuple) -> Result<bool> {
    check_hx(hx)?;
    check_len(rt, 2)?;
    Ok(rt.r_common + rt.min_shared() >= hx - REGION_SLACK && rt.r_common >= hx / 2.0 - REGION_SLACK)
}

/// Individually shared sources: `R + min_i R_i >= H` and `R >= (t-1) H / t`.
pub fn region_equal_indv(hx: f64, t: usize, rt: &RateTuple) -> Result<bool> {
    check_hx(hx)?;
    if t < 2 {
        return Err(Error::Argument("need at least two processors".into()));
    }
    check_len(rt, t)?;
    let tf = t as f64;
    Ok(rt.r_common + rt.min_shared() >= hx - REGION_SLACK
        && rt.r_common >= (tf - 1.0) * hx / tf - REGION_SLACK)
}

/// Forehead sources: `i R + sum_{j in S} R_j >= H` for every `i` and `|S| = t - i`.
/// The binding `S` collects the smallest shared rates.
pub fn region_equal_forehead(hx: f64, t: usize, rt: &RateTuple) -> Result<bool> {
    check_hx(hx)?;
    if t < 2 {
        return Err(Error::Argument("need at least two processors".into()));
    }
    check_len(rt, t)?;
    let mut sorted = rt.r_shared.clone();
    sorted.sort_by(f64::total_cmp);
    for i in 1..=t {
        let s: f64 = sorted[..t - i].iter().sum();
        if i as f64 * rt.r_common + s < hx - REGION_SLACK {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Split of the randomness witnessing membership in the general equal-output region.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeneralWitness {
    pub r: f64,
    pub r_sources: Vec<f64>,
}

/// LP feasibility: exists `r, r_j >= 0` with `R >= sum_{j not in V_i} r_j + r`,
/// `r + sum_j r_j >= H`, `R_j >= r_j`. Inputs are converted to exact rationals.
pub fn region_equal_general_witness(
    hx: f64,
    acc: &AccessStructure,
    rt: &RateTuple,
) -> Result<Option<GeneralWitness>> {
    check_hx(hx)?;
    check_len(rt, acc.h)?;
    let h = acc.h;
    let n = h + 1;
    let slack = from_f64(REGION_SLACK)?;
    let zero = Rational::zero();
    let one = Rational::from_integer(1.into());
    let big_r = from_f64(rt.r_common)?;
    let mut rows = Vec::new();
    for i in 0..acc.t() {
        // R + slack - r - sum_{j unseen} r_j >= 0
        let mut c = vec![zero.clone(); n];
        c[0] = -one.clone();
        for (j, cj) in c.iter_mut().enumerate().skip(1) {
            if !acc.sees(i, j - 1) {
                *cj = -one.clone();
            }
        }
        rows.push(GeRow {
            coeffs: c,
            rhs: -(&big_r + &slack),
        });
    }
    rows.push(GeRow {
        coeffs: vec![one.clone(); n],
        rhs: from_f64(hx)? - &slack,
    });
    for j in 0..h {
        let mut c = vec![zero.clone(); n];
        c[j + 1] = -one.clone();
        rows.push(GeRow {
            coeffs: c,
            rhs: -(from_f64(rt.r_shared[j])? + &slack),
        });
    }
    Ok(feasible_point(n, &vec![true; n], &rows).map(|x| GeneralWitness {
        r: super::rational::to_f64(&x[0]),
        r_sources: x[1..].iter().map(super::rational::to_f64).collect(),
    }))
}

pub fn region_equal_general(hx: f64, acc: &AccessStructure, rt: &RateTuple) -> Result<bool> {
    Ok(region_equal_general_witness(hx, acc, rt)?.is_some())
}
