//! Optimization-backed rates: correlated shared randomness, the oblivious
//! coordinator inner check, and the forehead bound search.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use super::aux::forehead_terms;
use super::closed::{AccessStructure, RateTuple, REGION_SLACK};
use crate::error::{Error, Result};
use crate::info::{conditional_mutual_information, mutual_information, Axis, JointPmf};
use crate::optim::model::Model;
use crate::optim::solve::multistart;
use crate::optim::structured::StructuredProblem;
use crate::optim::{channel_run, diagnostics, ChannelKind, Diagnostics, OptResult, OptimizerConfig, AUX_AXIS, CONSTRAINT_TOL};

/// Largest marginal gap accepted for an oblivious witness.
pub const OBLIVIOUS_MARGINAL_TOL: f64 = 1e-4;

/// Margin the oblivious search aims for on every subset inequality.
pub const OBLIVIOUS_HINGE_SLACK: f64 = 1e-4;

fn check_hx(hx: f64) -> Result<()> {
    if !hx.is_finite() || hx < 0.0 {
        return Err(Error::Domain(format!("entropy {hx} must be finite and non-negative")));
    }
    Ok(())
}

/// `min over r >= 0, p(u|s) with I(U;S) + r >= H` of `max_i I(U; S_{-i} | S_i) + r`.
/// Extras: `r`, `mi` (`I(U;S)`), `max_cmi`.
pub fn correlated_rate(qs: &JointPmf, hx: f64, cfg: &OptimizerConfig) -> Result<OptResult> {
    check_hx(hx)?;
    let cells: usize = qs.sizes().iter().product();
    let k = cfg.card_or(cells);
    let (cm, outcomes) = channel_run(qs, cfg, k, ChannelKind::Correlated(hx), Vec::new())?;
    let channel = cm.channel(&outcomes[0].theta)?;
    let j = qs.compose(&channel)?;
    let names = qs.axis_names();
    let mi = mutual_information(&j, &names, &[AUX_AXIS])?;
    let mut max_cmi = 0.0f64;
    for (i, own) in names.iter().enumerate() {
        let rest: Vec<&str> = names.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, n)| *n).collect();
        max_cmi = max_cmi.max(conditional_mutual_information(&j, &[AUX_AXIS], &rest, &[own])?);
    }
    let r = (hx - mi).max(0.0);
    let hs = qs.entropy_of(&names)?;
    let extras = BTreeMap::from([
        ("r".to_string(), r),
        ("mi".to_string(), mi),
        ("max_cmi".to_string(), max_cmi),
    ]);
    Ok(OptResult {
        value: max_cmi + r,
        channel,
        diagnostics: diagnostics(&outcomes, CONSTRAINT_TOL, (hx - hs).max(0.0), hx, extras),
    })
}

/// Alphabet sizes of `U` and of each `U_i` in the oblivious family.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ObliviousCards {
    pub u: usize,
    pub shared: Vec<usize>,
}

impl ObliviousCards {
    pub fn uniform(k: usize, h: usize) -> Self {
        Self { u: k, shared: vec![k; h] }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ObliviousVerdict {
    /// A structured pmf satisfying every subset inequality was found.
    Achieved,
    /// Inconclusive: the search found no such pmf.
    NotFound,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ObliviousReport {
    pub verdict: ObliviousVerdict,
    /// Best structured pmf over `U, U1..Uh` followed by the source axes.
    pub witness: JointPmf,
    pub marginal_gap: f64,
    /// `I(X_[1:t]; U, U_S)` indexed by the bitmask of `S`.
    pub bounds: Vec<f64>,
    /// `R + R_S - I(X_[1:t]; U, U_S)` indexed like `bounds`.
    pub margins: Vec<f64>,
    pub diagnostics: Diagnostics,
}

fn validate_cards(cards: &[usize]) -> Result<()> {
    if cards.iter().any(|&c| c == 0) {
        return Err(Error::Argument("auxiliary alphabets must be non-empty".into()));
    }
    Ok(())
}

fn model_pmf(model: &Model, theta: &[f64], axes: Vec<Axis>) -> Result<JointPmf> {
    JointPmf::normalized(axes, model.joint(theta))
}

/// Searches `p(u) prod_j p(u_j) prod_i p(x_i | u, u_{V_i})` with marginal `q`
/// for a point where `R + R_S >= I(X; U, U_S)` for every `S` in `[1:h]`.
/// `Achieved` is certified on the returned witness; `NotFound` is inconclusive.
pub fn oblivious_membership(
    q: &JointPmf,
    acc: &AccessStructure,
    rt: &RateTuple,
    cards: &ObliviousCards,
    cfg: &OptimizerConfig,
) -> Result<ObliviousReport> {
    cfg.validate()?;
    let t = q.axes().len();
    let h = acc.h;
    if acc.t() != t {
        return Err(Error::Argument(format!("access structure has {} processors, pmf has {t} axes", acc.t())));
    }
    if rt.h() != h || cards.shared.len() != h {
        return Err(Error::Argument(format!("expected {h} shared rates and alphabets")));
    }
    if h > 16 {
        return Err(Error::Resource(format!("{h} shared sources give too many subset inequalities")));
    }
    let mut aux_cards = vec![cards.u];
    aux_cards.extend(&cards.shared);
    validate_cards(&aux_cards)?;
    let mut sizes = aux_cards.clone();
    sizes.extend(q.sizes());
    let mut model = Model::new(sizes);
    let fu = model.add_free(&[0], &[]);
    let fs: Vec<usize> = (1..=h).map(|j| model.add_free(&[j], &[])).collect();
    let fx: Vec<usize> = (0..t)
        .map(|i| {
            let mut parents = vec![0];
            parents.extend(acc.views[i].iter().copied());
            model.add_free(&[h + 1 + i], &parents)
        })
        .collect();
    let xs: Vec<usize> = (h + 1..h + 1 + t).collect();
    // subsets: X, then per mask (U, U_S) and (X, U, U_S)
    let mut subsets = vec![xs.clone()];
    let masks = 1usize << h;
    for mask in 0..masks {
        let mut us = vec![0];
        us.extend((0..h).filter(|j| mask >> j & 1 == 1).map(|j| j + 1));
        let mut all = us.clone();
        all.extend(&xs);
        subsets.push(us);
        subsets.push(all);
    }
    let caps: Vec<f64> = (0..masks)
        .map(|mask| rt.r_common + (0..h).filter(|j| mask >> j & 1 == 1).map(|j| rt.r_shared[j]).sum::<f64>())
        .collect();
    let hinge_caps = caps.clone();
    let problem = StructuredProblem::new(
        model,
        &xs,
        q.probs().to_vec(),
        &subsets,
        false,
        OBLIVIOUS_MARGINAL_TOL,
        Box::new(move |e: &[f64], _: &dyn Fn(&[f64]) -> f64| {
            hinge_caps
                .iter()
                .enumerate()
                .map(|(m, cap)| {
                    let bound = e[0] + e[1 + 2 * m] - e[2 + 2 * m];
                    (bound - cap + OBLIVIOUS_HINGE_SLACK).max(0.0).powi(2)
                })
                .sum()
        }),
    );
    // all auxiliaries constant, each X_i drawn from its own marginal
    let m = &problem.model;
    let mut constant = vec![0.0; m.n_params()];
    let delta = |k: usize| (0..k).map(|u| if u == 0 { 1.0 } else { 0.0 }).collect::<Vec<_>>();
    m.set_table(&mut constant, fu, &delta(cards.u));
    for (j, &f) in fs.iter().enumerate() {
        m.set_table(&mut constant, f, &delta(cards.shared[j]));
    }
    let names = q.axis_names();
    for (i, &f) in fx.iter().enumerate() {
        let qi = q.marginal(&[names[i]])?.probs().to_vec();
        let rows: usize = std::iter::once(cards.u)
            .chain(acc.views[i].iter().map(|&j| cards.shared[j - 1]))
            .product();
        let table: Vec<f64> = (0..rows).flat_map(|_| qi.iter().copied()).collect();
        m.set_table(&mut constant, f, &table);
    }
    let outcomes = multistart(&problem, cfg, &[constant]);
    let best = &outcomes[0];
    let mut axes = vec![Axis::new(AUX_AXIS, cards.u)];
    axes.extend((1..=h).map(|j| Axis::new(format!("{AUX_AXIS}{j}"), cards.shared[j - 1])));
    if axes.iter().any(|a| q.axes().iter().any(|b| b.name == a.name)) {
        return Err(Error::Argument("source axes clash with auxiliary names U, U1..Uh".into()));
    }
    axes.extend(q.axes().iter().cloned());
    let witness = model_pmf(&problem.model, &best.theta, axes)?;
    let marginal_gap = witness
        .marginal(&names)?
        .probs()
        .iter()
        .zip(q.probs())
        .fold(0.0f64, |g, (a, b)| g.max((a - b).abs()));
    let aux_names: Vec<String> = (1..=h).map(|j| format!("{AUX_AXIS}{j}")).collect();
    let mut bounds = Vec::with_capacity(masks);
    for mask in 0..masks {
        let mut us = vec![AUX_AXIS];
        us.extend((0..h).filter(|j| mask >> j & 1 == 1).map(|j| aux_names[j].as_str()));
        bounds.push(mutual_information(&witness, &names, &us)?);
    }
    let margins: Vec<f64> = caps.iter().zip(&bounds).map(|(c, b)| c - b).collect();
    let ok = marginal_gap <= OBLIVIOUS_MARGINAL_TOL && margins.iter().all(|m| *m >= -REGION_SLACK);
    // U carrying the whole source meets every bound with I = H(X)
    let hq = q.entropy_of(&names)?;
    let upper: f64 = caps.iter().map(|c| (hq - c + OBLIVIOUS_HINGE_SLACK).max(0.0).powi(2)).sum();
    let extras = BTreeMap::from([("marginal_gap".to_string(), marginal_gap)]);
    Ok(ObliviousReport {
        verdict: if ok { ObliviousVerdict::Achieved } else { ObliviousVerdict::NotFound },
        witness,
        marginal_gap,
        bounds,
        margins,
        diagnostics: diagnostics(&outcomes, OBLIVIOUS_MARGINAL_TOL, 0.0, upper, extras),
    })
}

/// Best forehead auxiliary pmf found by [`forehead_search`].
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ForeheadSearch {
    /// `max_i r_i / i` at `aux`.
    pub value: f64,
    /// Over `X1..Xt, U, U1..Ut`.
    pub aux: JointPmf,
    /// `(r_1, ..., r_t)` at `aux`.
    pub terms: Vec<f64>,
    pub marginal_gap: f64,
    pub diagnostics: Diagnostics,
}

#[derive(Default)]
struct SubsetIndex {
    list: Vec<Vec<usize>>,
    pos: HashMap<Vec<usize>, usize>,
}

impl SubsetIndex {
    fn id(&mut self, mut vars: Vec<usize>) -> usize {
        vars.sort_unstable();
        if let Some(&i) = self.pos.get(&vars) {
            return i;
        }
        self.list.push(vars.clone());
        self.pos.insert(vars, self.list.len() - 1);
        self.list.len() - 1
    }
}

/// Minimizes the forehead bound `max_i r_i / i` over
/// `p(u, u_[1:t]) prod_m p(x_m | u, u_{-m})` with marginal `q`, where `U` has
/// `card_u` letters and each `U_i` has `card_shared` letters.
pub fn forehead_search(
    q: &JointPmf,
    card_u: usize,
    card_shared: usize,
    cfg: &OptimizerConfig,
) -> Result<ForeheadSearch> {
    cfg.validate()?;
    validate_cards(&[card_u, card_shared])?;
    let t = q.axes().len();
    if t < 2 {
        return Err(Error::Argument("forehead bound needs at least two processors".into()));
    }
    let mut sizes = q.sizes();
    sizes.push(card_u);
    sizes.extend(std::iter::repeat_n(card_shared, t));
    let mut model = Model::new(sizes);
    // variables: X_m = m, U = t, U_j = t + 1 + j
    let u = t;
    let uj = |j: usize| t + 1 + j;
    let base: Vec<usize> = (t..=2 * t).collect();
    model.add_free(&base, &[]);
    for m in 0..t {
        let mut parents = vec![u];
        parents.extend((0..t).filter(|&j| j != m).map(uj));
        model.add_free(&[m], &parents);
    }
    let xs: Vec<usize> = (0..t).collect();
    let mut idx = SubsetIndex::default();
    // dual total correlation of U_L given the rest as signed subset entropies
    let dtc = |idx: &mut SubsetIndex, l: &[usize]| -> Vec<(f64, usize)> {
        let n = l.len() as f64;
        let mut terms = vec![(1.0 - n, idx.id(base.clone()))];
        let rest: Vec<usize> = base.iter().copied().filter(|v| !l.iter().any(|&j| uj(j) == *v)).collect();
        terms.push((-1.0, idx.id(rest)));
        for &j in l {
            terms.push((1.0, idx.id(base.iter().copied().filter(|&v| v != uj(j)).collect())));
        }
        terms
    };
    let mut families: Vec<Vec<Vec<(f64, usize)>>> = Vec::new();
    for i in 1..t {
        let fam = (0u32..(1 << t))
            .filter(|m| m.count_ones() as usize == i + 1)
            .map(|m| {
                let l: Vec<usize> = (0..t).filter(|j| m >> j & 1 == 1).collect();
                dtc(&mut idx, &l)
            })
            .collect();
        families.push(fam);
    }
    let all: Vec<usize> = (0..t).collect();
    let mut last = dtc(&mut idx, &all);
    let mut xu = xs.clone();
    xu.push(u);
    last.push((1.0, idx.id(xs.clone())));
    last.push((1.0, idx.id(vec![u])));
    last.push((-1.0, idx.id(xu)));
    families.push(vec![last]);
    let subsets = idx.list.clone();
    let problem = StructuredProblem::new(
        model,
        &xs,
        q.probs().to_vec(),
        &subsets,
        true,
        CONSTRAINT_TOL,
        Box::new(move |e: &[f64], smax: &dyn Fn(&[f64]) -> f64| {
            let ratios: Vec<f64> = families
                .iter()
                .enumerate()
                .map(|(i, fam)| {
                    let vals: Vec<f64> = fam
                        .iter()
                        .map(|terms| terms.iter().map(|(c, s)| c * e[*s]).sum())
                        .collect();
                    smax(&vals) / (i + 1) as f64
                })
                .collect();
            smax(&ratios)
        }),
    );
    let outcomes = multistart(&problem, cfg, &[]);
    let best = &outcomes[0];
    let mut axes = q.axes().to_vec();
    axes.push(Axis::new(AUX_AXIS, card_u));
    axes.extend((1..=t).map(|j| Axis::new(format!("{AUX_AXIS}{j}"), card_shared)));
    let witness = model_pmf(&problem.model, &best.theta, axes)?;
    // the bound is evaluated on the source-renamed pmf
    let renames: Vec<String> = (1..=t)
        .map(|i| format!("X{i}"))
        .chain(std::iter::once(AUX_AXIS.to_string()))
        .chain((1..=t).map(|j| format!("{AUX_AXIS}{j}")))
        .collect();
    let refs: Vec<&str> = renames.iter().map(String::as_str).collect();
    let aux = witness.renamed(&refs)?;
    let names = q.axis_names();
    let marginal_gap = witness
        .marginal(&names)?
        .probs()
        .iter()
        .zip(q.probs())
        .fold(0.0f64, |g, (a, b)| g.max((a - b).abs()));
    let terms = forehead_terms(&aux)?;
    let value = terms
        .iter()
        .enumerate()
        .map(|(i, v)| v / (i + 1) as f64)
        .fold(f64::NEG_INFINITY, f64::max);
    // U = X with constant U_i gives r_i = 0 for i < t and r_t = H(X)
    let upper = q.entropy_of(&names)? / t as f64;
    let extras = BTreeMap::from([("marginal_gap".to_string(), marginal_gap)]);
    Ok(ForeheadSearch {
        value,
        aux,
        terms,
        marginal_gap,
        diagnostics: diagnostics(&outcomes, CONSTRAINT_TOL, 0.0, upper, extras),
    })
}
