//! Auxiliary-channel minimization problems.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::config::{Diagnostics, OptResult, OptimizerConfig};
use super::model::{Model, Subset};
use super::structured::StructuredProblem;
use super::solve::{multistart, Objective, RestartOutcome};
use crate::error::{Error, Result};
use crate::info::{
    conditional_mutual_information, mutual_information, total_correlation, Axis, Channel,
    JointPmf,
};

/// Name of the auxiliary output axis attached to returned channels.
pub const AUX_AXIS: &str = "U";

/// Largest tolerated violation of `I(X;Y|U) <= gamma` in returned channels.
pub const CONSTRAINT_TOL: f64 = 1e-6;

/// `p(u | x_1..x_t)` attached to a fixed source pmf.
pub(crate) struct ChannelModel {
    pub model: Model,
    pub q: JointPmf,
    pub k: usize,
    free: usize,
    s_all: Subset,
    s_u: Subset,
    s_xu: Subset,
    s_g: Vec<Subset>,
    s_gu: Vec<Subset>,
}

/// Entropies of one channel model joint.
pub(crate) struct Ent {
    pub hx: f64,
    pub hu: f64,
    pub hxu: f64,
    pub hg: Vec<f64>,
    pub hgu: Vec<f64>,
}

impl Ent {
    /// `I(X_[1:t]; U)`.
    pub fn mi(&self) -> f64 {
        self.hx + self.hu - self.hxu
    }

    /// `I(X_1; X_2 | U)` for two groups.
    pub fn cmi(&self) -> f64 {
        self.hgu[0] + self.hgu[1] - self.hxu - self.hu
    }

    /// Watanabe total correlation given `U`.
    pub fn tc(&self) -> f64 {
        self.hgu.iter().sum::<f64>() - (self.hgu.len() as f64 - 1.0) * self.hu - self.hxu
    }

    /// `I(U; X_{-i} | X_i)`.
    pub fn cmi_rest(&self, i: usize) -> f64 {
        self.hgu[i] - self.hg[i] - self.hxu + self.hx
    }
}

impl ChannelModel {
    pub fn new(q: &JointPmf, k: usize) -> Result<Self> {
        if q.axes().iter().any(|a| a.name == AUX_AXIS) {
            return Err(Error::Argument(format!("source pmf already has an axis named {AUX_AXIS}")));
        }
        let t = q.axes().len();
        let mut sizes = q.sizes();
        sizes.push(k);
        let mut model = Model::new(sizes);
        let xs: Vec<usize> = (0..t).collect();
        model.add_fixed(&xs, &[], q.probs().to_vec());
        let free = model.add_free(&[t], &xs);
        let mut xu = xs.clone();
        xu.push(t);
        Ok(Self {
            s_all: model.subset(&xs),
            s_u: model.subset(&[t]),
            s_xu: model.subset(&xu),
            s_g: (0..t).map(|g| model.subset(&[g])).collect(),
            s_gu: (0..t).map(|g| model.subset(&[g, t])).collect(),
            model,
            q: q.clone(),
            k,
            free,
        })
    }

    pub fn ent(&self, joint: &[f64]) -> Ent {
        let m = &self.model;
        Ent {
            hx: m.entropy(joint, &self.s_all),
            hu: m.entropy(joint, &self.s_u),
            hxu: m.entropy(joint, &self.s_xu),
            hg: self.s_g.iter().map(|s| m.entropy(joint, s)).collect(),
            hgu: self.s_gu.iter().map(|s| m.entropy(joint, s)).collect(),
        }
    }

    pub fn channel(&self, theta: &[f64]) -> Result<Channel> {
        Channel::new(
            self.q.axes().to_vec(),
            vec![Axis::new(AUX_AXIS, self.k)],
            self.model.table(self.free, theta),
        )
    }

    pub fn theta_for(&self, table: &[f64]) -> Vec<f64> {
        let mut theta = vec![0.0; self.model.n_params()];
        self.model.set_table(&mut theta, self.free, table);
        theta
    }

    /// `U` constant.
    pub fn constant_start(&self) -> Vec<f64> {
        let rows = self.model.n_params() / self.k;
        let table: Vec<f64> = (0..rows)
            .flat_map(|_| (0..self.k).map(|u| if u == 0 { 1.0 } else { 0.0 }))
            .collect();
        self.theta_for(&table)
    }

    /// `U` equal to the full source index when the alphabet allows it.
    pub fn copy_start(&self) -> Option<Vec<f64>> {
        let rows = self.model.n_params() / self.k;
        if self.k < rows {
            return None;
        }
        let table: Vec<f64> = (0..rows)
            .flat_map(|r| (0..self.k).map(move |u| if u == r { 1.0 } else { 0.0 }))
            .collect();
        Some(self.theta_for(&table))
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub(crate) enum ChannelKind {
    /// `max{I(X;Y|U), I(X,Y;U)}`.
    Two,
    /// `max{I(X;Y|U), (I(X,Y;U) + I(X;Y|U)) / 2}`.
    TwoAlternate,
    /// `max{TC(X_[1:t]|U), I(X_[1:t];U)}`.
    Indv,
    /// `I(X,Y;U)` subject to `I(X;Y|U) <= gamma`.
    Relaxed(f64),
    /// `max_i I(U; S_{-i} | S_i) + max{0, H - I(U; S)}`.
    Correlated(f64),
}

pub(crate) struct ChannelProblem<'a> {
    pub cm: &'a ChannelModel,
    pub kind: ChannelKind,
}

impl Objective for ChannelProblem<'_> {
    fn model(&self) -> &Model {
        &self.cm.model
    }

    fn value(&self, joint: &[f64], smax: &dyn Fn(&[f64]) -> f64) -> f64 {
        let e = self.cm.ent(joint);
        match self.kind {
            ChannelKind::Two => smax(&[e.cmi(), e.mi()]),
            ChannelKind::TwoAlternate => smax(&[e.cmi(), 0.5 * (e.mi() + e.cmi())]),
            ChannelKind::Indv => smax(&[e.tc(), e.mi()]),
            ChannelKind::Relaxed(_) => e.mi(),
            ChannelKind::Correlated(hx) => {
                let terms: Vec<f64> = (0..e.hg.len()).map(|i| e.cmi_rest(i)).collect();
                smax(&terms) + smax(&[0.0, hx - e.mi()])
            }
        }
    }

    fn uses_max(&self) -> bool {
        !matches!(self.kind, ChannelKind::Relaxed(_))
    }

    fn ineq(&self, joint: &[f64]) -> Vec<f64> {
        match self.kind {
            ChannelKind::Relaxed(g) => vec![self.cm.ent(joint).cmi() - g],
            _ => Vec::new(),
        }
    }

    fn tolerance(&self) -> f64 {
        CONSTRAINT_TOL
    }
}

fn two_groups(q: &JointPmf) -> Result<(String, String)> {
    match q.axes() {
        [a, b] => Ok((a.name.clone(), b.name.clone())),
        _ => Err(Error::Argument(format!(
            "expected a pmf over exactly two axes, got {}",
            q.axes().len()
        ))),
    }
}

pub(crate) fn diagnostics(
    outcomes: &[RestartOutcome],
    tol: f64,
    lower: f64,
    upper: f64,
    extras: BTreeMap<String, f64>,
) -> Diagnostics {
    let per_restart: Vec<_> = outcomes.iter().map(|o| o.record(tol)).collect();
    Diagnostics {
        converged: per_restart.first().is_some_and(|r| r.converged),
        per_restart,
        lower_bound: lower,
        upper_bound: upper,
        extras,
    }
}

/// Two-processor quantities at a channel, through the generic measure path.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairTerms {
    /// `I(X,Y;U)`.
    pub mi: f64,
    /// `I(X;Y|U)`.
    pub cmi: f64,
}

impl PairTerms {
    pub fn primary(&self) -> f64 {
        self.cmi.max(self.mi)
    }

    pub fn alternate(&self) -> f64 {
        self.cmi.max(0.5 * (self.mi + self.cmi))
    }
}

pub fn pair_terms(q: &JointPmf, channel: &Channel) -> Result<PairTerms> {
    let (a, b) = two_groups(q)?;
    let j = q.compose(channel)?;
    let u: Vec<&str> = channel.outputs().iter().map(|a| a.name.as_str()).collect();
    Ok(PairTerms {
        mi: mutual_information(&j, &[&a, &b], &u)?,
        cmi: conditional_mutual_information(&j, &[&a], &[&b], &u)?,
    })
}

pub(crate) fn channel_run(
    q: &JointPmf,
    cfg: &OptimizerConfig,
    k: usize,
    kind: ChannelKind,
    extra: Vec<Vec<f64>>,
) -> Result<(ChannelModel, Vec<RestartOutcome>)> {
    cfg.validate()?;
    let cm = ChannelModel::new(q, k)?;
    let mut starts = vec![cm.constant_start()];
    starts.extend(cm.copy_start());
    starts.extend(extra);
    let outcomes = multistart(&ChannelProblem { cm: &cm, kind }, cfg, &starts);
    Ok((cm, outcomes))
}

fn pair_objective(
    q: &JointPmf,
    cfg: &OptimizerConfig,
    kind: ChannelKind,
) -> Result<OptResult> {
    let (a, b) = two_groups(q)?;
    let k = cfg.card_or(q.axes()[0].size * q.axes()[1].size + 2);
    let (cm, outcomes) = channel_run(q, cfg, k, kind, Vec::new())?;
    let channel = cm.channel(&outcomes[0].theta)?;
    let terms = pair_terms(q, &channel)?;
    let ixy = mutual_information(q, &[&a], &[&b])?;
    let value = match kind {
        ChannelKind::Two => terms.primary(),
        _ => terms.alternate(),
    };
    let extras = BTreeMap::from([
        ("mi".to_string(), terms.mi),
        ("cmi".to_string(), terms.cmi),
        ("alternate".to_string(), terms.alternate()),
        ("primary".to_string(), terms.primary()),
    ]);
    Ok(OptResult {
        value,
        channel,
        diagnostics: diagnostics(&outcomes, CONSTRAINT_TOL, 0.5 * ixy, ixy, extras),
    })
}

/// `min_{p(u|x,y)} max{I(X;Y|U), I(X,Y;U)}`.
pub fn r_opt_two(q: &JointPmf, cfg: &OptimizerConfig) -> Result<OptResult> {
    pair_objective(q, cfg, ChannelKind::Two)
}

/// `min_{p(u|x,y)} max{I(X;Y|U), (I(X,Y;U) + I(X;Y|U)) / 2}`.
pub fn r_opt_two_alternate(q: &JointPmf, cfg: &OptimizerConfig) -> Result<OptResult> {
    pair_objective(q, cfg, ChannelKind::TwoAlternate)
}

/// `min_{p(u|x_[1:t])} max{TC(X_1;..;X_t|U), I(X_[1:t];U)}` with one group per axis.
pub fn r_opt_indv(q: &JointPmf, cfg: &OptimizerConfig) -> Result<OptResult> {
    let t = q.axes().len();
    if t < 2 {
        return Err(Error::Argument("need at least two output groups".into()));
    }
    let cells: usize = q.sizes().iter().product();
    let k = cfg.card_or(cells + t);
    let (cm, outcomes) = channel_run(q, cfg, k, ChannelKind::Indv, Vec::new())?;
    let channel = cm.channel(&outcomes[0].theta)?;
    let j = q.compose(&channel)?;
    let names = q.axis_names();
    let groups: Vec<&[&str]> = names.iter().map(std::slice::from_ref).collect();
    let tc = total_correlation(&j, &groups, &[AUX_AXIS])?;
    let mi = mutual_information(&j, &names, &[AUX_AXIS])?;
    let tc0 = total_correlation(q, &groups, &[])?;
    let extras = BTreeMap::from([("tc".to_string(), tc), ("mi".to_string(), mi)]);
    Ok(OptResult {
        value: tc.max(mi),
        channel,
        diagnostics: diagnostics(&outcomes, CONSTRAINT_TOL, 0.0, tc0, extras),
    })
}

/// Wyner's common information `min I(X,Y;U)` over `X - U - Y`.
///
/// The search runs over `p(u) p(x|u) p(y|u)`, so the Markov chain holds by
/// construction and the source marginal is enforced by an augmented Lagrangian.
/// The returned channel is the posterior `p(u|x,y)`; the reported value is
/// evaluated on `q` composed with it, and `markov_residual` records its
/// `I(X;Y|U)`.
pub fn wyner_ci(q: &JointPmf, cfg: &OptimizerConfig) -> Result<OptResult> {
    cfg.validate()?;
    let (a, b) = two_groups(q)?;
    let (nx, ny) = (q.axes()[0].size, q.axes()[1].size);
    let k = cfg.card_or(nx * ny + 2);
    let mut model = Model::new(vec![k, nx, ny]);
    let fu = model.add_free(&[0], &[]);
    let fx = model.add_free(&[1], &[0]);
    let fy = model.add_free(&[2], &[0]);
    // subsets: (X,Y), U, (U,X,Y)
    let problem = StructuredProblem::new(
        model,
        &[1, 2],
        q.probs().to_vec(),
        &[vec![1, 2], vec![0], vec![0, 1, 2]],
        false,
        CONSTRAINT_TOL,
        Box::new(|h: &[f64], _: &dyn Fn(&[f64]) -> f64| h[0] + h[1] - h[2]),
    );
    let qx = q.marginal(&[&a])?.probs().to_vec();
    let qy = q.marginal(&[&b])?.probs().to_vec();
    let cond = |x: usize, y: usize| {
        if qx[x] > 0.0 {
            q.probs()[x * ny + y] / qx[x]
        } else {
            1.0 / ny as f64
        }
    };
    let mut starts = Vec::new();
    let m = &problem.model;
    let mut indep = vec![0.0; m.n_params()];
    m.set_table(&mut indep, fu, &(0..k).map(|u| if u == 0 { 1.0 } else { 0.0 }).collect::<Vec<_>>());
    m.set_table(&mut indep, fx, &(0..k).flat_map(|_| qx.clone()).collect::<Vec<_>>());
    m.set_table(&mut indep, fy, &(0..k).flat_map(|_| qy.clone()).collect::<Vec<_>>());
    starts.push(indep);
    if k >= nx {
        let mut th = vec![0.0; m.n_params()];
        let pu: Vec<f64> = (0..k).map(|u| if u < nx { qx[u] } else { 0.0 }).collect();
        let px: Vec<f64> = (0..k)
            .flat_map(|u| (0..nx).map(move |x| if u < nx { (x == u) as u8 as f64 } else { 1.0 / nx as f64 }))
            .collect();
        let py: Vec<f64> = (0..k)
            .flat_map(|u| (0..ny).map(move |y| (u, y)))
            .map(|(u, y)| if u < nx { cond(u, y) } else { 1.0 / ny as f64 })
            .collect();
        m.set_table(&mut th, fu, &pu);
        m.set_table(&mut th, fx, &px);
        m.set_table(&mut th, fy, &py);
        starts.push(th);
    }
    let outcomes = multistart(&problem, cfg, &starts);
    let best = &outcomes[0];
    let joint = problem.model.joint(&best.theta);
    // joint layout (u, x, y); invert to p(u | x, y)
    let mut table = vec![0.0; nx * ny * k];
    for x in 0..nx {
        for y in 0..ny {
            let col: Vec<f64> = (0..k).map(|u| joint[(u * nx + x) * ny + y]).collect();
            let s: f64 = col.iter().sum();
            for u in 0..k {
                table[(x * ny + y) * k + u] = if s > 0.0 { col[u] / s } else { 1.0 / k as f64 };
            }
        }
    }
    let channel = Channel::new(q.axes().to_vec(), vec![Axis::new(AUX_AXIS, k)], table)?;
    let terms = pair_terms(q, &channel)?;
    let ixy = mutual_information(q, &[&a], &[&b])?;
    let hmin = q.entropy_of(&[&a])?.min(q.entropy_of(&[&b])?);
    let extras = BTreeMap::from([
        ("markov_residual".to_string(), terms.cmi),
        ("marginal_residual".to_string(), best.violation),
        ("structured_value".to_string(), best.value),
    ]);
    let mut diag = diagnostics(&outcomes, CONSTRAINT_TOL, ixy, hmin, extras);
    diag.converged &= terms.cmi <= CONSTRAINT_TOL;
    Ok(OptResult {
        value: terms.mi,
        channel,
        diagnostics: diag,
    })
}

fn relaxed_with_starts(
    q: &JointPmf,
    gamma: f64,
    cfg: &OptimizerConfig,
    warm: Vec<Vec<f64>>,
) -> Result<(OptResult, Vec<f64>)> {
    if !(gamma.is_finite() && gamma >= 0.0) {
        return Err(Error::Domain(format!("gamma must be non-negative, got {gamma}")));
    }
    let (a, b) = two_groups(q)?;
    let k = cfg.card_or(q.axes()[0].size * q.axes()[1].size + 2);
    let (cm, outcomes) = channel_run(q, cfg, k, ChannelKind::Relaxed(gamma), warm)?;
    let mut theta = outcomes[0].theta.clone();
    let mut channel = cm.channel(&theta)?;
    let mut terms = pair_terms(q, &channel)?;
    if terms.cmi > gamma + CONSTRAINT_TOL {
        if let Some(copy) = cm.copy_start() {
            // mix toward U = (X, Y), where I(X;Y|U) = 0
            let (mut lo, mut hi) = (0.0, 1.0);
            for _ in 0..60 {
                let s = 0.5 * (lo + hi);
                let th = mix_logits(&cm, &theta, &copy, s);
                let ch = cm.channel(&th)?;
                if pair_terms(q, &ch)?.cmi <= gamma {
                    hi = s;
                } else {
                    lo = s;
                }
            }
            theta = mix_logits(&cm, &theta, &copy, hi);
            channel = cm.channel(&theta)?;
            terms = pair_terms(q, &channel)?;
        }
    }
    let ixy = mutual_information(q, &[&a], &[&b])?;
    let hmin = q.entropy_of(&[&a])?.min(q.entropy_of(&[&b])?);
    let upper = if gamma >= ixy { 0.0 } else { hmin };
    let extras = BTreeMap::from([
        ("gamma".to_string(), gamma),
        ("cmi".to_string(), terms.cmi),
        ("mi".to_string(), terms.mi),
    ]);
    let mut diag = diagnostics(&outcomes, CONSTRAINT_TOL, (ixy - gamma).max(0.0), upper, extras);
    diag.converged &= terms.cmi <= gamma + CONSTRAINT_TOL;
    Ok((
        OptResult {
            value: terms.mi,
            channel,
            diagnostics: diag,
        },
        theta,
    ))
}

fn mix_logits(cm: &ChannelModel, a: &[f64], b: &[f64], s: f64) -> Vec<f64> {
    let ta = cm.model.table(cm.free, a);
    let tb = cm.model.table(cm.free, b);
    let mixed: Vec<f64> = ta.iter().zip(&tb).map(|(x, y)| (1.0 - s) * x + s * y).collect();
    cm.theta_for(&mixed)
}

/// `C_gamma = min I(X,Y;U)` subject to `I(X;Y|U) <= gamma`.
///
/// At `gamma = 0` the constraint is the Markov chain itself, so the structured
/// search of [`wyner_ci`] is used.
pub fn relaxed_wyner_ci(q: &JointPmf, gamma: f64, cfg: &OptimizerConfig) -> Result<OptResult> {
    if gamma == 0.0 {
        let mut r = wyner_ci(q, cfg)?;
        r.diagnostics.extras.insert("gamma".into(), 0.0);
        return Ok(r);
    }
    Ok(relaxed_with_starts(q, gamma, cfg, Vec::new())?.0)
}

/// Bisection width for the fixed point of `gamma -> C_gamma`.
pub const GAMMA_WIDTH: f64 = 1e-5;

/// The fixed point `gamma* = C_{gamma*}`, by bisection on the nonincreasing map
/// `gamma -> C_gamma - gamma` over `[0, I(X;Y)]`, warm-starting each solve.
pub fn gamma_star(q: &JointPmf, cfg: &OptimizerConfig) -> Result<(f64, OptResult)> {
    let (a, b) = two_groups(q)?;
    let ixy = mutual_information(q, &[&a], &[&b])?;
    if ixy <= 1e-12 {
        let r = relaxed_wyner_ci(q, ixy.max(1e-12), cfg)?;
        return Ok((0.0, r));
    }
    let (mut lo, mut hi) = (0.0, ixy);
    let mut warm: Vec<Vec<f64>> = Vec::new();
    let mut at_hi: Option<OptResult> = None;
    let mut steps = 0;
    while hi - lo > GAMMA_WIDTH {
        let mid = 0.5 * (lo + hi);
        let (r, theta) = relaxed_with_starts(q, mid, cfg, warm.clone())?;
        warm = vec![theta];
        steps += 1;
        if r.value > mid {
            lo = mid;
        } else {
            hi = mid;
            at_hi = Some(r);
        }
    }
    let mut r = match at_hi {
        Some(r) => r,
        None => relaxed_with_starts(q, hi, cfg, warm)?.0,
    };
    if hi - lo > GAMMA_WIDTH {
        return Err(Error::Internal("bisection bracket failed".into()));
    }
    r.diagnostics.extras.insert("gamma".into(), hi);
    r.diagnostics.extras.insert("bracket_low".into(), lo);
    r.diagnostics.extras.insert("bisection_steps".into(), steps as f64);
    r.diagnostics.extras.insert("fixed_point_gap".into(), (r.value - hi).abs());
    Ok((hi, r))
}

/// Both two-processor objectives optimized independently.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MinmaxReport {
    pub value_a: f64,
    pub value_b: f64,
    pub difference: f64,
    pub result_a: OptResult,
    pub result_b: OptResult,
}

pub fn minmax_equivalence_check(q: &JointPmf, cfg: &OptimizerConfig) -> Result<MinmaxReport> {
    let ra = r_opt_two(q, cfg)?;
    let rb = r_opt_two_alternate(q, cfg)?;
    Ok(MinmaxReport {
        value_a: ra.value,
        value_b: rb.value,
        difference: (ra.value - rb.value).abs(),
        result_a: ra,
        result_b: rb,
    })
}

