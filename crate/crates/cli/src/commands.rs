use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use clap::{Args, ValueEnum};
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::{json, Value};

use coordrate::dsbs;
use coordrate::info::{self, JointPmf};
use coordrate::optim::{self, OptimizerConfig};
use coordrate::regions::{self, AccessStructure, LinearSystem, RateTuple};
use coordrate::sim::{trend_report, SchemeConfig};
use coordrate::Error;

use crate::output::{csv, json as to_json};
use crate::{Format, Global};

fn read_json<T: DeserializeOwned>(path: &Path) -> anyhow::Result<T> {
    let text = std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("cannot parse {}", path.display()))
}

fn argument(msg: impl Into<String>) -> anyhow::Error {
    Error::Argument(msg.into()).into()
}

fn names(list: &[String]) -> Vec<&str> {
    list.iter().map(String::as_str).collect()
}

/// Splits `"X,Y;Z"` into axis groups.
fn groups(text: &str) -> Vec<Vec<String>> {
    text.split(';')
        .map(|g| g.split(',').map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect())
        .collect()
}

fn render<T: Serialize>(g: &Global, value: &T, header: &[&str], rows: Vec<Vec<String>>) -> anyhow::Result<String> {
    match g.format {
        Format::Json => to_json(value),
        Format::Csv => Ok(csv(header, &rows)),
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[value(rename_all = "snake_case")]
#[serde(rename_all = "snake_case")]
pub enum Quantity {
    Entropy,
    MutualInformation,
    ConditionalMutualInformation,
    TotalCorrelation,
    DualTotalCorrelation,
    TvDistance,
}

#[derive(Args, Debug)]
pub struct MeasureArgs {
    /// Joint pmf as JSON: `{"axes": [{"name", "size"}], "probs": [...]}`.
    #[arg(long)]
    pmf: PathBuf,
    #[arg(long, value_enum)]
    quantity: Quantity,
    /// First axis group; defaults to the first axis (all axes for entropy).
    #[arg(long, value_delimiter = ',')]
    a: Vec<String>,
    /// Second axis group; defaults to the remaining axes.
    #[arg(long, value_delimiter = ',')]
    b: Vec<String>,
    /// Conditioning axes.
    #[arg(long, value_delimiter = ',')]
    given: Vec<String>,
    /// Groups for the multivariate correlations, e.g. `X1;X2;X3`; defaults to one group per axis.
    #[arg(long)]
    groups: Option<String>,
    /// Second pmf for the distance.
    #[arg(long)]
    other: Option<PathBuf>,
}

pub fn measure(args: &MeasureArgs, g: &Global) -> anyhow::Result<String> {
    let p: JointPmf = read_json(&args.pmf)?;
    let all: Vec<String> = p.axis_names().iter().map(|s| s.to_string()).collect();
    let first = |v: &[String]| if v.is_empty() { all[..1].to_vec() } else { v.to_vec() };
    let given = names(&args.given);
    let value = match args.quantity {
        Quantity::Entropy => {
            let a = if args.a.is_empty() { all.clone() } else { args.a.clone() };
            let marg = p.marginal(&names(&a))?;
            if given.is_empty() {
                info::entropy(&marg)
            } else {
                let with: Vec<&str> = names(&a).into_iter().chain(given.iter().copied()).collect();
                p.entropy_of(&with)? - p.entropy_of(&given)?
            }
        }
        Quantity::MutualInformation | Quantity::ConditionalMutualInformation => {
            let a = first(&args.a);
            let b = if args.b.is_empty() {
                all.iter().filter(|n| !a.contains(n) && !args.given.contains(n)).cloned().collect()
            } else {
                args.b.clone()
            };
            if given.is_empty() {
                info::mutual_information(&p, &names(&a), &names(&b))?
            } else {
                info::conditional_mutual_information(&p, &names(&a), &names(&b), &given)?
            }
        }
        Quantity::TotalCorrelation | Quantity::DualTotalCorrelation => {
            let gs = match &args.groups {
                Some(s) => groups(s),
                None => all.iter().filter(|n| !args.given.contains(n)).map(|n| vec![n.clone()]).collect(),
            };
            let owned: Vec<Vec<&str>> = gs.iter().map(|g| names(g)).collect();
            let refs: Vec<&[&str]> = owned.iter().map(Vec::as_slice).collect();
            if args.quantity == Quantity::TotalCorrelation {
                info::total_correlation(&p, &refs, &given)?
            } else {
                info::dual_total_correlation(&p, &refs, &given)?
            }
        }
        Quantity::TvDistance => {
            let other = args.other.as_ref().ok_or_else(|| argument("tv_distance needs --other"))?;
            info::tv_distance(&p, &read_json(other)?)?
        }
    };
    let doc = json!({ "quantity": args.quantity, "value": value });
    let name = serde_json::to_value(args.quantity)?.as_str().unwrap_or_default().to_string();
    render(g, &doc, &["quantity", "value"], vec![vec![name, value.to_string()]])
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[value(rename_all = "snake_case")]
#[serde(rename_all = "snake_case")]
pub enum Problem {
    WynerCi,
    RelaxedWynerCi,
    ROptTwo,
    ROptTwoAlternate,
    ROptIndv,
    GammaStar,
    MinmaxCheck,
    CorrelatedRate,
}

#[derive(Args, Debug)]
pub struct OptimizeArgs {
    #[arg(long)]
    pmf: PathBuf,
    #[arg(long, value_enum)]
    problem: Problem,
    /// Conditional-information budget for the relaxed problem.
    #[arg(long)]
    gamma: Option<f64>,
    /// Entropy of the common output for the correlated-source rate.
    #[arg(long)]
    hx: Option<f64>,
    /// Optimizer settings as JSON; a previous `optimize` output is accepted too.
    #[arg(long)]
    optimizer_config: Option<PathBuf>,
    #[arg(long)]
    card_u: Option<usize>,
    #[arg(long)]
    restarts: Option<usize>,
    #[arg(long)]
    max_iters: Option<usize>,
    #[arg(long)]
    step_tol: Option<f64>,
    #[arg(long)]
    value_tol: Option<f64>,
}

impl OptimizeArgs {
    /// An explicit `--seed` wins over the seed stored in `--optimizer-config`.
    fn config(&self, g: &Global) -> anyhow::Result<OptimizerConfig> {
        let mut cfg = match &self.optimizer_config {
            Some(path) => {
                let v: Value = read_json(path)?;
                let inner = v.get("config").cloned().unwrap_or(v);
                serde_json::from_value(inner).context("bad optimizer config")?
            }
            None => OptimizerConfig::default(),
        };
        if g.seed.is_some() || self.optimizer_config.is_none() {
            cfg.seed = g.seed();
        }
        if let Some(k) = self.card_u {
            cfg.card_u = Some(k);
        }
        if let Some(r) = self.restarts {
            cfg.restarts = r;
        }
        if let Some(m) = self.max_iters {
            cfg.max_iters = m;
        }
        if let Some(t) = self.step_tol {
            cfg.step_tol = t;
        }
        if let Some(t) = self.value_tol {
            cfg.value_tol = t;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

pub fn optimize(args: &OptimizeArgs, g: &Global) -> anyhow::Result<String> {
    let q: JointPmf = read_json(&args.pmf)?;
    let cfg = args.config(g)?;
    let need = |v: Option<f64>, flag: &str| v.ok_or_else(|| argument(format!("{:?} needs --{flag}", args.problem)));
    let (value, converged, body) = match args.problem {
        Problem::GammaStar => {
            let (gamma, res) = optim::gamma_star(&q, &cfg)?;
            (gamma, res.diagnostics.converged, json!({ "gamma": gamma, "result": res }))
        }
        Problem::MinmaxCheck => {
            let m = optim::minmax_equivalence_check(&q, &cfg)?;
            (m.difference, true, json!({ "report": m }))
        }
        p => {
            let res = match p {
                Problem::WynerCi => optim::wyner_ci(&q, &cfg)?,
                Problem::RelaxedWynerCi => optim::relaxed_wyner_ci(&q, need(args.gamma, "gamma")?, &cfg)?,
                Problem::ROptTwo => optim::r_opt_two(&q, &cfg)?,
                Problem::ROptTwoAlternate => optim::r_opt_two_alternate(&q, &cfg)?,
                Problem::ROptIndv => optim::r_opt_indv(&q, &cfg)?,
                Problem::CorrelatedRate => regions::correlated_rate(&q, need(args.hx, "hx")?, &cfg)?,
                Problem::GammaStar | Problem::MinmaxCheck => unreachable!("handled above"),
            };
            (res.value, res.diagnostics.converged, json!({ "result": res }))
        }
    };
    let mut doc = json!({ "problem": args.problem, "value": value, "config": cfg });
    doc.as_object_mut()
        .expect("object literal")
        .extend(body.as_object().cloned().unwrap_or_default());
    let name = serde_json::to_value(args.problem)?.as_str().unwrap_or_default().to_string();
    render(
        g,
        &doc,
        &["problem", "value", "converged", "seed"],
        vec![vec![name, value.to_string(), converged.to_string(), cfg.seed.to_string()]],
    )
}

#[derive(Args, Debug)]
pub struct DsbsArgs {
    /// Crossover parameter; repeat for several curves.
    #[arg(long, required = true)]
    a: Vec<f64>,
    /// Explicit weights, comma separated.
    #[arg(long, value_delimiter = ',', conflicts_with = "sweep_t")]
    t: Vec<f64>,
    /// Weight grid `start:end:step`, end inclusive.
    #[arg(long)]
    sweep_t: Option<String>,
}

/// `start:end:step` with the end included when it lies on the grid.
fn parse_grid(text: &str) -> anyhow::Result<Vec<f64>> {
    let parts: Vec<f64> = text
        .split(':')
        .map(|s| s.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|_| argument(format!("grid {text:?} must be start:end:step")))?;
    let [start, end, step] = parts[..] else {
        bail!(argument(format!("grid {text:?} must be start:end:step")));
    };
    if !(step > 0.0 && end >= start && start.is_finite() && end.is_finite()) {
        bail!(argument(format!("grid {text:?} needs step > 0 and end >= start")));
    }
    let count = ((end - start) / step + 1e-9).floor() as usize;
    if count > 10_000_000 {
        bail!(Error::Resource(format!("grid {text:?} has more than 1e7 points")));
    }
    // round away accumulated binary error so printed weights stay short
    Ok((0..=count).map(|k| ((start + k as f64 * step) * 1e12).round() / 1e12).collect())
}

pub fn dsbs(args: &DsbsArgs, g: &Global) -> anyhow::Result<String> {
    let ts = match &args.sweep_t {
        Some(text) => parse_grid(text)?,
        None => args.t.clone(),
    };
    if ts.is_empty() {
        let mut docs = Vec::new();
        let mut rows = Vec::new();
        for &a in &args.a {
            let ts = dsbs::t_star(a)?;
            let vals = [ts, dsbs::f_curve(a, ts)?, dsbs::f_curve(a, 0.0)?, dsbs::f_curve(a, 1.0)?, dsbs::dsbs_wyner_ci(a)?];
            docs.push(json!({ "a": a, "t_star": vals[0], "f_t_star": vals[1], "f0": vals[2], "f1": vals[3], "wyner_ci": vals[4] }));
            rows.push(std::iter::once(a).chain(vals).map(|v| v.to_string()).collect());
        }
        return render(g, &docs, &["a", "t_star", "f_t_star", "f0", "f1", "wyner_ci"], rows);
    }
    let mut points = Vec::new();
    for &a in &args.a {
        points.extend(dsbs::sweep(a, &ts)?);
    }
    match g.format {
        Format::Csv => Ok(dsbs::sweep_csv(&points)),
        Format::Json => to_json(&points),
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[value(rename_all = "snake_case")]
#[serde(rename_all = "snake_case")]
pub enum RegionKind {
    /// Two processors, equal outputs, omniscient coordinator.
    TwoEqual,
    /// Equal outputs, each processor sees its own source.
    EqualIndv,
    /// Equal outputs, each processor sees every source but its own.
    EqualForehead,
    /// Equal outputs under an explicit access structure (`--views`).
    EqualGeneral,
    /// Two-processor achievable region at an auxiliary pmf (`--aux`).
    AchTwo,
}

#[derive(Args, Debug)]
pub struct RegionArgs {
    #[arg(long, value_enum)]
    kind: RegionKind,
    /// `R,R1,...,Rh` in bits.
    #[arg(long, value_delimiter = ',', required = true, allow_negative_numbers = true)]
    rates: Vec<f64>,
    /// Entropy of the common output.
    #[arg(long)]
    hx: Option<f64>,
    /// Sources seen by each processor, 1-based, e.g. `1,2;2,3;1,3`.
    #[arg(long)]
    views: Option<String>,
    /// Auxiliary pmf over `X, Y, U, U1, U2`.
    #[arg(long)]
    aux: Option<PathBuf>,
}

pub fn region(args: &RegionArgs, g: &Global) -> anyhow::Result<String> {
    let rt = RateTuple::from_slice(&args.rates)?;
    let h = rt.h();
    let hx = || args.hx.ok_or_else(|| argument("this region needs --hx"));
    let member = match args.kind {
        RegionKind::TwoEqual => regions::region_two_equal(hx()?, &rt)?,
        RegionKind::EqualIndv => regions::region_equal_indv(hx()?, h, &rt)?,
        RegionKind::EqualForehead => regions::region_equal_forehead(hx()?, h, &rt)?,
        RegionKind::EqualGeneral => {
            let text = args.views.as_deref().ok_or_else(|| argument("equal_general needs --views"))?;
            let views = groups(text)
                .into_iter()
                .map(|v| v.iter().map(|s| s.parse::<usize>()).collect::<Result<Vec<_>, _>>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(|_| argument(format!("views {text:?} must list source indices")))?;
            regions::region_equal_general(hx()?, &AccessStructure::new(h, views)?, &rt)?
        }
        RegionKind::AchTwo => {
            let path = args.aux.as_ref().ok_or_else(|| argument("ach_two needs --aux"))?;
            regions::region_ach_two(&read_json(path)?, &rt)?
        }
    };
    let doc = json!({ "kind": args.kind, "rates": args.rates, "hx": args.hx, "member": member });
    let name = serde_json::to_value(args.kind)?.as_str().unwrap_or_default().to_string();
    let rates = args.rates.iter().map(f64::to_string).collect::<Vec<_>>().join(" ");
    render(g, &doc, &["kind", "rates", "member"], vec![vec![name, rates, member.to_string()]])
}

#[derive(Args, Debug)]
pub struct FmeArgs {
    /// Linear system as JSON: `vars`, `ineqs` and optional `assumptions`.
    #[arg(long)]
    system: PathBuf,
    /// Variables to eliminate, in order.
    #[arg(long, required = true, value_delimiter = ',')]
    eliminate: Vec<String>,
}

pub fn fme(args: &FmeArgs, g: &Global) -> anyhow::Result<String> {
    let mut sys: LinearSystem = read_json(&args.system)?;
    for v in &args.eliminate {
        sys = regions::fme_eliminate(&sys, v)?;
    }
    let rows = sys
        .ineqs
        .iter()
        .map(|i| vec![i.lhs.to_string(), i.rel.as_str().to_string(), i.rhs.to_string()])
        .collect();
    render(g, &sys, &["lhs", "rel", "rhs"], rows)
}

#[derive(Args, Debug)]
pub struct SimulateArgs {
    /// Scheme configuration as JSON; a previous `simulate` JSON output is accepted and replayed.
    #[arg(long)]
    config: PathBuf,
    /// Blocklengths, comma separated.
    #[arg(long, value_delimiter = ',')]
    n: Vec<usize>,
    /// Number of consecutive codebook seeds starting at `--seed`.
    #[arg(long)]
    seeds: Option<usize>,
}

const DEFAULT_SEEDS: usize = 20;

#[derive(Serialize, serde::Deserialize)]
struct SimulateDoc {
    config: SchemeConfig,
    n: Vec<usize>,
    seeds: Vec<u64>,
}

pub fn simulate(args: &SimulateArgs, g: &Global) -> anyhow::Result<String> {
    let v: Value = read_json(&args.config)?;
    let replay: Option<SimulateDoc> = match v.get("config") {
        Some(_) => Some(serde_json::from_value(v.clone()).context("bad simulate output document")?),
        None => None,
    };
    let config: SchemeConfig = match &replay {
        Some(doc) => doc.config.clone(),
        None => serde_json::from_value(v).context("bad scheme configuration")?,
    };
    let n = match (&replay, args.n.is_empty()) {
        (_, false) => args.n.clone(),
        (Some(doc), true) => doc.n.clone(),
        (None, true) => bail!(argument("simulate needs --n")),
    };
    let seeds: Vec<u64> = match (&replay, args.seeds) {
        (_, Some(k)) => (0..k as u64).map(|i| g.seed().wrapping_add(i)).collect(),
        (Some(doc), None) => doc.seeds.clone(),
        (None, None) => (0..DEFAULT_SEEDS as u64).map(|i| g.seed().wrapping_add(i)).collect(),
    };
    let report = trend_report(&config, &n, &seeds)?;
    match g.format {
        Format::Csv => Ok(report.to_csv()?),
        Format::Json => {
            let doc = SimulateDoc { config, n, seeds };
            let mut value = serde_json::to_value(&doc)?;
            value["report"] = serde_json::to_value(&report)?;
            to_json(&value)
        }
    }
}
