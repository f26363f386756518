//! Sweeps of a scheme over blocklengths and seeds.

use super::schemes::{
    binned_scheme_sim, oblivious_sim, wyner_synthesis_sim, BinnedRates, Encoder, SimReport,
};
use crate::error::{Error, Result};
use crate::info::JointPmf;
use crate::regions::{AccessStructure, RateTuple};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub const TREND_CSV_HEADER: &str = "scheme,n,seed,R,R0,Rstar,R1,R2,tv";

/// A scheme together with its target, auxiliary pmf and rates.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "scheme", rename_all = "snake_case")]
pub enum SchemeConfig {
    Wyner {
        q: JointPmf,
        aux: JointPmf,
        rate: f64,
    },
    Binned {
        q: JointPmf,
        aux: JointPmf,
        rates: BinnedRates,
        #[serde(default)]
        encoder: Encoder,
    },
    Oblivious {
        q: JointPmf,
        aux: JointPmf,
        access: AccessStructure,
        rate: f64,
        shared: Vec<f64>,
    },
}

impl SchemeConfig {
    pub fn run(&self, n: usize, seed: u64) -> Result<SimReport> {
        match self {
            SchemeConfig::Wyner { q, aux, rate } => wyner_synthesis_sim(q, aux, n, *rate, seed),
            SchemeConfig::Binned { q, aux, rates, encoder } => binned_scheme_sim(q, aux, n, rates, encoder, seed),
            SchemeConfig::Oblivious { q, aux, access, rate, shared } => {
                oblivious_sim(q, aux, access, n, &RateTuple::new(*rate, shared.clone())?, seed)
            }
        }
    }
}

/// Order statistics of `tv` over the seeds at one blocklength.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrendAggregate {
    pub n: usize,
    pub median: f64,
    pub q25: f64,
    pub q75: f64,
    pub best: f64,
    pub best_seed: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrendReport {
    pub rows: Vec<SimReport>,
    pub aggregates: Vec<TrendAggregate>,
}

/// Linear-interpolation quantile of sorted values.
fn quantile(sorted: &[f64], p: f64) -> f64 {
    let pos = p * (sorted.len() - 1) as f64;
    let (lo, hi) = (pos.floor() as usize, pos.ceil() as usize);
    sorted[lo] + (sorted[hi] - sorted[lo]) * (pos - lo as f64)
}

/// One row per `(n, seed)` in input order plus one aggregate per `n`.
pub fn trend_report(cfg: &SchemeConfig, n_list: &[usize], seeds: &[u64]) -> Result<TrendReport> {
    if n_list.is_empty() || seeds.is_empty() {
        return Err(Error::Argument("need at least one blocklength and one seed".into()));
    }
    let jobs: Vec<(usize, u64)> = n_list.iter().flat_map(|&n| seeds.iter().map(move |&s| (n, s))).collect();
    let rows: Vec<SimReport> = jobs.par_iter().map(|&(n, s)| cfg.run(n, s)).collect::<Result<_>>()?;
    let aggregates = rows
        .chunks(seeds.len())
        .map(|chunk| {
            let mut tv: Vec<f64> = chunk.iter().map(|r| r.tv).collect();
            tv.sort_by(f64::total_cmp);
            let best = chunk
                .iter()
                .min_by(|a, b| a.tv.total_cmp(&b.tv))
                .expect("non-empty chunk");
            TrendAggregate {
                n: chunk[0].n,
                median: quantile(&tv, 0.5),
                q25: quantile(&tv, 0.25),
                q75: quantile(&tv, 0.75),
                best: best.tv,
                best_seed: best.codebook_seed,
            }
        })
        .collect();
    Ok(TrendReport { rows, aggregates })
}

fn rate_cell(r: &SimReport, key: &str) -> String {
    r.rates.get(key).map(|v| v.to_string()).unwrap_or_default()
}

impl TrendReport {
    /// CSV with a `median` row after each blocklength's seed rows.
    pub fn to_csv(&self) -> Result<String> {
        let mut out = String::from(TREND_CSV_HEADER);
        out.push('\n');
        let per_n = self.rows.len() / self.aggregates.len().max(1);
        for (chunk, agg) in self.rows.chunks(per_n.max(1)).zip(&self.aggregates) {
            if chunk.iter().any(|r| r.rates.contains_key("R3")) {
                return Err(Error::Argument("CSV holds at most two shared rates; use JSON".into()));
            }
            let row = |seed: String, tv: f64, r: &SimReport| {
                format!(
                    "{},{},{},{},{},{},{},{},{}\n",
                    r.scheme,
                    r.n,
                    seed,
                    rate_cell(r, "R"),
                    rate_cell(r, "R0"),
                    rate_cell(r, "Rstar"),
                    rate_cell(r, "R1"),
                    rate_cell(r, "R2"),
                    tv
                )
            };
            for r in chunk {
                out.push_str(&row(r.codebook_seed.to_string(), r.tv, r));
            }
            out.push_str(&row("median".into(), agg.median, &chunk[0]));
        }
        Ok(out)
    }
}
