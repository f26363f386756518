//! Wyner synthesis, the two-processor binned scheme, and the oblivious
//! nested-codebook scheme, each evaluated by exact enumeration.

use super::books::{
    index_size, sample_book, stream, Book, CodebookInstance, STREAM_SHARED_BASE, STREAM_U,
    STREAM_X, STREAM_Y,
};
use super::engine::{l1, product_target, table_cells, Letters, Mixture};
use crate::error::{Error, Result};
use crate::info::JointPmf;
use crate::regions::{factorization_gap, AccessStructure, AUX_TOLERANCE};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Largest gap between the target and the pmf a decomposition composes to.
pub const DECOMPOSITION_TOLERANCE: f64 = 1e-6;
/// Largest number of `(m0, m*, b1, b2)` tuples the binned scheme enumerates.
pub const MAX_BINNED_TUPLES: usize = 1 << 20;
/// Largest number of `(w, w_1..w_h)` tuples the oblivious scheme enumerates.
pub const MAX_OBLIVIOUS_TUPLES: usize = 1 << 20;
pub const DEFAULT_TYPICALITY_EPSILON: f64 = 0.1;

/// How the coordinator picks `m*` inside the bin of `m0`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Encoder {
    /// Smallest index whose codewords are robustly `epsilon`-typical; index 1 if none.
    Typicality { epsilon: f64 },
    /// `m*` drawn with probability proportional to `prod_k p(x,y|u) / (p(x|u) p(y|u))`.
    Likelihood,
}

impl Default for Encoder {
    fn default() -> Self {
        Encoder::Typicality { epsilon: DEFAULT_TYPICALITY_EPSILON }
    }
}

/// Outcome of one simulation at a fixed codebook.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimReport {
    pub scheme: String,
    pub n: usize,
    pub rates: BTreeMap<String, f64>,
    pub sizes: BTreeMap<String, usize>,
    /// Common-message rate actually sent by the coordinator.
    pub message_rate: f64,
    /// Exact L1 distance between the induced and the i.i.d. target distribution.
    pub tv: f64,
    /// Binned scheme only: L1 distance conditioned on each bin index `m0`.
    pub per_f_tv: Option<Vec<f64>>,
    pub codebook_seed: u64,
}

/// Rows of `p(child | parents)` in the mixed radix of `parents`; empty rows become uniform.
fn cond_rows(p: &JointPmf, parents: &[&str], child: &str) -> Result<Vec<Vec<f64>>> {
    let mut names = parents.to_vec();
    names.push(child);
    let m = p.marginal(&names)?;
    let k = p.axes()[p.axis_index(child)?].size;
    Ok(m.probs()
        .chunks(k)
        .map(|row| {
            let s: f64 = row.iter().sum();
            if s > 0.0 {
                row.iter().map(|v| v / s).collect()
            } else {
                vec![1.0 / k as f64; k]
            }
        })
        .collect())
}

fn max_gap(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

fn check_n(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::Argument("blocklength must be at least 1".into()));
    }
    Ok(())
}

/// `q` over `(X, Y)` and an auxiliary pmf over `X, Y, U` split into its factors.
struct PairAux {
    nx: usize,
    ny: usize,
    nu: usize,
    p_u: Vec<f64>,
    p_x_u: Vec<Vec<f64>>,
    p_y_u: Vec<Vec<f64>>,
    /// `p(u, x, y)` flattened as `(u * nx + x) * ny + y`.
    joint: Vec<f64>,
}

impl PairAux {
    fn new(q: &JointPmf, aux: &JointPmf) -> Result<Self> {
        if q.axes().len() != 2 {
            return Err(Error::Argument("target must be a pmf over two axes".into()));
        }
        let (x, y) = (q.axes()[0].name.as_str(), q.axes()[1].name.as_str());
        if aux.axes().len() != 3 {
            return Err(Error::Argument(format!("auxiliary pmf must be over {x}, {y}, U")));
        }
        let joint = aux.marginal(&["U", x, y])?;
        let sz = joint.sizes();
        if sz[1..] != q.sizes()[..] {
            return Err(Error::Argument("auxiliary alphabets differ from the target".into()));
        }
        Ok(Self {
            nx: sz[1],
            ny: sz[2],
            nu: sz[0],
            p_u: aux.marginal(&["U"])?.probs().to_vec(),
            p_x_u: cond_rows(aux, &["U"], x)?,
            p_y_u: cond_rows(aux, &["U"], y)?,
            joint: joint.probs().to_vec(),
        })
    }

    /// `sum_u p(u) p(x|u) p(y|u)`.
    fn markov_target(&self) -> Vec<f64> {
        let mut t = vec![0.0; self.nx * self.ny];
        for u in 0..self.nu {
            for x in 0..self.nx {
                for y in 0..self.ny {
                    t[x * self.ny + y] += self.p_u[u] * self.p_x_u[u][x] * self.p_y_u[u][y];
                }
            }
        }
        t
    }

    fn xy_marginal(&self) -> Vec<f64> {
        let mut t = vec![0.0; self.nx * self.ny];
        for (i, p) in self.joint.iter().enumerate() {
            t[i % (self.nx * self.ny)] += p;
        }
        t
    }

    /// Letter state `(u, x or private, y or private)`.
    fn state(&self, u: u16, x: Option<u16>, y: Option<u16>) -> u32 {
        let xo = x.map_or(self.nx, usize::from);
        let yo = y.map_or(self.ny, usize::from);
        ((usize::from(u) * (self.nx + 1) + xo) * (self.ny + 1) + yo) as u32
    }

    fn letters(&self) -> Result<Letters> {
        let (nx, ny) = (self.nx, self.ny);
        Letters::new(nx * ny, self.nu * (nx + 1) * (ny + 1), |s| {
            let (u, xo, yo) = (s / ((nx + 1) * (ny + 1)), s / (ny + 1) % (nx + 1), s % (ny + 1));
            let mut f = vec![0.0; nx * ny];
            for x in 0..nx {
                let px = if xo < nx { f64::from(u8::from(x == xo)) } else { self.p_x_u[u][x] };
                for y in 0..ny {
                    let py = if yo < ny { f64::from(u8::from(y == yo)) } else { self.p_y_u[u][y] };
                    f[x * ny + y] = px * py;
                }
            }
            f
        })
    }
}

fn u_book(aux: &PairAux, dims: Vec<usize>, n: usize, seed: u64) -> Book {
    sample_book(&mut stream(seed, STREAM_U), dims, n, |_, _| aux.p_u.clone())
}

/// Books of Wyner's scheme: `ceil(2^{n rate})` codewords i.i.d. `p_U`.
pub fn wyner_books(q: &JointPmf, aux: &JointPmf, n: usize, rate: f64, seed: u64) -> Result<CodebookInstance> {
    check_n(n)?;
    let pa = PairAux::new(q, aux)?;
    let gap = max_gap(&pa.markov_target(), q.probs());
    if gap > DECOMPOSITION_TOLERANCE {
        return Err(Error::Precondition(format!(
            "p(u) p(x|u) p(y|u) misses the target by {gap:.3e}"
        )));
    }
    table_cells(pa.nx * pa.ny, n)?;
    let m = index_size(n, rate)?;
    Ok(CodebookInstance {
        scheme: "wyner".into(),
        n,
        rates: BTreeMap::from([("R".into(), rate)]),
        sizes: BTreeMap::from([("M".into(), m)]),
        books: BTreeMap::from([("U".into(), u_book(&pa, vec![m], n, seed))]),
        seed,
    })
}

/// Wyner synthesis: a uniform message picks `u^n(m)` and both processors
/// apply their channels letter by letter.
pub fn wyner_synthesis_sim(q: &JointPmf, aux: &JointPmf, n: usize, rate: f64, seed: u64) -> Result<SimReport> {
    let inst = wyner_books(q, aux, n, rate, seed)?;
    let pa = PairAux::new(q, aux)?;
    let ub = inst.book("U")?;
    let m = ub.codewords();
    let mut mix = Mixture::new(n);
    for i in 0..m {
        mix.add(ub.word(i).iter().map(|&u| pa.state(u, None, None)).collect(), 1.0);
    }
    let tv = l1(&mix.induced(&pa.letters()?)?, &product_target(q.probs(), n)?);
    Ok(SimReport {
        scheme: inst.scheme,
        n,
        message_rate: rate,
        rates: inst.rates,
        sizes: inst.sizes,
        tv,
        per_f_tv: None,
        codebook_seed: seed,
    })
}

/// Rates of the binned scheme. A zero conditional-book rate means the
/// processor applies its channel with private randomness.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BinnedRates {
    pub r0: f64,
    pub r_star: f64,
    pub r1: f64,
    pub r2: f64,
}

impl BinnedRates {
    /// Common-message rate `R0/2 + R*`.
    pub fn message_rate(&self) -> f64 {
        self.r0 / 2.0 + self.r_star
    }
}

/// Books of the binned scheme: `u^n(m0, m*)` and, for positive rates,
/// `x^n(m0, m*, b1)` and `y^n(m0, m*, b2)` drawn from `p(x|u)` and `p(y|u)`.
pub fn binned_books(q: &JointPmf, aux: &JointPmf, n: usize, rates: &BinnedRates, seed: u64) -> Result<CodebookInstance> {
    check_n(n)?;
    let pa = PairAux::new(q, aux)?;
    let gap = max_gap(&pa.xy_marginal(), q.probs());
    if gap > DECOMPOSITION_TOLERANCE {
        return Err(Error::Precondition(format!("auxiliary marginal misses the target by {gap:.3e}")));
    }
    table_cells(pa.nx * pa.ny, n)?;
    let n0 = index_size(n, rates.r0)?;
    let ns = index_size(n, rates.r_star)?;
    let b1 = if rates.r1 > 0.0 { index_size(n, rates.r1)? } else { 1 };
    let b2 = if rates.r2 > 0.0 { index_size(n, rates.r2)? } else { 1 };
    let tuples = [n0, ns, b1, b2].iter().try_fold(1usize, |a, &b| a.checked_mul(b));
    if tuples.is_none_or(|t| t > MAX_BINNED_TUPLES) {
        return Err(Error::Resource(format!(
            "{n0} x {ns} x {b1} x {b2} index tuples exceed {MAX_BINNED_TUPLES}"
        )));
    }
    let ub = u_book(&pa, vec![n0, ns], n, seed);
    let mut books = BTreeMap::new();
    if rates.r1 > 0.0 {
        let xb = sample_book(&mut stream(seed, STREAM_X), vec![n0, ns, b1], n, |i, k| {
            pa.p_x_u[usize::from(ub.word(i / b1)[k])].clone()
        });
        books.insert("X".to_string(), xb);
    }
    if rates.r2 > 0.0 {
        let yb = sample_book(&mut stream(seed, STREAM_Y), vec![n0, ns, b2], n, |i, k| {
            pa.p_y_u[usize::from(ub.word(i / b2)[k])].clone()
        });
        books.insert("Y".to_string(), yb);
    }
    books.insert("U".to_string(), ub);
    Ok(CodebookInstance {
        scheme: "binned".into(),
        n,
        rates: BTreeMap::from([
            ("R".into(), rates.message_rate()),
            ("R0".into(), rates.r0),
            ("Rstar".into(), rates.r_star),
            ("R1".into(), rates.r1),
            ("R2".into(), rates.r2),
        ]),
        sizes: BTreeMap::from([("M0".into(), n0), ("Mstar".into(), ns), ("B1".into(), b1), ("B2".into(), b2)]),
        books,
        seed,
    })
}

/// Robust typicality: `|freq(a) - p(a)| <= eps p(a)` for every symbol, and no
/// symbol of zero probability occurs.
fn robustly_typical(word: impl Iterator<Item = usize>, p: &[f64], n: usize, eps: f64) -> bool {
    let mut counts = vec![0usize; p.len()];
    for a in word {
        counts[a] += 1;
    }
    counts
        .iter()
        .zip(p)
        .all(|(&c, &pa)| (c as f64 / n as f64 - pa).abs() <= eps * pa + 1e-12)
}

/// Two-processor binned scheme: shared randomness fixes `(m0, b1, b2)`, the
/// coordinator picks `m*` in bin `m0` and sends `(m01 xor m02, m*)`.
pub fn binned_scheme_sim(
    q: &JointPmf,
    aux: &JointPmf,
    n: usize,
    rates: &BinnedRates,
    encoder: &Encoder,
    seed: u64,
) -> Result<SimReport> {
    if let Encoder::Typicality { epsilon } = encoder {
        if !(epsilon.is_finite() && *epsilon > 0.0) {
            return Err(Error::Argument(format!("typicality epsilon {epsilon} must be positive")));
        }
    }
    let inst = binned_books(q, aux, n, rates, seed)?;
    let pa = PairAux::new(q, aux)?;
    let (n0, ns, b1, b2) = (inst.sizes["M0"], inst.sizes["Mstar"], inst.sizes["B1"], inst.sizes["B2"]);
    let ub = inst.book("U")?;
    let xb = inst.books.get("X");
    let yb = inst.books.get("Y");
    let letters = pa.letters()?;
    let target = product_target(q.probs(), n)?;
    let (nx, ny) = (pa.nx, pa.ny);
    let p_ux: Vec<f64> = (0..pa.nu * nx)
        .map(|i| (0..ny).map(|y| pa.joint[i * ny + y]).sum())
        .collect();
    let p_uy: Vec<f64> = (0..pa.nu * ny)
        .map(|i| (0..nx).map(|x| pa.joint[(i / ny * nx + x) * ny + i % ny]).sum())
        .collect();
    let words = |m0: usize, s: usize, i1: usize, i2: usize| {
        let c = m0 * ns + s;
        (ub.word(c), xb.map(|b| b.word(c * b1 + i1)), yb.map(|b| b.word(c * b2 + i2)))
    };
    // every tuple carries total weight `ns`
    let unit = ns as f64;
    let choose = |m0: usize, i1: usize, i2: usize| -> Vec<(usize, f64)> {
        if xb.is_none() && yb.is_none() {
            return (0..ns).map(|s| (s, 1.0)).collect();
        }
        match encoder {
            Encoder::Typicality { epsilon } => {
                let hit = (0..ns).find(|&s| {
                    let (u, x, y) = words(m0, s, i1, i2);
                    let sym = |k: usize| {
                        let u = usize::from(u[k]);
                        match (x, y) {
                            (Some(x), Some(y)) => (u * nx + usize::from(x[k])) * ny + usize::from(y[k]),
                            (Some(x), None) => u * nx + usize::from(x[k]),
                            (None, Some(y)) => u * ny + usize::from(y[k]),
                            (None, None) => unreachable!(),
                        }
                    };
                    let p: &[f64] = match (x, y) {
                        (Some(_), Some(_)) => &pa.joint,
                        (Some(_), None) => &p_ux,
                        _ => &p_uy,
                    };
                    robustly_typical((0..n).map(sym), p, n, *epsilon)
                });
                vec![(hit.unwrap_or(0), unit)]
            }
            Encoder::Likelihood => {
                let w: Vec<f64> = (0..ns)
                    .map(|s| match words(m0, s, i1, i2) {
                        (u, Some(x), Some(y)) => (0..n)
                            .map(|k| {
                                let (u, x, y) = (usize::from(u[k]), usize::from(x[k]), usize::from(y[k]));
                                pa.joint[(u * nx + x) * ny + y] / (pa.p_u[u] * pa.p_x_u[u][x] * pa.p_y_u[u][y])
                            })
                            .product(),
                        _ => 1.0,
                    })
                    .collect();
                let total: f64 = w.iter().sum();
                if total > 0.0 {
                    w.iter().enumerate().filter(|(_, v)| **v > 0.0).map(|(s, v)| (s, unit * v / total)).collect()
                } else {
                    vec![(0, unit)]
                }
            }
        }
    };
    let mut all = Mixture::new(n);
    let mut per_f = Vec::new();
    for m0 in 0..n0 {
        let mut part = Mixture::new(n);
        for i1 in 0..b1 {
            for i2 in 0..b2 {
                for (s, w) in choose(m0, i1, i2) {
                    let (u, x, y) = words(m0, s, i1, i2);
                    let key: Vec<u32> = (0..n)
                        .map(|k| pa.state(u[k], x.map(|x| x[k]), y.map(|y| y[k])))
                        .collect();
                    if n0 > 1 {
                        part.add(key.clone(), w);
                    }
                    all.add(key, w);
                }
            }
        }
        if n0 > 1 {
            per_f.push(l1(&part.induced(&letters)?, &target));
        }
    }
    let tv = l1(&all.induced(&letters)?, &target);
    Ok(SimReport {
        scheme: inst.scheme,
        n,
        message_rate: rates.message_rate(),
        rates: inst.rates,
        sizes: inst.sizes,
        tv,
        per_f_tv: (n0 > 1).then_some(per_f),
        codebook_seed: seed,
    })
}

/// Factors of an oblivious auxiliary pmf over `U, U1..Uh, X_1..X_t`.
struct ObliviousAux {
    nu: usize,
    nshared: Vec<usize>,
    p_u: Vec<f64>,
    p_shared: Vec<Vec<f64>>,
    /// `p(x_i | u, u_{V_i})` rows in the mixed radix of `(u, u_{V_i})`.
    channels: Vec<Vec<Vec<f64>>>,
    nx: Vec<usize>,
}

impl ObliviousAux {
    fn new(q: &JointPmf, aux: &JointPmf, acc: &AccessStructure) -> Result<Self> {
        let xs = q.axis_names();
        let h = acc.h;
        if acc.t() != xs.len() {
            return Err(Error::Argument(format!("{} views for {} sources", acc.t(), xs.len())));
        }
        if aux.axes().len() != 1 + h + xs.len() {
            return Err(Error::Argument("auxiliary pmf must be over U, U1..Uh and the sources".into()));
        }
        let us: Vec<String> = (1..=h).map(|j| format!("U{j}")).collect();
        let mut factors: Vec<(Vec<&str>, Vec<&str>)> = vec![(vec!["U"], vec![])];
        factors.extend(us.iter().map(|u| (vec![u.as_str()], vec![])));
        let parents: Vec<Vec<&str>> = acc
            .views
            .iter()
            .map(|v| std::iter::once("U").chain(v.iter().map(|&j| us[j - 1].as_str())).collect())
            .collect();
        for (x, p) in xs.iter().zip(&parents) {
            factors.push((vec![*x], p.clone()));
        }
        let gap = factorization_gap(aux, &factors)?;
        if gap > AUX_TOLERANCE {
            return Err(Error::Precondition(format!(
                "auxiliary pmf violates p(u) prod p(u_j) prod p(x_i|u,u_V_i) by {gap:.3e}"
            )));
        }
        let marg = aux.marginal(&xs)?;
        let gap = max_gap(marg.probs(), q.probs());
        if gap > DECOMPOSITION_TOLERANCE {
            return Err(Error::Precondition(format!("auxiliary marginal misses the target by {gap:.3e}")));
        }
        let size = |name: &str| -> Result<usize> { Ok(aux.axes()[aux.axis_index(name)?].size) };
        Ok(Self {
            nu: size("U")?,
            nshared: us.iter().map(|u| size(u)).collect::<Result<_>>()?,
            p_u: aux.marginal(&["U"])?.probs().to_vec(),
            p_shared: us.iter().map(|u| Ok(aux.marginal(&[u.as_str()])?.probs().to_vec())).collect::<Result<_>>()?,
            channels: xs.iter().zip(&parents).map(|(x, p)| cond_rows(aux, p, x)).collect::<Result<_>>()?,
            nx: q.sizes(),
        })
    }
}

/// Books of the oblivious scheme: `u^n(w)` i.i.d. `p_U` and, for each `w`,
/// `u_j^n(w, w_j)` i.i.d. `p_{U_j}`.
pub fn oblivious_books(
    q: &JointPmf,
    aux: &JointPmf,
    acc: &AccessStructure,
    n: usize,
    rt: &crate::regions::RateTuple,
    seed: u64,
) -> Result<CodebookInstance> {
    check_n(n)?;
    if rt.h() != acc.h {
        return Err(Error::Argument(format!("{} shared rates for {} sources", rt.h(), acc.h)));
    }
    let oa = ObliviousAux::new(q, aux, acc)?;
    table_cells(q.probs().len(), n)?;
    let nw = index_size(n, rt.r_common)?;
    let nj: Vec<usize> = rt.r_shared.iter().map(|&r| index_size(n, r)).collect::<Result<_>>()?;
    let tuples = nj.iter().try_fold(nw, |a, &b| a.checked_mul(b));
    if tuples.is_none_or(|t| t > MAX_OBLIVIOUS_TUPLES) {
        return Err(Error::Resource(format!("index tuples exceed {MAX_OBLIVIOUS_TUPLES}")));
    }
    let mut books = BTreeMap::new();
    books.insert(
        "U".to_string(),
        sample_book(&mut stream(seed, STREAM_U), vec![nw], n, |_, _| oa.p_u.clone()),
    );
    let mut rates = BTreeMap::from([("R".to_string(), rt.r_common)]);
    let mut sizes = BTreeMap::from([("W".to_string(), nw)]);
    for (j, (&size, &r)) in nj.iter().zip(&rt.r_shared).enumerate() {
        let name = format!("U{}", j + 1);
        let mut rng = stream(seed, STREAM_SHARED_BASE + j as u64);
        books.insert(name, sample_book(&mut rng, vec![nw, size], n, |_, _| oa.p_shared[j].clone()));
        rates.insert(format!("R{}", j + 1), r);
        sizes.insert(format!("W{}", j + 1), size);
    }
    Ok(CodebookInstance { scheme: "oblivious".into(), n, rates, sizes, books, seed })
}

/// Oblivious scheme: a uniform message `w` and shared indices `w_j` select
/// nested codewords; processor `i` applies `p(x_i | u, u_{V_i})` letter by letter.
pub fn oblivious_sim(
    q: &JointPmf,
    aux: &JointPmf,
    acc: &AccessStructure,
    n: usize,
    rt: &crate::regions::RateTuple,
    seed: u64,
) -> Result<SimReport> {
    let inst = oblivious_books(q, aux, acc, n, rt, seed)?;
    let oa = ObliviousAux::new(q, aux, acc)?;
    let h = acc.h;
    let states = oa.nshared.iter().product::<usize>() * oa.nu;
    // state radix: u most significant, then u_1..u_h
    let decode = |s: usize| -> (usize, Vec<usize>) {
        let mut rest = s;
        let mut sh = vec![0; h];
        for j in (0..h).rev() {
            sh[j] = rest % oa.nshared[j];
            rest /= oa.nshared[j];
        }
        (rest, sh)
    };
    let cells: usize = oa.nx.iter().product();
    let letters = Letters::new(cells, states, |s| {
        let (u, sh) = decode(s);
        let rows: Vec<&[f64]> = acc
            .views
            .iter()
            .zip(&oa.channels)
            .map(|(v, ch)| {
                let idx = v.iter().fold(u, |a, &j| a * oa.nshared[j - 1] + sh[j - 1]);
                ch[idx].as_slice()
            })
            .collect();
        let mut f = vec![1.0; cells];
        for (c, fc) in f.iter_mut().enumerate() {
            let mut rest = c;
            for i in (0..rows.len()).rev() {
                *fc *= rows[i][rest % oa.nx[i]];
                rest /= oa.nx[i];
            }
        }
        f
    })?;
    let ub = inst.book("U")?;
    let shared: Vec<&Book> = (1..=h).map(|j| inst.book(&format!("U{j}"))).collect::<Result<_>>()?;
    let nw = ub.codewords();
    let nj: Vec<usize> = shared.iter().map(|b| b.index_dims[1]).collect();
    let per_w: usize = nj.iter().product();
    let mut mix = Mixture::new(n);
    let mut idx = vec![0usize; h];
    for w in 0..nw {
        for _ in 0..per_w {
            let key: Vec<u32> = (0..n)
                .map(|k| {
                    let s = (0..h).fold(usize::from(ub.word(w)[k]), |a, j| {
                        a * oa.nshared[j] + usize::from(shared[j].word(w * nj[j] + idx[j])[k])
                    });
                    s as u32
                })
                .collect();
            mix.add(key, 1.0);
            crate::info::tensor::advance(&mut idx, &nj);
        }
    }
    let tv = l1(&mix.induced(&letters)?, &product_target(q.probs(), n)?);
    Ok(SimReport {
        scheme: inst.scheme,
        n,
        message_rate: rt.r_common,
        rates: inst.rates,
        sizes: inst.sizes,
        tv,
        per_f_tv: None,
        codebook_seed: seed,
    })
}
