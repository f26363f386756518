//! Products of conditional tables over small discrete variables, with free
//! tables parameterized row-wise by softmax logits.

use rand::Rng;

use crate::info::tensor;

#[derive(Clone, Debug)]
struct Factor {
    rows: usize,
    child_cells: usize,
    fixed: Option<Vec<f64>>,
    offset: usize,
}

/// Joint `prod_f p_f(child_f | parents_f)` over variables with fixed sizes.
#[derive(Clone, Debug)]
pub(crate) struct Model {
    sizes: Vec<usize>,
    factors: Vec<Factor>,
    maps: Vec<Vec<u32>>,
    cells: usize,
    n_params: usize,
}

/// Cell-to-marginal index map for a subset of variables.
#[derive(Clone, Debug)]
pub(crate) struct Subset {
    map: Vec<u32>,
    size: usize,
}

/// How a restart seeds its logits.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Init {
    NearUniform,
    Diagonal,
    Random,
}

fn flat_map(sizes: &[usize], vars: &[usize]) -> (Vec<u32>, usize) {
    let sub: Vec<usize> = vars.iter().map(|&v| sizes[v]).collect();
    let strides = tensor::strides(&sub);
    let cells: usize = sizes.iter().product();
    let mut coords = vec![0; sizes.len()];
    let mut out = Vec::with_capacity(cells);
    for _ in 0..cells {
        let idx: usize = vars.iter().zip(&strides).map(|(&v, s)| coords[v] * s).sum();
        out.push(idx as u32);
        tensor::advance(&mut coords, sizes);
    }
    (out, sub.iter().product())
}

impl Model {
    pub fn new(sizes: Vec<usize>) -> Self {
        let cells = sizes.iter().product();
        Self {
            sizes,
            factors: Vec::new(),
            maps: Vec::new(),
            cells,
            n_params: 0,
        }
    }

    fn push(&mut self, child: &[usize], parents: &[usize], fixed: Option<Vec<f64>>) -> usize {
        let rows: usize = parents.iter().map(|&v| self.sizes[v]).product();
        let child_cells: usize = child.iter().map(|&v| self.sizes[v]).product();
        let mut vars = parents.to_vec();
        vars.extend_from_slice(child);
        let (map, _) = flat_map(&self.sizes, &vars);
        let offset = self.n_params;
        if let Some(t) = &fixed {
            assert_eq!(t.len(), rows * child_cells);
        } else {
            self.n_params += rows * child_cells;
        }
        self.factors.push(Factor {
            rows,
            child_cells,
            fixed,
            offset,
        });
        self.maps.push(map);
        self.factors.len() - 1
    }

    /// A free conditional table `p(child | parents)`.
    pub fn add_free(&mut self, child: &[usize], parents: &[usize]) -> usize {
        self.push(child, parents, None)
    }

    /// A fixed table laid out parent-major, child-minor.
    pub fn add_fixed(&mut self, child: &[usize], parents: &[usize], table: Vec<f64>) -> usize {
        self.push(child, parents, Some(table))
    }

    pub fn n_params(&self) -> usize {
        self.n_params
    }

    pub fn subset(&self, vars: &[usize]) -> Subset {
        let (map, size) = flat_map(&self.sizes, vars);
        Subset { map, size }
    }

    /// Conditional table of factor `f`, parent-major.
    pub fn table(&self, f: usize, theta: &[f64]) -> Vec<f64> {
        let fac = &self.factors[f];
        if let Some(t) = &fac.fixed {
            return t.clone();
        }
        let k = fac.child_cells;
        let mut out = Vec::with_capacity(fac.rows * k);
        for r in 0..fac.rows {
            let logits = &theta[fac.offset + r * k..fac.offset + (r + 1) * k];
            let m = logits.iter().fold(f64::NEG_INFINITY, |a, &b| a.max(b));
            let e: Vec<f64> = logits.iter().map(|l| (l - m).exp()).collect();
            let s: f64 = e.iter().sum();
            out.extend(e.into_iter().map(|v| v / s));
        }
        out
    }

    pub fn joint(&self, theta: &[f64]) -> Vec<f64> {
        let mut joint = vec![1.0; self.cells];
        for (f, map) in self.maps.iter().enumerate() {
            let t = self.table(f, theta);
            for (j, &i) in joint.iter_mut().zip(map) {
                *j *= t[i as usize];
            }
        }
        joint
    }

    pub fn marginal(&self, joint: &[f64], s: &Subset) -> Vec<f64> {
        let mut m = vec![0.0; s.size];
        for (&p, &i) in joint.iter().zip(&s.map) {
            m[i as usize] += p;
        }
        m
    }

    pub fn entropy(&self, joint: &[f64], s: &Subset) -> f64 {
        tensor::entropy_bits(&self.marginal(joint, s))
    }

    /// Logits that make factor `f` (approximately) equal to `table`.
    pub fn set_table(&self, theta: &mut [f64], f: usize, table: &[f64]) {
        let fac = &self.factors[f];
        for (i, &p) in table.iter().enumerate() {
            theta[fac.offset + i] = p.max(1e-12).ln();
        }
    }

    pub fn init(&self, kind: Init, rng: &mut impl Rng) -> Vec<f64> {
        let mut theta = vec![0.0; self.n_params];
        for fac in self.factors.iter().filter(|f| f.fixed.is_none()) {
            let k = fac.child_cells;
            for r in 0..fac.rows {
                for c in 0..k {
                    let v = match kind {
                        Init::NearUniform => rng.random_range(-0.05..0.05),
                        Init::Diagonal => {
                            let base = if c == r % k { 3.0 } else { 0.0 };
                            base + rng.random_range(-0.05..0.05)
                        }
                        Init::Random => rng.random_range(-3.0..3.0),
                    };
                    theta[fac.offset + r * k + c] = v;
                }
            }
        }
        theta
    }

    /// EM toward a model whose marginal on `obs` equals `q`: each sweep
    /// refits every free table to the posterior-completed joint, so the
    /// likelihood of `q` never decreases and an exact fit is a fixed point.
    /// Stops once the marginal gap is below `tol`.
    pub fn fit_marginal(&self, theta: &[f64], obs: &Subset, q: &[f64], sweeps: usize, tol: f64) -> Vec<f64> {
        let mut theta = theta.to_vec();
        for _ in 0..sweeps {
            let joint = self.joint(&theta);
            let m = self.marginal(&joint, obs);
            let gap = m.iter().zip(q).fold(0.0f64, |g, (a, b)| g.max((a - b).abs()));
            if gap < tol {
                break;
            }
            let target: Vec<f64> = joint
                .iter()
                .zip(&obs.map)
                .map(|(&p, &o)| {
                    let mo = m[o as usize];
                    if mo > 0.0 { p * q[o as usize] / mo } else { 0.0 }
                })
                .collect();
            for (f, fac) in self.factors.iter().enumerate() {
                if fac.fixed.is_some() {
                    continue;
                }
                let mut counts = vec![0.0; fac.rows * fac.child_cells];
                for (&t, &i) in target.iter().zip(&self.maps[f]) {
                    counts[i as usize] += t;
                }
                let mut table = self.table(f, &theta);
                for r in 0..fac.rows {
                    let row = &counts[r * fac.child_cells..(r + 1) * fac.child_cells];
                    let s: f64 = row.iter().sum();
                    if s > 0.0 {
                        for (dst, &c) in table[r * fac.child_cells..].iter_mut().zip(row) {
                            *dst = c / s;
                        }
                    }
                }
                self.set_table(&mut theta, f, &table);
            }
        }
        theta
    }
}
