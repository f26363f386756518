//! Exact n-letter output distributions of mixtures of letterwise product channels.

use crate::error::{Error, Result};
use std::collections::BTreeMap;

/// Largest n-letter output table.
pub const MAX_TABLE_CELLS: usize = 1 << 24;
/// Largest number of letter states with a precomputed output factor.
const MAX_STATES: usize = 1 << 16;

/// Output factors per letter state: sparse `(cell, probability)` lists.
pub(crate) struct Letters {
    pub cell: usize,
    pub factors: Vec<Vec<(usize, f64)>>,
}

impl Letters {
    pub fn new(cell: usize, states: usize, mut factor: impl FnMut(usize) -> Vec<f64>) -> Result<Self> {
        if states > MAX_STATES {
            return Err(Error::Resource(format!("{states} letter states exceed {MAX_STATES}")));
        }
        let factors = (0..states)
            .map(|s| {
                factor(s)
                    .into_iter()
                    .enumerate()
                    .filter(|(_, p)| *p > 0.0)
                    .collect()
            })
            .collect();
        Ok(Self { cell, factors })
    }
}

pub(crate) fn table_cells(cell: usize, n: usize) -> Result<usize> {
    cell.checked_pow(n as u32)
        .filter(|&c| c <= MAX_TABLE_CELLS)
        .ok_or_else(|| Error::Resource(format!("{cell}^{n} output cells exceed {MAX_TABLE_CELLS}")))
}

/// Unnormalized weights on state sequences; each sequence induces a product
/// distribution and the mixture is normalized once at expansion.
pub(crate) struct Mixture {
    n: usize,
    weights: BTreeMap<Vec<u32>, f64>,
}

impl Mixture {
    pub fn new(n: usize) -> Self {
        Self { n, weights: BTreeMap::new() }
    }

    pub fn add(&mut self, key: Vec<u32>, w: f64) {
        debug_assert_eq!(key.len(), self.n);
        *self.weights.entry(key).or_insert(0.0) += w;
    }

    /// Output table, letter 0 most significant.
    pub fn induced(&self, letters: &Letters) -> Result<Vec<f64>> {
        let cells = table_cells(letters.cell, self.n)?;
        let total: f64 = self.weights.values().sum();
        if total <= 0.0 {
            return Err(Error::Internal("mixture carries no weight".into()));
        }
        let mut out = vec![0.0; cells];
        for (key, &w) in &self.weights {
            if w > 0.0 {
                expand(letters, key, 0, 0, w / total, &mut out);
            }
        }
        let total: f64 = out.iter().sum();
        if (total - 1.0).abs() > crate::info::PMF_TOLERANCE {
            return Err(Error::Internal(format!("induced mass {total} differs from 1")));
        }
        Ok(out)
    }
}

fn expand(letters: &Letters, key: &[u32], k: usize, idx: usize, w: f64, out: &mut [f64]) {
    if k == key.len() {
        out[idx] += w;
        return;
    }
    for &(c, p) in &letters.factors[key[k] as usize] {
        expand(letters, key, k + 1, idx * letters.cell + c, w * p, out);
    }
}

/// `q^{(n)}` in the same layout as [`Mixture::induced`].
pub(crate) fn product_target(q: &[f64], n: usize) -> Result<Vec<f64>> {
    table_cells(q.len(), n)?;
    let mut t = vec![1.0];
    for _ in 0..n {
        t = t.iter().flat_map(|&a| q.iter().map(move |&b| a * b)).collect();
    }
    Ok(t)
}

pub(crate) fn l1(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum()
}
