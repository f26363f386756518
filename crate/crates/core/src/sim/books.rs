//! Codebook sampling and index-set sizing.

use crate::error::{Error, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Largest `n * R` accepted when sizing an index set.
const MAX_INDEX_BITS: f64 = 40.0;

/// Stream ids keep every book's draws independent of the others.
pub(crate) const STREAM_U: u64 = 1;
pub(crate) const STREAM_X: u64 = 2;
pub(crate) const STREAM_Y: u64 = 3;
pub(crate) const STREAM_SHARED_BASE: u64 = 16;

/// `ceil(2^{nR})`, with `nR` within 1e-9 of an integer snapped to it.
pub fn index_size(n: usize, rate: f64) -> Result<usize> {
    if !rate.is_finite() || rate < 0.0 {
        return Err(Error::Argument(format!("rate {rate} must be finite and non-negative")));
    }
    let bits = n as f64 * rate;
    if bits > MAX_INDEX_BITS {
        return Err(Error::Resource(format!("index set of 2^{bits:.1} entries")));
    }
    let snapped = if (bits - bits.round()).abs() < 1e-9 { bits.round() } else { bits };
    Ok(snapped.exp2().ceil() as usize)
}

/// Symbols of one book: `index_dims` then `n` letters, row-major.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Book {
    pub index_dims: Vec<usize>,
    pub n: usize,
    pub symbols: Vec<u16>,
}

impl Book {
    pub fn codewords(&self) -> usize {
        self.index_dims.iter().product()
    }

    /// Letters of the codeword at flat index `i`.
    pub fn word(&self, i: usize) -> &[u16] {
        &self.symbols[i * self.n..(i + 1) * self.n]
    }
}

/// One sampled set of books for a scheme at blocklength `n`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CodebookInstance {
    pub scheme: String,
    pub n: usize,
    pub rates: BTreeMap<String, f64>,
    pub sizes: BTreeMap<String, usize>,
    pub books: BTreeMap<String, Book>,
    pub seed: u64,
}

impl CodebookInstance {
    pub(crate) fn book(&self, name: &str) -> Result<&Book> {
        self.books
            .get(name)
            .ok_or_else(|| Error::Internal(format!("missing book {name}")))
    }
}

pub(crate) fn stream(seed: u64, id: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(id);
    rng
}

/// Inverse-cdf draw; rounding slack falls on the last positive entry.
pub(crate) fn draw(rng: &mut ChaCha8Rng, p: &[f64]) -> u16 {
    let r: f64 = rng.random();
    let mut acc = 0.0;
    let mut last = 0;
    for (i, &v) in p.iter().enumerate() {
        if v > 0.0 {
            acc += v;
            last = i;
            if r < acc {
                return i as u16;
            }
        }
    }
    last as u16
}

/// i.i.d. book with letters drawn from `row(parent letter)`.
pub(crate) fn sample_book(
    rng: &mut ChaCha8Rng,
    index_dims: Vec<usize>,
    n: usize,
    mut row: impl FnMut(usize, usize) -> Vec<f64>,
) -> Book {
    let count: usize = index_dims.iter().product();
    let mut symbols = Vec::with_capacity(count * n);
    for i in 0..count {
        for k in 0..n {
            let p = row(i, k);
            symbols.push(draw(rng, &p));
        }
    }
    Book { index_dims, n, symbols }
}
