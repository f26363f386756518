//! Finite-blocklength simulations of the coordination schemes. Every induced
//! output distribution is computed exactly for one sampled codebook.

mod books;
mod engine;
mod schemes;
mod trend;

pub use books::{index_size, Book, CodebookInstance};
pub use engine::MAX_TABLE_CELLS;
pub use schemes::{
    binned_books, binned_scheme_sim, oblivious_books, oblivious_sim, wyner_books,
    wyner_synthesis_sim, BinnedRates, Encoder, SimReport, DECOMPOSITION_TOLERANCE,
    DEFAULT_TYPICALITY_EPSILON, MAX_BINNED_TUPLES, MAX_OBLIVIOUS_TUPLES,
};
pub use trend::{trend_report, SchemeConfig, TrendAggregate, TrendReport, TREND_CSV_HEADER};

use crate::error::{Error, Result};

/// What each processor holds after the XOR conversion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct XorOutcome {
    /// `w1 xor w2`, the only bits sent.
    pub message: Vec<bool>,
    pub at_p1: (Vec<bool>, Vec<bool>),
    pub at_p2: (Vec<bool>, Vec<bool>),
}

impl XorOutcome {
    /// Common bits both processors end up sharing: twice the message length.
    pub fn common_bits(&self) -> usize {
        self.at_p1.0.len() + self.at_p1.1.len()
    }
}

fn xor(a: &[bool], b: &[bool]) -> Vec<bool> {
    a.iter().zip(b).map(|(x, y)| x ^ y).collect()
}

/// `P1` holds `w1`, `P2` holds `w2`; after receiving `w1 xor w2` each recovers both.
pub fn xor_scheme(w1: &[bool], w2: &[bool]) -> Result<XorOutcome> {
    if w1.len() != w2.len() {
        return Err(Error::Argument(format!("bit strings of lengths {} and {}", w1.len(), w2.len())));
    }
    let message = xor(w1, w2);
    let at_p1 = (w1.to_vec(), xor(&message, w1));
    let at_p2 = (xor(&message, w2), w2.to_vec());
    Ok(XorOutcome { message, at_p1, at_p2 })
}
