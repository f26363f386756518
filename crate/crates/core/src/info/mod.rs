//! Finite joint distributions, channels, and information measures in bits.

mod channel;
mod measures;
mod pmf;
pub(crate) mod tensor;

pub use channel::Channel;
pub use measures::{
    binary_entropy, conditional_mutual_information, dual_total_correlation, entropy,
    entropy_of_masses, inv_binary_entropy, mutual_information, total_correlation, tv_distance,
    INV_H_TOLERANCE,
};
pub use pmf::{Axis, JointPmf, PMF_TOLERANCE};
