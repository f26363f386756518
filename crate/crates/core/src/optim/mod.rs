//! Nonconvex minimization over auxiliary channels and structured families:
//! multistart L-BFGS on softmax logits, smoothed maxima, augmented Lagrangians.

mod config;
pub mod lbfgs;
pub(crate) mod model;
pub mod oracle;
mod problems;
pub(crate) mod solve;
pub(crate) mod structured;

pub use config::{Diagnostics, OptResult, OptimizerConfig, RestartRecord};
pub use problems::{
    gamma_star, minmax_equivalence_check, pair_terms, r_opt_indv, r_opt_two, r_opt_two_alternate,
    relaxed_wyner_ci, wyner_ci, MinmaxReport, PairTerms, AUX_AXIS, CONSTRAINT_TOL, GAMMA_WIDTH,
};
pub(crate) use problems::{channel_run, diagnostics, ChannelKind};
pub use solve::SHARPNESS;
