//! Coordination rates for distributed sampling with shared randomness:
//! information measures, auxiliary-channel optimizers, exact rate-region
//! polytopes, and finite-blocklength protocol simulations.

pub mod dsbs;
pub mod error;
pub mod info;
pub mod optim;
pub mod regions;
pub mod sim;

pub use error::{Error, Result};
