use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::info::Channel;

/// Knobs shared by every auxiliary-channel optimizer.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct OptimizerConfig {
    /// Auxiliary alphabet size; `None` picks the problem's cardinality bound.
    pub card_u: Option<usize>,
    pub restarts: usize,
    /// L-BFGS iteration cap per inner solve.
    pub max_iters: usize,
    pub step_tol: f64,
    pub value_tol: f64,
    pub seed: u64,
    /// Points per axis for the brute-force grid oracle.
    pub grid_resolution: Option<usize>,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            card_u: None,
            restarts: 32,
            max_iters: 400,
            step_tol: 1e-10,
            value_tol: 1e-12,
            seed: 0,
            grid_resolution: None,
        }
    }
}

impl OptimizerConfig {
    pub fn validate(&self) -> Result<()> {
        if self.card_u == Some(0) {
            return Err(Error::Argument("card_u must be at least 1".into()));
        }
        if self.restarts == 0 || self.max_iters == 0 {
            return Err(Error::Argument("restarts and max_iters must be positive".into()));
        }
        if !(self.step_tol > 0.0 && self.value_tol > 0.0) {
            return Err(Error::Argument("tolerances must be positive".into()));
        }
        Ok(())
    }

    pub(crate) fn card_or(&self, default: usize) -> usize {
        self.card_u.unwrap_or(default)
    }
}

/// Outcome of one restart.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RestartRecord {
    pub index: usize,
    pub value: f64,
    /// Largest constraint violation at the restart's final point.
    pub violation: f64,
    pub iterations: usize,
    pub converged: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    /// Best-first.
    pub per_restart: Vec<RestartRecord>,
    /// Whether the winning restart met its stopping tolerances and constraints.
    pub converged: bool,
    pub lower_bound: f64,
    pub upper_bound: f64,
    /// Problem-specific values at the returned channel.
    pub extras: BTreeMap<String, f64>,
}

/// A certified upper bound on a minimum: `value` is the objective evaluated at
/// `channel`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OptResult {
    pub value: f64,
    pub channel: Channel,
    pub diagnostics: Diagnostics,
}

impl OptResult {
    pub fn extra(&self, key: &str) -> Option<f64> {
        self.diagnostics.extras.get(key).copied()
    }

    pub fn per_restart_values(&self) -> Vec<f64> {
        self.diagnostics.per_restart.iter().map(|r| r.value).collect()
    }
}
