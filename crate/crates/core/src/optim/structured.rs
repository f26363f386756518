//! Structured factorizations whose marginal on observed variables must equal a
//! target pmf, scored by a function of subset entropies.

use super::model::{Model, Subset};
use super::solve::Objective;

/// Largest number of EM sweeps used to fit a structured family to its target.
pub(crate) const EM_SWEEPS: usize = 5000;

/// Marginal gap at which EM stops.
pub(crate) const EM_TOL: f64 = 1e-13;

/// Objective over the entropies of the registered subsets, in registration
/// order; the second argument stands in for every maximum.
pub(crate) type EntropyObjective = dyn Fn(&[f64], &dyn Fn(&[f64]) -> f64) -> f64 + Sync;

pub(crate) struct StructuredProblem {
    pub model: Model,
    obs: Subset,
    q: Vec<f64>,
    subsets: Vec<Subset>,
    objective: Box<EntropyObjective>,
    uses_max: bool,
    tolerance: f64,
}

impl StructuredProblem {
    /// `obs` lists the observed variables whose marginal must equal `q`;
    /// `tolerance` is the largest marginal gap counted as feasible.
    pub fn new(
        model: Model,
        obs: &[usize],
        q: Vec<f64>,
        subsets: &[Vec<usize>],
        uses_max: bool,
        tolerance: f64,
        objective: Box<EntropyObjective>,
    ) -> Self {
        Self {
            obs: model.subset(obs),
            subsets: subsets.iter().map(|s| model.subset(s)).collect(),
            model,
            q,
            objective,
            uses_max,
            tolerance,
        }
    }

    pub fn entropies(&self, joint: &[f64]) -> Vec<f64> {
        self.subsets.iter().map(|s| self.model.entropy(joint, s)).collect()
    }
}

impl Objective for StructuredProblem {
    fn model(&self) -> &Model {
        &self.model
    }

    fn value(&self, joint: &[f64], smax: &dyn Fn(&[f64]) -> f64) -> f64 {
        (self.objective)(&self.entropies(joint), smax)
    }

    fn uses_max(&self) -> bool {
        self.uses_max
    }

    fn eq(&self, joint: &[f64]) -> Vec<f64> {
        let m = self.model.marginal(joint, &self.obs);
        m.iter().zip(&self.q).map(|(a, b)| a - b).collect()
    }

    fn tolerance(&self) -> f64 {
        self.tolerance
    }

    fn initial_penalty(&self) -> f64 {
        1e4
    }

    fn prepare(&self, theta: Vec<f64>) -> Vec<f64> {
        self.model.fit_marginal(&theta, &self.obs, &self.q, EM_SWEEPS, EM_TOL)
    }
}
