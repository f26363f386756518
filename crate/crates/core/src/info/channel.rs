use serde::{Deserialize, Serialize};

use super::pmf::{check_entries, validate_axes, Axis, PMF_TOLERANCE};
use super::tensor;
use crate::error::{Error, Result};

/// A conditional pmf `p(outputs | inputs)`.
///
/// Stored input-major: each contiguous block of `output_cells()` entries is the
/// output pmf for one input multi-index.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ChannelRepr", into = "ChannelRepr")]
pub struct Channel {
    inputs: Vec<Axis>,
    outputs: Vec<Axis>,
    probs: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct ChannelRepr {
    inputs: Vec<Axis>,
    outputs: Vec<Axis>,
    probs: Vec<f64>,
}

impl TryFrom<ChannelRepr> for Channel {
    type Error = Error;
    fn try_from(r: ChannelRepr) -> Result<Self> {
        Channel::new(r.inputs, r.outputs, r.probs)
    }
}

impl From<Channel> for ChannelRepr {
    fn from(c: Channel) -> Self {
        ChannelRepr {
            inputs: c.inputs,
            outputs: c.outputs,
            probs: c.probs,
        }
    }
}

impl Channel {
    pub fn new(inputs: Vec<Axis>, outputs: Vec<Axis>, probs: Vec<f64>) -> Result<Self> {
        let mut all = inputs.clone();
        all.extend(outputs.iter().cloned());
        validate_axes(&all)?;
        if outputs.is_empty() {
            return Err(Error::Validation("a channel needs at least one output axis".into()));
        }
        let in_cells: usize = inputs.iter().map(|a| a.size).product();
        let out_cells: usize = outputs.iter().map(|a| a.size).product();
        if probs.len() != in_cells * out_cells {
            return Err(Error::Validation(format!(
                "channel has {} entries, expected {}",
                probs.len(),
                in_cells * out_cells
            )));
        }
        check_entries(&probs)?;
        for (i, row) in probs.chunks(out_cells).enumerate() {
            let s: f64 = row.iter().sum();
            if (s - 1.0).abs() > PMF_TOLERANCE {
                return Err(Error::Validation(format!(
                    "conditional slice {i} sums to {s}, not 1"
                )));
            }
        }
        Ok(Self {
            inputs,
            outputs,
            probs,
        })
    }

    /// Evaluates `f(input, output)` at every pair of multi-indices, then validates.
    pub fn from_fn(
        inputs: Vec<Axis>,
        outputs: Vec<Axis>,
        mut f: impl FnMut(&[usize], &[usize]) -> f64,
    ) -> Result<Self> {
        let in_sizes: Vec<usize> = inputs.iter().map(|a| a.size).collect();
        let out_sizes: Vec<usize> = outputs.iter().map(|a| a.size).collect();
        let in_cells: usize = in_sizes.iter().product();
        let out_cells: usize = out_sizes.iter().product();
        let mut probs = Vec::with_capacity(in_cells * out_cells);
        let mut ic = vec![0; in_sizes.len()];
        for _ in 0..in_cells {
            let mut oc = vec![0; out_sizes.len()];
            for _ in 0..out_cells {
                probs.push(f(&ic, &oc));
                tensor::advance(&mut oc, &out_sizes);
            }
            tensor::advance(&mut ic, &in_sizes);
        }
        Self::new(inputs, outputs, probs)
    }

    /// Output independent of input, uniform over the output alphabet.
    pub fn uniform(inputs: Vec<Axis>, outputs: Vec<Axis>) -> Result<Self> {
        let out_cells: usize = outputs.iter().map(|a| a.size).product();
        Self::from_fn(inputs, outputs, |_, _| 1.0 / out_cells as f64)
    }

    /// Deterministic copy of `input` onto a new axis named `output`.
    pub fn identity(input: &Axis, output: &str) -> Result<Self> {
        Self::from_fn(
            vec![input.clone()],
            vec![Axis::new(output, input.size)],
            |i, o| if i[0] == o[0] { 1.0 } else { 0.0 },
        )
    }

    /// Convex combination `t * other + (1 - t) * self`; axes must match.
    pub fn mix(&self, other: &Channel, t: f64) -> Result<Self> {
        if self.inputs != other.inputs || self.outputs != other.outputs {
            return Err(Error::Argument("mixed channels must share axes".into()));
        }
        if !(0.0..=1.0).contains(&t) {
            return Err(Error::Domain(format!("mixing weight {t} outside [0, 1]")));
        }
        let probs = self
            .probs
            .iter()
            .zip(&other.probs)
            .map(|(&p, &q)| (1.0 - t) * p + t * q)
            .collect();
        Self::new(self.inputs.clone(), self.outputs.clone(), probs)
    }

    pub fn inputs(&self) -> &[Axis] {
        &self.inputs
    }

    pub fn outputs(&self) -> &[Axis] {
        &self.outputs
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn output_cells(&self) -> usize {
        self.outputs.iter().map(|a| a.size).product()
    }

    pub fn input_cells(&self) -> usize {
        self.inputs.iter().map(|a| a.size).product()
    }

    /// Output pmf for the flat input index `input`.
    pub fn row(&self, input: usize) -> &[f64] {
        let k = self.output_cells();
        &self.probs[input * k..(input + 1) * k]
    }

    /// Probability of flat output `output` given flat input `input`.
    pub fn get(&self, input: usize, output: usize) -> f64 {
        self.probs[input * self.output_cells() + output]
    }
}
