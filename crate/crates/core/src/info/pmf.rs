use serde::{Deserialize, Serialize};

use super::channel::Channel;
use super::tensor;
use crate::error::{Error, Result};

/// Sum-to-one tolerance for probability tensors.
pub const PMF_TOLERANCE: f64 = 1e-9;

/// A named finite alphabet.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Axis {
    pub name: String,
    pub size: usize,
}

impl Axis {
    pub fn new(name: impl Into<String>, size: usize) -> Self {
        Self {
            name: name.into(),
            size,
        }
    }
}

pub(crate) fn validate_axes(axes: &[Axis]) -> Result<()> {
    for (i, a) in axes.iter().enumerate() {
        if a.name.is_empty() {
            return Err(Error::Validation("axis name must be non-empty".into()));
        }
        if a.size == 0 {
            return Err(Error::Validation(format!("axis {} has an empty alphabet", a.name)));
        }
        if axes[..i].iter().any(|b| b.name == a.name) {
            return Err(Error::Validation(format!("duplicate axis name {}", a.name)));
        }
    }
    Ok(())
}

pub(crate) fn check_entries(probs: &[f64]) -> Result<()> {
    if let Some((i, v)) = probs
        .iter()
        .enumerate()
        .find(|(_, v)| !v.is_finite() || **v < 0.0)
    {
        return Err(Error::Validation(format!(
            "entry {i} is {v}; probabilities must be finite and non-negative"
        )));
    }
    Ok(())
}

/// A dense joint probability mass function over a product of named alphabets.
///
/// Entries are stored row-major with the last axis varying fastest. Values are
/// immutable after construction.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "PmfRepr", into = "PmfRepr")]
pub struct JointPmf {
    axes: Vec<Axis>,
    probs: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct PmfRepr {
    axes: Vec<Axis>,
    probs: Vec<f64>,
}

impl TryFrom<PmfRepr> for JointPmf {
    type Error = Error;
    fn try_from(r: PmfRepr) -> Result<Self> {
        JointPmf::new(r.axes, r.probs)
    }
}

impl From<JointPmf> for PmfRepr {
    fn from(p: JointPmf) -> Self {
        PmfRepr {
            axes: p.axes,
            probs: p.probs,
        }
    }
}

impl JointPmf {
    /// Validating constructor. Masses must already sum to one within [`PMF_TOLERANCE`].
    pub fn new(axes: Vec<Axis>, probs: Vec<f64>) -> Result<Self> {
        validate_axes(&axes)?;
        let cells: usize = axes.iter().map(|a| a.size).product();
        if probs.len() != cells {
            return Err(Error::Validation(format!(
                "tensor has {} entries but the alphabets need {cells}",
                probs.len()
            )));
        }
        check_entries(&probs)?;
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > PMF_TOLERANCE {
            return Err(Error::Validation(format!("entries sum to {total}, not 1")));
        }
        Ok(Self { axes, probs })
    }

    /// Builds a pmf from non-negative weights by explicit renormalization.
    pub fn normalized(axes: Vec<Axis>, weights: Vec<f64>) -> Result<Self> {
        check_entries(&weights)?;
        let total: f64 = weights.iter().sum();
        if total <= 0.0 {
            return Err(Error::Validation("weights have zero total mass".into()));
        }
        Self::new(axes, weights.into_iter().map(|w| w / total).collect())
    }

    /// Evaluates `f` at every multi-index, then validates.
    pub fn from_fn(axes: Vec<Axis>, mut f: impl FnMut(&[usize]) -> f64) -> Result<Self> {
        validate_axes(&axes)?;
        let sizes: Vec<usize> = axes.iter().map(|a| a.size).collect();
        let cells: usize = sizes.iter().product();
        let mut coords = vec![0; sizes.len()];
        let mut probs = Vec::with_capacity(cells);
        for _ in 0..cells {
            probs.push(f(&coords));
            tensor::advance(&mut coords, &sizes);
        }
        Self::new(axes, probs)
    }

    pub fn uniform(axes: Vec<Axis>) -> Result<Self> {
        validate_axes(&axes)?;
        let cells: usize = axes.iter().map(|a| a.size).product();
        Self::new(axes, vec![1.0 / cells as f64; cells])
    }

    pub fn point_mass(axes: Vec<Axis>, at: &[usize]) -> Result<Self> {
        if at.len() != axes.len() || at.iter().zip(&axes).any(|(&i, a)| i >= a.size) {
            return Err(Error::Argument("point-mass index outside the alphabets".into()));
        }
        let at = at.to_vec();
        Self::from_fn(axes, |c| if c == at.as_slice() { 1.0 } else { 0.0 })
    }

    /// Independent product `p(a) q(b)`; axis names must not collide.
    pub fn product(&self, other: &JointPmf) -> Result<Self> {
        let mut axes = self.axes.clone();
        axes.extend(other.axes.iter().cloned());
        let mut probs = Vec::with_capacity(self.probs.len() * other.probs.len());
        for &p in &self.probs {
            probs.extend(other.probs.iter().map(|&q| p * q));
        }
        Self::new(axes, probs)
    }

    pub fn axes(&self) -> &[Axis] {
        &self.axes
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.axes.iter().map(|a| a.size).collect()
    }

    pub fn axis_names(&self) -> Vec<&str> {
        self.axes.iter().map(|a| a.name.as_str()).collect()
    }

    pub fn axis_index(&self, name: &str) -> Result<usize> {
        self.axes
            .iter()
            .position(|a| a.name == name)
            .ok_or_else(|| Error::Argument(format!("no axis named {name}")))
    }

    pub(crate) fn indices_of(&self, names: &[&str]) -> Result<Vec<usize>> {
        let idx = names
            .iter()
            .map(|n| self.axis_index(n))
            .collect::<Result<Vec<_>>>()?;
        for (i, a) in idx.iter().enumerate() {
            if idx[..i].contains(a) {
                return Err(Error::Argument(format!("axis {} listed twice", names[i])));
            }
        }
        Ok(idx)
    }

    /// Mass at a multi-index.
    pub fn get(&self, at: &[usize]) -> f64 {
        let s = tensor::strides(&self.sizes());
        self.probs[at.iter().zip(&s).map(|(i, s)| i * s).sum::<usize>()]
    }

    /// Marginal on the named axes, laid out in the order given.
    pub fn marginal(&self, names: &[&str]) -> Result<JointPmf> {
        let keep = self.indices_of(names)?;
        let probs = tensor::marginal(&self.sizes(), &self.probs, &keep);
        Ok(JointPmf {
            axes: keep.iter().map(|&a| self.axes[a].clone()).collect(),
            probs,
        })
    }

    /// Conditional pmf of the remaining axes given fixed values of some axes.
    pub fn condition(&self, given: &[(&str, usize)]) -> Result<JointPmf> {
        let names: Vec<&str> = given.iter().map(|g| g.0).collect();
        let fixed = self.indices_of(&names)?;
        for (&ax, &(name, v)) in fixed.iter().zip(given) {
            if v >= self.axes[ax].size {
                return Err(Error::Argument(format!("value {v} outside axis {name}")));
            }
        }
        let rest: Vec<usize> = (0..self.axes.len()).filter(|a| !fixed.contains(a)).collect();
        let sizes = self.sizes();
        let mut coords = vec![0; sizes.len()];
        let mut out = Vec::new();
        for &p in &self.probs {
            if fixed.iter().zip(given).all(|(&ax, g)| coords[ax] == g.1) {
                out.push(p);
            }
            tensor::advance(&mut coords, &sizes);
        }
        let axes = rest.iter().map(|&a| self.axes[a].clone()).collect();
        let total: f64 = out.iter().sum();
        if total <= 0.0 {
            return Err(Error::Argument("conditioning event has zero probability".into()));
        }
        JointPmf::new(axes, out.into_iter().map(|p| p / total).collect())
    }

    /// Attaches the channel's outputs: `p(x) W(y | x_inputs)`.
    pub fn compose(&self, channel: &Channel) -> Result<JointPmf> {
        let mut in_idx = Vec::with_capacity(channel.inputs().len());
        for a in channel.inputs() {
            let i = self.axis_index(&a.name)?;
            if self.axes[i].size != a.size {
                return Err(Error::Argument(format!(
                    "channel input {} has size {} but the pmf axis has size {}",
                    a.name, a.size, self.axes[i].size
                )));
            }
            in_idx.push(i);
        }
        let mut axes = self.axes.clone();
        axes.extend(channel.outputs().iter().cloned());
        validate_axes(&axes)?;
        let in_sizes: Vec<usize> = channel.inputs().iter().map(|a| a.size).collect();
        let in_strides = tensor::strides(&in_sizes);
        let out_cells = channel.output_cells();
        let sizes = self.sizes();
        let mut coords = vec![0; sizes.len()];
        let mut probs = Vec::with_capacity(self.probs.len() * out_cells);
        for &p in &self.probs {
            let row: usize = in_idx.iter().zip(&in_strides).map(|(&a, s)| coords[a] * s).sum();
            probs.extend(channel.row(row).iter().map(|&w| p * w));
            tensor::advance(&mut coords, &sizes);
        }
        JointPmf::new(axes, probs)
    }

    /// Same tensor with new axis names (sizes unchanged).
    pub fn renamed(&self, names: &[&str]) -> Result<JointPmf> {
        if names.len() != self.axes.len() {
            return Err(Error::Argument("need one name per axis".into()));
        }
        let axes = names
            .iter()
            .zip(&self.axes)
            .map(|(n, a)| Axis::new(*n, a.size))
            .collect();
        JointPmf::new(axes, self.probs.clone())
    }

    /// Entropy in bits of the marginal on the named axes.
    pub fn entropy_of(&self, names: &[&str]) -> Result<f64> {
        let keep = self.indices_of(names)?;
        Ok(tensor::entropy_bits(&tensor::marginal(
            &self.sizes(),
            &self.probs,
            &keep,
        )))
    }
}
