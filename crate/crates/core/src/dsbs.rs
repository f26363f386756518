//! Closed forms for the doubly symmetric binary source and its one-parameter
//! family of auxiliary channels.
//!
//! `p*` is the Markov (common-information) channel and `p^t` mixes it with the
//! uniform channel: `p^t = t * uniform + (1 - t) * p*`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::info::{binary_entropy, entropy_of_masses, inv_binary_entropy, Axis, Channel, JointPmf};

/// Source parameter `a` in `[0, 1/2]`: `P(X = Y) = a`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DsbsParams {
    a: f64,
}

impl DsbsParams {
    pub fn new(a: f64) -> Result<Self> {
        if !(0.0..=0.5).contains(&a) {
            return Err(Error::Domain(format!("DSBS parameter {a} outside [0, 0.5]")));
        }
        Ok(Self { a })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    /// `b = (1 - sqrt(1 - 2a)) / 2`, so `2 b (1 - b) = a`.
    pub fn b(&self) -> f64 {
        if self.a == 0.0 {
            0.0
        } else if self.a == 0.5 {
            0.5
        } else {
            0.5 * (1.0 - (1.0 - 2.0 * self.a).sqrt())
        }
    }

    /// `alpha(t) = (1 - t) b^2 + (t / 2)(1 - a)`, in `[b^2, (1 - a)/2]`.
    pub fn alpha(&self, t: f64) -> Result<f64> {
        check_t(t)?;
        let b = self.b();
        Ok((1.0 - t) * b * b + 0.5 * t * (1.0 - self.a))
    }
}

fn check_t(t: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::Domain(format!("interpolation weight {t} outside [0, 1]")));
    }
    Ok(())
}

fn xy_axes() -> Vec<Axis> {
    vec![Axis::new("X", 2), Axis::new("Y", 2)]
}

/// `[[a/2, (1-a)/2], [(1-a)/2, a/2]]` over axes `X`, `Y`.
pub fn dsbs_joint(a: f64) -> Result<JointPmf> {
    let a = DsbsParams::new(a)?.a();
    let (same, diff) = (0.5 * a, 0.5 * (1.0 - a));
    JointPmf::new(xy_axes(), vec![same, diff, diff, same])
}

/// Markov channel `p*(u | x, y)` with output axis `U`.
///
/// Unequal pairs are the heavy cells: given `x != y`, `U` agrees with `x`
/// except with probability `b^2 / (1 - a)`. Equal pairs get a uniform `U`.
pub fn wyner_channel(a: f64) -> Result<Channel> {
    let p = DsbsParams::new(a)?;
    let b = p.b();
    let flip = if p.a() == 1.0 { 0.0 } else { b * b / (1.0 - p.a()) };
    Channel::from_fn(xy_axes(), vec![Axis::new("U", 2)], |xy, u| {
        let (x, y) = (xy[0], xy[1]);
        if x == y {
            0.5
        } else if u[0] == x {
            1.0 - flip
        } else {
            flip
        }
    })
}

/// `p^t = t * uniform + (1 - t) * p*`.
pub fn interp_channel(a: f64, t: f64) -> Result<Channel> {
    check_t(t)?;
    let star = wyner_channel(a)?;
    let flat = Channel::uniform(xy_axes(), vec![Axis::new("U", 2)])?;
    star.mix(&flat, t)
}

/// Both mutual-information terms of the family and the resulting objective.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DsbsPoint {
    pub a: f64,
    pub t: f64,
    /// `max{cmi, (mi + cmi) / 2}`.
    pub f: f64,
    /// `I(X,Y;U)` under `p^t`.
    pub mi_term: f64,
    /// `I(X;Y|U)` under `p^t`.
    pub cmi_term: f64,
}

pub fn f_point(a: f64, t: f64) -> Result<DsbsPoint> {
    let p = DsbsParams::new(a)?;
    let alpha = p.alpha(t)?;
    let half = 0.5 * a;
    let h4 = entropy_of_masses(&[alpha, half, half, (1.0 - a - alpha).max(0.0)])?;
    let mi = (1.0 + binary_entropy(a)? - h4).max(0.0);
    let cmi = (2.0 * binary_entropy((alpha + half).min(1.0))? - h4).max(0.0);
    Ok(DsbsPoint {
        a,
        t,
        f: cmi.max(0.5 * (mi + cmi)),
        mi_term: mi,
        cmi_term: cmi,
    })
}

pub fn f_curve(a: f64, t: f64) -> Result<f64> {
    Ok(f_point(a, t)?.f)
}

/// The weight at which the two terms of the family coincide.
pub fn t_star(a: f64) -> Result<f64> {
    if !(a > 0.0 && a < 0.5) {
        return Err(Error::Domain(format!("crossing weight needs a in (0, 0.5), got {a}")));
    }
    let p = DsbsParams::new(a)?;
    let b2 = p.b() * p.b();
    let target = inv_binary_entropy(0.5 * (1.0 + binary_entropy(a)?))?;
    Ok(((target - 0.5 * a - b2) / (0.5 * (1.0 - a) - b2)).clamp(0.0, 1.0))
}

/// `C(X;Y) = 1 + h(a) - 2 h(b)`.
pub fn dsbs_wyner_ci(a: f64) -> Result<f64> {
    let p = DsbsParams::new(a)?;
    Ok((1.0 + binary_entropy(a)? - 2.0 * binary_entropy(p.b())?).max(0.0))
}

/// Evaluates the family on every weight in `ts`.
pub fn sweep(a: f64, ts: &[f64]) -> Result<Vec<DsbsPoint>> {
    ts.iter().map(|&t| f_point(a, t)).collect()
}

pub const SWEEP_CSV_HEADER: &str = "a,t,f,mi_term,cmi_term";

/// Sweep rows under [`SWEEP_CSV_HEADER`].
pub fn sweep_csv(points: &[DsbsPoint]) -> String {
    let mut out = String::from(SWEEP_CSV_HEADER);
    out.push('\n');
    for p in points {
        out.push_str(&format!("{},{},{},{},{}\n", p.a, p.t, p.f, p.mi_term, p.cmi_term));
    }
    out
}
