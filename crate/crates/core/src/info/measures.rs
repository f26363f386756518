use super::pmf::JointPmf;
use super::tensor;
use crate::error::{Error, Result};

/// Tolerance of the inverse binary entropy bisection.
pub const INV_H_TOLERANCE: f64 = 1e-12;

/// Entropy in bits of the full joint.
pub fn entropy(p: &JointPmf) -> f64 {
    tensor::entropy_bits(p.probs())
}

/// Entropy in bits of an arbitrary finite mass vector (`h(p_1, ..., p_k)`).
pub fn entropy_of_masses(masses: &[f64]) -> Result<f64> {
    if masses.iter().any(|m| !m.is_finite() || *m < 0.0) {
        return Err(Error::Domain("masses must be finite and non-negative".into()));
    }
    Ok(tensor::entropy_bits(masses))
}

pub fn binary_entropy(t: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::Domain(format!("binary entropy argument {t} outside [0, 1]")));
    }
    Ok(tensor::entropy_bits(&[t, 1.0 - t]))
}

/// The branch of `h^{-1}` with values in `[0, 1/2]`; bisects to machine
/// resolution, which leaves `|h(t) - y| <= INV_H_TOLERANCE`.
pub fn inv_binary_entropy(y: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&y) {
        return Err(Error::Domain(format!("inverse binary entropy argument {y} outside [0, 1]")));
    }
    if y == 0.0 || y == 1.0 {
        return Ok(0.5 * y);
    }
    let (mut lo, mut hi) = (0.0f64, 0.5f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if tensor::entropy_bits(&[mid, 1.0 - mid]) < y {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= f64::EPSILON {
            break;
        }
    }
    Ok(0.5 * (lo + hi))
}

fn check_disjoint(p: &JointPmf, groups: &[&[&str]]) -> Result<()> {
    let mut seen: Vec<&str> = Vec::new();
    for g in groups {
        for name in g.iter() {
            p.axis_index(name)?;
            if seen.contains(name) {
                return Err(Error::Argument(format!(
                    "axis {name} appears in more than one group"
                )));
            }
            seen.push(name);
        }
    }
    Ok(())
}

fn union<'a>(groups: &[&[&'a str]]) -> Vec<&'a str> {
    groups.iter().flat_map(|g| g.iter().copied()).collect()
}

/// `I(A;B) = H(A) + H(B) - H(A,B)`.
pub fn mutual_information(p: &JointPmf, a: &[&str], b: &[&str]) -> Result<f64> {
    conditional_mutual_information(p, a, b, &[])
}

/// `I(A;B|C) = H(A,C) + H(B,C) - H(A,B,C) - H(C)`.
pub fn conditional_mutual_information(
    p: &JointPmf,
    a: &[&str],
    b: &[&str],
    c: &[&str],
) -> Result<f64> {
    check_disjoint(p, &[a, b, c])?;
    let ac = union(&[a, c]);
    let bc = union(&[b, c]);
    let abc = union(&[a, b, c]);
    Ok(p.entropy_of(&ac)? + p.entropy_of(&bc)? - p.entropy_of(&abc)? - p.entropy_of(c)?)
}

/// Watanabe total correlation `sum_i H(G_i|C) - H(G_1..G_k|C)`.
pub fn total_correlation(p: &JointPmf, groups: &[&[&str]], cond: &[&str]) -> Result<f64> {
    let mut all: Vec<&[&str]> = groups.to_vec();
    all.push(cond);
    check_disjoint(p, &all)?;
    let hc = p.entropy_of(cond)?;
    let mut sum = 0.0;
    for g in groups {
        sum += p.entropy_of(&union(&[g, cond]))? - hc;
    }
    Ok(sum - (p.entropy_of(&union(&all))? - hc))
}

/// Han dual total correlation `H(G_1..G_k|C) - sum_i H(G_i|C, G_j for j != i)`.
pub fn dual_total_correlation(p: &JointPmf, groups: &[&[&str]], cond: &[&str]) -> Result<f64> {
    let mut all: Vec<&[&str]> = groups.to_vec();
    all.push(cond);
    check_disjoint(p, &all)?;
    let h_all = p.entropy_of(&union(&all))?;
    let mut out = h_all - p.entropy_of(cond)?;
    for i in 0..groups.len() {
        let rest: Vec<&str> = groups
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .flat_map(|(_, g)| g.iter().copied())
            .chain(cond.iter().copied())
            .collect();
        out -= h_all - p.entropy_of(&rest)?;
    }
    Ok(out)
}

/// L1 distance between two pmfs on identical axes.
pub fn tv_distance(p: &JointPmf, q: &JointPmf) -> Result<f64> {
    if p.axes() != q.axes() {
        return Err(Error::Argument("total variation needs identical axes".into()));
    }
    Ok(p.probs()
        .iter()
        .zip(q.probs())
        .map(|(a, b)| (a - b).abs())
        .sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::info::Axis;

    fn bits(names: &[&str]) -> Vec<Axis> {
        names.iter().map(|n| Axis::new(*n, 2)).collect()
    }

    fn copies(names: &[&str]) -> JointPmf {
        let n = names.len();
        JointPmf::from_fn(bits(names), |c| {
            if c.iter().all(|&v| v == c[0]) {
                0.5
            } else {
                0.0
            }
        })
        .map(|p| {
            assert_eq!(p.axes().len(), n);
            p
        })
        .unwrap()
    }

    #[test]
    fn binary_entropy_values() {
        assert_eq!(binary_entropy(0.5).unwrap(), 1.0);
        assert_eq!(binary_entropy(0.0).unwrap(), 0.0);
        assert!((binary_entropy(0.1).unwrap() - 0.468995593589281).abs() < 1e-12);
        assert!(binary_entropy(1.1).is_err());
        assert!(binary_entropy(-0.1).is_err());
    }

    #[test]
    fn inverse_binary_entropy_values() {
        assert_eq!(inv_binary_entropy(1.0).unwrap(), 0.5);
        assert_eq!(inv_binary_entropy(0.0).unwrap(), 0.0);
        assert!((inv_binary_entropy(0.468996).unwrap() - 0.1).abs() < 1e-6);
        assert!(inv_binary_entropy(1.01).is_err());
    }

    #[test]
    fn copies_of_a_bit() {
        let p = copies(&["A", "B", "C"]);
        assert!((total_correlation(&p, &[&["A"], &["B"], &["C"]], &[]).unwrap() - 2.0).abs() < 1e-12);
        assert!((dual_total_correlation(&p, &[&["A"], &["B"], &["C"]], &[]).unwrap() - 1.0).abs() < 1e-12);
        assert!(conditional_mutual_information(&p, &["A"], &["B"], &["C"]).unwrap().abs() < 1e-12);
        assert!((mutual_information(&p, &["A"], &["B"]).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn overlapping_groups_rejected() {
        let p = copies(&["A", "B"]);
        assert!(mutual_information(&p, &["A"], &["A"]).is_err());
        assert!(mutual_information(&p, &["A"], &["Z"]).is_err());
    }

    #[test]
    fn tv_values() {
        let x = bits(&["X"]);
        let p0 = JointPmf::point_mass(x.clone(), &[0]).unwrap();
        let p1 = JointPmf::point_mass(x, &[1]).unwrap();
        assert_eq!(tv_distance(&p0, &p1).unwrap(), 2.0);
        assert_eq!(tv_distance(&p0, &p0).unwrap(), 0.0);
        let u = JointPmf::uniform(bits(&["X", "Y"])).unwrap();
        assert!((tv_distance(&u, &copies(&["X", "Y"])).unwrap() - 1.0).abs() < 1e-15);
        assert!(tv_distance(&p0, &u).is_err());
    }
}
