//! Unchecked dense-tensor helpers shared by the validated types and the
//! optimizer inner loops.

/// Row-major strides, last axis fastest.
pub(crate) fn strides(sizes: &[usize]) -> Vec<usize> {
    let mut out = vec![1; sizes.len()];
    for i in (0..sizes.len().saturating_sub(1)).rev() {
        out[i] = out[i + 1] * sizes[i + 1];
    }
    out
}

/// Advance a row-major multi-index in place. Returns false after the last cell.
pub(crate) fn advance(coords: &mut [usize], sizes: &[usize]) -> bool {
    for ax in (0..sizes.len()).rev() {
        coords[ax] += 1;
        if coords[ax] < sizes[ax] {
            return true;
        }
        coords[ax] = 0;
    }
    false
}

/// Sum out every axis not listed in `keep`; the result is laid out in `keep` order.
pub(crate) fn marginal(sizes: &[usize], probs: &[f64], keep: &[usize]) -> Vec<f64> {
    let kept: Vec<usize> = keep.iter().map(|&a| sizes[a]).collect();
    let out_strides = strides(&kept);
    let mut out = vec![0.0; kept.iter().product()];
    let mut coords = vec![0usize; sizes.len()];
    for &p in probs {
        if p != 0.0 {
            let idx: usize = keep
                .iter()
                .zip(&out_strides)
                .map(|(&a, &s)| coords[a] * s)
                .sum();
            out[idx] += p;
        }
        advance(&mut coords, sizes);
    }
    out
}

/// Shannon entropy in bits of a vector of non-negative masses; `0 log 0 = 0`.
pub(crate) fn entropy_bits(p: &[f64]) -> f64 {
    p.iter()
        .filter(|&&v| v > 0.0)
        .map(|&v| -v * v.log2())
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn strides_row_major() {
        assert_eq!(strides(&[2, 3, 4]), vec![12, 4, 1]);
        assert_eq!(strides(&[]), Vec::<usize>::new());
    }

    #[test]
    fn marginal_reorders_axes() {
        // p(a, b) over 2x3, keep (b, a)
        let probs = [0.1, 0.2, 0.0, 0.3, 0.15, 0.25];
        let m = marginal(&[2, 3], &probs, &[1, 0]);
        assert_eq!(m.len(), 6);
        assert!((m[0] - 0.1).abs() < 1e-15);
        assert!((m[1] - 0.3).abs() < 1e-15);
        assert!((m[5] - 0.25).abs() < 1e-15);
        let scalar = marginal(&[2, 3], &probs, &[]);
        assert!((scalar[0] - 1.0).abs() < 1e-15);
    }
}
