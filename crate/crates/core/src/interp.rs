//! Local Lagrange interpolation on uniform 1-D node sets.

/// Interpolates uniformly spaced samples `values` (first node `x0`,
/// spacing `h`) at `x` with a 4-point cubic stencil.
///
/// The stencil is shifted inward near the ends rather than extrapolated,
/// so every evaluation uses four existing nodes (three when only three
/// exist). Points outside the node range are clamped to it.
pub fn cubic_uniform(x0: f64, h: f64, values: &[f64], x: f64) -> f64 {
    let n = values.len();
    assert!(n >= 3, "cubic_uniform needs at least 3 nodes");
    let t = ((x - x0) / h).clamp(0.0, (n - 1) as f64);
    let width = n.min(4);
    let cell = (t.floor() as usize).min(n - 2);
    let start = cell.saturating_sub(1).min(n - width);
    let local = t - start as f64;
    let mut acc = 0.0;
    for k in 0..width {
        let mut w = 1.0;
        for m in 0..width {
            if m != k {
                w *= (local - m as f64) / (k as f64 - m as f64);
            }
        }
        acc += w * values[start + k];
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_on_cubics_everywhere() {
        let (x0, h) = (-1.0, 0.25);
        let p = |x: f64| 2.0 * x * x * x - x * x + 0.5 * x - 3.0;
        let vals: Vec<f64> = (0..9).map(|k| p(x0 + h * k as f64)).collect();
        for k in 0..=80 {
            let x = -1.0 + 0.025 * k as f64;
            assert!((cubic_uniform(x0, h, &vals, x) - p(x)).abs() < 1e-12, "x = {x}");
        }
    }

    #[test]
    fn reproduces_nodes_and_handles_three_points() {
        let vals = [1.0, 4.0, 9.0];
        assert_eq!(cubic_uniform(1.0, 1.0, &vals, 2.0), 4.0);
        assert!((cubic_uniform(1.0, 1.0, &vals, 2.5) - 6.25).abs() < 1e-14);
        assert_eq!(cubic_uniform(1.0, 1.0, &vals, 10.0), 9.0);
    }
}
