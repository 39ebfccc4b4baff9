//! Discrete partial Legendre transform in the x-variable.
//!
//! Each row `y = η` of a field is conjugated independently:
//! `u*(ξ, η) = max_i (x_i·ξ − u(x_i, η))` on a uniform ξ-grid. The ξ-range
//! is the intersection over rows of `[u_x(x_min), u_x(x_max)]`, so the
//! result lives on a rectangle. Applying the same map to `u*` returns to
//! the x-side, which is how [`plt_inverse`] is built.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::grid::{GridSpec, ScalarField};
use crate::interp::cubic_uniform;
use crate::params::EquationParams;
use crate::residual::{fd_hessian, ResidualReport};

/// How the per-row maximum is located.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ConjugateMethod {
    /// Scan every node for every slope, O(n·m) per row.
    Direct,
    /// Walk the argmax forward as the slope increases, O(n + m) per row.
    /// Valid because the argmax is nondecreasing in the slope for convex rows.
    #[default]
    MonotoneScan,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PltResult {
    /// `u*` on the `(ξ, η)` grid.
    pub field_star: ScalarField,
    /// Grid of `field_star`: ξ from the common slope range, η copied from y.
    pub xi_spec: GridSpec,
}

/// End slopes of a row from second-order one-sided differences.
fn end_slopes(row: &[f64], h: f64) -> (f64, f64) {
    let n = row.len();
    let lo = (-3.0 * row[0] + 4.0 * row[1] - row[2]) / (2.0 * h);
    let hi = (3.0 * row[n - 1] - 4.0 * row[n - 2] + row[n - 3]) / (2.0 * h);
    (lo, hi)
}

fn check_row(row: &[f64], h: f64, index: usize, y: f64) -> Result<(f64, f64)> {
    let (lo, hi) = end_slopes(row, h);
    let scale = row.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let convex = row
        .windows(3)
        .all(|w| w[2] - 2.0 * w[1] + w[0] >= -1e-14 * scale);
    if !convex {
        return Err(Error::NonConvexSlice { index, y });
    }
    if !(hi - lo > 1e-12 * (1.0 + lo.abs() + hi.abs())) {
        return Err(Error::DegenerateSlope(format!(
            "row {index} (y = {y}) has slope range [{lo}, {hi}]"
        )));
    }
    Ok((lo, hi))
}

fn conjugate_row(xs: &[f64], row: &[f64], slopes: &[f64], method: ConjugateMethod, out: &mut Vec<f64>) {
    match method {
        ConjugateMethod::Direct => {
            for &s in slopes {
                let mut best = f64::NEG_INFINITY;
                for (x, u) in xs.iter().zip(row) {
                    let v = x * s - u;
                    if v > best {
                        best = v;
                    }
                }
                out.push(best);
            }
        }
        ConjugateMethod::MonotoneScan => {
            let mut k = 0;
            for &s in slopes {
                let mut best = xs[k] * s - row[k];
                while k + 1 < xs.len() {
                    let next = xs[k + 1] * s - row[k + 1];
                    if next > best {
                        best = next;
                        k += 1;
                    } else {
                        break;
                    }
                }
                out.push(best);
            }
        }
    }
}

/// Conjugates every row of `field` onto `n_out` uniformly spaced slopes.
pub fn conjugate_in_x(field: &ScalarField, n_out: usize, method: ConjugateMethod) -> Result<ScalarField> {
    let g = *field.spec();
    if n_out < 3 {
        return Err(Error::InvalidGrid(format!("need at least 3 output nodes, got {n_out}")));
    }
    let h = g.hx();
    let mut lo = f64::NEG_INFINITY;
    let mut hi = f64::INFINITY;
    for j in 0..g.ny {
        let (l, r) = check_row(field.row(j), h, j, g.y(j))?;
        lo = lo.max(l);
        hi = hi.min(r);
    }
    if !(lo < hi) {
        return Err(Error::DegenerateSlope(format!(
            "rows share no common slope interval (intersection [{lo}, {hi}])"
        )));
    }
    let out_spec = GridSpec::new(lo, hi, g.y_min, g.y_max, n_out, g.ny)?;
    let xs = g.xs();
    let slopes = out_spec.xs();
    let mut values = Vec::with_capacity(out_spec.len());
    for j in 0..g.ny {
        conjugate_row(&xs, field.row(j), &slopes, method, &mut values);
    }
    ScalarField::from_values(out_spec, values)
}

/// Partial Legendre transform `u ↦ u*` on an `n_xi`-node ξ-grid.
///
/// Every row must be strictly convex in x.
pub fn plt_forward(u: &ScalarField, n_xi: usize) -> Result<PltResult> {
    plt_forward_with(u, n_xi, ConjugateMethod::default())
}

pub fn plt_forward_with(u: &ScalarField, n_xi: usize, method: ConjugateMethod) -> Result<PltResult> {
    let field_star = conjugate_in_x(u, n_xi, method)?;
    let xi_spec = *field_star.spec();
    Ok(PltResult { field_star, xi_spec })
}

/// Conjugates `u*` back to an `n_x`-node x-grid.
///
/// The x-range is the common range of `u*_ξ`, usually a sub-interval of
/// the original one when the slope ranges differ between rows.
pub fn plt_inverse(star: &PltResult, n_x: usize) -> Result<ScalarField> {
    conjugate_in_x(&star.field_star, n_x, ConjugateMethod::default())
}

/// Fenchel–Young diagnostics for a field and its conjugate on a shared y-grid.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FenchelYoung {
    /// `max (x·ξ − u(x,η) − u*(ξ,η))` over all node pairs; ≤ 0 up to rounding.
    pub max_violation: f64,
    /// `max over (ξ,η) of min over x (u + u* − x·ξ)`; 0 when the maximum
    /// is attained at a node.
    pub max_equality_gap: f64,
}

pub fn fenchel_young(u: &ScalarField, star: &ScalarField) -> Result<FenchelYoung> {
    let (gu, gs) = (u.spec(), star.spec());
    if gu.ny != gs.ny || gu.y_min != gs.y_min || gu.y_max != gs.y_max {
        return Err(Error::RangeMismatch("fields must share the y-grid".into()));
    }
    let xs = gu.xs();
    let xis = gs.xs();
    let mut max_violation = f64::NEG_INFINITY;
    let mut max_gap = 0.0f64;
    for j in 0..gu.ny {
        let (row_u, row_s) = (u.row(j), star.row(j));
        for (k, &xi) in xis.iter().enumerate() {
            let mut min_gap = f64::INFINITY;
            for (i, &x) in xs.iter().enumerate() {
                let gap = row_u[i] + row_s[k] - x * xi;
                max_violation = max_violation.max(-gap);
                min_gap = min_gap.min(gap);
            }
            max_gap = max_gap.max(min_gap);
        }
    }
    Ok(FenchelYoung {
        max_violation,
        max_equality_gap: max_gap,
    })
}

/// `max |(u*)* − u|` with `u` interpolated (cubic, along x) onto the
/// x-nodes of the double conjugate.
pub fn involution_error(u: &ScalarField, n_xi: usize, n_x: usize) -> Result<f64> {
    let star = plt_forward(u, n_xi)?;
    let back = plt_inverse(&star, n_x)?;
    let (gu, gb) = (u.spec(), back.spec());
    let mut err = 0.0f64;
    for j in 0..gb.ny {
        let row = u.row(j);
        for i in 0..gb.nx {
            let orig = cubic_uniform(gu.x_min, gu.hx(), row, gb.x(i));
            err = err.max((back.at(i, j) - orig).abs());
        }
    }
    Ok(err)
}

/// `|(a+bη)^α u*_ξξ + u*_ηη|` over interior nodes with `a + b·η > 0`.
pub fn grushin_residual(star: &ScalarField, params: &EquationParams) -> Result<ResidualReport> {
    let hess = fd_hessian(star)?;
    ResidualReport::from_points(hess.interior().filter_map(|(i, j, xi, eta)| {
        params.rhs_checked(eta).map(|w| {
            let (sxx, _, syy) = hess.at(i, j);
            (xi, eta, w * sxx + syy)
        })
    }))
}

/// `v = u*_ξξ − 1` on interior ξ-nodes and every η-row.
pub fn second_diff_in_xi(star: &ScalarField) -> Result<ScalarField> {
    let g = *star.spec();
    if g.nx < 5 {
        return Err(Error::InvalidGrid(format!(
            "need at least 5 xi-nodes to leave 3 interior ones, got {}",
            g.nx
        )));
    }
    let h = g.hx();
    let inv_h2 = 1.0 / (h * h);
    let out = GridSpec::new(g.x(1), g.x(g.nx - 2), g.y_min, g.y_max, g.nx - 2, g.ny)?;
    let mut values = Vec::with_capacity(out.len());
    for j in 0..g.ny {
        let row = star.row(j);
        values.extend(row.windows(3).map(|w| (w[2] - 2.0 * w[1] + w[0]) * inv_h2 - 1.0));
    }
    ScalarField::from_values(out, values)
}
