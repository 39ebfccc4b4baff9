//! Change of variables from the Grushin form to the weighted divergence
//! form `div(x₂^{a_w} ∇ṽ) = 0`, and the one-dimensional profiles that
//! solve it on `{x₂ > l}` with zero data at `x₂ = l`.

use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::grid::{GridSpec, ScalarField};
use crate::interp::cubic_uniform;
use crate::params::EquationParams;
use crate::residual::ResidualReport;

/// Weight exponent and boundary offset of the divergence-form equation
/// obtained from `det D²u = (a+by)^α`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DivFormParams {
    /// `a_w = α/(α+2)`.
    pub weight_exponent: f64,
    /// `l = 2·a^{(α+2)/2} / (b(α+2))`, the image of `η = 0`.
    pub offset: f64,
    pub dimension: usize,
}

impl DivFormParams {
    pub fn from_equation(params: &EquationParams) -> Result<Self> {
        params.require_classified()?;
        let (a, b, alpha) = (params.a(), params.b(), params.alpha());
        Ok(DivFormParams {
            weight_exponent: alpha / (alpha + 2.0),
            offset: 2.0 * a.powf((alpha + 2.0) / 2.0) / (b * (alpha + 2.0)),
            dimension: 2,
        })
    }
}

/// `η = f(x₂) = b^{−α/(α+2)} ((α+2)/2 · x₂)^{2/(α+2)} − a/b`.
pub fn eta_of_x2(params: &EquationParams, x2: f64) -> Result<f64> {
    params.require_classified()?;
    if !(x2 >= 0.0) {
        return Err(invalid("x2", format!("must be >= 0, got {x2}")));
    }
    let (a, b, alpha) = (params.a(), params.b(), params.alpha());
    let p = alpha + 2.0;
    Ok(b.powf(-alpha / p) * (0.5 * p * x2).powf(2.0 / p) - a / b)
}

/// Inverse of [`eta_of_x2`] on `η >= −a/b`.
pub fn x2_of_eta(params: &EquationParams, eta: f64) -> Result<f64> {
    params.require_classified()?;
    let (a, b, alpha) = (params.a(), params.b(), params.alpha());
    let shifted = eta + a / b;
    if !(shifted >= 0.0) {
        return Err(Error::Domain(format!("eta = {eta} lies below -a/b")));
    }
    let p = alpha + 2.0;
    Ok((2.0 / p) * (b.powf(alpha / p) * shifted).powf(p / 2.0))
}

/// Resamples `v(ξ, η)` as `ṽ(x₁, x₂) = v(x₁, f(x₂))` on `n_x2` uniform
/// x₂-nodes spanning `[x2_min, x2_max]`. The x₁-nodes are the ξ-nodes of `v`.
pub fn pullback_to_divform(
    v: &ScalarField,
    params: &EquationParams,
    x2_range: (f64, f64),
    n_x2: usize,
) -> Result<ScalarField> {
    let g = *v.spec();
    let (lo, hi) = x2_range;
    let eta_lo = eta_of_x2(params, lo)?;
    let eta_hi = eta_of_x2(params, hi)?;
    let slack = 1e-12 * (1.0 + g.y_min.abs().max(g.y_max.abs()));
    if eta_lo < g.y_min - slack || eta_hi > g.y_max + slack {
        return Err(Error::RangeMismatch(format!(
            "x2 in [{lo}, {hi}] maps to eta in [{eta_lo}, {eta_hi}], outside [{}, {}]",
            g.y_min, g.y_max
        )));
    }
    let out = GridSpec::new(g.x_min, g.x_max, lo, hi, g.nx, n_x2)?;
    let hy = g.hy();
    let mut column = vec![0.0; g.ny];
    let mut values = vec![0.0; out.len()];
    for i in 0..g.nx {
        for (j, c) in column.iter_mut().enumerate() {
            *c = v.at(i, j);
        }
        for j in 0..n_x2 {
            let eta = eta_of_x2(params, out.y(j))?;
            values[out.index(i, j)] = cubic_uniform(g.y_min, hy, &column, eta);
        }
    }
    ScalarField::from_values(out, values)
}

/// [`pullback_to_divform`] over the whole η-range of `v`.
pub fn pullback_full(v: &ScalarField, params: &EquationParams, n_x2: usize) -> Result<ScalarField> {
    let g = v.spec();
    let lo = x2_of_eta(params, g.y_min)?;
    let hi = x2_of_eta(params, g.y_max)?;
    // Round-trip error in x2_of_eta can push the ends a hair outside the η-range.
    let lo_eta = eta_of_x2(params, lo)?;
    let hi_eta = eta_of_x2(params, hi)?;
    let lo = if lo_eta < g.y_min { lo + (lo.abs() + 1.0) * 1e-15 } else { lo };
    let hi = if hi_eta > g.y_max { hi - (hi.abs() + 1.0) * 1e-15 } else { hi };
    pullback_to_divform(v, params, (lo, hi), n_x2)
}

/// `|ṽ₁₁ + ṽ₂₂ + a_w·ṽ₂/x₂|` over interior nodes with `x₂ > 0`.
pub fn divform_residual(field: &ScalarField, a_w: f64) -> Result<ResidualReport> {
    let g = *field.spec();
    let (hx, hy) = (g.hx(), g.hy());
    let mut pts = Vec::new();
    for j in 1..g.ny - 1 {
        let x2 = g.y(j);
        if !(x2 > 0.0) {
            continue;
        }
        for i in 1..g.nx - 1 {
            let c = field.at(i, j);
            let v11 = (field.at(i + 1, j) - 2.0 * c + field.at(i - 1, j)) / (hx * hx);
            let v22 = (field.at(i, j + 1) - 2.0 * c + field.at(i, j - 1)) / (hy * hy);
            let v2 = (field.at(i, j + 1) - field.at(i, j - 1)) / (2.0 * hy);
            pts.push((g.x(i), x2, v11 + v22 + a_w * v2 / x2));
        }
    }
    ResidualReport::from_points(pts)
}

/// Residual of `Δu + a_w·u_n/x_n = 0` for a function of `n` variables,
/// evaluated by central differences at the nodes of a 2-D plane grid
/// `(x₁, x_n)` with the remaining coordinates at zero.
///
/// The in-plane steps are the grid spacings; the transverse directions use
/// the x₁ spacing. For `n = 2` this is the stencil of [`divform_residual`].
/// Only interior nodes with `x_n > 0` are evaluated.
pub fn divform_residual_fn(
    u: impl Fn(&[f64]) -> Result<f64>,
    n: usize,
    a_w: f64,
    plane: &GridSpec,
) -> Result<ResidualReport> {
    if n < 2 {
        return Err(invalid("n", "dimension must be >= 2"));
    }
    let (hx, hy) = (plane.hx(), plane.hy());
    let mut pts = Vec::new();
    let mut p = vec![0.0; n];
    for j in 1..plane.ny - 1 {
        let xn = plane.y(j);
        if !(xn > 0.0) {
            continue;
        }
        for i in 1..plane.nx - 1 {
            let x1 = plane.x(i);
            p.iter_mut().for_each(|c| *c = 0.0);
            p[0] = x1;
            p[n - 1] = xn;
            let c = u(&p)?;
            let mut lap = 0.0;
            for d in 0..n {
                let h = if d == n - 1 { hy } else { hx };
                let base = p[d];
                p[d] = base + h;
                let up = u(&p)?;
                p[d] = base - h;
                let dn = u(&p)?;
                p[d] = base;
                lap += (up - 2.0 * c + dn) / (h * h);
                if d == n - 1 {
                    lap += a_w * (up - dn) / (2.0 * h) / xn;
                }
            }
            pts.push((x1, xn, lap));
        }
    }
    ResidualReport::from_points(pts)
}

/// `C*(x_n^{1−a_w} − l^{1−a_w})` for `x_n >= l`.
///
/// For `a_w >= 1` the only admissible profile is zero, so `c_star` must be 0.
pub fn liouville_profile(a_w: f64, l: f64, c_star: f64, x_n: f64) -> Result<f64> {
    if !(l >= 0.0) {
        return Err(invalid("l", format!("must be >= 0, got {l}")));
    }
    if !(c_star >= 0.0) {
        return Err(invalid("c_star", format!("must be >= 0, got {c_star}")));
    }
    if a_w >= 1.0 && c_star != 0.0 {
        return Err(Error::Domain(format!(
            "a_w = {a_w} >= 1 admits only the zero profile, got c_star = {c_star}"
        )));
    }
    if !(x_n >= l) {
        return Err(Error::Domain(format!("x_n = {x_n} lies below l = {l}")));
    }
    if c_star == 0.0 {
        return Ok(0.0);
    }
    let e = 1.0 - a_w;
    Ok(c_star * (x_n.powf(e) - l.powf(e)))
}

/// The profile extended by zero to the strip `0 <= x_n < l`.
pub fn extended_profile(a_w: f64, l: f64, c_star: f64, x_n: f64) -> Result<f64> {
    if !(x_n >= 0.0) {
        return Err(Error::Domain(format!("x_n = {x_n} lies below the half-space")));
    }
    if x_n < l {
        liouville_profile(a_w, l, c_star, l)
    } else {
        liouville_profile(a_w, l, c_star, x_n)
    }
}

/// Weighted normal flux `x_n^{a_w} ∂u/∂x_n` by a central difference of
/// step `h`; tends to zero at `x_n → 0+` for solutions of the Neumann problem.
pub fn weighted_normal_flux(u: impl Fn(f64, f64) -> f64, a_w: f64, x1: f64, x_n: f64, h: f64) -> f64 {
    x_n.powf(a_w) * (u(x1, x_n + h) - u(x1, x_n - h)) / (2.0 * h)
}
