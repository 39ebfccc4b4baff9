//! Central-difference Hessians and pointwise residual reports.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{GridSpec, ScalarField};
use crate::params::EquationParams;

/// Summary of a pointwise residual over the evaluated nodes.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResidualReport {
    pub max_abs: f64,
    pub mean_abs: f64,
    /// Node `(x, y)` where `max_abs` is attained (first one on ties).
    pub argmax: (f64, f64),
    pub n_evaluated: usize,
}

impl ResidualReport {
    /// Folds `(x, y, residual)` triples in iteration order. The sum is
    /// sequential, so a fixed input order gives bit-identical reports.
    pub fn from_points(points: impl IntoIterator<Item = (f64, f64, f64)>) -> Result<Self> {
        let mut max_abs = 0.0;
        let mut argmax = (f64::NAN, f64::NAN);
        let mut sum = 0.0;
        let mut n = 0usize;
        for (x, y, r) in points {
            let r = r.abs();
            if n == 0 || r > max_abs || r.is_nan() {
                max_abs = r;
                argmax = (x, y);
            }
            sum += r;
            n += 1;
        }
        if n == 0 {
            return Err(Error::EmptyEvaluation);
        }
        Ok(ResidualReport {
            max_abs,
            mean_abs: sum / n as f64,
            argmax,
            n_evaluated: n,
        })
    }
}

/// Second derivatives on the interior nodes of a grid.
///
/// Entries are indexed by the parent grid's `(i, j)` with
/// `1 <= i <= nx-2`, `1 <= j <= ny-2`; the boundary ring has no stencil.
#[derive(Clone, Debug, PartialEq)]
pub struct DiscreteHessian {
    grid: GridSpec,
    uxx: Vec<f64>,
    uxy: Vec<f64>,
    uyy: Vec<f64>,
}

impl DiscreteHessian {
    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    #[inline]
    fn slot(&self, i: usize, j: usize) -> usize {
        assert!(
            i >= 1 && j >= 1 && i + 1 < self.grid.nx && j + 1 < self.grid.ny,
            "({i}, {j}) is not an interior node"
        );
        (j - 1) * (self.grid.nx - 2) + (i - 1)
    }

    /// `(uxx, uxy, uyy)` at interior node `(i, j)`.
    pub fn at(&self, i: usize, j: usize) -> (f64, f64, f64) {
        let k = self.slot(i, j);
        (self.uxx[k], self.uxy[k], self.uyy[k])
    }

    pub fn det(&self, i: usize, j: usize) -> f64 {
        let (xx, xy, yy) = self.at(i, j);
        xx * yy - xy * xy
    }

    pub fn uxx(&self) -> &[f64] {
        &self.uxx
    }

    pub fn uxy(&self) -> &[f64] {
        &self.uxy
    }

    pub fn uyy(&self) -> &[f64] {
        &self.uyy
    }

    /// Interior nodes as `(i, j, x, y)`, row-major with y outer.
    pub fn interior(&self) -> impl Iterator<Item = (usize, usize, f64, f64)> + '_ {
        let g = self.grid;
        (1..g.ny - 1).flat_map(move |j| (1..g.nx - 1).map(move |i| (i, j, g.x(i), g.y(j))))
    }
}

/// Three-point second differences in x and y and the four-corner mixed
/// difference, at every interior node.
pub fn fd_hessian(field: &ScalarField) -> Result<DiscreteHessian> {
    let g = *field.spec();
    g.validate()?;
    let (hx, hy) = (g.hx(), g.hy());
    let (ihx2, ihy2, ihxy) = (1.0 / (hx * hx), 1.0 / (hy * hy), 1.0 / (4.0 * hx * hy));
    let m = (g.nx - 2) * (g.ny - 2);
    let mut uxx = Vec::with_capacity(m);
    let mut uxy = Vec::with_capacity(m);
    let mut uyy = Vec::with_capacity(m);
    for j in 1..g.ny - 1 {
        for i in 1..g.nx - 1 {
            let c = field.at(i, j);
            uxx.push((field.at(i + 1, j) - 2.0 * c + field.at(i - 1, j)) * ihx2);
            uyy.push((field.at(i, j + 1) - 2.0 * c + field.at(i, j - 1)) * ihy2);
            uxy.push(
                (field.at(i + 1, j + 1) - field.at(i + 1, j - 1) - field.at(i - 1, j + 1)
                    + field.at(i - 1, j - 1))
                    * ihxy,
            );
        }
    }
    Ok(DiscreteHessian { grid: g, uxx, uxy, uyy })
}

/// `|uxx·uyy − uxy² − (a+by)^α|` over interior nodes where `a + b·y > 0`.
///
/// Rows on which the right-hand side is not finite are skipped; if nothing
/// remains the result is [`Error::EmptyEvaluation`].
pub fn ma_residual(field: &ScalarField, params: &EquationParams) -> Result<ResidualReport> {
    let hess = fd_hessian(field)?;
    ResidualReport::from_points(hess.interior().filter_map(|(i, j, x, y)| {
        params
            .rhs_checked(y)
            .map(|rhs| (x, y, hess.det(i, j) - rhs))
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(n: usize) -> GridSpec {
        GridSpec::new(-1.0, 1.0, 0.0, 1.0, n, n).unwrap()
    }

    #[test]
    fn hessian_of_half_x_squared() {
        let f = ScalarField::from_fn(grid(9), |x, _| 0.5 * x * x).unwrap();
        let h = fd_hessian(&f).unwrap();
        for (i, j, _, _) in h.interior() {
            let (xx, xy, yy) = h.at(i, j);
            assert!((xx - 1.0).abs() < 1e-12);
            assert!(xy.abs() < 1e-12 && yy.abs() < 1e-12);
        }
    }

    #[test]
    fn hessian_of_zero_is_zero() {
        let f = ScalarField::from_fn(grid(5), |_, _| 0.0).unwrap();
        let h = fd_hessian(&f).unwrap();
        assert!(h.uxx().iter().chain(h.uxy()).chain(h.uyy()).all(|&v| v == 0.0));
    }

    #[test]
    fn cubic_second_difference_matches_symbolic() {
        // Third-order terms cancel in the symmetric stencil: d²/dx² x³ = 6x.
        let g = GridSpec::new(-1.0, 1.0, 0.0, 1.0, 21, 5).unwrap();
        assert!((g.hx() - 0.1).abs() < 1e-15);
        let f = ScalarField::from_fn(g, |x, _| x * x * x).unwrap();
        let h = fd_hessian(&f).unwrap();
        for (i, j, x, _) in h.interior() {
            assert!((h.at(i, j).0 - 6.0 * x).abs() < 1e-11, "x = {x}");
        }
    }

    #[test]
    fn residual_vanishes_when_rhs_is_one() {
        let p = EquationParams::new(1.0, 1.0, 0.0).unwrap();
        let f = ScalarField::from_fn(grid(11), |x, y| 0.5 * (x * x + y * y)).unwrap();
        let r = ma_residual(&f, &p).unwrap();
        assert!(r.max_abs < 1e-12);
        assert_eq!(r.n_evaluated, 81);
    }

    #[test]
    fn residual_of_zero_field_is_y() {
        let p = EquationParams::new(0.0, 1.0, 1.0).unwrap();
        let g = grid(11);
        let f = ScalarField::from_fn(g, |_, _| 0.0).unwrap();
        let r = ma_residual(&f, &p).unwrap();
        let top_interior = g.y(g.ny - 2);
        assert!((r.max_abs - top_interior).abs() < 1e-15);
        assert_eq!(r.argmax.1, top_interior);
        assert!(r.mean_abs <= r.max_abs);
    }

    #[test]
    fn all_rows_excluded_is_an_error() {
        let p = EquationParams::new(0.0, 1.0, 1.0).unwrap();
        let g = GridSpec::new(0.0, 1.0, -2.0, -1.0, 5, 5).unwrap();
        let f = ScalarField::from_fn(g, |x, _| x * x).unwrap();
        assert!(matches!(ma_residual(&f, &p), Err(Error::EmptyEvaluation)));
    }

    #[test]
    fn reports_are_bit_identical_across_calls() {
        let p = EquationParams::new(0.3, 1.7, 0.4).unwrap();
        let f = ScalarField::from_fn(grid(33), |x, y| (x * x + 1.0).sqrt() + y.powi(3)).unwrap();
        let a = ma_residual(&f, &p).unwrap();
        let b = ma_residual(&f, &p).unwrap();
        assert_eq!(a.max_abs.to_bits(), b.max_abs.to_bits());
        assert_eq!(a.mean_abs.to_bits(), b.mean_abs.to_bits());
    }

    #[test]
    fn empty_report_is_rejected() {
        assert!(ResidualReport::from_points(std::iter::empty()).is_err());
    }
}
