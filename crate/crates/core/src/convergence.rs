//! Grid refinement studies.

use serde::Serialize;

use crate::closed_forms::DirichletFamily;
use crate::error::{Error, Result};
use crate::grid::{GridSpec, ScalarField};
use crate::solver::{solve_dirichlet, InitKind, SolverConfig};

/// `log(e_coarse / e_fine) / log(ratio)`.
pub fn observed_order(e_coarse: f64, e_fine: f64, ratio: f64) -> f64 {
    (e_coarse / e_fine).ln() / ratio.ln()
}

/// Orders between consecutive `(h, error)` pairs.
pub fn observed_orders(rows: &[(f64, f64)]) -> Vec<f64> {
    rows.windows(2)
        .map(|w| observed_order(w[0].1, w[1].1, w[0].0 / w[1].0))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConvergenceRow {
    pub n: usize,
    pub h: f64,
    pub max_error: f64,
    /// Order against the previous (coarser) row.
    pub observed_order: Option<f64>,
    pub iterations: usize,
    pub final_residual: f64,
    pub converged: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConvergenceTable {
    pub rows: Vec<ConvergenceRow>,
    pub min_observed_order: Option<f64>,
}

/// Solves with the family's own values as Dirichlet data on `n × n` grids
/// for each `n` in `sizes` and reports `max |u_h − u|` over all nodes.
pub fn dirichlet_convergence(
    family: &DirichletFamily,
    x_range: (f64, f64),
    y_range: (f64, f64),
    sizes: &[usize],
    init: InitKind,
) -> Result<ConvergenceTable> {
    if sizes.is_empty() {
        return Err(Error::InvalidGrid("no grid sizes given".into()));
    }
    let fam = *family;
    let mut rows: Vec<ConvergenceRow> = Vec::with_capacity(sizes.len());
    for &n in sizes {
        let grid = GridSpec::square(x_range, y_range, n)?;
        let exact = ScalarField::try_from_fn(grid, |x, y| fam.eval(x, y))?;
        let mut cfg = SolverConfig::new(grid, *fam.params(), move |x, y| fam.eval(x, y).unwrap_or(f64::NAN));
        cfg.init = init;
        let report = solve_dirichlet(&cfg)?;
        let max_error = report.solution.max_abs_diff(&exact)?;
        let h = grid.hx().max(grid.hy());
        let observed_order = rows.last().map(|prev| observed_order(prev.max_error, max_error, prev.h / h));
        rows.push(ConvergenceRow {
            n,
            h,
            max_error,
            observed_order,
            iterations: report.iterations,
            final_residual: report.final_residual,
            converged: report.converged,
        });
    }
    let min_observed_order = rows
        .iter()
        .filter_map(|r| r.observed_order)
        .fold(None, |m: Option<f64>, o| Some(m.map_or(o, |m| m.min(o))));
    Ok(ConvergenceTable {
        rows,
        min_observed_order,
    })
}
