//! Damped Newton solver for `det D²u = (a+by)^α` on a rectangle with
//! Dirichlet data on all four sides.
//!
//! The discrete operator is `F(u) = uxx·uyy − uxy² − f` with the
//! three-point second differences and the four-corner mixed difference.
//! Its Jacobian is the cofactor-weighted operator
//! `uyy·Dxx + uxx·Dyy − 2·uxy·Dxy`, assembled over interior unknowns
//! (numbered row-major, y outer) as a banded matrix of half-width `nx − 1`.

#[allow(clippy::needless_range_loop)]
pub mod banded;

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::grid::{GridSpec, ScalarField};
use crate::params::EquationParams;
use crate::residual::fd_hessian;

use banded::BandedMatrix;

pub type BoundaryFn = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InitKind {
    /// Convex quadratic `s(x² + y²)/2`, `s² = mean RHS`, corrected by the
    /// blended boundary mismatch so boundary nodes carry the exact data.
    #[default]
    Quadratic,
    /// Transfinite (Coons) blend of the four boundary traces.
    BoundaryBlend,
}

#[derive(Clone)]
pub struct SolverConfig {
    pub grid: GridSpec,
    pub params: EquationParams,
    pub boundary: BoundaryFn,
    /// Stop once `‖F‖∞ <= newton_tol` on interior nodes.
    pub newton_tol: f64,
    pub max_iters: usize,
    /// Initial step fraction in `(0, 1]`; halved on each rejected trial.
    pub damping: f64,
    pub max_backtracks: usize,
    pub init: InitKind,
}

impl fmt::Debug for SolverConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SolverConfig")
            .field("grid", &self.grid)
            .field("params", &self.params)
            .field("newton_tol", &self.newton_tol)
            .field("max_iters", &self.max_iters)
            .field("damping", &self.damping)
            .field("max_backtracks", &self.max_backtracks)
            .field("init", &self.init)
            .finish_non_exhaustive()
    }
}

impl SolverConfig {
    pub fn new(
        grid: GridSpec,
        params: EquationParams,
        boundary: impl Fn(f64, f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        SolverConfig {
            grid,
            params,
            boundary: Arc::new(boundary),
            newton_tol: 1e-10,
            max_iters: 50,
            damping: 1.0,
            max_backtracks: 30,
            init: InitKind::Quadratic,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.grid.validate()?;
        if !(self.newton_tol > 0.0) {
            return Err(invalid("newton_tol", "must be > 0"));
        }
        if self.max_iters < 1 {
            return Err(invalid("max_iters", "must be >= 1"));
        }
        if !(self.damping > 0.0 && self.damping <= 1.0) {
            return Err(invalid("damping", "must lie in (0, 1]"));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SolveReport {
    pub solution: ScalarField,
    pub iterations: usize,
    pub final_residual: f64,
    pub converged: bool,
    pub convexity_violations: usize,
    /// `‖F‖∞` at the initial guess and after each accepted step.
    pub residual_history: Vec<f64>,
}

struct Problem {
    grid: GridSpec,
    rhs: Vec<f64>,
    m: usize,
}

impl Problem {
    #[inline]
    fn unknown(&self, i: usize, j: usize) -> usize {
        (j - 1) * self.m + (i - 1)
    }

    fn residual(&self, u: &[f64], out: &mut Vec<f64>) -> f64 {
        let g = &self.grid;
        let (hx, hy) = (g.hx(), g.hy());
        let (ihx2, ihy2, ihxy) = (1.0 / (hx * hx), 1.0 / (hy * hy), 1.0 / (4.0 * hx * hy));
        let at = |i: usize, j: usize| u[g.index(i, j)];
        out.clear();
        let mut norm = 0.0f64;
        for j in 1..g.ny - 1 {
            for i in 1..g.nx - 1 {
                let c = at(i, j);
                let uxx = (at(i + 1, j) - 2.0 * c + at(i - 1, j)) * ihx2;
                let uyy = (at(i, j + 1) - 2.0 * c + at(i, j - 1)) * ihy2;
                let uxy = (at(i + 1, j + 1) - at(i + 1, j - 1) - at(i - 1, j + 1) + at(i - 1, j - 1)) * ihxy;
                let r = uxx * uyy - uxy * uxy - self.rhs[j];
                norm = if r.is_nan() { f64::NAN } else { norm.max(r.abs()) };
                out.push(r);
            }
        }
        norm
    }

    fn jacobian(&self, u: &[f64]) -> BandedMatrix {
        let g = &self.grid;
        let (hx, hy) = (g.hx(), g.hy());
        let (ihx2, ihy2, ihxy) = (1.0 / (hx * hx), 1.0 / (hy * hy), 1.0 / (4.0 * hx * hy));
        let at = |i: usize, j: usize| u[g.index(i, j)];
        let n = self.m * (g.ny - 2);
        let mut jac = BandedMatrix::zeros(n, self.m + 1, self.m + 1);
        for j in 1..g.ny - 1 {
            for i in 1..g.nx - 1 {
                let row = self.unknown(i, j);
                let c = at(i, j);
                let uxx = (at(i + 1, j) - 2.0 * c + at(i - 1, j)) * ihx2;
                let uyy = (at(i, j + 1) - 2.0 * c + at(i, j - 1)) * ihy2;
                let uxy = (at(i + 1, j + 1) - at(i + 1, j - 1) - at(i - 1, j + 1) + at(i - 1, j - 1)) * ihxy;
                let wx = uyy * ihx2;
                let wy = uxx * ihy2;
                let wxy = -2.0 * uxy * ihxy;
                jac.add(row, row, -2.0 * wx - 2.0 * wy);
                let mut couple = |ii: usize, jj: usize, w: f64| {
                    if !g.is_boundary(ii, jj) {
                        jac.add(row, self.unknown(ii, jj), w);
                    }
                };
                couple(i + 1, j, wx);
                couple(i - 1, j, wx);
                couple(i, j + 1, wy);
                couple(i, j - 1, wy);
                couple(i + 1, j + 1, wxy);
                couple(i - 1, j - 1, wxy);
                couple(i + 1, j - 1, -wxy);
                couple(i - 1, j + 1, -wxy);
            }
        }
        jac
    }
}

/// Coons patch of the boundary values already stored in `u`.
fn blend_boundary(g: &GridSpec, u: &mut [f64]) {
    let (nx, ny) = (g.nx, g.ny);
    let c00 = u[g.index(0, 0)];
    let c10 = u[g.index(nx - 1, 0)];
    let c01 = u[g.index(0, ny - 1)];
    let c11 = u[g.index(nx - 1, ny - 1)];
    for j in 1..ny - 1 {
        let t = (g.y(j) - g.y_min) / (g.y_max - g.y_min);
        let left = u[g.index(0, j)];
        let right = u[g.index(nx - 1, j)];
        for i in 1..nx - 1 {
            let s = (g.x(i) - g.x_min) / (g.x_max - g.x_min);
            let bottom = u[g.index(i, 0)];
            let top = u[g.index(i, ny - 1)];
            u[g.index(i, j)] = (1.0 - s) * left + s * right + (1.0 - t) * bottom + t * top
                - ((1.0 - s) * (1.0 - t) * c00 + s * (1.0 - t) * c10 + (1.0 - s) * t * c01 + s * t * c11);
        }
    }
}

fn initial_guess(cfg: &SolverConfig, boundary: &[f64], rhs: &[f64]) -> Vec<f64> {
    let g = &cfg.grid;
    match cfg.init {
        InitKind::BoundaryBlend => {
            let mut u = boundary.to_vec();
            blend_boundary(g, &mut u);
            u
        }
        InitKind::Quadratic => {
            let interior = &rhs[1..g.ny - 1];
            let mean = interior.iter().sum::<f64>() / interior.len() as f64;
            let s = mean.max(0.0).sqrt();
            let q = |x: f64, y: f64| 0.5 * s * (x * x + y * y);
            let mut diff = vec![0.0; g.len()];
            for j in 0..g.ny {
                for i in 0..g.nx {
                    if g.is_boundary(i, j) {
                        let k = g.index(i, j);
                        diff[k] = boundary[k] - q(g.x(i), g.y(j));
                    }
                }
            }
            blend_boundary(g, &mut diff);
            let mut u = boundary.to_vec();
            for j in 1..g.ny - 1 {
                for i in 1..g.nx - 1 {
                    let k = g.index(i, j);
                    u[k] = q(g.x(i), g.y(j)) + diff[k];
                }
            }
            u
        }
    }
}

/// Runs damped Newton from the configured initial guess.
///
/// Returns `Err` for invalid configurations and singular Newton systems;
/// stagnation (no decrease after all backtracking halvings) or running out
/// of iterations yields `converged = false`.
pub fn solve_dirichlet(cfg: &SolverConfig) -> Result<SolveReport> {
    cfg.validate()?;
    let g = cfg.grid;
    let mut rhs = vec![f64::NAN; g.ny];
    for (j, r) in rhs.iter_mut().enumerate().take(g.ny - 1).skip(1) {
        *r = cfg.params.rhs_checked(g.y(j)).ok_or_else(|| {
            Error::Domain(format!(
                "right-hand side is not finite at interior row y = {}; raise y_min",
                g.y(j)
            ))
        })?;
    }
    let mut boundary = vec![0.0; g.len()];
    for j in 0..g.ny {
        for i in 0..g.nx {
            if g.is_boundary(i, j) {
                let v = (cfg.boundary)(g.x(i), g.y(j));
                if !v.is_finite() {
                    return Err(Error::Domain(format!(
                        "boundary data not finite at ({}, {})",
                        g.x(i),
                        g.y(j)
                    )));
                }
                boundary[g.index(i, j)] = v;
            }
        }
    }
    let problem = Problem {
        grid: g,
        rhs,
        m: g.nx - 2,
    };
    let mut u = initial_guess(cfg, &boundary, &problem.rhs);
    let mut f = Vec::with_capacity(problem.m * (g.ny - 2));
    let mut norm = problem.residual(&u, &mut f);
    let mut history = vec![norm];
    let mut iterations = 0;
    let mut converged = norm <= cfg.newton_tol;
    let mut trial = u.clone();
    let mut f_trial = Vec::with_capacity(f.len());

    while !converged && iterations < cfg.max_iters {
        let lu = problem
            .jacobian(&u)
            .factor()
            .map_err(|p| Error::SingularJacobian {
                iteration: iterations + 1,
                row: p.row,
            })?;
        let mut step: Vec<f64> = f.iter().map(|r| -r).collect();
        lu.solve_in_place(&mut step);

        let mut t = cfg.damping;
        let mut accepted = false;
        for _ in 0..=cfg.max_backtracks {
            trial.copy_from_slice(&u);
            for j in 1..g.ny - 1 {
                for i in 1..g.nx - 1 {
                    trial[g.index(i, j)] += t * step[problem.unknown(i, j)];
                }
            }
            let trial_norm = problem.residual(&trial, &mut f_trial);
            if trial_norm < norm {
                std::mem::swap(&mut u, &mut trial);
                std::mem::swap(&mut f, &mut f_trial);
                norm = trial_norm;
                accepted = true;
                break;
            }
            t *= 0.5;
        }
        if !accepted {
            break;
        }
        iterations += 1;
        history.push(norm);
        converged = norm <= cfg.newton_tol;
    }

    let solution = ScalarField::from_values(g, u)?;
    let convexity_violations = convexity_audit(&solution)?;
    Ok(SolveReport {
        solution,
        iterations,
        final_residual: norm,
        converged,
        convexity_violations,
        residual_history: history,
    })
}

/// Interior nodes where the discrete `uxx` or `det D²u` falls below
/// `−1e−6·(1 + ‖u‖∞)`.
pub fn convexity_audit(field: &ScalarField) -> Result<usize> {
    convexity_audit_with_tol(field, 1e-6 * (1.0 + field.max_abs()))
}

pub fn convexity_audit_with_tol(field: &ScalarField, tol: f64) -> Result<usize> {
    let h = fd_hessian(field)?;
    Ok(h
        .interior()
        .filter(|&(i, j, _, _)| h.at(i, j).0 < -tol || h.det(i, j) < -tol)
        .count())
}
