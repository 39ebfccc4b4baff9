//! Newton solve with the family's boundary values.
use halfplane_ma::{fd_hessian, solve_dirichlet, DirichletFamily, EquationParams, FamilyCoeffs, GridSpec, ScalarField, SolverConfig};

fn main() -> halfplane_ma::Result<()> {
    let fam = DirichletFamily::new(EquationParams::new(0.0, 1.0, 1.0)?, FamilyCoeffs::new(0.5, 0.0, 0.3)?)?;
    let grid = GridSpec::square((-1.0, 1.0), (0.0, 1.0), 65)?;
    let cfg = SolverConfig::new(grid, *fam.params(), move |x, y| fam.eval(x, y).unwrap());
    let rep = solve_dirichlet(&cfg)?;
    for (k, r) in rep.residual_history.iter().enumerate() {
        println!("iter {k:2}: residual {r:.3e}");
    }
    let exact = ScalarField::try_from_fn(grid, |x, y| fam.eval(x, y))?;
    let (uxx, _, _) = fd_hessian(&rep.solution)?.at(32, 32);
    println!(
        "converged = {}, max error = {:.3e}, convexity violations = {}, u_xx(0, 0.5) = {uxx:.6} (exact {:.6})",
        rep.converged,
        rep.solution.max_abs_diff(&exact)?,
        rep.convexity_violations,
        fam.hessian(0.0, 0.5)?.xx
    );
    Ok(())
}
