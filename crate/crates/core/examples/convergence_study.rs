//! Grid refinement table for the Dirichlet solver.
use halfplane_ma::convergence::dirichlet_convergence;
use halfplane_ma::{DirichletFamily, EquationParams, FamilyCoeffs, InitKind};

fn main() -> halfplane_ma::Result<()> {
    for (alpha, a) in [(1.0, 0.0), (2.0, 1.0), (0.5, 0.0)] {
        let fam = DirichletFamily::new(EquationParams::new(a, 1.0, alpha)?, FamilyCoeffs::new(0.5, 0.0, 0.3)?)?;
        let t = dirichlet_convergence(&fam, (-1.0, 1.0), (0.0, 1.0), &[17, 33, 65], InitKind::Quadratic)?;
        println!("alpha = {alpha}, a = {a}");
        for r in &t.rows {
            let order = r.observed_order.map_or("-".into(), |o| format!("{o:.3}"));
            println!("  n = {:3}  h = {:.5}  error = {:.3e}  order = {order}  iters = {}", r.n, r.h, r.max_error, r.iterations);
        }
    }
    Ok(())
}
