//! Evaluates the Dirichlet family and checks the equation at a few points.
use halfplane_ma::{DirichletFamily, EquationParams, FamilyCoeffs};

fn main() -> halfplane_ma::Result<()> {
    for alpha in [-1.0, -0.5, 1.0, 2.0] {
        let fam = DirichletFamily::new(EquationParams::new(1.0, 1.0, alpha)?, FamilyCoeffs::new(0.5, 0.2, 0.3)?)?;
        println!("alpha = {alpha} ({:?} branch)", fam.branch());
        for (x, y) in [(0.0, 0.1), (0.5, 0.25), (-1.0, 1.0)] {
            let h = fam.hessian(x, y)?;
            println!(
                "  u({x:5}, {y:4}) = {:>10.6}   det D²u = {:.12}   rhs = {:.12}",
                fam.eval(x, y)?,
                h.det(),
                fam.rhs(y)
            );
        }
    }
    Ok(())
}
