//! Partial Legendre transform of a sampled family and back.
use halfplane_ma::legendre::{fenchel_young, involution_error};
use halfplane_ma::{plt_forward, DirichletFamily, EquationParams, FamilyCoeffs, GridSpec, ScalarField};

fn main() -> halfplane_ma::Result<()> {
    let fam = DirichletFamily::new(EquationParams::new(0.0, 1.0, 1.0)?, FamilyCoeffs::new(0.5, 0.0, 0.3)?)?;
    for n in [33, 65, 129, 257] {
        let g = GridSpec::new(-1.0, 1.0, 0.0, 1.0, n, 9)?;
        let u = ScalarField::try_from_fn(g, |x, y| fam.eval(x, y))?;
        let star = plt_forward(&u, n)?;
        let fy = fenchel_young(&u, &star.field_star)?;
        let dual_err = ScalarField::try_from_fn(star.xi_spec, |xi, eta| fam.dual(xi, eta))?
            .max_abs_diff(&star.field_star)?;
        println!(
            "n = {n:3}  xi in [{:.4}, {:.4}]  |u* - dual| = {dual_err:.3e}  FY violation = {:.1e}  involution = {:.3e}",
            star.xi_spec.x_min,
            star.xi_spec.x_max,
            fy.max_violation,
            involution_error(&u, n, n)?
        );
    }
    Ok(())
}
