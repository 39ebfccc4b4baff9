//! The transformed function solves `(a+bη)^α v_ξξ + v_ηη = 0`.
use halfplane_ma::convergence::observed_orders;
use halfplane_ma::{grushin_residual, plt_forward, DirichletFamily, EquationParams, FamilyCoeffs, GridSpec, ScalarField};

fn main() -> halfplane_ma::Result<()> {
    for (alpha, a) in [(1.0, 0.0), (0.5, 1.0), (2.0, 1.0)] {
        let params = EquationParams::new(a, 1.0, alpha)?;
        let fam = DirichletFamily::new(params, FamilyCoeffs::new(0.5, 0.1, 0.3)?)?;
        let mut rows = Vec::new();
        for n in [33, 65, 129] {
            let g = GridSpec::square((-1.0, 1.0), (0.0, 1.0), n)?;
            let analytic = ScalarField::try_from_fn(g, |xi, eta| fam.dual(xi, eta))?;
            let r = grushin_residual(&analytic, &params)?;
            rows.push((g.hy(), r.max_abs));
        }
        println!("alpha = {alpha}, a = {a}: residuals [{}]  orders {:.3?}", rows.iter().map(|r| format!("{:.3e}", r.1)).collect::<Vec<_>>().join(", "), observed_orders(&rows));
    }

    // Discrete transform of sampled data, compared with A·η.
    let fam = DirichletFamily::new(EquationParams::new(0.0, 1.0, 1.0)?, FamilyCoeffs::new(0.5, 0.0, 0.3)?)?;
    let u = ScalarField::try_from_fn(GridSpec::new(-1.0, 1.0, 0.0, 1.0, 257, 17)?, |x, y| fam.eval(x, y))?;
    let v = halfplane_ma::second_diff_in_xi(&plt_forward(&u, 33)?.field_star)?;
    let g = *v.spec();
    let err = (0..g.ny)
        .flat_map(|j| (0..g.nx).map(move |i| (i, j)))
        .map(|(i, j)| (v.at(i, j) - 0.5 * g.y(j)).abs())
        .fold(0.0, f64::max);
    println!("discrete u*_ξξ vs A·η: max error {err:.3e}");
    Ok(())
}
