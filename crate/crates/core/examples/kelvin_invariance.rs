//! Kelvin lifts of the profile still solve the divergence-form equation.
use halfplane_ma::convergence::observed_orders;
use halfplane_ma::transforms::{divform_residual_fn, extended_profile, kelvin_lift, kelvin_point, KelvinParams};
use halfplane_ma::GridSpec;

fn main() -> halfplane_ma::Result<()> {
    let a_w = 0.5;
    let kp = KelvinParams::new(vec![0.2, 0.0], 0.8, 0.0)?;
    let y = [1.0, 0.7];
    let img = kelvin_point(&kp, &y)?;
    println!("y = {y:?} -> {img:.6?} -> {:.6?}", kelvin_point(&kp, &img)?);

    let profile = |p: &[f64]| extended_profile(a_w, 0.0, 1.0, p[p.len() - 1]);
    let mut rows = Vec::new();
    for n in [65, 129, 257] {
        let plane = GridSpec::square((-1.0, 1.0), (0.5, 1.5), n)?;
        let lifted = |p: &[f64]| kelvin_lift(&kp, 2, a_w, profile, p);
        let r = divform_residual_fn(lifted, 2, a_w, &plane)?;
        rows.push((plane.hy(), r.max_abs));
    }
    println!("lifted profile residuals [{}]  orders {:.3?}", rows.iter().map(|r| format!("{:.3e}", r.1)).collect::<Vec<_>>().join(", "), observed_orders(&rows));
    Ok(())
}
