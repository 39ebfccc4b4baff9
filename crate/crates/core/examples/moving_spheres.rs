//! Moving-sphere comparison on the exterior of a half-ball.
use halfplane_ma::transforms::{exterior_plane_samples, moving_sphere_check, KelvinParams};

fn main() -> halfplane_ma::Result<()> {
    let kp = KelvinParams::new(vec![0.3, 0.0], 1.2, 0.0)?;
    let samples = exterior_plane_samples(&kp, (-3.0, 3.0), (0.0, 3.0), (61, 31));
    let height = moving_sphere_check(|y| y[1], &kp, &samples, false, 1e-12)?;
    let log = moving_sphere_check(|_| 0.0, &kp, &samples, true, 1e-12)?;
    println!("{} samples; f = x_n: {} violations; log form with f = 0: {}", samples.len(), height.len(), log.len());

    let weighted = KelvinParams::new(vec![0.3, 0.0], 1.2, -1.0)?;
    let v = moving_sphere_check(|_| 1.0, &weighted, &samples, false, 1e-12)?;
    println!("tau = -1, f = 1: {} violations", v.len());
    if let Some(first) = v.first() {
        println!("  e.g. at {:?}: lhs {:.6} > rhs {:.6}", first.point, first.lhs, first.rhs);
    }
    Ok(())
}
