//! Blow-up of the lower bound near the boundary for alpha <= -2.
use halfplane_ma::sharpness_lower_bound;

fn main() -> halfplane_ma::Result<()> {
    for alpha in [-2.0, -2.5, -3.0] {
        print!("alpha = {alpha:4}:");
        for k in [1, 2, 4, 8] {
            print!("  y=1e-{k}: {:.4e}", sharpness_lower_bound(alpha, 1.0, 10f64.powi(-k))?);
        }
        println!();
    }
    Ok(())
}
