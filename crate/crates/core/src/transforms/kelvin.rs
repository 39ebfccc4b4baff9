//! Sphere inversion about boundary points, the weighted Kelvin lift, and
//! the moving-sphere comparison inequality.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// Evaluations closer than `CENTER_GUARD · λ` to the center are refused.
pub const CENTER_GUARD: f64 = 1e-6;

/// `|n − 2 + a_w|` at or below this selects the logarithmic lift.
pub const LOG_LIFT_TOL: f64 = 1e-12;

/// Inversion sphere centered on the boundary hyperplane `x_n = 0`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawKelvin")]
pub struct KelvinParams {
    center: Vec<f64>,
    lambda: f64,
    tau: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawKelvin {
    center: Vec<f64>,
    lambda: f64,
    #[serde(default)]
    tau: f64,
}

impl TryFrom<RawKelvin> for KelvinParams {
    type Error = Error;

    fn try_from(raw: RawKelvin) -> Result<Self> {
        KelvinParams::new(raw.center, raw.lambda, raw.tau)
    }
}

impl KelvinParams {
    pub fn new(center: Vec<f64>, lambda: f64, tau: f64) -> Result<Self> {
        if center.len() < 2 {
            return Err(invalid("center", "need at least 2 coordinates"));
        }
        if !center.iter().all(|c| c.is_finite()) {
            return Err(invalid("center", "coordinates must be finite"));
        }
        if center[center.len() - 1] != 0.0 {
            return Err(invalid("center", "last coordinate must be 0 (boundary point)"));
        }
        if !(lambda > 0.0 && lambda.is_finite()) {
            return Err(invalid("lambda", format!("must be > 0, got {lambda}")));
        }
        if !tau.is_finite() {
            return Err(invalid("tau", "must be finite"));
        }
        Ok(KelvinParams { center, lambda, tau })
    }

    pub fn center(&self) -> &[f64] {
        &self.center
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn dimension(&self) -> usize {
        self.center.len()
    }

    fn check_point(&self, y: &[f64]) -> Result<()> {
        if y.len() != self.center.len() {
            return Err(invalid(
                "y",
                format!("expected {} coordinates, got {}", self.center.len(), y.len()),
            ));
        }
        Ok(())
    }

    /// `|y − x|`.
    pub fn distance(&self, y: &[f64]) -> f64 {
        y.iter()
            .zip(&self.center)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt()
    }
}

/// `y^{x,λ} = x + λ²(y − x)/|y − x|²`.
pub fn kelvin_point(kp: &KelvinParams, y: &[f64]) -> Result<Vec<f64>> {
    kp.check_point(y)?;
    let r2: f64 = y.iter().zip(&kp.center).map(|(a, b)| (a - b) * (a - b)).sum();
    if r2 == 0.0 {
        return Err(Error::AtCenter);
    }
    let s = kp.lambda * kp.lambda / r2;
    Ok(y.iter().zip(&kp.center).map(|(yi, xi)| xi + s * (yi - xi)).collect())
}

/// `u_{x,λ}(y) = (λ/|y−x|)^{n−2+a_w} · u(y^{x,λ})`, or
/// `u(y^{x,λ}) + ln(λ/|y−x|)` when `n − 2 + a_w = 0`.
pub fn kelvin_lift(
    kp: &KelvinParams,
    n: usize,
    a_w: f64,
    u: impl Fn(&[f64]) -> Result<f64>,
    y: &[f64],
) -> Result<f64> {
    if n != kp.dimension() {
        return Err(invalid(
            "n",
            format!("dimension {n} does not match the center's {}", kp.dimension()),
        ));
    }
    kp.check_point(y)?;
    if y[n - 1] < 0.0 {
        return Err(Error::Domain("y must lie in the closed upper half-space".into()));
    }
    let r = kp.distance(y);
    if r <= CENTER_GUARD * kp.lambda {
        return Err(Error::AtCenter);
    }
    let image = kelvin_point(kp, y)?;
    let inner = u(&image)?;
    let ratio = kp.lambda / r;
    let e = n as f64 - 2.0 + a_w;
    if e.abs() <= LOG_LIFT_TOL {
        Ok(inner + ratio.ln())
    } else {
        Ok(ratio.powf(e) * inner)
    }
}

/// One failed comparison `lhs > f(y) + tolerance`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Violation {
    pub index: usize,
    pub point: Vec<f64>,
    /// `(λ/|y−x|)^τ f(y^{x,λ})`, or `f(y^{x,λ}) + ln(λ/|y−x|)` for the log variant.
    pub lhs: f64,
    /// `f(y)`.
    pub rhs: f64,
}

/// Evaluates the moving-sphere inequality
/// `(λ/|y−x|)^τ f(y^{x,λ}) ≤ f(y)` (or its logarithmic form) at every
/// sample and returns those where it fails by more than `tolerance`.
///
/// Samples must satisfy `|y − x| ≥ λ` and `y_n ≥ 0`.
pub fn moving_sphere_check(
    f: impl Fn(&[f64]) -> f64,
    kp: &KelvinParams,
    samples: &[Vec<f64>],
    log_variant: bool,
    tolerance: f64,
) -> Result<Vec<Violation>> {
    let n = kp.dimension();
    let mut out = Vec::new();
    for (index, y) in samples.iter().enumerate() {
        kp.check_point(y)?;
        if y[n - 1] < 0.0 {
            return Err(Error::Domain(format!("sample {index} lies below the half-space")));
        }
        let r = kp.distance(y);
        if r < kp.lambda * (1.0 - 1e-12) {
            return Err(Error::InsideBall { index });
        }
        let image = kelvin_point(kp, y)?;
        let ratio = kp.lambda / r;
        let lhs = if log_variant {
            f(&image) + ratio.ln()
        } else {
            ratio.powf(kp.tau) * f(&image)
        };
        let rhs = f(y);
        if lhs > rhs + tolerance {
            out.push(Violation {
                index,
                point: y.clone(),
                lhs,
                rhs,
            });
        }
    }
    Ok(out)
}

/// Sample points of a `(x₁, x_n)` plane grid (other coordinates zero)
/// lying in the closed exterior of the sphere.
pub fn exterior_plane_samples(
    kp: &KelvinParams,
    x1: (f64, f64),
    xn: (f64, f64),
    nodes: (usize, usize),
) -> Vec<Vec<f64>> {
    let n = kp.dimension();
    let mut out = Vec::new();
    for j in 0..nodes.1 {
        let t = xn.0 + (xn.1 - xn.0) * j as f64 / (nodes.1 - 1).max(1) as f64;
        for i in 0..nodes.0 {
            let s = x1.0 + (x1.1 - x1.0) * i as f64 / (nodes.0 - 1).max(1) as f64;
            let mut p = vec![0.0; n];
            p[0] = s;
            p[n - 1] = t;
            if kp.distance(&p) >= kp.lambda && t >= 0.0 {
                out.push(p);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kp(center: &[f64], lambda: f64, tau: f64) -> KelvinParams {
        KelvinParams::new(center.to_vec(), lambda, tau).unwrap()
    }

    #[test]
    fn params_validation() {
        assert!(KelvinParams::new(vec![0.0, 1.0], 1.0, 0.0).is_err());
        assert!(KelvinParams::new(vec![0.0, 0.0], 0.0, 0.0).is_err());
        assert!(KelvinParams::new(vec![0.0], 1.0, 0.0).is_err());
        let k: KelvinParams = serde_json::from_str(r#"{"center":[1,0],"lambda":2}"#).unwrap();
        assert_eq!(k.tau(), 0.0);
    }

    #[test]
    fn inversion_examples() {
        let k = kp(&[0.0, 0.0], 1.0, 0.0);
        assert_eq!(kelvin_point(&k, &[0.0, 2.0]).unwrap(), vec![0.0, 0.5]);
        let on = [0.6, 0.8];
        let img = kelvin_point(&k, &on).unwrap();
        assert!((img[0] - 0.6).abs() < 1e-15 && (img[1] - 0.8).abs() < 1e-15);
        assert!(matches!(kelvin_point(&k, &[0.0, 0.0]), Err(Error::AtCenter)));
        // boundary maps to boundary
        let k2 = kp(&[0.3, -1.0, 0.0], 0.7, 0.0);
        assert_eq!(kelvin_point(&k2, &[2.0, 1.0, 0.0]).unwrap()[2], 0.0);
    }

    #[test]
    fn lift_examples() {
        let k = kp(&[0.0, 0.0], 1.0, 0.0);
        let v = kelvin_lift(&k, 2, 0.5, |_| Ok(1.0), &[0.0, 2.0]).unwrap();
        assert!((v - 0.5f64.sqrt()).abs() < 1e-15);
        let e = std::f64::consts::E;
        let w = kelvin_lift(&k, 2, 0.0, |_| Ok(0.0), &[0.0, e]).unwrap();
        assert!((w + 1.0).abs() < 1e-15);
        assert!(matches!(
            kelvin_lift(&k, 2, 0.5, |_| Ok(1.0), &[0.0, 1e-7]),
            Err(Error::AtCenter)
        ));
        assert!(kelvin_lift(&k, 3, 0.5, |_| Ok(1.0), &[0.0, 1.0]).is_err());
    }

    #[test]
    fn checker_trivial_cases() {
        let k = kp(&[0.0, 0.0], 1.0, 0.0);
        let samples = exterior_plane_samples(&k, (-3.0, 3.0), (0.0, 3.0), (13, 13));
        assert!(!samples.is_empty());
        assert!(moving_sphere_check(|_| 1.0, &k, &samples, false, 0.0).unwrap().is_empty());
        assert!(moving_sphere_check(|_| 0.0, &k, &samples, true, 0.0).unwrap().is_empty());
        let inside = vec![vec![0.1, 0.1]];
        assert!(matches!(
            moving_sphere_check(|_| 1.0, &k, &inside, false, 0.0),
            Err(Error::InsideBall { index: 0 })
        ));
    }

    #[test]
    fn checker_reports_violations_for_growing_functions() {
        // f(y) = −|y|² is larger at the (closer-in) image points.
        let k = kp(&[0.0, 0.0], 1.0, 0.0);
        let samples = vec![vec![0.0, 2.0], vec![3.0, 1.0]];
        let v = moving_sphere_check(|p| -(p[0] * p[0] + p[1] * p[1]), &k, &samples, false, 0.0).unwrap();
        assert_eq!(v.len(), 2);
        assert!(v[0].lhs > v[0].rhs);
    }
}
