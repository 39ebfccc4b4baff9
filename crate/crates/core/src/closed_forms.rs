//! Exact solution families of `det D²u = RHS` and their derivatives.
//!
//! * [`DirichletFamily`]: `det D²u = (a+by)^α` in the upper half-plane with
//!   `u(x, 0) = x²/2`.
//! * [`NeumannFamily`]: `det D²u = y^α` with `u_y(x, 0) = 0`.
//! * [`EntireFamily`]: `det D²u = |y|^α` on the whole plane.
//!
//! The Dirichlet family is written as
//! `u(x, y) = (x − C·y)² / (2(1 + A·y)) + g(y)` where the height part `g`
//! satisfies `g'' = (1 + A·y)(a + b·y)^α`, `g(0) = 0`, `g'(0)` absorbing `B`.
//! Its partial Legendre dual is `u*(ξ, η) = ξ²(1 + A·η)/2 + C·ξ·η − g(η)`.

use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::params::{EquationParams, FamilyCoeffs};

/// `|alpha + 1|` at or below this selects the logarithmic branch.
pub const LOG_BRANCH_TOL: f64 = 1e-12;

/// Symmetric 2×2 Hessian `[[xx, xy], [xy, yy]]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Hessian2 {
    pub xx: f64,
    pub xy: f64,
    pub yy: f64,
}

impl Hessian2 {
    pub fn det(&self) -> f64 {
        self.xx * self.yy - self.xy * self.xy
    }

    /// Positive semidefinite in the sense used for convexity checks.
    pub fn is_convex(&self) -> bool {
        self.xx > 0.0 && self.yy >= 0.0 && self.det() >= 0.0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    /// `alpha != -1`: power-law height part.
    Generic,
    /// `alpha == -1`: `(a+by)·ln(a+by)` height part.
    Log,
}

/// Convex solutions of the Dirichlet problem, parametrized by `(A, B, C)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DirichletFamily {
    params: EquationParams,
    coeffs: FamilyCoeffs,
    branch: Branch,
}

impl DirichletFamily {
    pub fn new(params: EquationParams, coeffs: FamilyCoeffs) -> Result<Self> {
        params.require_classified()?;
        let branch = if (params.alpha() + 1.0).abs() <= LOG_BRANCH_TOL {
            Branch::Log
        } else {
            Branch::Generic
        };
        Ok(DirichletFamily {
            params,
            coeffs,
            branch,
        })
    }

    pub fn params(&self) -> &EquationParams {
        &self.params
    }

    pub fn coeffs(&self) -> &FamilyCoeffs {
        &self.coeffs
    }

    pub fn branch(&self) -> Branch {
        self.branch
    }

    fn check_height(y: f64) -> Result<()> {
        if y >= 0.0 {
            Ok(())
        } else {
            Err(Error::Domain(format!("y must be >= 0, got {y}")))
        }
    }

    /// `g(η)`, the x-independent part of `u`.
    fn height_part(&self, y: f64) -> Result<f64> {
        let (a, b, alpha) = (self.params.a(), self.params.b(), self.params.alpha());
        let big_a = self.coeffs.growth();
        let k = b - a * big_a;
        let s = a + b * y;
        let b3 = b * b * b;
        let value = match self.branch {
            Branch::Generic => {
                let t2 = (s.powf(2.0 + alpha) - a.powf(2.0 + alpha)) / ((1.0 + alpha) * (2.0 + alpha));
                let t3 = (s.powf(3.0 + alpha) - a.powf(3.0 + alpha)) / ((2.0 + alpha) * (3.0 + alpha));
                k * t2 / b3 + big_a * t3 / b3
            }
            Branch::Log => {
                if a <= 0.0 {
                    return Err(Error::Domain(
                        "the alpha = -1 family needs a > 0 for its a·ln(a) constant".into(),
                    ));
                }
                k * (s * s.ln() - a * a.ln()) / b3 + big_a * y * y / (2.0 * b)
            }
        };
        Ok(value - self.coeffs.tilt() * y)
    }

    /// `g'(η)`.
    fn height_slope(&self, y: f64) -> Result<f64> {
        let (a, b, alpha) = (self.params.a(), self.params.b(), self.params.alpha());
        let big_a = self.coeffs.growth();
        let k = b - a * big_a;
        let s = a + b * y;
        let value = match self.branch {
            Branch::Generic => {
                k * s.powf(1.0 + alpha) / (b * b * (1.0 + alpha))
                    + big_a * s.powf(2.0 + alpha) / (b * b * (2.0 + alpha))
            }
            Branch::Log => {
                if s <= 0.0 {
                    return Err(Error::Domain("ln(a + b·y) undefined at a + b·y = 0".into()));
                }
                k * (s.ln() + 1.0) / (b * b) + big_a * y / b
            }
        };
        Ok(value - self.coeffs.tilt())
    }

    /// `g''(η) = (1 + A·η)(a + b·η)^α`, shared by both branches.
    fn height_curvature(&self, y: f64) -> f64 {
        (1.0 + self.coeffs.growth() * y) * self.params.rhs(y)
    }

    /// `u(x, y)` for `y >= 0`; `u(x, 0) = x²/2`.
    pub fn eval(&self, x: f64, y: f64) -> Result<f64> {
        Self::check_height(y)?;
        let d = 1.0 + self.coeffs.growth() * y;
        let w = x - self.coeffs.shear() * y;
        Ok(w * w / (2.0 * d) + self.height_part(y)?)
    }

    /// `(u_x, u_y)`.
    pub fn gradient(&self, x: f64, y: f64) -> Result<(f64, f64)> {
        Self::check_height(y)?;
        let (big_a, c) = (self.coeffs.growth(), self.coeffs.shear());
        let d = 1.0 + big_a * y;
        let w = x - c * y;
        let ux = w / d;
        let uy = -c * w / d - big_a * w * w / (2.0 * d * d) + self.height_slope(y)?;
        Ok((ux, uy))
    }

    /// Analytic Hessian for `y > 0`; `u_xx = 1/(1 + A·y)`.
    pub fn hessian(&self, x: f64, y: f64) -> Result<Hessian2> {
        if !(y > 0.0) {
            return Err(Error::Domain(format!("Hessian needs y > 0, got {y}")));
        }
        let (big_a, c) = (self.coeffs.growth(), self.coeffs.shear());
        let d = 1.0 + big_a * y;
        let w = x - c * y;
        Ok(Hessian2 {
            xx: 1.0 / d,
            xy: -c / d - big_a * w / (d * d),
            yy: c * c / d
                + 2.0 * big_a * c * w / (d * d)
                + big_a * big_a * w * w / (d * d * d)
                + self.height_curvature(y),
        })
    }

    /// Partial Legendre dual `u*(ξ, η) = ξ²(1 + Aη)/2 + Cξη − g(η)`.
    pub fn dual(&self, xi: f64, eta: f64) -> Result<f64> {
        Self::check_height(eta)?;
        let d = 1.0 + self.coeffs.growth() * eta;
        Ok(0.5 * xi * xi * d + self.coeffs.shear() * xi * eta - self.height_part(eta)?)
    }

    /// Hessian of [`dual`](Self::dual) in `(ξ, η)`, for `η > 0`.
    pub fn dual_hessian(&self, xi: f64, eta: f64) -> Result<Hessian2> {
        if !(eta > 0.0) {
            return Err(Error::Domain(format!("dual Hessian needs eta > 0, got {eta}")));
        }
        let big_a = self.coeffs.growth();
        Ok(Hessian2 {
            xx: 1.0 + big_a * eta,
            xy: self.coeffs.shear() + big_a * xi,
            yy: -self.height_curvature(eta),
        })
    }

    /// `(a + b·y)^α`.
    pub fn rhs(&self, y: f64) -> f64 {
        self.params.rhs(y)
    }
}

/// `x²/(2A) + A·y^{2+α}/((2+α)(1+α)) + p·x + q`, solving
/// `det D²u = y^α` with `u_y(x, 0) = 0`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct NeumannFamily {
    alpha: f64,
    growth: f64,
    linear: (f64, f64),
}

impl NeumannFamily {
    /// Requires `alpha >= 0` and `A > 0`; `linear = (p, q)`.
    pub fn new(alpha: f64, growth: f64, linear: (f64, f64)) -> Result<Self> {
        if !(alpha.is_finite() && alpha >= 0.0) {
            return Err(invalid("alpha", format!("Neumann family needs alpha >= 0, got {alpha}")));
        }
        if !(growth.is_finite() && growth > 0.0) {
            return Err(invalid("A", format!("Neumann family needs A > 0, got {growth}")));
        }
        if !(linear.0.is_finite() && linear.1.is_finite()) {
            return Err(invalid("l", "linear part must be finite"));
        }
        Ok(NeumannFamily {
            alpha,
            growth,
            linear,
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn growth(&self) -> f64 {
        self.growth
    }

    fn check_height(y: f64) -> Result<()> {
        if y >= 0.0 {
            Ok(())
        } else {
            Err(Error::Domain(format!("y must be >= 0, got {y}")))
        }
    }

    pub fn eval(&self, x: f64, y: f64) -> Result<f64> {
        Self::check_height(y)?;
        let (al, a) = (self.alpha, self.growth);
        Ok(x * x / (2.0 * a)
            + a * y.powf(2.0 + al) / ((2.0 + al) * (1.0 + al))
            + self.linear.0 * x
            + self.linear.1)
    }

    pub fn gradient(&self, x: f64, y: f64) -> Result<(f64, f64)> {
        Self::check_height(y)?;
        let (al, a) = (self.alpha, self.growth);
        Ok((x / a + self.linear.0, a * y.powf(1.0 + al) / (1.0 + al)))
    }

    pub fn hessian(&self, _x: f64, y: f64) -> Result<Hessian2> {
        Self::check_height(y)?;
        Ok(Hessian2 {
            xx: 1.0 / self.growth,
            xy: 0.0,
            yy: self.growth * y.powf(self.alpha),
        })
    }

    pub fn rhs(&self, y: f64) -> f64 {
        y.powf(self.alpha)
    }
}

/// `x²/(2A) + A·B²·y²/2 + B·x·y + A·|y|^{2+α}/((2+α)(1+α)) + l(x, y)`,
/// solving `det D²u = |y|^α` on the plane.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EntireFamily {
    alpha: f64,
    growth: f64,
    tilt: f64,
    linear: (f64, f64, f64),
}

impl EntireFamily {
    /// Requires `alpha > -1` and `A > 0`; `linear = (p, q, r)` for `p·x + q·y + r`.
    pub fn new(alpha: f64, growth: f64, tilt: f64, linear: (f64, f64, f64)) -> Result<Self> {
        if !(alpha.is_finite() && alpha > -1.0) {
            return Err(invalid("alpha", format!("entire family needs alpha > -1, got {alpha}")));
        }
        if !(growth.is_finite() && growth > 0.0) {
            return Err(invalid("A", format!("entire family needs A > 0, got {growth}")));
        }
        if !tilt.is_finite() {
            return Err(invalid("B", "must be finite"));
        }
        if ![linear.0, linear.1, linear.2].iter().all(|v| v.is_finite()) {
            return Err(invalid("l", "linear part must be finite"));
        }
        Ok(EntireFamily {
            alpha,
            growth,
            tilt,
            linear,
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn eval(&self, x: f64, y: f64) -> f64 {
        let (al, a, b) = (self.alpha, self.growth, self.tilt);
        let (p, q, r) = self.linear;
        x * x / (2.0 * a)
            + a * b * b * y * y / 2.0
            + b * x * y
            + a * y.abs().powf(2.0 + al) / ((2.0 + al) * (1.0 + al))
            + p * x
            + q * y
            + r
    }

    /// Analytic Hessian; `y = 0` is rejected for `alpha < 0` where `|y|^α` blows up.
    pub fn hessian(&self, _x: f64, y: f64) -> Result<Hessian2> {
        if self.alpha < 0.0 && y == 0.0 {
            return Err(Error::Domain("|y|^alpha is infinite at y = 0 for alpha < 0".into()));
        }
        let (a, b) = (self.growth, self.tilt);
        Ok(Hessian2 {
            xx: 1.0 / a,
            xy: b,
            yy: a * b * b + a * y.abs().powf(self.alpha),
        })
    }

    pub fn rhs(&self, y: f64) -> f64 {
        y.abs().powf(self.alpha)
    }
}

/// Lower bound forced on `u(x, y)` near `y = 0` when `alpha <= -2`:
/// `y^{2+α} / (C(1+α)(2+α))` for `α < -2`, `-ln(y)/C` for `α = -2`.
/// It grows without bound as `y → 0+`.
pub fn sharpness_lower_bound(alpha: f64, c: f64, y: f64) -> Result<f64> {
    if !(alpha <= -2.0) {
        return Err(Error::Domain(format!(
            "the blow-up bound applies for alpha <= -2, got {alpha}"
        )));
    }
    if !(c > 0.0 && c.is_finite()) {
        return Err(invalid("C", format!("must be > 0, got {c}")));
    }
    if !(y > 0.0 && y.is_finite()) {
        return Err(invalid("y", format!("must be > 0, got {y}")));
    }
    if alpha == -2.0 {
        Ok(-y.ln() / c)
    } else {
        Ok(y.powf(2.0 + alpha) / (c * (1.0 + alpha) * (2.0 + alpha)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fam(a: f64, b: f64, alpha: f64, big_a: f64, big_b: f64, c: f64) -> DirichletFamily {
        DirichletFamily::new(
            EquationParams::new(a, b, alpha).unwrap(),
            FamilyCoeffs::new(big_a, big_b, c).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn reduces_to_quadratic_plus_power_when_coefficients_vanish() {
        for alpha in [-1.5, -0.5, 0.0, 1.0, 2.5] {
            let f = fam(0.0, 1.0, alpha, 0.0, 0.0, 0.0);
            for (x, y) in [(0.3, 0.2), (-1.0, 2.0), (2.0, 0.7)] {
                let expect = 0.5 * x * x + f64::powf(y, 2.0 + alpha) / ((2.0 + alpha) * (1.0 + alpha));
                let got = f.eval(x, y).unwrap();
                assert!((got - expect).abs() < 1e-12 * (1.0 + expect.abs()), "alpha={alpha}");
            }
        }
        assert!((fam(0.0, 1.0, 0.0, 0.0, 0.0, 0.0).eval(1.0, 1.0).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn log_branch_at_origin_and_domain_error() {
        let f = fam(1.0, 2.0, -1.0, 0.0, 0.0, 0.0);
        assert_eq!(f.branch(), Branch::Log);
        assert_eq!(f.eval(0.0, 0.0).unwrap(), 0.0);
        let g = fam(0.0, 1.0, -1.0, 0.0, 0.0, 0.0);
        assert!(matches!(g.eval(0.5, 1.0), Err(Error::Domain(_))));
        assert!(fam(1.0, 1.0, -1.0 + 1e-10, 0.0, 0.0, 0.0).branch() == Branch::Generic);
    }

    #[test]
    fn boundary_trace_is_half_x_squared() {
        for alpha in [-1.9, -1.0, -0.3, 0.0, 0.7, 3.0] {
            let f = fam(0.8, 1.3, alpha, 1.1, -0.4, 0.9);
            for x in [-3.0, -0.1, 0.0, 2.5] {
                assert!((f.eval(x, 0.0).unwrap() - 0.5 * x * x).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn hessian_special_cases() {
        let f = fam(1.0, 1.0, 0.5, 0.0, 0.3, 0.0);
        let h = f.hessian(0.4, 0.9).unwrap();
        assert_eq!(h.xx, 1.0);
        assert_eq!(h.xy, 0.0);
        let g = fam(1.0, 1.0, 0.5, 1.0, 0.0, 0.0);
        assert_eq!(g.hessian(0.2, 1.0).unwrap().xx, 0.5);
        assert!(g.hessian(0.2, 0.0).is_err());
    }

    #[test]
    fn gradient_matches_central_differences() {
        let f = fam(0.5, 2.0, 0.5, 0.3, -1.0, 0.2);
        let h = 1e-5;
        for (x, y) in [(0.2, 0.5), (-0.7, 1.3)] {
            let (ux, uy) = f.gradient(x, y).unwrap();
            let fx = (f.eval(x + h, y).unwrap() - f.eval(x - h, y).unwrap()) / (2.0 * h);
            let fy = (f.eval(x, y + h).unwrap() - f.eval(x, y - h).unwrap()) / (2.0 * h);
            assert!((ux - fx).abs() < 1e-8 && (uy - fy).abs() < 1e-8);
        }
    }

    #[test]
    fn dual_satisfies_grushin_identity() {
        let f = fam(1.0, 2.0, 0.5, 0.3, -1.0, 0.2);
        let h = f.dual_hessian(0.4, 0.6).unwrap();
        assert!((f.rhs(0.6) * h.xx + h.yy).abs() < 1e-12);
        // u*_ξξ · u_xx = 1 at matched points (ξ = u_x, η = y).
        let (x, y) = (0.3, 0.6);
        let (ux, _) = f.gradient(x, y).unwrap();
        let hu = f.hessian(x, y).unwrap();
        assert!((f.dual_hessian(ux, y).unwrap().xx * hu.xx - 1.0).abs() < 1e-14);
    }

    #[test]
    fn neumann_examples() {
        let n = NeumannFamily::new(0.0, 2.0, (0.0, 0.0)).unwrap();
        // x²/(2A) = 1 and A·y²/2 = 4 at (2, 2).
        assert_eq!(n.eval(2.0, 2.0).unwrap(), 5.0);
        let n = NeumannFamily::new(1.5, 0.7, (0.3, -2.0)).unwrap();
        for k in 0..100 {
            let x = -5.0 + 0.1 * k as f64;
            assert_eq!(n.gradient(x, 0.0).unwrap().1, 0.0);
        }
        let h = n.hessian(1.0, 0.8).unwrap();
        assert!((h.det() - 0.8f64.powf(1.5)).abs() < 1e-15);
        assert!(NeumannFamily::new(-0.1, 1.0, (0.0, 0.0)).is_err());
        assert!(NeumannFamily::new(0.0, 0.0, (0.0, 0.0)).is_err());
    }

    #[test]
    fn entire_examples() {
        let e = EntireFamily::new(0.0, 1.0, 0.0, (0.0, 0.0, 0.0)).unwrap();
        assert!((e.eval(0.6, -0.8) - 0.5).abs() < 1e-15);
        assert_eq!(e.hessian(0.0, 0.3).unwrap().det(), 1.0);
        let e = EntireFamily::new(2.0, 1.0, 3.0, (0.0, 0.0, 0.0)).unwrap();
        assert!((e.hessian(0.0, 2.0).unwrap().det() - 4.0).abs() < 1e-12);
        assert!((e.hessian(0.0, -2.0).unwrap().det() - 4.0).abs() < 1e-12);
        let s = EntireFamily::new(-0.5, 1.0, 0.0, (0.0, 0.0, 0.0)).unwrap();
        assert!(s.hessian(0.0, 0.0).is_err());
        assert!(EntireFamily::new(-1.0, 1.0, 0.0, (0.0, 0.0, 0.0)).is_err());
    }

    #[test]
    fn sharpness_values() {
        let v = sharpness_lower_bound(-2.5, 1.0, 1e-4).unwrap();
        assert!((v - 100.0 / 0.75).abs() < 1e-12);
        let w = sharpness_lower_bound(-2.0, 1.0, (-10.0f64).exp()).unwrap();
        assert!((w - 10.0).abs() < 1e-12);
        let ys = [1e-6, 1e-4, 1e-2];
        let vals: Vec<f64> = ys.iter().map(|&y| sharpness_lower_bound(-2.5, 1.0, y).unwrap()).collect();
        assert!(vals[0] > vals[1] && vals[1] > vals[2]);
        assert!(sharpness_lower_bound(-1.9, 1.0, 0.1).is_err());
        assert!(sharpness_lower_bound(-3.0, 0.0, 0.1).is_err());
    }

    #[test]
    fn family_rejects_alpha_at_or_below_minus_two() {
        let p = EquationParams::new(0.0, 1.0, -2.0).unwrap();
        assert!(DirichletFamily::new(p, FamilyCoeffs::zero()).is_err());
    }
}
