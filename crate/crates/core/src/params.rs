use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// Right-hand side `(a + b·y)^alpha` of the half-plane Monge-Ampère equation.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawParams")]
pub struct EquationParams {
    a: f64,
    b: f64,
    alpha: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawParams {
    a: f64,
    b: f64,
    alpha: f64,
}

impl TryFrom<RawParams> for EquationParams {
    type Error = crate::Error;

    fn try_from(raw: RawParams) -> Result<Self> {
        EquationParams::new(raw.a, raw.b, raw.alpha)
    }
}

impl EquationParams {
    /// Requires `a >= 0`, `b > 0` and a finite `alpha`.
    pub fn new(a: f64, b: f64, alpha: f64) -> Result<Self> {
        if !(a.is_finite() && a >= 0.0) {
            return Err(invalid("a", format!("must be finite and >= 0, got {a}")));
        }
        if !(b.is_finite() && b > 0.0) {
            return Err(invalid("b", format!("must be finite and > 0, got {b}")));
        }
        if !alpha.is_finite() {
            return Err(invalid("alpha", "must be finite"));
        }
        Ok(EquationParams { a, b, alpha })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// The base `a + b·y`.
    #[inline]
    pub fn base(&self, y: f64) -> f64 {
        self.a + self.b * y
    }

    /// `(a + b·y)^alpha`; infinite or NaN where the base is not positive
    /// and the power is undefined there.
    #[inline]
    pub fn rhs(&self, y: f64) -> f64 {
        self.base(y).powf(self.alpha)
    }

    /// The right-hand side where the equation is posed (`a + b·y > 0`), else `None`.
    pub fn rhs_checked(&self, y: f64) -> Option<f64> {
        let s = self.base(y);
        if s > 0.0 {
            let r = s.powf(self.alpha);
            r.is_finite().then_some(r)
        } else {
            None
        }
    }

    /// Errors unless `alpha > -2`, the range in which continuous convex
    /// solutions exist.
    pub fn require_classified(&self) -> Result<()> {
        if self.alpha > -2.0 {
            Ok(())
        } else {
            Err(invalid(
                "alpha",
                format!("must be > -2 for a classified family, got {}", self.alpha),
            ))
        }
    }
}

/// Free constants `(A, B, C)` of the Dirichlet solution family.
///
/// `A >= 0` scales the linear growth of `u*_ξξ = 1 + A·η`, `B` multiplies
/// the `-B·y` term, and `C` shears the quadratic part `(x - C·y)²`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawCoeffs")]
pub struct FamilyCoeffs {
    #[serde(rename = "A")]
    growth: f64,
    #[serde(rename = "B")]
    tilt: f64,
    #[serde(rename = "C")]
    shear: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCoeffs {
    #[serde(rename = "A")]
    growth: f64,
    #[serde(rename = "B")]
    tilt: f64,
    #[serde(rename = "C")]
    shear: f64,
}

impl TryFrom<RawCoeffs> for FamilyCoeffs {
    type Error = crate::Error;

    fn try_from(raw: RawCoeffs) -> Result<Self> {
        FamilyCoeffs::new(raw.growth, raw.tilt, raw.shear)
    }
}

impl FamilyCoeffs {
    pub fn new(growth: f64, tilt: f64, shear: f64) -> Result<Self> {
        if !(growth.is_finite() && growth >= 0.0) {
            return Err(invalid("A", format!("must be finite and >= 0, got {growth}")));
        }
        if !tilt.is_finite() {
            return Err(invalid("B", "must be finite"));
        }
        if !shear.is_finite() {
            return Err(invalid("C", "must be finite"));
        }
        Ok(FamilyCoeffs { growth, tilt, shear })
    }

    pub fn zero() -> Self {
        FamilyCoeffs {
            growth: 0.0,
            tilt: 0.0,
            shear: 0.0,
        }
    }

    /// `A`
    pub fn growth(&self) -> f64 {
        self.growth
    }

    /// `B`
    pub fn tilt(&self) -> f64 {
        self.tilt
    }

    /// `C`
    pub fn shear(&self) -> f64 {
        self.shear
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn params_enforce_signs() {
        assert!(EquationParams::new(-0.1, 1.0, 0.0).is_err());
        assert!(EquationParams::new(0.0, 0.0, 0.0).is_err());
        assert!(EquationParams::new(0.0, 1.0, f64::NAN).is_err());
        let p = EquationParams::new(0.0, 1.0, -3.0).unwrap();
        assert!(p.require_classified().is_err());
        assert!(EquationParams::new(0.0, 1.0, -1.99).unwrap().require_classified().is_ok());
    }

    #[test]
    fn rhs_checked_excludes_nonpositive_base() {
        let p = EquationParams::new(0.0, 1.0, -0.5).unwrap();
        assert_eq!(p.rhs_checked(0.0), None);
        assert_eq!(p.rhs_checked(4.0), Some(0.5));
        let q = EquationParams::new(1.0, 2.0, 0.0).unwrap();
        assert_eq!(q.rhs_checked(-0.5), None);
        assert_eq!(q.rhs(3.0), 1.0);
    }

    #[test]
    fn coeffs_require_nonnegative_growth() {
        assert!(FamilyCoeffs::new(-1e-3, 0.0, 0.0).is_err());
        let c: FamilyCoeffs = serde_json::from_str(r#"{"A":0.5,"B":-1,"C":0.2}"#).unwrap();
        assert_eq!((c.growth(), c.tilt(), c.shear()), (0.5, -1.0, 0.2));
        assert!(serde_json::from_str::<FamilyCoeffs>(r#"{"A":-1,"B":0,"C":0}"#).is_err());
    }
}
