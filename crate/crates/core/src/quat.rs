//! Quaternion algebra on ℝ⁴.
//!
//! A point `(x₁, x₂, x₃, x₄)` of ℝ⁴ is read as the quaternion
//! `x₁ + i x₂ + j x₃ + k x₄`, stored here as `(w, x, y, z)`. The same type
//! doubles as a plain 4-vector for positions and tangent vectors in S³.

use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};

use nalgebra::Vector3;
use serde::{Deserialize, Serialize};

use crate::error::{GeomError, Result};

/// Algebraic tolerance for identities between unit quaternions.
pub const UNIT_EPS: f64 = 1e-12;

/// Drift accepted (and projected away) when refining a quaternion to S³ or 𝒮.
pub const RENORM_EPS: f64 = 1e-8;

/// Norms at or below this are treated as zero by [`Quat::inv`].
pub const ZERO_NORM: f64 = 1e-300;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Quat {
    pub w: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Quat {
    pub const ZERO: Quat = Quat::new(0.0, 0.0, 0.0, 0.0);
    pub const ONE: Quat = Quat::new(1.0, 0.0, 0.0, 0.0);
    pub const I: Quat = Quat::new(0.0, 1.0, 0.0, 0.0);
    pub const J: Quat = Quat::new(0.0, 0.0, 1.0, 0.0);
    pub const K: Quat = Quat::new(0.0, 0.0, 0.0, 1.0);

    pub const fn new(w: f64, x: f64, y: f64, z: f64) -> Self {
        Self { w, x, y, z }
    }

    /// The standard basis vector `e_{k+1}` of ℝ⁴ (`k` in `0..4`).
    pub fn basis(k: usize) -> Self {
        let mut c = [0.0; 4];
        c[k] = 1.0;
        Self::from_array(c)
    }

    pub fn pure(v: Vector3<f64>) -> Self {
        Self::new(0.0, v.x, v.y, v.z)
    }

    pub fn from_array(a: [f64; 4]) -> Self {
        Self::new(a[0], a[1], a[2], a[3])
    }

    pub fn to_array(self) -> [f64; 4] {
        [self.w, self.x, self.y, self.z]
    }

    /// Imaginary part as a vector of ℝ³ (the 𝒮 ≅ S² identification).
    pub fn imag(self) -> Vector3<f64> {
        Vector3::new(self.x, self.y, self.z)
    }

    pub fn dot(self, o: Quat) -> f64 {
        self.w * o.w + self.x * o.x + self.y * o.y + self.z * o.z
    }

    pub fn norm_sq(self) -> f64 {
        self.dot(self)
    }

    pub fn norm(self) -> f64 {
        self.norm_sq().sqrt()
    }

    pub fn normalize(self) -> Self {
        self / self.norm()
    }

    pub fn max_abs(self) -> f64 {
        self.w.abs().max(self.x.abs()).max(self.y.abs()).max(self.z.abs())
    }

    pub fn conj(self) -> Self {
        qconj(self)
    }

    pub fn inv(self) -> Result<Self> {
        qinv(self)
    }
}

/// Quaternion product, row by row:
///
/// ```text
/// x₁y₁ − x₂y₂ − x₃y₃ − x₄y₄
/// x₁y₂ + x₂y₁ + x₃y₄ − x₄y₃
/// x₁y₃ − x₂y₄ + x₃y₁ + x₄y₂
/// x₁y₄ + x₂y₃ − x₃y₂ + x₄y₁
/// ```
pub fn qmul(a: Quat, b: Quat) -> Quat {
    Quat {
        w: a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
        x: a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
        y: a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x,
        z: a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w,
    }
}

pub fn qconj(a: Quat) -> Quat {
    Quat::new(a.w, -a.x, -a.y, -a.z)
}

/// `a⁻¹ = ā / |a|²`.
pub fn qinv(a: Quat) -> Result<Quat> {
    let n2 = a.norm_sq();
    if n2.sqrt() <= ZERO_NORM {
        return Err(GeomError::ZeroQuaternion(n2.sqrt()));
    }
    Ok(qconj(a) / n2)
}

/// Product of two orthogonal pure unit quaternions, computed as `(0, x̃ × ỹ)`.
pub fn pure_product_as_cross(a: PureUnit, b: PureUnit) -> Result<Quat> {
    let dot = a.quat().dot(b.quat());
    if dot.abs() > 1e-10 {
        return Err(GeomError::NotOrthogonal { dot });
    }
    Ok(Quat::pure(a.quat().imag().cross(&b.quat().imag())))
}

impl Mul for Quat {
    type Output = Quat;
    fn mul(self, rhs: Quat) -> Quat {
        qmul(self, rhs)
    }
}

impl Mul<f64> for Quat {
    type Output = Quat;
    fn mul(self, k: f64) -> Quat {
        Quat::new(self.w * k, self.x * k, self.y * k, self.z * k)
    }
}

impl Mul<Quat> for f64 {
    type Output = Quat;
    fn mul(self, q: Quat) -> Quat {
        q * self
    }
}

impl Div<f64> for Quat {
    type Output = Quat;
    fn div(self, k: f64) -> Quat {
        Quat::new(self.w / k, self.x / k, self.y / k, self.z / k)
    }
}

impl Add for Quat {
    type Output = Quat;
    fn add(self, o: Quat) -> Quat {
        Quat::new(self.w + o.w, self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl AddAssign for Quat {
    fn add_assign(&mut self, o: Quat) {
        *self = *self + o;
    }
}

impl Sub for Quat {
    type Output = Quat;
    fn sub(self, o: Quat) -> Quat {
        Quat::new(self.w - o.w, self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl SubAssign for Quat {
    fn sub_assign(&mut self, o: Quat) {
        *self = *self - o;
    }
}

impl Neg for Quat {
    type Output = Quat;
    fn neg(self) -> Quat {
        Quat::new(-self.w, -self.x, -self.y, -self.z)
    }
}

/// A point of S³.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct UnitQuat(Quat);

impl UnitQuat {
    pub const ONE: UnitQuat = UnitQuat(Quat::ONE);

    /// Accepts `q` when `| |q| − 1 | ≤ 1e−8` and renormalizes it; rejects otherwise.
    pub fn new(q: Quat) -> Result<Self> {
        let norm = q.norm();
        if (norm - 1.0).abs() > RENORM_EPS || !norm.is_finite() {
            return Err(GeomError::NotUnit { norm });
        }
        Ok(Self(q / norm))
    }

    pub fn quat(self) -> Quat {
        self.0
    }

    pub fn conj(self) -> Self {
        Self(qconj(self.0))
    }
}

impl Mul for UnitQuat {
    type Output = UnitQuat;
    fn mul(self, rhs: UnitQuat) -> UnitQuat {
        // closed on S³ up to rounding
        UnitQuat(qmul(self.0, rhs.0))
    }
}

impl From<UnitQuat> for Quat {
    fn from(u: UnitQuat) -> Quat {
        u.0
    }
}

/// A purely imaginary unit quaternion, i.e. a point of 𝒮.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PureUnit(UnitQuat);

impl PureUnit {
    /// Accepts `q` when its real part and its norm defect are both within
    /// `1e−8`, then projects onto 𝒮.
    pub fn new(q: Quat) -> Result<Self> {
        if q.w.abs() > RENORM_EPS {
            return Err(GeomError::NotPure { w: q.w });
        }
        let u = UnitQuat::new(Quat::new(0.0, q.x, q.y, q.z))?;
        Ok(Self(u))
    }

    pub fn from_vec(v: Vector3<f64>) -> Result<Self> {
        Self::new(Quat::pure(v))
    }

    pub fn quat(self) -> Quat {
        self.0 .0
    }

    pub fn unit(self) -> UnitQuat {
        self.0
    }

    pub fn vec(self) -> Vector3<f64> {
        self.quat().imag()
    }
}

impl From<PureUnit> for Quat {
    fn from(p: PureUnit) -> Quat {
        p.quat()
    }
}
