//! Quaternion arithmetic and the identification ℝ⁴ ≅ ℍ.
//!
//! Coordinates are ordered `(w, x, y, z)` for `w + x·i + y·j + z·k`; the
//! imaginary span `⟨i, j, k⟩` is identified with ℝ³.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest norm deviation accepted when promoting a [`Quaternion`] to a [`UnitQuaternion`].
pub const UNIT_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Quaternion {
    pub w: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Quaternion {
    pub const ZERO: Quaternion = Quaternion::new(0.0, 0.0, 0.0, 0.0);
    pub const ONE: Quaternion = Quaternion::new(1.0, 0.0, 0.0, 0.0);
    pub const I: Quaternion = Quaternion::new(0.0, 1.0, 0.0, 0.0);
    pub const J: Quaternion = Quaternion::new(0.0, 0.0, 1.0, 0.0);
    pub const K: Quaternion = Quaternion::new(0.0, 0.0, 0.0, 1.0);

    pub const fn new(w: f64, x: f64, y: f64, z: f64) -> Self {
        Quaternion { w, x, y, z }
    }

    /// The basis element `1, i, j, k` for index `0..4`.
    pub fn basis(index: usize) -> Self {
        let mut v = [0.0; 4];
        v[index] = 1.0;
        Quaternion::from_vec4(v)
    }

    pub fn as_vec4(self) -> [f64; 4] {
        [self.w, self.x, self.y, self.z]
    }

    pub fn from_vec4(v: [f64; 4]) -> Self {
        Quaternion::new(v[0], v[1], v[2], v[3])
    }

    pub fn conj(self) -> Self {
        Quaternion::new(self.w, -self.x, -self.y, -self.z)
    }

    pub fn dot(self, other: Quaternion) -> f64 {
        self.w * other.w + self.x * other.x + self.y * other.y + self.z * other.z
    }

    pub fn norm_squared(self) -> f64 {
        self.dot(self)
    }

    pub fn norm(self) -> f64 {
        self.norm_squared().sqrt()
    }

    pub fn scale(self, s: f64) -> Self {
        Quaternion::new(self.w * s, self.x * s, self.y * s, self.z * s)
    }

    /// Euclidean (chordal) distance in ℝ⁴.
    pub fn distance(self, other: Quaternion) -> f64 {
        (self - other).norm()
    }

    pub fn max_abs_diff(self, other: Quaternion) -> f64 {
        let (a, b) = (self.as_vec4(), other.as_vec4());
        (0..4).map(|i| (a[i] - b[i]).abs()).fold(0.0, f64::max)
    }
}

/// Hamilton product with `ij = k`.
pub fn qmul(a: Quaternion, b: Quaternion) -> Quaternion {
    Quaternion::new(
        a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
        a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
        a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x,
        a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w,
    )
}

/// Inverse of a quaternion that is expected to be unit.
pub fn qinv(q: Quaternion) -> Result<UnitQuaternion> {
    Ok(UnitQuaternion::new(q)?.inverse())
}

pub fn qpow(q: UnitQuaternion, n: i64) -> UnitQuaternion {
    q.pow(n)
}

impl Mul for Quaternion {
    type Output = Quaternion;
    fn mul(self, rhs: Quaternion) -> Quaternion {
        qmul(self, rhs)
    }
}

impl Add for Quaternion {
    type Output = Quaternion;
    fn add(self, rhs: Quaternion) -> Quaternion {
        Quaternion::new(self.w + rhs.w, self.x + rhs.x, self.y + rhs.y, self.z + rhs.z)
    }
}

impl Sub for Quaternion {
    type Output = Quaternion;
    fn sub(self, rhs: Quaternion) -> Quaternion {
        Quaternion::new(self.w - rhs.w, self.x - rhs.x, self.y - rhs.y, self.z - rhs.z)
    }
}

impl Neg for Quaternion {
    type Output = Quaternion;
    fn neg(self) -> Quaternion {
        self.scale(-1.0)
    }
}

impl fmt::Display for Quaternion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:.6}, {:.6}, {:.6}, {:.6})", self.w, self.x, self.y, self.z)
    }
}

/// A point of S³ viewed as an element of the group of unit quaternions.
///
/// The norm is restored after every product, so long products do not drift
/// off the sphere.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Quaternion", into = "Quaternion")]
pub struct UnitQuaternion(Quaternion);

impl UnitQuaternion {
    pub const IDENTITY: UnitQuaternion = UnitQuaternion(Quaternion::ONE);
    pub const I: UnitQuaternion = UnitQuaternion(Quaternion::I);
    pub const J: UnitQuaternion = UnitQuaternion(Quaternion::J);
    pub const K: UnitQuaternion = UnitQuaternion(Quaternion::K);

    /// Accepts `q` if its norm is within [`UNIT_TOLERANCE`] of one, then renormalizes.
    pub fn new(q: Quaternion) -> Result<Self> {
        let norm = q.norm();
        if !norm.is_finite() || (norm - 1.0).abs() > UNIT_TOLERANCE {
            return Err(Error::NotUnit { norm });
        }
        Ok(UnitQuaternion(q.scale(1.0 / norm)))
    }

    /// Projects any nonzero quaternion onto S³.
    ///
    /// # Panics
    /// If `q` is zero or not finite.
    pub fn normalize(q: Quaternion) -> Self {
        let norm = q.norm();
        assert!(norm.is_finite() && norm > 0.0, "cannot normalize {q}");
        UnitQuaternion(q.scale(1.0 / norm))
    }

    pub fn from_vec4(v: [f64; 4]) -> Result<Self> {
        UnitQuaternion::new(Quaternion::from_vec4(v))
    }

    pub fn quaternion(self) -> Quaternion {
        self.0
    }

    pub fn as_vec4(self) -> [f64; 4] {
        self.0.as_vec4()
    }

    pub fn inverse(self) -> Self {
        UnitQuaternion(self.0.conj())
    }

    pub fn pow(self, n: i64) -> Self {
        let mut base = if n < 0 { self.inverse() } else { self };
        let mut exp = n.unsigned_abs();
        let mut acc = UnitQuaternion::IDENTITY;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base;
            }
            exp >>= 1;
            if exp > 0 {
                base = base * base;
            }
        }
        acc
    }

    pub fn distance(self, other: UnitQuaternion) -> f64 {
        self.0.distance(other.0)
    }

    /// First coordinate with absolute value above `threshold`, if any.
    pub fn leading_coordinate(self, threshold: f64) -> Option<f64> {
        self.as_vec4().into_iter().find(|c| c.abs() > threshold)
    }
}

impl Mul for UnitQuaternion {
    type Output = UnitQuaternion;
    fn mul(self, rhs: UnitQuaternion) -> UnitQuaternion {
        UnitQuaternion::normalize(self.0 * rhs.0)
    }
}

impl Neg for UnitQuaternion {
    type Output = UnitQuaternion;
    fn neg(self) -> UnitQuaternion {
        UnitQuaternion(-self.0)
    }
}

impl TryFrom<Quaternion> for UnitQuaternion {
    type Error = Error;
    fn try_from(q: Quaternion) -> Result<Self> {
        UnitQuaternion::new(q)
    }
}

impl From<UnitQuaternion> for Quaternion {
    fn from(q: UnitQuaternion) -> Quaternion {
        q.0
    }
}

impl fmt::Display for UnitQuaternion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}
