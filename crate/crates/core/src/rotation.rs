//! SO(4) matrices, the generator maps η and ν, and the double cover
//! `S³ × S³ → SO(4)` together with its numerical inverse.

use std::fmt;
use std::ops::Mul;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quaternion::{Quaternion, UnitQuaternion};

/// Entrywise tolerance for `MᵀM = I` and `det M = 1`.
pub const VALIDATION_TOLERANCE: f64 = 1e-9;
/// Largest accepted residual `‖π(decompose(M)) − M‖∞`.
pub const ROUNDTRIP_TOLERANCE: f64 = 1e-8;
/// Coordinates at or below this magnitude never decide a sign.
pub const SIGN_THRESHOLD: f64 = 1e-4;

/// A 4×4 special-orthogonal matrix acting on `as_vec4` coordinates, row-major.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SO4Matrix([[f64; 4]; 4]);

impl SO4Matrix {
    pub const IDENTITY: SO4Matrix = SO4Matrix([
        [1.0, 0.0, 0.0, 0.0],
        [0.0, 1.0, 0.0, 0.0],
        [0.0, 0.0, 1.0, 0.0],
        [0.0, 0.0, 0.0, 1.0],
    ]);

    /// Validates `rows` and wraps them.
    pub fn new(rows: [[f64; 4]; 4]) -> Result<Self> {
        let m = SO4Matrix(rows);
        m.validate()?;
        Ok(m)
    }

    /// Wraps `rows` without validation; callers guarantee membership in SO(4).
    pub fn from_rows_unchecked(rows: [[f64; 4]; 4]) -> Self {
        SO4Matrix(rows)
    }

    /// Matrix of an ℝ-linear map ℍ → ℍ, built column by column from basis images.
    pub(crate) fn from_linear_map(f: impl Fn(Quaternion) -> Quaternion) -> Self {
        let mut rows = [[0.0; 4]; 4];
        for col in 0..4 {
            let image = f(Quaternion::basis(col)).as_vec4();
            for (row, value) in image.into_iter().enumerate() {
                rows[row][col] = value;
            }
        }
        SO4Matrix(rows)
    }

    pub fn rows(&self) -> &[[f64; 4]; 4] {
        &self.0
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.0[row][col]
    }

    pub fn transpose(&self) -> Self {
        let mut t = [[0.0; 4]; 4];
        for (r, row) in self.0.iter().enumerate() {
            for (c, v) in row.iter().enumerate() {
                t[c][r] = *v;
            }
        }
        SO4Matrix(t)
    }

    /// Inverse, which for an orthogonal matrix is the transpose.
    pub fn inverse(&self) -> Self {
        self.transpose()
    }

    pub fn pow(&self, n: i64) -> Self {
        let base = if n < 0 { self.inverse() } else { *self };
        (0..n.unsigned_abs()).fold(SO4Matrix::IDENTITY, |acc, _| acc * base)
    }

    pub fn apply(&self, q: Quaternion) -> Quaternion {
        let v = q.as_vec4();
        let mut out = [0.0; 4];
        for (r, row) in self.0.iter().enumerate() {
            out[r] = (0..4).map(|c| row[c] * v[c]).sum();
        }
        Quaternion::from_vec4(out)
    }

    pub fn determinant(&self) -> f64 {
        let m = &self.0;
        let minor = |skip: usize| -> f64 {
            let col = |c: usize| if c < skip { c } else { c + 1 };
            let a = |r: usize, c: usize| m[r][col(c)];
            a(1, 0) * (a(2, 1) * a(3, 2) - a(2, 2) * a(3, 1))
                - a(1, 1) * (a(2, 0) * a(3, 2) - a(2, 2) * a(3, 0))
                + a(1, 2) * (a(2, 0) * a(3, 1) - a(2, 1) * a(3, 0))
        };
        (0..4)
            .map(|c| {
                let sign = if c % 2 == 0 { 1.0 } else { -1.0 };
                sign * m[0][c] * minor(c)
            })
            .sum()
    }

    pub fn max_abs_diff(&self, other: &SO4Matrix) -> f64 {
        let mut worst = 0.0f64;
        for r in 0..4 {
            for c in 0..4 {
                worst = worst.max((self.0[r][c] - other.0[r][c]).abs());
            }
        }
        worst
    }

    pub fn validate(&self) -> Result<()> {
        if self.0.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::NotSpecialOrthogonal {
                reason: "non-finite entry".into(),
            });
        }
        let gram = self.transpose() * *self;
        let deviation = gram.max_abs_diff(&SO4Matrix::IDENTITY);
        if deviation > VALIDATION_TOLERANCE {
            return Err(Error::NotSpecialOrthogonal {
                reason: format!("|MᵀM − I|∞ = {deviation:e}"),
            });
        }
        let det = self.determinant();
        if (det - 1.0).abs() > VALIDATION_TOLERANCE {
            return Err(Error::NotSpecialOrthogonal {
                reason: format!("det = {det}"),
            });
        }
        Ok(())
    }
}

impl Mul for SO4Matrix {
    type Output = SO4Matrix;
    fn mul(self, rhs: SO4Matrix) -> SO4Matrix {
        let mut out = [[0.0; 4]; 4];
        for (r, row) in out.iter_mut().enumerate() {
            for (c, v) in row.iter_mut().enumerate() {
                *v = (0..4).map(|k| self.0[r][k] * rhs.0[k][c]).sum();
            }
        }
        SO4Matrix(out)
    }
}

impl fmt::Display for SO4Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in &self.0 {
            writeln!(f, "[{:>10.6} {:>10.6} {:>10.6} {:>10.6}]", row[0], row[1], row[2], row[3])?;
        }
        Ok(())
    }
}

/// An element of Spin(4) ≅ S³ × S³. `(q1, q2)` and `(−q1, −q2)` cover the same rotation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuaternionPair {
    pub q1: UnitQuaternion,
    pub q2: UnitQuaternion,
}

impl QuaternionPair {
    pub const IDENTITY: QuaternionPair = QuaternionPair {
        q1: UnitQuaternion::IDENTITY,
        q2: UnitQuaternion::IDENTITY,
    };

    pub fn new(q1: UnitQuaternion, q2: UnitQuaternion) -> Self {
        QuaternionPair { q1, q2 }
    }

    /// Larger of the two component chordal distances.
    pub fn distance(&self, other: &QuaternionPair) -> f64 {
        self.q1.distance(other.q1).max(self.q2.distance(other.q2))
    }

    /// True if `self` and `other` agree up to the simultaneous sign flip within `tol`.
    pub fn same_rotation(&self, other: &QuaternionPair, tol: f64) -> bool {
        self.distance(other) <= tol || self.distance(&-*other) <= tol
    }

    /// Flips the sign so the first decisive coordinate of `q1` is positive.
    pub fn canonical(self) -> Self {
        let flip = match self.q1.leading_coordinate(SIGN_THRESHOLD) {
            Some(c) => c < 0.0,
            None => self.q2.leading_coordinate(SIGN_THRESHOLD).is_some_and(|c| c < 0.0),
        };
        if flip {
            -self
        } else {
            self
        }
    }
}

impl Mul for QuaternionPair {
    type Output = QuaternionPair;
    fn mul(self, rhs: QuaternionPair) -> QuaternionPair {
        QuaternionPair::new(self.q1 * rhs.q1, self.q2 * rhs.q2)
    }
}

impl From<QuaternionPair> for [UnitQuaternion; 2] {
    fn from(p: QuaternionPair) -> Self {
        [p.q1, p.q2]
    }
}

impl std::ops::Neg for QuaternionPair {
    type Output = QuaternionPair;
    fn neg(self) -> QuaternionPair {
        QuaternionPair::new(-self.q1, -self.q2)
    }
}

/// Matrix of left multiplication `q′ ↦ q·q′`.
pub fn eta_matrix(q: UnitQuaternion) -> SO4Matrix {
    let q = q.quaternion();
    SO4Matrix::from_linear_map(|x| q * x)
}

/// Matrix of conjugation `q′ ↦ q·q′·q⁻¹`; it fixes the real axis.
pub fn nu_matrix(q: UnitQuaternion) -> SO4Matrix {
    let (q, qi) = (q.quaternion(), q.inverse().quaternion());
    SO4Matrix::from_linear_map(|x| q * x * qi)
}

/// Matrix of `q ↦ q₁·q·q₂⁻¹`.
pub fn double_cover(p: QuaternionPair) -> SO4Matrix {
    let (q1, q2i) = (p.q1.quaternion(), p.q2.inverse().quaternion());
    SO4Matrix::from_linear_map(|x| q1 * x * q2i)
}

/// `e_a · e_d · ē_b = sign · e_c`, tabulated as `(c, sign)` at `[a][b][d]`.
type AssociateTable = [[[(usize, f64); 4]; 4]; 4];

fn associate_table() -> &'static AssociateTable {
    static TABLE: OnceLock<AssociateTable> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut table = [[[(0, 0.0); 4]; 4]; 4];
        for (a, by_b) in table.iter_mut().enumerate() {
            for (b, by_d) in by_b.iter_mut().enumerate() {
                for (d, slot) in by_d.iter_mut().enumerate() {
                    let v = (Quaternion::basis(a) * Quaternion::basis(d) * Quaternion::basis(b).conj()).as_vec4();
                    let c = (0..4).find(|&c| v[c] != 0.0).expect("basis product is a signed basis element");
                    *slot = (c, v[c]);
                }
            }
        }
        table
    })
}

/// The associate matrix `A` with `A[a][b] = q1[a]·q2[b]` for `M = π(q1, q2)`.
///
/// The 16 matrices of `x ↦ e_a·x·ē_b` are Frobenius-orthogonal with squared
/// norm 4, and `π(q1, q2)` expands bilinearly in them with coefficients
/// `q1[a]·q2[b]`; projecting `M` onto each recovers the outer product.
fn associate(m: &SO4Matrix) -> [[f64; 4]; 4] {
    let table = associate_table();
    let mut out = [[0.0; 4]; 4];
    for (a, row) in out.iter_mut().enumerate() {
        for (b, entry) in row.iter_mut().enumerate() {
            *entry = 0.25
                * table[a][b]
                    .iter()
                    .enumerate()
                    .map(|(d, &(c, sign))| sign * m.get(c, d))
                    .sum::<f64>();
        }
    }
    out
}

/// Numerical inverse of [`double_cover`], with the sign fixed by
/// [`QuaternionPair::canonical`].
pub fn isoclinic_decompose(m: &SO4Matrix) -> Result<QuaternionPair> {
    m.validate()?;
    let a = associate(m);

    // Rank one: every column is a multiple of q1. Seed from the largest.
    let col_norm = |b: usize| (0..4).map(|r| a[r][b] * a[r][b]).sum::<f64>();
    let best = (0..4)
        .max_by(|&x, &y| col_norm(x).total_cmp(&col_norm(y)))
        .expect("four columns");
    let seed = Quaternion::from_vec4([a[0][best], a[1][best], a[2][best], a[3][best]]);
    let left = UnitQuaternion::normalize(seed).as_vec4();

    // One alternating projection: q2 = Aᵀq1, then q1 = A·q2.
    let right: [f64; 4] = std::array::from_fn(|b| (0..4).map(|r| a[r][b] * left[r]).sum());
    let right = UnitQuaternion::normalize(Quaternion::from_vec4(right));
    let rv = right.as_vec4();
    let left: [f64; 4] = std::array::from_fn(|r| (0..4).map(|b| a[r][b] * rv[b]).sum());
    let left = UnitQuaternion::normalize(Quaternion::from_vec4(left));

    let pair = QuaternionPair::new(left, right).canonical();
    let residual = double_cover(pair).max_abs_diff(m);
    if residual > ROUNDTRIP_TOLERANCE {
        return Err(Error::FactorizationResidual { residual });
    }
    Ok(pair)
}
