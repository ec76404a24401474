//! Hopf coordinates on S³, the product grid used for quadrature and lifting,
//! oriented tangent frames, and low-discrepancy seed points.
//!
//! A point with coordinates `(ξ₁, ξ₂, η)`, `ξ₁, ξ₂ ∈ [0, 2π)`, `η ∈ [0, π/2]`, is
//! `(sin η cos ξ₁, sin η sin ξ₁, cos η cos ξ₂, cos η sin ξ₂)`; the volume
//! element is `sin η cos η dξ₁ dξ₂ dη` and the total volume is `2π²`.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quaternion::{Quaternion, UnitQuaternion};

/// Volume of the unit 3-sphere.
pub const SPHERE_VOLUME: f64 = 2.0 * PI * PI;

/// Node counts along `(ξ₁, ξ₂, η)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Resolution {
    pub xi1: usize,
    pub xi2: usize,
    pub eta: usize,
}

impl Resolution {
    pub const DEFAULT: Resolution = Resolution { xi1: 48, xi2: 48, eta: 24 };

    pub fn new(xi1: usize, xi2: usize, eta: usize) -> Result<Self> {
        if xi1 == 0 || xi2 == 0 || eta == 0 {
            return Err(Error::InvalidResolution([xi1, xi2, eta]));
        }
        Ok(Resolution { xi1, xi2, eta })
    }

    pub fn node_count(&self) -> usize {
        self.xi1 * self.xi2 * self.eta
    }
}

impl Default for Resolution {
    fn default() -> Self {
        Resolution::DEFAULT
    }
}

pub fn hopf_point(xi1: f64, xi2: f64, eta: f64) -> UnitQuaternion {
    let (s, c) = eta.sin_cos();
    UnitQuaternion::normalize(Quaternion::new(s * xi1.cos(), s * xi1.sin(), c * xi2.cos(), c * xi2.sin()))
}

/// Inverse of [`hopf_point`]; degenerate angles come back as 0.
pub fn hopf_coords(q: UnitQuaternion) -> (f64, f64, f64) {
    let [w, x, y, z] = q.as_vec4();
    let xi1 = x.atan2(w).rem_euclid(TAU);
    let xi2 = z.atan2(y).rem_euclid(TAU);
    let eta = (w * w + x * x).sqrt().atan2((y * y + z * z).sqrt());
    (xi1, xi2, eta)
}

/// An orthonormal basis of the tangent space at a point `p`, ordered so that
/// `det[p, t₀, t₁, t₂] = +1`.
#[derive(Debug, Clone, Copy)]
pub struct TangentFrame(pub [Quaternion; 3]);

impl TangentFrame {
    /// Gram–Schmidt on the given tangent vectors (after removing the normal
    /// component), then the last vector is flipped if needed for orientation.
    pub fn from_vectors(p: UnitQuaternion, vectors: [Quaternion; 3]) -> Self {
        let p = p.quaternion();
        let mut out = [Quaternion::ZERO; 3];
        for (n, v) in vectors.into_iter().enumerate() {
            let mut u = v - p.scale(v.dot(p));
            for prev in &out[..n] {
                u = u - prev.scale(u.dot(*prev));
            }
            out[n] = u.scale(1.0 / u.norm());
        }
        if det4([p, out[0], out[1], out[2]]) < 0.0 {
            out[2] = -out[2];
        }
        TangentFrame(out)
    }

    /// `p·i, p·j, p·k`: orthonormal and positively oriented everywhere.
    pub fn left_invariant(p: UnitQuaternion) -> Self {
        let p = p.quaternion();
        TangentFrame([p * Quaternion::I, p * Quaternion::J, p * Quaternion::K])
    }

    /// Frame from the coordinate directions `∂ξ₁, ∂ξ₂, ∂η`, valid away from the
    /// degenerate circles `η ∈ {0, π/2}`.
    pub fn hopf(xi1: f64, xi2: f64, eta: f64) -> Self {
        let (s, c) = eta.sin_cos();
        let (s1, c1) = xi1.sin_cos();
        let (s2, c2) = xi2.sin_cos();
        let d_xi1 = Quaternion::new(-s * s1, s * c1, 0.0, 0.0);
        let d_xi2 = Quaternion::new(0.0, 0.0, -c * s2, c * c2);
        let d_eta = Quaternion::new(c * c1, c * s1, -s * c2, -s * s2);
        TangentFrame::from_vectors(hopf_point(xi1, xi2, eta), [d_xi1, d_xi2, d_eta])
    }
}

/// Determinant of four vectors of ℝ⁴ taken as columns.
pub fn det4(cols: [Quaternion; 4]) -> f64 {
    let m: [[f64; 4]; 4] = std::array::from_fn(|r| std::array::from_fn(|c| cols[c].as_vec4()[r]));
    let mut a = m;
    let mut det = 1.0;
    for col in 0..4 {
        let pivot = (col..4)
            .max_by(|&x, &y| a[x][col].abs().total_cmp(&a[y][col].abs()))
            .expect("non-empty range");
        if a[pivot][col] == 0.0 {
            return 0.0;
        }
        if pivot != col {
            a.swap(pivot, col);
            det = -det;
        }
        det *= a[col][col];
        for r in col + 1..4 {
            let factor = a[r][col] / a[col][col];
            for c in col..4 {
                a[r][c] -= factor * a[col][c];
            }
        }
    }
    det
}

/// Midpoint product grid in Hopf coordinates with exact cell volumes as weights.
#[derive(Debug, Clone)]
pub struct HopfGrid {
    resolution: Resolution,
    nodes: Vec<UnitQuaternion>,
    weights: Vec<f64>,
}

impl HopfGrid {
    pub fn new(resolution: Resolution) -> Self {
        let Resolution { xi1: n1, xi2: n2, eta: n3 } = resolution;
        let (d1, d2, d3) = (TAU / n1 as f64, TAU / n2 as f64, FRAC_PI_2 / n3 as f64);
        let mut nodes = Vec::with_capacity(resolution.node_count());
        let mut weights = Vec::with_capacity(resolution.node_count());
        for k in 0..n3 {
            let (lo, hi) = (k as f64 * d3, (k + 1) as f64 * d3);
            let eta_weight = 0.5 * (hi.sin().powi(2) - lo.sin().powi(2));
            let eta = (k as f64 + 0.5) * d3;
            for j in 0..n2 {
                let xi2 = (j as f64 + 0.5) * d2;
                for i in 0..n1 {
                    let xi1 = (i as f64 + 0.5) * d1;
                    nodes.push(hopf_point(xi1, xi2, eta));
                    weights.push(d1 * d2 * eta_weight);
                }
            }
        }
        HopfGrid { resolution, nodes, weights }
    }

    pub fn resolution(&self) -> Resolution {
        self.resolution
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[UnitQuaternion] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn index(&self, i: usize, j: usize, k: usize) -> usize {
        (k * self.resolution.xi2 + j) * self.resolution.xi1 + i
    }

    pub fn coords_of(&self, index: usize) -> (usize, usize, usize) {
        let n1 = self.resolution.xi1;
        let n2 = self.resolution.xi2;
        (index % n1, (index / n1) % n2, index / (n1 * n2))
    }

    /// Hopf angles of node `index`.
    pub fn angles_of(&self, index: usize) -> (f64, f64, f64) {
        let (i, j, k) = self.coords_of(index);
        let r = self.resolution;
        (
            (i as f64 + 0.5) * TAU / r.xi1 as f64,
            (j as f64 + 0.5) * TAU / r.xi2 as f64,
            (k as f64 + 0.5) * FRAC_PI_2 / r.eta as f64,
        )
    }

    pub fn frame(&self, index: usize) -> TangentFrame {
        let (xi1, xi2, eta) = self.angles_of(index);
        TangentFrame::hopf(xi1, xi2, eta)
    }

    /// Coordinate neighbors: wraparound in `ξ₁, ξ₂`, none across the ends of `η`.
    pub fn neighbors(&self, index: usize) -> impl Iterator<Item = usize> + '_ {
        let (i, j, k) = self.coords_of(index);
        let Resolution { xi1: n1, xi2: n2, eta: n3 } = self.resolution;
        let mut out = Vec::with_capacity(6);
        out.push(self.index((i + 1) % n1, j, k));
        out.push(self.index((i + n1 - 1) % n1, j, k));
        out.push(self.index(i, (j + 1) % n2, k));
        out.push(self.index(i, (j + n2 - 1) % n2, k));
        if k + 1 < n3 {
            out.push(self.index(i, j, k + 1));
        }
        if k > 0 {
            out.push(self.index(i, j, k - 1));
        }
        out.into_iter().filter(move |&n| n != index)
    }

    /// The node whose Hopf cell contains `q`.
    pub fn nearest(&self, q: UnitQuaternion) -> usize {
        let (xi1, xi2, eta) = hopf_coords(q);
        let r = self.resolution;
        let cell = |angle: f64, n: usize, span: f64| ((angle / span * n as f64).floor() as usize).min(n - 1);
        self.index(cell(xi1, r.xi1, TAU), cell(xi2, r.xi2, TAU), cell(eta, r.eta, FRAC_PI_2))
    }
}

fn radical_inverse(mut index: u64, base: u64) -> f64 {
    let mut inv = 1.0 / base as f64;
    let mut out = 0.0;
    while index > 0 {
        out += (index % base) as f64 * inv;
        index /= base;
        inv /= base as f64;
    }
    out
}

/// Halton points (bases 2, 3, 5) pushed to S³ so they are equidistributed for
/// the uniform measure.
pub fn halton_points(count: usize) -> Vec<UnitQuaternion> {
    (1..=count as u64)
        .map(|n| {
            let (u1, u2, u3) = (radical_inverse(n, 2), radical_inverse(n, 3), radical_inverse(n, 5));
            hopf_point(TAU * u1, TAU * u2, u3.sqrt().asin())
        })
        .collect()
}
