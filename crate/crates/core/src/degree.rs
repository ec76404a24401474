//! Mapping degree of smooth self-maps of S³.
//!
//! Three routes: exact bookkeeping for symbolic power maps, quadrature of the
//! Jacobian determinant over the Hopf grid, and a signed count of preimages of
//! a regular value found by Newton iteration in stereographic charts.

use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hopf::{det4, halton_points, HopfGrid, Resolution, TangentFrame, SPHERE_VOLUME};
use crate::quaternion::{Quaternion, UnitQuaternion};

/// Largest accepted distance between a raw estimate and its rounded degree.
pub const ACCEPTANCE_BAND: f64 = 0.25;
/// Central-difference step along tangent directions.
pub const FD_STEP: f64 = 1e-5;
pub const DEFAULT_SEEDS: usize = 512;
/// Preimages closer than this (chordal) are the same point.
pub const DEDUP_DISTANCE: f64 = 1e-6;
/// Minimum `|det Df|` at a preimage for the target to count as regular.
pub const REGULARITY_THRESHOLD: f64 = 1e-6;
/// Fraction of failed Newton seeds above which a warning is recorded.
pub const NONCONVERGENCE_WARNING: f64 = 0.2;

const NEWTON_MAX_ITERATIONS: usize = 60;
const NEWTON_TOLERANCE: f64 = 1e-12;
const NEWTON_FD_STEP: f64 = 1e-6;
const NEWTON_MAX_STEP: f64 = 0.5;

/// Generic regular value used when none is given.
pub fn default_target() -> UnitQuaternion {
    UnitQuaternion::normalize(Quaternion::new(0.3, 0.5, -0.2, 0.79))
}

/// `q ↦ left · qⁿ · right`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerFactor {
    pub left: UnitQuaternion,
    pub exponent: i64,
    pub right: UnitQuaternion,
}

impl PowerFactor {
    pub fn power(exponent: i64) -> Self {
        PowerFactor {
            left: UnitQuaternion::IDENTITY,
            exponent,
            right: UnitQuaternion::IDENTITY,
        }
    }

    fn is_plain(&self) -> bool {
        self.left == UnitQuaternion::IDENTITY && self.right == UnitQuaternion::IDENTITY
    }

    fn evaluate(&self, q: UnitQuaternion) -> UnitQuaternion {
        self.left * q.pow(self.exponent) * self.right
    }

    fn inverse(&self) -> Self {
        PowerFactor {
            left: self.right.inverse(),
            exponent: -self.exponent,
            right: self.left.inverse(),
        }
    }
}

pub type BlackBoxFn = dyn Fn(UnitQuaternion) -> Result<UnitQuaternion> + Send + Sync;

/// A smooth map S³ → S³.
#[derive(Clone)]
pub enum SphereSelfMap {
    /// Pointwise product of power factors, in order.
    Symbolic(Vec<PowerFactor>),
    BlackBox { label: String, eval: Arc<BlackBoxFn> },
}

impl SphereSelfMap {
    pub fn power(n: i64) -> Self {
        SphereSelfMap::Symbolic(vec![PowerFactor::power(n)])
    }

    pub fn identity() -> Self {
        SphereSelfMap::power(1)
    }

    pub fn constant_one() -> Self {
        SphereSelfMap::power(0)
    }

    /// Pointwise product of the given powers of `q`.
    pub fn powers(exponents: &[i64]) -> Self {
        SphereSelfMap::Symbolic(exponents.iter().map(|&n| PowerFactor::power(n)).collect())
    }

    pub fn black_box(
        label: impl Into<String>,
        eval: impl Fn(UnitQuaternion) -> Result<UnitQuaternion> + Send + Sync + 'static,
    ) -> Self {
        SphereSelfMap::BlackBox {
            label: label.into(),
            eval: Arc::new(eval),
        }
    }

    /// Same values, but opaque to [`degree_exact`].
    pub fn opaque(&self) -> Self {
        let inner = self.clone();
        SphereSelfMap::black_box(format!("black-box({self})"), move |q| inner.evaluate(q))
    }

    pub fn evaluate(&self, q: UnitQuaternion) -> Result<UnitQuaternion> {
        match self {
            SphereSelfMap::Symbolic(factors) => Ok(factors
                .iter()
                .fold(UnitQuaternion::IDENTITY, |acc, f| acc * f.evaluate(q))),
            SphereSelfMap::BlackBox { eval, .. } => eval(q),
        }
    }

    /// `q ↦ self(q) · other(q)`.
    pub fn product(&self, other: &SphereSelfMap) -> Self {
        match (self, other) {
            (SphereSelfMap::Symbolic(a), SphereSelfMap::Symbolic(b)) => {
                SphereSelfMap::Symbolic(a.iter().chain(b).copied().collect())
            }
            _ => {
                let (a, b) = (self.clone(), other.clone());
                SphereSelfMap::black_box(format!("{self}·{other}"), move |q| Ok(a.evaluate(q)? * b.evaluate(q)?))
            }
        }
    }

    /// `q ↦ self(q)⁻¹`.
    pub fn inverse(&self) -> Self {
        match self {
            SphereSelfMap::Symbolic(factors) => {
                SphereSelfMap::Symbolic(factors.iter().rev().map(PowerFactor::inverse).collect())
            }
            SphereSelfMap::BlackBox { .. } => {
                let a = self.clone();
                SphereSelfMap::black_box(format!("({self})⁻¹"), move |q| Ok(a.evaluate(q)?.inverse()))
            }
        }
    }

    /// Sum of exponents, for symbolic maps.
    pub fn total_exponent(&self) -> Option<i64> {
        match self {
            SphereSelfMap::Symbolic(factors) => Some(factors.iter().map(|f| f.exponent).sum()),
            SphereSelfMap::BlackBox { .. } => None,
        }
    }

    pub fn is_symbolic(&self) -> bool {
        matches!(self, SphereSelfMap::Symbolic(_))
    }
}

impl fmt::Display for SphereSelfMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SphereSelfMap::Symbolic(factors) if factors.is_empty() => write!(f, "q↦1"),
            SphereSelfMap::Symbolic(factors) => {
                write!(f, "q↦")?;
                for (n, factor) in factors.iter().enumerate() {
                    if n > 0 {
                        write!(f, "·")?;
                    }
                    if factor.is_plain() && factor.exponent == 1 {
                        write!(f, "q")?;
                    } else if factor.is_plain() {
                        write!(f, "q^{}", factor.exponent)?;
                    } else {
                        write!(f, "a{n}·q^{}·b{n}", factor.exponent)?;
                    }
                }
                Ok(())
            }
            SphereSelfMap::BlackBox { label, .. } => f.write_str(label),
        }
    }
}

impl fmt::Debug for SphereSelfMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SphereSelfMap::Symbolic(factors) => f.debug_tuple("Symbolic").field(factors).finish(),
            SphereSelfMap::BlackBox { label, .. } => f.debug_struct("BlackBox").field("label", label).finish(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum DegreeMethod {
    Integral,
    Preimage,
    Exact,
}

impl fmt::Display for DegreeMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DegreeMethod::Integral => "INTEGRAL",
            DegreeMethod::Preimage => "PREIMAGE",
            DegreeMethod::Exact => "EXACT",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DegreeResult {
    pub degree: i64,
    pub method: DegreeMethod,
    /// Distance of the raw estimate from `degree`; zero for exact and preimage counts.
    pub residual: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub raw_estimate: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub preimages: Option<usize>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub warnings: Vec<String>,
}

impl fmt::Display for DegreeResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "degree {} ({}", self.degree, self.method)?;
        if let Some(raw) = self.raw_estimate {
            write!(f, ", raw {raw:.6}, residual {:.2e}", self.residual)?;
        }
        if let Some(n) = self.preimages {
            write!(f, ", {n} preimage{}", if n == 1 { "" } else { "s" })?;
        }
        f.write_str(")")?;
        for w in &self.warnings {
            write!(f, "; warning: {w}")?;
        }
        Ok(())
    }
}

impl DegreeResult {
    fn new(degree: i64, method: DegreeMethod) -> Self {
        DegreeResult {
            degree,
            method,
            residual: 0.0,
            raw_estimate: None,
            preimages: None,
            warnings: Vec::new(),
        }
    }
}

/// `deg(q ↦ Π aᵢ·q^{nᵢ}·bᵢ) = Σ nᵢ`.
pub fn degree_exact(f: &SphereSelfMap) -> Result<DegreeResult> {
    let degree = f.total_exponent().ok_or(Error::NotSymbolic)?;
    Ok(DegreeResult::new(degree, DegreeMethod::Exact))
}

/// Determinant of `Df` at `p` in the oriented orthonormal frames `frame` at `p`
/// and `(f(p), ·)` at the image, from central differences.
pub fn jacobian_det(f: &SphereSelfMap, p: UnitQuaternion, frame: &TangentFrame, step: f64) -> Result<f64> {
    let [det] = jacobian_dets(|q| Ok([f.evaluate(q)?]), p, frame, step)?;
    Ok(det)
}

/// [`jacobian_det`] for `K` maps sampled together at the same points.
pub(crate) fn jacobian_dets<const K: usize>(
    eval: impl Fn(UnitQuaternion) -> Result<[UnitQuaternion; K]>,
    p: UnitQuaternion,
    frame: &TangentFrame,
    step: f64,
) -> Result<[f64; K]> {
    let center = eval(p)?;
    jacobian_dets_about(eval, center, p, frame, step)
}

/// As [`jacobian_dets`], with `f(p)` already known.
fn jacobian_dets_about<const K: usize>(
    eval: impl Fn(UnitQuaternion) -> Result<[UnitQuaternion; K]>,
    center: [UnitQuaternion; K],
    p: UnitQuaternion,
    frame: &TangentFrame,
    step: f64,
) -> Result<[f64; K]> {
    let pq = p.quaternion();
    let mut cols = [[Quaternion::ZERO; 3]; K];
    for (n, t) in frame.0.into_iter().enumerate() {
        let plus = eval(UnitQuaternion::normalize(pq + t.scale(step)))?;
        let minus = eval(UnitQuaternion::normalize(pq - t.scale(step)))?;
        for k in 0..K {
            let y = center[k].quaternion();
            let v = (plus[k].quaternion() - minus[k].quaternion()).scale(0.5 / step);
            cols[k][n] = v - y.scale(v.dot(y));
        }
    }
    Ok(std::array::from_fn(|k| {
        let [a, b, c] = cols[k];
        det4([center[k].quaternion(), a, b, c])
    }))
}

/// `(1/2π²)·∫ det Df dVol` by midpoint quadrature on the Hopf grid, rounded.
pub fn degree_integral(f: &SphereSelfMap, resolution: Resolution) -> Result<DegreeResult> {
    let grid = HopfGrid::new(resolution);
    degree_integral_on(f, &grid)
}

pub fn degree_integral_on(f: &SphereSelfMap, grid: &HopfGrid) -> Result<DegreeResult> {
    let [estimate] = integral_estimates(|q| Ok([f.evaluate(q)?]), grid)?;
    rounded(estimate)
}

/// Raw degree estimates for `K` maps sampled together.
pub(crate) fn integral_estimates<const K: usize>(
    eval: impl Fn(UnitQuaternion) -> Result<[UnitQuaternion; K]> + Sync,
    grid: &HopfGrid,
) -> Result<[f64; K]> {
    integral_estimates_by_node(|n| eval(grid.nodes()[n]), |_, q| eval(q), grid)
}

/// Raw estimates where `center(n)` gives the values at node `n` and
/// `near(n, q)` the values at points `q` within a finite-difference step of it.
pub(crate) fn integral_estimates_by_node<const K: usize>(
    center: impl Fn(usize) -> Result<[UnitQuaternion; K]> + Sync,
    near: impl Fn(usize, UnitQuaternion) -> Result<[UnitQuaternion; K]> + Sync,
    grid: &HopfGrid,
) -> Result<[f64; K]> {
    let contributions = (0..grid.len())
        .into_par_iter()
        .map(|n| {
            let dets = jacobian_dets_about(|q| near(n, q), center(n)?, grid.nodes()[n], &grid.frame(n), FD_STEP)?;
            Ok(dets.map(|d| d * grid.weights()[n]))
        })
        .collect::<Result<Vec<[f64; K]>>>()?;
    // Sequential sum in node order keeps the result independent of scheduling.
    let mut totals = [0.0; K];
    for c in &contributions {
        for k in 0..K {
            totals[k] += c[k];
        }
    }
    Ok(totals.map(|t| t / SPHERE_VOLUME))
}

/// Rounds a raw estimate, refusing anything outside the acceptance band.
pub(crate) fn rounded(estimate: f64) -> Result<DegreeResult> {
    let degree = estimate.round();
    let residual = (estimate - degree).abs();
    if !estimate.is_finite() || residual > ACCEPTANCE_BAND {
        return Err(Error::ResolutionInsufficient { estimate, residual });
    }
    Ok(DegreeResult {
        residual,
        raw_estimate: Some(estimate),
        ..DegreeResult::new(degree as i64, DegreeMethod::Integral)
    })
}

/// Stereographic chart centered at `center`, projecting from `-center`.
struct Chart {
    center: Quaternion,
    frame: [Quaternion; 3],
}

impl Chart {
    fn at(center: UnitQuaternion) -> Self {
        Chart {
            center: center.quaternion(),
            frame: TangentFrame::left_invariant(center).0,
        }
    }

    /// `None` near the projection pole.
    fn coords(&self, p: Quaternion) -> Option<[f64; 3]> {
        let denom = 1.0 + p.dot(self.center);
        if denom < 1e-12 {
            return None;
        }
        Some(std::array::from_fn(|k| p.dot(self.frame[k]) / denom))
    }

    fn point(&self, x: [f64; 3]) -> UnitQuaternion {
        let r2: f64 = x.iter().map(|v| v * v).sum();
        let tangent = (0..3).fold(Quaternion::ZERO, |acc, k| acc + self.frame[k].scale(2.0 * x[k]));
        UnitQuaternion::normalize((self.center.scale(1.0 - r2) + tangent).scale(1.0 / (1.0 + r2)))
    }
}

fn solve3(mut a: [[f64; 3]; 3], mut b: [f64; 3]) -> Option<[f64; 3]> {
    for col in 0..3 {
        let pivot = (col..3).max_by(|&x, &y| a[x][col].abs().total_cmp(&a[y][col].abs()))?;
        if a[pivot][col].abs() < 1e-14 {
            return None;
        }
        a.swap(pivot, col);
        b.swap(pivot, col);
        for r in col + 1..3 {
            let factor = a[r][col] / a[col][col];
            for c in col..3 {
                a[r][c] -= factor * a[col][c];
            }
            b[r] -= factor * b[col];
        }
    }
    let mut x = [0.0; 3];
    for r in (0..3).rev() {
        let tail: f64 = (r + 1..3).map(|c| a[r][c] * x[c]).sum();
        x[r] = (b[r] - tail) / a[r][r];
    }
    x.iter().all(|v| v.is_finite()).then_some(x)
}

/// Newton iteration for `f(q) = y`, re-centering the source chart at each iterate.
fn newton(f: &SphereSelfMap, target: &Chart, y: Quaternion, seed: UnitQuaternion) -> Result<Option<UnitQuaternion>> {
    let mut current = seed;
    for _ in 0..NEWTON_MAX_ITERATIONS {
        let value = f.evaluate(current)?.quaternion();
        if value.distance(y) < NEWTON_TOLERANCE {
            return Ok(Some(current));
        }
        let Some(g) = target.coords(value) else {
            return Ok(None);
        };
        let source = Chart::at(current);
        let mut jac = [[0.0; 3]; 3];
        for k in 0..3 {
            let mut e = [0.0; 3];
            e[k] = NEWTON_FD_STEP;
            let plus = target.coords(f.evaluate(source.point(e))?.quaternion());
            e[k] = -NEWTON_FD_STEP;
            let minus = target.coords(f.evaluate(source.point(e))?.quaternion());
            let (Some(plus), Some(minus)) = (plus, minus) else {
                return Ok(None);
            };
            for r in 0..3 {
                jac[r][k] = (plus[r] - minus[r]) / (2.0 * NEWTON_FD_STEP);
            }
        }
        let Some(mut dx) = solve3(jac, [-g[0], -g[1], -g[2]]) else {
            return Ok(None);
        };
        let len = dx.iter().map(|v| v * v).sum::<f64>().sqrt();
        if len > NEWTON_MAX_STEP {
            dx.iter_mut().for_each(|v| *v *= NEWTON_MAX_STEP / len);
        }
        current = source.point(dx);
    }
    let value = f.evaluate(current)?.quaternion();
    Ok((value.distance(y) < NEWTON_TOLERANCE * 100.0).then_some(current))
}

/// Signed count of preimages of `y`, found by Newton from `seed_count`
/// low-discrepancy seeds.
pub fn degree_preimage(f: &SphereSelfMap, y: UnitQuaternion, seed_count: usize) -> Result<DegreeResult> {
    let target = Chart::at(y);
    let yq = y.quaternion();
    let seeds = halton_points(seed_count);
    let outcomes = seeds
        .par_iter()
        .map(|&seed| newton(f, &target, yq, seed))
        .collect::<Result<Vec<_>>>()?;

    let failures = outcomes.iter().filter(|o| o.is_none()).count();
    let mut roots: Vec<UnitQuaternion> = Vec::new();
    for root in outcomes.into_iter().flatten() {
        if roots.iter().all(|r| r.distance(root) > DEDUP_DISTANCE) {
            roots.push(root);
        }
    }

    let mut degree = 0i64;
    for &root in &roots {
        let det = jacobian_det(f, root, &TangentFrame::left_invariant(root), FD_STEP)?;
        if det.abs() < REGULARITY_THRESHOLD {
            return Err(Error::NotRegular { det });
        }
        degree += if det > 0.0 { 1 } else { -1 };
    }

    let mut result = DegreeResult::new(degree, DegreeMethod::Preimage);
    result.preimages = Some(roots.len());
    if seed_count > 0 && failures as f64 > NONCONVERGENCE_WARNING * seed_count as f64 {
        result
            .warnings
            .push(format!("Newton did not converge from {failures} of {seed_count} seeds"));
    }
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn coarse() -> Resolution {
        Resolution::new(24, 24, 12).unwrap()
    }

    #[test]
    fn exact_examples() {
        assert_eq!(degree_exact(&SphereSelfMap::identity()).unwrap().degree, 1);
        assert_eq!(degree_exact(&SphereSelfMap::constant_one()).unwrap().degree, 0);
        let r = degree_exact(&SphereSelfMap::powers(&[2, -1])).unwrap();
        assert_eq!((r.degree, r.method, r.residual), (1, DegreeMethod::Exact, 0.0));
        assert!(matches!(
            degree_exact(&SphereSelfMap::identity().opaque()),
            Err(Error::NotSymbolic)
        ));
    }

    #[test]
    fn identity_integral_is_tight() {
        let r = degree_integral(&SphereSelfMap::identity(), Resolution::DEFAULT).unwrap();
        assert_eq!(r.degree, 1);
        assert!(r.residual < 0.05, "residual {}", r.residual);
    }

    #[test]
    fn preimage_of_square_at_one() {
        let r = degree_preimage(&SphereSelfMap::power(2), UnitQuaternion::IDENTITY, DEFAULT_SEEDS).unwrap();
        assert_eq!(r.degree, 2);
        assert_eq!(r.preimages, Some(2));
    }

    #[test]
    fn preimage_of_identity() {
        for y in [default_target(), UnitQuaternion::K, -UnitQuaternion::IDENTITY] {
            let r = degree_preimage(&SphereSelfMap::identity(), y, 64).unwrap();
            assert_eq!((r.degree, r.preimages), (1, Some(1)));
        }
    }

    #[test]
    fn constant_map_has_no_preimages() {
        let r = degree_preimage(&SphereSelfMap::constant_one(), default_target(), 64).unwrap();
        assert_eq!((r.degree, r.preimages), (0, Some(0)));
        assert_eq!(r.warnings.len(), 1);
    }

    #[test]
    fn non_regular_value_is_rejected() {
        // q ↦ q·i·q⁻¹·(−i) collapses S³ onto a 2-sphere; its image values are all critical.
        let f = SphereSelfMap::black_box("conjugation", |q| {
            Ok(q * UnitQuaternion::I * q.inverse() * -UnitQuaternion::I)
        });
        let y = f.evaluate(default_target()).unwrap();
        assert!(matches!(degree_preimage(&f, y, 64), Err(Error::NotRegular { .. })));
    }

    #[test]
    fn left_translation_has_degree_one() {
        let a = UnitQuaternion::normalize(Quaternion::new(0.1, -0.7, 0.4, 0.2));
        let f = SphereSelfMap::black_box("left translation", move |q| Ok(a * q));
        let oracle = degree_preimage(&f, default_target(), DEFAULT_SEEDS).unwrap();
        assert_eq!(oracle.degree, 1);
        assert_eq!(degree_integral(&f, coarse()).unwrap().degree, oracle.degree);
    }

    #[test]
    fn square_integral_matches_preimage_oracle() {
        let f = SphereSelfMap::power(2);
        let oracle = degree_preimage(&f, default_target(), DEFAULT_SEEDS).unwrap();
        assert_eq!(oracle.degree, 2);
        assert_eq!(degree_integral(&f, Resolution::DEFAULT).unwrap().degree, 2);
    }

    #[test]
    fn inversion_reverses_orientation() {
        let f = SphereSelfMap::power(-1);
        assert_eq!(degree_exact(&f).unwrap().degree, -1);
        assert_eq!(degree_integral(&f, coarse()).unwrap().degree, -1);
        assert_eq!(degree_preimage(&f, default_target(), 128).unwrap().degree, -1);
    }

    #[test]
    fn symbolic_inverse_and_product() {
        let a = UnitQuaternion::normalize(Quaternion::new(0.5, 0.1, -0.3, 0.8));
        let f = SphereSelfMap::Symbolic(vec![PowerFactor { left: a, exponent: 2, right: a.inverse() }]);
        let g = f.product(&f.inverse());
        for q in halton_points(16) {
            assert!(g.evaluate(q).unwrap().distance(UnitQuaternion::IDENTITY) < 1e-12);
        }
        assert_eq!(g.total_exponent(), Some(0));
    }

    #[test]
    fn coarse_grid_reports_insufficient_resolution() {
        let err = degree_integral(&SphereSelfMap::power(3), Resolution::new(4, 4, 2).unwrap()).unwrap_err();
        assert!(matches!(err, Error::ResolutionInsufficient { .. }), "{err}");
    }
}
