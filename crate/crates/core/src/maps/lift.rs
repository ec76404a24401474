use std::collections::VecDeque;
use std::sync::Arc;

use rayon::prelude::*;

use super::{Generator, GeneratorWord, MapToSO4};
use crate::degree::{integral_estimates, integral_estimates_by_node, rounded, DegreeResult, PowerFactor, SphereSelfMap};
use crate::error::{Error, Result};
use crate::hopf::{HopfGrid, Resolution};
use crate::quaternion::UnitQuaternion;
use crate::rotation::{isoclinic_decompose, QuaternionPair, SIGN_THRESHOLD};

/// Largest accepted distance between lift values at adjacent grid nodes.
pub const CONTINUITY_THRESHOLD: f64 = 0.5;

/// A lift `(f1, f2): S³ → S³ × S³` of a map to SO(4) through the double cover.
#[derive(Debug, Clone)]
pub struct LiftedPair {
    pub f1: SphereSelfMap,
    pub f2: SphereSelfMap,
    numeric: Option<Arc<NumericLift>>,
}

impl LiftedPair {
    pub fn evaluate(&self, q: UnitQuaternion) -> Result<QuaternionPair> {
        match &self.numeric {
            Some(lift) => lift.evaluate(q),
            None => Ok(QuaternionPair::new(self.f1.evaluate(q)?, self.f2.evaluate(q)?)),
        }
    }

    /// The fixed lift value at each grid node, for numeric lifts.
    pub fn node_values(&self) -> Option<(&HopfGrid, &[QuaternionPair])> {
        self.numeric.as_deref().map(|l| (&l.grid, l.values.as_slice()))
    }

    /// Integral degrees of both components, sharing one pass over the grid.
    pub fn degree_integrals(&self, resolution: Resolution) -> Result<(DegreeResult, DegreeResult)> {
        let [d1, d2] = match self.numeric.as_deref() {
            // On the lift's own grid the node values are already fixed, and
            // points a finite-difference step away take their sign from the node.
            Some(lift) if lift.grid.resolution() == resolution => integral_estimates_by_node(
                |n| Ok(lift.values[n].into()),
                |n, q| Ok(lift.evaluate_near(n, q)?.into()),
                &lift.grid,
            )?,
            _ => integral_estimates(|q| Ok(self.evaluate(q)?.into()), &HopfGrid::new(resolution))?,
        };
        Ok((rounded(d1)?, rounded(d2)?))
    }

    /// `q ↦ f1(q)·f2(q)⁻¹`.
    pub fn quotient(&self) -> SphereSelfMap {
        self.f1.product(&self.f2.inverse())
    }
}

/// Symbolic lift: `η ↦ (q, 1)` and `ν ↦ (q, q)`, extended multiplicatively.
pub fn lift_word(word: &GeneratorWord) -> LiftedPair {
    let mut first = Vec::new();
    let mut second = Vec::new();
    for letter in word.letters() {
        first.push(PowerFactor::power(letter.exponent));
        if letter.generator == Generator::Nu {
            second.push(PowerFactor::power(letter.exponent));
        }
    }
    LiftedPair {
        f1: SphereSelfMap::Symbolic(first),
        f2: SphereSelfMap::Symbolic(second),
        numeric: None,
    }
}

#[derive(Debug)]
struct NumericLift {
    map: MapToSO4,
    grid: HopfGrid,
    values: Vec<QuaternionPair>,
}

impl NumericLift {
    /// Decomposes at `q` and picks the sign nearer the value at the nearest node.
    fn evaluate(&self, q: UnitQuaternion) -> Result<QuaternionPair> {
        self.evaluate_near(self.grid.nearest(q), q)
    }

    fn evaluate_near(&self, node: usize, q: UnitQuaternion) -> Result<QuaternionPair> {
        let p = isoclinic_decompose(&self.map.evaluate(q)?)?;
        let anchor = &self.values[node];
        Ok(if anchor.distance(&p) <= anchor.distance(&-p) { p } else { -p })
    }
}

/// Numeric lift through pointwise isoclinic decomposition on the Hopf grid.
///
/// Signs are propagated breadth-first from node 0, each node taking the sign
/// closer to the node it was reached from; off-grid values are matched to the
/// nearest node. The global sign makes the lift at `q = 1` canonical.
pub fn lift_numeric(map: &MapToSO4, resolution: Resolution) -> Result<LiftedPair> {
    let grid = HopfGrid::new(resolution);
    let mut values = grid
        .nodes()
        .par_iter()
        .map(|&q| isoclinic_decompose(&map.evaluate(q)?))
        .collect::<Result<Vec<_>>>()?;

    let mut fixed = vec![false; grid.len()];
    let mut queue = VecDeque::from([0]);
    fixed[0] = true;
    while let Some(node) = queue.pop_front() {
        let anchor = values[node];
        for next in grid.neighbors(node) {
            if fixed[next] {
                continue;
            }
            let candidate = values[next];
            let (keep, flip) = (anchor.distance(&candidate), anchor.distance(&-candidate));
            let distance = keep.min(flip);
            if distance > CONTINUITY_THRESHOLD {
                return Err(Error::GridTooCoarse {
                    distance,
                    threshold: CONTINUITY_THRESHOLD,
                });
            }
            if flip < keep {
                values[next] = -candidate;
            }
            fixed[next] = true;
            queue.push_back(next);
        }
    }

    let mut lift = NumericLift {
        map: map.clone(),
        grid,
        values,
    };
    let at_base = lift.evaluate(UnitQuaternion::IDENTITY)?;
    let decisive = std::iter::once(at_base.q1)
        .chain(lift.values.iter().map(|p| p.q1))
        .find_map(|q| q.leading_coordinate(SIGN_THRESHOLD));
    if decisive.is_some_and(|c| c < 0.0) {
        lift.values.iter_mut().for_each(|p| *p = -*p);
    }

    let lift = Arc::new(lift);
    let (first, second) = (Arc::clone(&lift), Arc::clone(&lift));
    Ok(LiftedPair {
        f1: SphereSelfMap::black_box(format!("lift₁({map})"), move |q| Ok(first.evaluate(q)?.q1)),
        f2: SphereSelfMap::black_box(format!("lift₂({map})"), move |q| Ok(second.evaluate(q)?.q2)),
        numeric: Some(lift),
    })
}
