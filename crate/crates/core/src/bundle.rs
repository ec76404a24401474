//! Classification of SO(4)-bundles over S⁴ by `(χ, p₁)` from clutching data.
//!
//! A clutching map with lift degrees `(d₁, d₂)` has `χ = d₁ − d₂` and
//! `p₁ = −2(d₁ + d₂)`; the coordinates `Φ = (χ, −(p₁ + 2χ)/4)` identify
//! π₃(SO(4)) with ℤ² and send η, ν to the standard basis.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::degree::{default_target, degree_exact, degree_preimage, DegreeResult, DEFAULT_SEEDS};
use crate::error::{Error, Result};
use crate::hopf::Resolution;
use crate::maps::{lift_numeric, lift_word, Generator, GeneratorWord, Letter, MapToSO4};
use crate::quaternion::UnitQuaternion;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BundleClass {
    /// Euler number.
    pub euler: i64,
    /// First Pontryagin number.
    pub pontryagin: i64,
    pub phi: (i64, i64),
}

impl BundleClass {
    /// Builds the class from `(χ, p₁)`, or `None` when `p₁ + 2χ` is not divisible by 4.
    pub fn from_characteristic(euler: i64, pontryagin: i64) -> Option<Self> {
        let numerator = pontryagin + 2 * euler;
        (numerator % 4 == 0).then(|| BundleClass {
            euler,
            pontryagin,
            phi: (euler, -numerator / 4),
        })
    }

    /// The trivial bundle.
    pub fn trivial() -> Self {
        class_from_degrees(0, 0)
    }

    /// The lift degrees `(d₁, d₂)` that produce this class.
    pub fn lift_degrees(&self) -> (i64, i64) {
        (self.phi.0 + self.phi.1, self.phi.1)
    }
}

impl fmt::Display for BundleClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "χ={} p₁={} Φ=({},{})",
            self.euler, self.pontryagin, self.phi.0, self.phi.1
        )
    }
}

pub fn class_from_degrees(d1: i64, d2: i64) -> BundleClass {
    let class = BundleClass {
        euler: d1 - d2,
        pontryagin: -2 * (d1 + d2),
        phi: (d1 - d2, d2),
    };
    debug_assert_eq!(
        BundleClass::from_characteristic(class.euler, class.pontryagin),
        Some(class)
    );
    class
}

/// Symbolic classification through the exact lift degrees.
pub fn classify_word(word: &GeneratorWord) -> BundleClass {
    let lift = lift_word(word);
    let d1 = degree_exact(&lift.f1).expect("symbolic lift").degree;
    let d2 = degree_exact(&lift.f2).expect("symbolic lift").degree;
    class_from_degrees(d1, d2)
}

/// The clutching word `η²·ν⁻¹` of the tangent bundle of S⁴.
pub fn tangent_bundle_s4_word() -> GeneratorWord {
    GeneratorWord::new([
        Letter {
            generator: Generator::Eta,
            exponent: 2,
        },
        Letter {
            generator: Generator::Nu,
            exponent: -1,
        },
    ])
}

#[derive(Debug, Clone, Copy)]
pub struct NumericOptions {
    pub resolution: Resolution,
    /// Also count preimages and require agreement with the integrals.
    pub cross_check: bool,
    pub seeds: usize,
    pub target: UnitQuaternion,
}

impl Default for NumericOptions {
    fn default() -> Self {
        NumericOptions {
            resolution: Resolution::DEFAULT,
            cross_check: false,
            seeds: DEFAULT_SEEDS,
            target: default_target(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct NumericClassification {
    pub class: BundleClass,
    pub first: DegreeResult,
    pub second: DegreeResult,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub preimage: Option<(DegreeResult, DegreeResult)>,
}

/// Classifies an arbitrary clutching map: one numeric lift, then the integral
/// degree of each component.
pub fn classify_numeric(map: &MapToSO4, options: &NumericOptions) -> Result<NumericClassification> {
    let lift = lift_numeric(map, options.resolution)?;
    let (first, second) = lift.degree_integrals(options.resolution)?;
    let preimage = if options.cross_check {
        let p1 = degree_preimage(&lift.f1, options.target, options.seeds)?;
        let p2 = degree_preimage(&lift.f2, options.target, options.seeds)?;
        for (component, integral, pre) in [(1, &first, &p1), (2, &second, &p2)] {
            if integral.degree != pre.degree {
                return Err(Error::MethodDisagreement {
                    component,
                    integral: integral.degree,
                    preimage: pre.degree,
                });
            }
        }
        Some((p1, p2))
    } else {
        None
    };
    Ok(NumericClassification {
        class: class_from_degrees(first.degree, second.degree),
        first,
        second,
        preimage,
    })
}
