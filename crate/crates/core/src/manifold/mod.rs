//! Parallelizability of closed orientable 4-manifolds from `(w₂, p₁, χ)`,
//! and the lift degrees of the obstruction over the top cell.

mod catalog;
pub mod form;

use std::fmt;

use serde::{Deserialize, Serialize};

pub use catalog::{catalog, catalog_entry, catalog_forms, load_manifolds, parse_manifolds};
pub use form::FormInvariants;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE", tag = "kind")]
pub enum Provenance {
    Direct,
    FromForm(FormSummary),
}

/// How the data were derived from an intersection form.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormSummary {
    pub rank: usize,
    pub signature: i64,
    /// Decimal text, so arbitrarily large determinants survive serialization.
    pub determinant: String,
    pub b1: u32,
    /// `true` when w₂ came from the form's parity, `false` when supplied.
    pub w2_from_parity: bool,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ManifoldData {
    pub name: String,
    pub w2_zero: bool,
    pub p1: i64,
    pub euler: i64,
    pub provenance: Provenance,
}

impl ManifoldData {
    pub fn direct(name: impl Into<String>, w2_zero: bool, p1: i64, euler: i64) -> Self {
        ManifoldData {
            name: name.into(),
            w2_zero,
            p1,
            euler,
            provenance: Provenance::Direct,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct IntersectionFormInput {
    #[serde(rename = "Q")]
    pub q: Vec<Vec<i64>>,
    pub b1: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub w2_zero_override: Option<bool>,
}

/// `χ = 2 − 2b₁ + rank Q`, `p₁ = 3σ(Q)`, and w₂ from the parity of `Q` when
/// `b₁ = 0`.
pub fn characteristic_from_form(name: impl Into<String>, input: &IntersectionFormInput) -> Result<ManifoldData> {
    let inv = form::form_invariants(&input.q)?;
    let even = input.q.iter().enumerate().all(|(i, row)| row[i] % 2 == 0);
    let w2_zero = match (input.b1, input.w2_zero_override) {
        (0, None) => even,
        (0, Some(given)) if given == even => even,
        (0, Some(given)) => return Err(Error::W2OverrideConflict { given, even }),
        (_, Some(given)) => given,
        (b1, None) => return Err(Error::W2NotDerivable { b1 }),
    };
    let mut warnings = Vec::new();
    if inv.determinant.magnitude() != &1u32.into() {
        warnings.push(format!("form is not unimodular (determinant {})", inv.determinant));
    }
    Ok(ManifoldData {
        name: name.into(),
        w2_zero,
        p1: 3 * inv.signature,
        euler: 2 - 2 * i64::from(input.b1) + inv.rank as i64,
        provenance: Provenance::FromForm(FormSummary {
            rank: inv.rank,
            signature: inv.signature,
            determinant: inv.determinant.to_string(),
            b1: input.b1,
            w2_from_parity: input.b1 == 0,
            warnings,
        }),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Condition {
    W2,
    P1,
    Euler,
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Condition::W2 => "w₂",
            Condition::P1 => "p₁",
            Condition::Euler => "χ",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConditionStatus {
    pub condition: Condition,
    /// Human-readable value, e.g. `p₁ = -48`.
    pub value: String,
    pub vanishes: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Decision {
    pub name: String,
    pub parallelizable: bool,
    pub conditions: Vec<ConditionStatus>,
}

impl Decision {
    pub fn failing(&self) -> Vec<Condition> {
        self.conditions
            .iter()
            .filter(|c| !c.vanishes)
            .map(|c| c.condition)
            .collect()
    }
}

/// Parallelizable exactly when w₂, p₁ and χ all vanish.
pub fn is_parallelizable(m: &ManifoldData) -> Decision {
    let conditions = vec![
        ConditionStatus {
            condition: Condition::W2,
            value: format!("w₂ {} 0", if m.w2_zero { "=" } else { "≠" }),
            vanishes: m.w2_zero,
        },
        ConditionStatus {
            condition: Condition::P1,
            value: format!("p₁ = {}", m.p1),
            vanishes: m.p1 == 0,
        },
        ConditionStatus {
            condition: Condition::Euler,
            value: format!("χ = {}", m.euler),
            vanishes: m.euler == 0,
        },
    ];
    Decision {
        name: m.name.clone(),
        parallelizable: conditions.iter().all(|c| c.vanishes),
        conditions,
    }
}

/// Solves `d₁ − d₂ = χ`, `d₁ + d₂ = −p₁/2` for the lift degrees of the
/// clutching obstruction.
pub fn obstruction_degrees(m: &ManifoldData) -> Result<(i64, i64)> {
    if !m.w2_zero {
        return Err(Error::W2Nonzero);
    }
    if m.p1 % 2 != 0 {
        return Err(Error::P1Parity { p1: m.p1 });
    }
    let half = m.p1 / 2;
    if (m.euler + half) % 2 != 0 {
        return Err(Error::ParityMismatch { value: m.euler + half });
    }
    Ok(((m.euler - half) / 2, (-m.euler - half) / 2))
}
