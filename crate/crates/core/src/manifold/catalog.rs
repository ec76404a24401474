//! Built-in manifolds and the JSON record format.
//!
//! A manifold file is a JSON array of records. Each record has a `name` and
//! either direct data `{"w2_zero", "p1", "euler"}` or an intersection form
//! `{"Q", "b1"}` with optional `"w2_zero"`.

use std::path::Path;

use serde::Deserialize;

use super::form::{direct_sum, e8, hyperbolic, negate};
use super::{characteristic_from_form, IntersectionFormInput, ManifoldData};
use crate::error::{Error, Result};

/// Names and intersection-form data of the built-in manifolds.
pub fn catalog_forms() -> Vec<(&'static str, IntersectionFormInput)> {
    let form = |q, b1, w2| IntersectionFormInput {
        q,
        b1,
        w2_zero_override: w2,
    };
    let h = hyperbolic();
    vec![
        ("S4", form(vec![], 0, None)),
        // Product of spin manifolds; b₁ > 0 so parity alone does not decide w₂.
        ("S1xS3", form(vec![], 1, Some(true))),
        ("T4", form(direct_sum(&[h.clone(), h.clone(), h.clone()]), 4, Some(true))),
        ("S2xS2", form(h.clone(), 0, None)),
        ("CP2", form(vec![vec![1]], 0, None)),
        ("K3", form(direct_sum(&[negate(&e8()), negate(&e8()), h.clone(), h.clone(), h]), 0, None)),
    ]
}

pub fn catalog() -> Vec<ManifoldData> {
    catalog_forms()
        .into_iter()
        .map(|(name, input)| characteristic_from_form(name, &input).expect("built-in form"))
        .collect()
}

/// Case-insensitive lookup in the built-in catalog.
pub fn catalog_entry(name: &str) -> Result<ManifoldData> {
    catalog()
        .into_iter()
        .find(|m| m.name.eq_ignore_ascii_case(name))
        .ok_or_else(|| Error::UnknownCatalogEntry(name.to_string()))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Record {
    name: String,
    w2_zero: Option<bool>,
    p1: Option<i64>,
    euler: Option<i64>,
    #[serde(rename = "Q")]
    q: Option<Vec<Vec<i64>>>,
    b1: Option<u32>,
}

impl Record {
    fn into_manifold(self) -> Result<ManifoldData> {
        let name = self.name;
        let reject = |reason: &str| Error::Record {
            name: name.clone(),
            reason: reason.to_string(),
        };
        match (self.q, self.b1) {
            (Some(q), Some(b1)) => {
                if self.p1.is_some() || self.euler.is_some() {
                    return Err(reject("give either p1/euler or Q/b1, not both"));
                }
                let input = IntersectionFormInput {
                    q,
                    b1,
                    w2_zero_override: self.w2_zero,
                };
                characteristic_from_form(name.clone(), &input)
            }
            (Some(_), None) => Err(reject("Q requires b1")),
            (None, Some(_)) => Err(reject("b1 requires Q")),
            (None, None) => match (self.w2_zero, self.p1, self.euler) {
                (Some(w2), Some(p1), Some(euler)) => Ok(ManifoldData::direct(name, w2, p1, euler)),
                _ => Err(reject("direct records need w2_zero, p1 and euler")),
            },
        }
    }
}

pub fn parse_manifolds(json: &str) -> Result<Vec<ManifoldData>> {
    let records: Vec<Record> = serde_json::from_str(json)?;
    records.into_iter().map(Record::into_manifold).collect()
}

pub fn load_manifolds(path: impl AsRef<Path>) -> Result<Vec<ManifoldData>> {
    parse_manifolds(&std::fs::read_to_string(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::manifold::{is_parallelizable, obstruction_degrees, Condition, Provenance};

    #[test]
    fn catalog_verdicts() {
        let verdicts: Vec<(String, bool)> = catalog()
            .iter()
            .map(|m| (m.name.clone(), is_parallelizable(m).parallelizable))
            .collect();
        let expected = [
            ("S4", false),
            ("S1xS3", true),
            ("T4", true),
            ("S2xS2", false),
            ("CP2", false),
            ("K3", false),
        ];
        assert_eq!(verdicts, expected.map(|(n, p)| (n.to_string(), p)).to_vec());
        assert!(catalog().iter().all(|m| matches!(m.provenance, Provenance::FromForm(_))));
    }

    #[test]
    fn catalog_data() {
        let t4 = catalog_entry("t4").unwrap();
        assert_eq!((t4.euler, t4.p1, t4.w2_zero), (0, 0, true));
        let k3 = catalog_entry("K3").unwrap();
        assert_eq!((k3.euler, k3.p1, k3.w2_zero), (24, -48, true));
        assert_eq!(obstruction_degrees(&k3).unwrap(), (24, 0));
        assert_eq!(obstruction_degrees(&catalog_entry("S4").unwrap()).unwrap(), (1, -1));
        assert_eq!(obstruction_degrees(&catalog_entry("S2xS2").unwrap()).unwrap(), (2, -2));
        let cp2 = catalog_entry("CP2").unwrap();
        assert!(is_parallelizable(&cp2).failing().contains(&Condition::W2));
        assert!(matches!(catalog_entry("RP4"), Err(Error::UnknownCatalogEntry(_))));
    }

    #[test]
    fn parse_both_record_kinds() {
        let json = r#"[
            {"name": "direct", "w2_zero": true, "p1": 0, "euler": 0},
            {"name": "form", "Q": [[0, 1], [1, 0]], "b1": 0},
            {"name": "form with flag", "Q": [], "b1": 2, "w2_zero": false}
        ]"#;
        let ms = parse_manifolds(json).unwrap();
        assert_eq!(ms[0], ManifoldData::direct("direct", true, 0, 0));
        assert_eq!((ms[1].euler, ms[1].p1, ms[1].w2_zero), (4, 0, true));
        assert_eq!((ms[2].euler, ms[2].w2_zero), (-2, false));
    }

    #[test]
    fn unknown_field_is_named() {
        let err = parse_manifolds(r#"[{"name": "x", "w2_zero": true, "p1": 0, "euler": 0, "sigma": 1}]"#).unwrap_err();
        assert!(err.to_string().contains("sigma"), "{err}");
    }

    #[test]
    fn incomplete_records_are_rejected() {
        for json in [
            r#"[{"name": "x", "p1": 0, "euler": 0}]"#,
            r#"[{"name": "x", "Q": [[1]]}]"#,
            r#"[{"name": "x", "b1": 0}]"#,
            r#"[{"name": "x", "Q": [[1]], "b1": 0, "p1": 3}]"#,
        ] {
            assert!(matches!(parse_manifolds(json), Err(Error::Record { .. })), "{json}");
        }
        assert!(matches!(parse_manifolds(r#"[{"name": "x", "Q": [[1, 2], [3, 4]], "b1": 0}]"#), Err(Error::AsymmetricForm)));
        assert!(matches!(parse_manifolds("{}"), Err(Error::Json(_))));
    }
}
