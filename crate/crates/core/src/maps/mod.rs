//! Maps S³ → SO(4): exact generator words and black-box evaluators, with
//! pointwise group operations and lifts to pairs of S³ self-maps.

mod lift;
mod word;

use std::fmt;
use std::sync::Arc;

pub use lift::{lift_numeric, lift_word, LiftedPair, CONTINUITY_THRESHOLD};
pub use word::{Generator, GeneratorWord, Letter};

use crate::error::{Error, Result};
use crate::quaternion::UnitQuaternion;
use crate::rotation::{eta_matrix, nu_matrix, SO4Matrix};

pub type SO4Fn = dyn Fn(UnitQuaternion) -> Result<SO4Matrix> + Send + Sync;

/// A smooth map S³ → SO(4).
#[derive(Clone)]
pub enum MapToSO4 {
    Word(GeneratorWord),
    BlackBox { label: String, eval: Arc<SO4Fn> },
}

impl MapToSO4 {
    pub fn black_box(label: impl Into<String>, eval: impl Fn(UnitQuaternion) -> SO4Matrix + Send + Sync + 'static) -> Self {
        MapToSO4::fallible(label, move |q| Ok(eval(q)))
    }

    fn fallible(label: impl Into<String>, eval: impl Fn(UnitQuaternion) -> Result<SO4Matrix> + Send + Sync + 'static) -> Self {
        MapToSO4::BlackBox {
            label: label.into(),
            eval: Arc::new(eval),
        }
    }

    /// The constant map to the identity rotation, as a black box.
    pub fn constant_identity() -> Self {
        MapToSO4::black_box("constant identity", |_| SO4Matrix::IDENTITY)
    }

    /// A black box evaluating the same values as `self`.
    pub fn opaque(&self) -> Self {
        let inner = self.clone();
        MapToSO4::fallible(format!("black-box({self})"), move |q| inner.evaluate(q))
    }

    pub fn evaluate(&self, q: UnitQuaternion) -> Result<SO4Matrix> {
        match self {
            MapToSO4::Word(word) => Ok(evaluate_word(word, q)),
            MapToSO4::BlackBox { eval, .. } => {
                let m = eval(q)?;
                m.validate().map_err(|e| Error::InvalidMapValue {
                    at: q.quaternion(),
                    reason: e.to_string(),
                })?;
                Ok(m)
            }
        }
    }

    /// `q ↦ self(q) · other(q)`.
    pub fn pointwise_product(&self, other: &MapToSO4) -> Self {
        match (self, other) {
            (MapToSO4::Word(a), MapToSO4::Word(b)) => MapToSO4::Word(a.product(b)),
            _ => {
                let (a, b) = (self.clone(), other.clone());
                MapToSO4::fallible(format!("({self})·({other})"), move |q| Ok(a.evaluate(q)? * b.evaluate(q)?))
            }
        }
    }

    /// `q ↦ self(q)⁻¹`.
    pub fn pointwise_inverse(&self) -> Self {
        match self {
            MapToSO4::Word(w) => MapToSO4::Word(w.inverse()),
            MapToSO4::BlackBox { .. } => {
                let a = self.clone();
                MapToSO4::fallible(format!("({self})⁻¹"), move |q| Ok(a.evaluate(q)?.inverse()))
            }
        }
    }

    pub fn as_word(&self) -> Option<&GeneratorWord> {
        match self {
            MapToSO4::Word(w) => Some(w),
            MapToSO4::BlackBox { .. } => None,
        }
    }
}

impl From<GeneratorWord> for MapToSO4 {
    fn from(w: GeneratorWord) -> Self {
        MapToSO4::Word(w)
    }
}

impl fmt::Display for MapToSO4 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MapToSO4::Word(w) => w.fmt(f),
            MapToSO4::BlackBox { label, .. } => f.write_str(label),
        }
    }
}

impl fmt::Debug for MapToSO4 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MapToSO4::Word(w) => f.debug_tuple("Word").field(&w.to_string()).finish(),
            MapToSO4::BlackBox { label, .. } => f.debug_struct("BlackBox").field("label", label).finish(),
        }
    }
}

/// Product of generator-matrix powers in letter order.
fn evaluate_word(word: &GeneratorWord, q: UnitQuaternion) -> SO4Matrix {
    word.letters().iter().fold(SO4Matrix::IDENTITY, |acc, l| {
        let base = match l.generator {
            Generator::Eta => eta_matrix(q),
            Generator::Nu => nu_matrix(q),
        };
        acc * base.pow(l.exponent)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hopf::halton_points;
    use crate::quaternion::Quaternion;

    fn word(s: &str) -> MapToSO4 {
        MapToSO4::Word(s.parse().unwrap())
    }

    #[test]
    fn single_letters_evaluate_to_generators() {
        for q in halton_points(32) {
            assert!(word("eta").evaluate(q).unwrap().max_abs_diff(&eta_matrix(q)) < 1e-15);
            assert!(word("nu").evaluate(q).unwrap().max_abs_diff(&nu_matrix(q)) < 1e-15);
            assert_eq!(word("").evaluate(q).unwrap(), SO4Matrix::IDENTITY);
        }
    }

    #[test]
    fn all_words_send_one_to_identity() {
        let m = word("eta^2 * nu^-1").evaluate(UnitQuaternion::IDENTITY).unwrap();
        assert!(m.max_abs_diff(&SO4Matrix::IDENTITY) < 1e-15);
    }

    #[test]
    fn products_and_inverses() {
        let p = word("eta^2").pointwise_product(&word("nu^-1"));
        assert_eq!(p.as_word().unwrap().exponent_sums(), (2, -1));
        assert!(word("eta").pointwise_product(&word("eta^-1")).as_word().unwrap().is_empty());

        for m in [word("eta * nu^2 * eta^-1"), word("nu * eta").opaque()] {
            let inv = m.pointwise_inverse();
            for q in halton_points(32) {
                let expected = m.evaluate(q).unwrap().inverse();
                assert!(inv.evaluate(q).unwrap().max_abs_diff(&expected) < 1e-12);
            }
        }
    }

    #[test]
    fn black_box_products_match_words() {
        let (a, b) = (word("eta^2 * nu"), word("nu^-1 * eta"));
        let mixed = a.opaque().pointwise_product(&b);
        let exact = a.pointwise_product(&b);
        for q in halton_points(32) {
            assert!(mixed.evaluate(q).unwrap().max_abs_diff(&exact.evaluate(q).unwrap()) < 1e-12);
        }
    }

    #[test]
    fn invalid_black_box_output_is_reported() {
        let bad = MapToSO4::black_box("scaled", |q| {
            let mut rows = *eta_matrix(q).rows();
            rows[0][0] *= 2.0;
            SO4Matrix::from_rows_unchecked(rows)
        });
        let q = UnitQuaternion::normalize(Quaternion::new(0.2, 0.3, 0.4, 0.5));
        match bad.evaluate(q) {
            Err(Error::InvalidMapValue { at, .. }) => assert_eq!(at, q.quaternion()),
            other => panic!("unexpected {other:?}"),
        }
    }
}
