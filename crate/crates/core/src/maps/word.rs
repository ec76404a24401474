//! Words in the generators η, ν of π₃(SO(4)) and their text form.
//!
//! The text form is a `*`-separated product in evaluation order, each factor a
//! generator name (`eta`, `nu`) with an optional `^` integer exponent, e.g.
//! `eta^2 * nu^-1`. Whitespace is ignored; the empty string and `1` denote the
//! empty word.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Generator {
    /// Left multiplication `q′ ↦ q·q′`.
    Eta,
    /// Conjugation `q′ ↦ q·q′·q⁻¹`.
    Nu,
}

impl Generator {
    pub fn name(self) -> &'static str {
        match self {
            Generator::Eta => "eta",
            Generator::Nu => "nu",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Letter {
    pub generator: Generator,
    pub exponent: i64,
}

/// A word in normal form: no zero exponents, no two adjacent letters on the
/// same generator.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub struct GeneratorWord {
    letters: Vec<Letter>,
}

impl GeneratorWord {
    pub fn new(letters: impl IntoIterator<Item = Letter>) -> Self {
        let mut out: Vec<Letter> = Vec::new();
        for letter in letters {
            match out.last_mut() {
                Some(last) if last.generator == letter.generator => {
                    last.exponent += letter.exponent;
                    if last.exponent == 0 {
                        out.pop();
                    }
                }
                _ if letter.exponent == 0 => {}
                _ => out.push(letter),
            }
        }
        GeneratorWord { letters: out }
    }

    pub fn empty() -> Self {
        GeneratorWord::default()
    }

    pub fn letter(generator: Generator, exponent: i64) -> Self {
        GeneratorWord::new([Letter { generator, exponent }])
    }

    pub fn eta() -> Self {
        GeneratorWord::letter(Generator::Eta, 1)
    }

    pub fn nu() -> Self {
        GeneratorWord::letter(Generator::Nu, 1)
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// `(Σ η-exponents, Σ ν-exponents)`.
    pub fn exponent_sums(&self) -> (i64, i64) {
        self.letters.iter().fold((0, 0), |(a, b), l| match l.generator {
            Generator::Eta => (a + l.exponent, b),
            Generator::Nu => (a, b + l.exponent),
        })
    }

    /// Σ |exponent|: the length of the word over `η^±1, ν^±1`.
    pub fn total_letter_count(&self) -> u64 {
        self.letters.iter().map(|l| l.exponent.unsigned_abs()).sum()
    }

    pub fn product(&self, other: &GeneratorWord) -> Self {
        GeneratorWord::new(self.letters.iter().chain(&other.letters).copied())
    }

    pub fn inverse(&self) -> Self {
        GeneratorWord::new(self.letters.iter().rev().map(|l| Letter {
            generator: l.generator,
            exponent: -l.exponent,
        }))
    }

    /// `self` raised to an integer power under the pointwise product.
    pub fn pow(&self, n: i64) -> Self {
        let base = if n < 0 { self.inverse() } else { self.clone() };
        (0..n.unsigned_abs()).fold(GeneratorWord::empty(), |acc, _| acc.product(&base))
    }

    /// Every distinct normal-form word of total letter count at most `max_len`,
    /// ordered by length.
    pub fn enumerate(max_len: u64) -> Vec<GeneratorWord> {
        let singles: Vec<GeneratorWord> = [Generator::Eta, Generator::Nu]
            .into_iter()
            .flat_map(|g| [GeneratorWord::letter(g, 1), GeneratorWord::letter(g, -1)])
            .collect();
        let mut all = vec![GeneratorWord::empty()];
        let mut frontier = vec![GeneratorWord::empty()];
        for len in 1..=max_len {
            let mut next = Vec::new();
            for word in &frontier {
                for s in &singles {
                    let candidate = word.product(s);
                    if candidate.total_letter_count() == len && !next.contains(&candidate) {
                        next.push(candidate);
                    }
                }
            }
            all.extend(next.iter().cloned());
            frontier = next;
        }
        all
    }
}

impl fmt::Display for GeneratorWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return f.write_str("1");
        }
        for (n, l) in self.letters.iter().enumerate() {
            if n > 0 {
                f.write_str(" * ")?;
            }
            f.write_str(l.generator.name())?;
            if l.exponent != 1 {
                write!(f, "^{}", l.exponent)?;
            }
        }
        Ok(())
    }
}

impl FromStr for GeneratorWord {
    type Err = Error;

    fn from_str(input: &str) -> Result<Self> {
        let compact: String = input.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() || compact == "1" {
            return Ok(GeneratorWord::empty());
        }
        let err = |reason: String| Error::WordParse {
            input: input.to_string(),
            reason,
        };
        let mut letters = Vec::new();
        for factor in compact.split('*') {
            if factor.is_empty() {
                return Err(err("empty factor".into()));
            }
            if factor == "1" {
                continue;
            }
            let (name, exponent) = match factor.split_once('^') {
                Some((name, exp)) => {
                    let exp = exp.strip_prefix('(').and_then(|e| e.strip_suffix(')')).unwrap_or(exp);
                    let exp: i64 = exp.parse().map_err(|_| err(format!("bad exponent {exp:?}")))?;
                    (name, exp)
                }
                None => (factor, 1),
            };
            let generator = match name {
                "eta" | "η" => Generator::Eta,
                "nu" | "ν" => Generator::Nu,
                other => return Err(err(format!("unknown generator {other:?}"))),
            };
            letters.push(Letter { generator, exponent });
        }
        Ok(GeneratorWord::new(letters))
    }
}

impl From<GeneratorWord> for String {
    fn from(w: GeneratorWord) -> String {
        w.to_string()
    }
}

impl TryFrom<String> for GeneratorWord {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}
