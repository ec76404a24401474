//! Reproducible verification of the classification identities.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::bundle::{classify_numeric, classify_word, tangent_bundle_s4_word, NumericOptions};
use crate::degree::{degree_exact, degree_integral, PowerFactor, SphereSelfMap};
use crate::error::Result;
use crate::hopf::Resolution;
use crate::maps::{Generator, GeneratorWord, Letter, MapToSO4};
use crate::quaternion::{Quaternion, UnitQuaternion};
use crate::rotation::{double_cover, isoclinic_decompose, QuaternionPair, ROUNDTRIP_TOLERANCE};

pub const DEFAULT_SEED: u64 = 0x5eed_4d4f;

#[derive(Debug, Clone, Copy, Serialize)]
pub struct VerifyConfig {
    pub seed: u64,
    /// Grid for every integral degree and numeric lift.
    pub resolution: Resolution,
    pub word_pairs: usize,
    pub max_word_len: usize,
    pub roundtrip_pairs: usize,
    pub additivity_pairs: usize,
    /// Words up to this total letter count are classified numerically.
    pub numeric_max_len: u64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            seed: DEFAULT_SEED,
            resolution: Resolution::DEFAULT,
            word_pairs: 100,
            max_word_len: 5,
            roundtrip_pairs: 10_000,
            additivity_pairs: 20,
            numeric_max_len: 3,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Claim {
    /// Stable identifier, e.g. `phi-eta`.
    pub id: &'static str,
    /// The identity being checked, in formula form.
    pub anchor: &'static str,
    pub computed: String,
    pub expected: String,
    pub pass: bool,
}

impl fmt::Display for Claim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}  {:<26} computed {}; expected {}",
            if self.pass { "PASS" } else { "FAIL" },
            self.anchor,
            self.computed,
            self.expected
        )
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub config: VerifyConfig,
    pub claims: Vec<Claim>,
    pub passed: bool,
}

impl Report {
    pub fn claim(&self, id: &str) -> Option<&Claim> {
        self.claims.iter().find(|c| c.id == id)
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for claim in &self.claims {
            writeln!(f, "{claim}")?;
        }
        let passed = self.claims.iter().filter(|c| c.pass).count();
        write!(f, "{passed}/{} claims pass", self.claims.len())
    }
}

fn exact<T: fmt::Debug + PartialEq>(id: &'static str, anchor: &'static str, computed: T, expected: T) -> Claim {
    Claim {
        id,
        anchor,
        pass: computed == expected,
        computed: format!("{computed:?}"),
        expected: format!("{expected:?}"),
    }
}

fn counted(id: &'static str, anchor: &'static str, outcome: Result<(usize, usize, String)>) -> Claim {
    match outcome {
        Ok((good, total, detail)) => Claim {
            id,
            anchor,
            pass: good == total,
            computed: format!("{good}/{total}{detail}"),
            expected: format!("{total}/{total}"),
        },
        Err(e) => Claim {
            id,
            anchor,
            pass: false,
            computed: format!("error: {e}"),
            expected: "no error".into(),
        },
    }
}

pub fn random_unit(rng: &mut impl Rng) -> UnitQuaternion {
    loop {
        let q = Quaternion::new(
            rng.sample(StandardNormal),
            rng.sample(StandardNormal),
            rng.sample(StandardNormal),
            rng.sample(StandardNormal),
        );
        if q.norm() > 1e-6 {
            return UnitQuaternion::normalize(q);
        }
    }
}

/// A word of `0..=max_len` letters, each `η^±1` or `ν^±1`.
pub fn random_word(rng: &mut impl Rng, max_len: usize) -> GeneratorWord {
    let len = rng.random_range(0..=max_len);
    GeneratorWord::new((0..len).map(|_| Letter {
        generator: if rng.random() { Generator::Eta } else { Generator::Nu },
        exponent: if rng.random() { 1 } else { -1 },
    }))
}

/// A product of one to three factors `a·qⁿ·b` with random units `a`, `b` and `|n| ≤ 3`.
pub fn random_symbolic_map(rng: &mut impl Rng) -> SphereSelfMap {
    let factors = rng.random_range(1..=3);
    SphereSelfMap::Symbolic(
        (0..factors)
            .map(|_| PowerFactor {
                left: random_unit(rng),
                exponent: rng.random_range(-3..=3),
                right: random_unit(rng),
            })
            .collect(),
    )
}

/// Runs every check, calling `progress` as each claim completes.
pub fn verify_with(config: &VerifyConfig, mut progress: impl FnMut(&Claim)) -> Report {
    let mut claims = Vec::new();
    let mut push = |claim: Claim| {
        progress(&claim);
        claims.push(claim);
    };

    let eta = classify_word(&GeneratorWord::eta());
    let nu = classify_word(&GeneratorWord::nu());
    let tau = classify_word(&tangent_bundle_s4_word());
    push(exact("phi-eta", "Φ(η)=(1,0)", eta.phi, (1, 0)));
    push(exact("phi-nu", "Φ(ν)=(0,1)", nu.phi, (0, 1)));
    push(exact("euler-eta", "χ(η)=1", eta.euler, 1));
    push(exact("p1-eta", "p₁(η)=−2", eta.pontryagin, -2));
    push(exact("euler-nu", "χ(ν)=0", nu.euler, 0));
    push(exact("p1-nu", "p₁(ν)=−4", nu.pontryagin, -4));
    push(exact("tangent-s4", "χ(τ)=2, p₁(τ)=0", (tau.euler, tau.pontryagin), (2, 0)));

    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    push(counted("phi-additive", "Φ(f·g)=Φ(f)+Φ(g)", {
        let mut good = 0;
        for _ in 0..config.word_pairs {
            let (a, b) = (random_word(&mut rng, config.max_word_len), random_word(&mut rng, config.max_word_len));
            let (pa, pb) = (classify_word(&a).phi, classify_word(&b).phi);
            good += usize::from(classify_word(&a.product(&b)).phi == (pa.0 + pb.0, pa.1 + pb.1));
        }
        Ok((good, config.word_pairs, String::new()))
    }));

    push(counted("double-cover", "π(q₁,q₂)(q)=q₁·q·q₂⁻¹", {
        let mut good = 0;
        let mut worst = 0.0f64;
        for _ in 0..config.roundtrip_pairs {
            let p = QuaternionPair::new(random_unit(&mut rng), random_unit(&mut rng));
            let m = double_cover(p);
            if let Ok(back) = isoclinic_decompose(&m) {
                let residual = double_cover(back).max_abs_diff(&m);
                worst = worst.max(residual);
                good += usize::from(residual <= ROUNDTRIP_TOLERANCE && back.same_rotation(&p, ROUNDTRIP_TOLERANCE));
            }
        }
        Ok((good, config.roundtrip_pairs, format!(", max residual {worst:.1e}")))
    }));

    push(counted("degree-additive", "deg(a·b)=deg(a)+deg(b)", (|| {
        let mut good = 0;
        let mut worst = 0.0f64;
        for _ in 0..config.additivity_pairs {
            let (f, g) = (random_symbolic_map(&mut rng), random_symbolic_map(&mut rng));
            let expected = degree_exact(&f)?.degree + degree_exact(&g)?.degree;
            let integral = degree_integral(&f.product(&g).opaque(), config.resolution)?;
            worst = worst.max(integral.residual);
            good += usize::from(integral.degree == expected);
        }
        Ok((good, config.additivity_pairs, format!(", max residual {worst:.3}")))
    })()));

    push(counted("numeric-classify", "deg(f₁)−deg(f₂)=χ, deg(f₁)+deg(f₂)=−p₁/2", (|| {
        let options = NumericOptions {
            resolution: config.resolution,
            ..NumericOptions::default()
        };
        let words = GeneratorWord::enumerate(config.numeric_max_len);
        let mut good = 0;
        for w in &words {
            let numeric = classify_numeric(&MapToSO4::Word(w.clone()).opaque(), &options)?;
            good += usize::from(numeric.class == classify_word(w));
        }
        Ok((good, words.len(), " words".into()))
    })()));

    let passed = claims.iter().all(|c| c.pass);
    Report {
        config: *config,
        claims,
        passed,
    }
}

pub fn verify(config: &VerifyConfig) -> Report {
    verify_with(config, |_| {})
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quick() -> VerifyConfig {
        VerifyConfig {
            resolution: Resolution::new(24, 24, 12).unwrap(),
            word_pairs: 20,
            roundtrip_pairs: 200,
            additivity_pairs: 2,
            numeric_max_len: 2,
            ..VerifyConfig::default()
        }
    }

    #[test]
    fn quick_run_passes() {
        let report = verify(&quick());
        assert!(report.passed, "{report}");
        assert_eq!(report.claims.len(), 11);
        assert_eq!(report.claim("numeric-classify").unwrap().computed, "17/17 words");
    }

    #[test]
    fn coarse_resolution_fails_with_error() {
        let config = VerifyConfig {
            resolution: Resolution::new(4, 4, 2).unwrap(),
            ..quick()
        };
        let report = verify(&config);
        assert!(!report.passed);
        assert!(!report.claim("degree-additive").unwrap().pass);
        let claim = report.claim("numeric-classify").unwrap();
        assert!(!claim.pass && claim.computed.starts_with("error:"), "{claim}");
        assert!(report.claim("phi-eta").unwrap().pass);
    }

    #[test]
    fn same_seed_same_report() {
        let (a, b) = (verify(&quick()), verify(&quick()));
        let text = |r: &Report| r.claims.iter().map(|c| c.computed.clone()).collect::<Vec<_>>();
        assert_eq!(text(&a), text(&b));
    }

    #[test]
    fn random_words_respect_length() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..200 {
            assert!(random_word(&mut rng, 5).total_letter_count() <= 5);
        }
    }
}
