use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use framing::bundle::{classify_numeric, classify_word, NumericOptions};
use framing::degree::{degree_exact, degree_integral, degree_preimage, default_target, SphereSelfMap};
use framing::hopf::{halton_points, Resolution};
use framing::maps::{lift_numeric, lift_word, Generator, GeneratorWord, Letter, MapToSO4};
use framing::rotation::double_cover;
use framing::verify::random_word;
use framing::Error;

fn word(s: &str) -> GeneratorWord {
    s.parse().unwrap()
}

#[test]
fn lifts_reproduce_their_maps_on_a_thousand_points() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let points = halton_points(1000);
    for _ in 0..4 {
        let w = random_word(&mut rng, 5);
        let m = MapToSO4::Word(w.clone());
        let symbolic = lift_word(&w);
        let numeric = lift_numeric(&m.opaque(), Resolution::DEFAULT).unwrap();
        for &q in &points {
            let target = m.evaluate(q).unwrap();
            assert!(double_cover(symbolic.evaluate(q).unwrap()).max_abs_diff(&target) <= 1e-7, "{w}");
            assert!(double_cover(numeric.evaluate(q).unwrap()).max_abs_diff(&target) <= 1e-7, "{w}");
        }
    }
}

#[test]
fn words_of_six_letters_pass_the_continuity_check() {
    let mut words: Vec<GeneratorWord> = ["eta^6", "eta^-6", "nu^6", "nu^-6", "eta^3 * nu^3", "eta^-3 * nu^3", "nu^3 * eta^-3"]
        .into_iter()
        .map(word)
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    while words.len() < 60 {
        let w = GeneratorWord::new((0..6).map(|_| Letter {
            generator: if rng.random() { Generator::Eta } else { Generator::Nu },
            exponent: if rng.random() { 1 } else { -1 },
        }));
        words.push(w);
    }
    for w in words {
        assert!(lift_numeric(&MapToSO4::Word(w.clone()).opaque(), Resolution::DEFAULT).is_ok(), "{w}");
    }
}

#[test]
fn high_powers_exceed_the_default_grid() {
    let err = lift_numeric(&MapToSO4::Word(word("eta^8")).opaque(), Resolution::DEFAULT).unwrap_err();
    assert!(matches!(err, Error::GridTooCoarse { .. }), "{err}");
}

#[test]
fn three_methods_agree_on_powers() {
    for n in -3..=3 {
        let f = SphereSelfMap::power(n);
        assert_eq!(degree_exact(&f).unwrap().degree, n);
        let integral = degree_integral(&f, Resolution::DEFAULT).unwrap();
        assert_eq!(integral.degree, n);
        assert!(integral.residual < 0.1);
        assert_eq!(degree_preimage(&f, default_target(), 512).unwrap().degree, n);
    }
}

#[test]
fn quotient_degree_is_the_euler_number() {
    for w in ["eta^2 * nu^-1", "nu * eta^3", "eta^-1 * nu^2 * eta^-1", ""] {
        let w = word(w);
        let lift = lift_word(&w);
        let d = degree_integral(&lift.quotient().opaque(), Resolution::DEFAULT).unwrap();
        assert_eq!(d.degree, classify_word(&w).euler, "{w}");
    }
    let numeric = lift_numeric(&MapToSO4::Word(word("eta^2 * nu^-1")).opaque(), Resolution::DEFAULT).unwrap();
    let d = degree_integral(&numeric.quotient(), Resolution::DEFAULT).unwrap();
    assert_eq!(d.degree, 2);
}

#[test]
fn numeric_classification_matches_words_up_to_four_letters() {
    let words = GeneratorWord::enumerate(4);
    assert_eq!(words.len(), 161);
    let options = NumericOptions::default();
    for w in &words {
        let numeric = classify_numeric(&MapToSO4::Word(w.clone()).opaque(), &options).unwrap();
        assert_eq!(numeric.class, classify_word(w), "{w}");
    }
}
