use std::time::Instant;

use serde::Serialize;

use framing::bundle::{class_from_degrees, classify_numeric, classify_word, BundleClass, NumericOptions};
use framing::degree::{
    default_target, degree_exact, degree_integral, degree_preimage, DegreeResult, SphereSelfMap, DEFAULT_SEEDS,
};
use framing::hopf::Resolution;
use framing::manifold::{
    catalog, catalog_entry, is_parallelizable, load_manifolds, obstruction_degrees, Decision, ManifoldData,
    Provenance,
};
use framing::maps::{lift_numeric, lift_word, GeneratorWord, MapToSO4};
use framing::quaternion::{Quaternion, UnitQuaternion};
use framing::verify::{verify_with, VerifyConfig, DEFAULT_SEED};
use framing::Error;

use crate::args::{CheckArgs, ClassifyArgs, Cli, Command, DegreeArgs, GlobalOpts, LiftArgs, MethodArg};
use crate::output::{Failure, Output, EXIT_NUMERICAL, EXIT_OK, EXIT_VERIFICATION};

type Outcome = Result<u8, Failure>;

pub fn run(cli: &Cli, out: &Output) -> Outcome {
    let g = &cli.global;
    match &cli.command {
        Command::Degree(args) => degree(args, g, out),
        Command::Lift(args) => lift(args, g, out),
        Command::Classify(args) => classify(args, g, out),
        Command::Check(args) => check(args, out),
        Command::Verify => verify(g, out),
        Command::Catalog => list_catalog(out),
    }
}

fn resolution(g: &GlobalOpts) -> Result<Resolution, Failure> {
    Ok(match g.resolution.as_deref() {
        Some(&[a, b, c]) => Resolution::new(a, b, c)?,
        _ => Resolution::DEFAULT,
    })
}

fn seeds(g: &GlobalOpts) -> usize {
    g.seeds.unwrap_or(DEFAULT_SEEDS)
}

fn parse_word(text: &str) -> Result<GeneratorWord, Failure> {
    Ok(text.parse()?)
}

/// `pow:n`, or a word together with the lift component to take.
fn parse_map(spec: &str, component: Option<u8>) -> Result<(SphereSelfMap, String), Failure> {
    if let Some(exponent) = spec.trim().strip_prefix("pow:") {
        if component.is_some() {
            return Err(Failure::Usage("--component applies only to word maps".into()));
        }
        let n: i64 = exponent.trim().parse().map_err(|_| Error::MapSpecParse {
            input: spec.to_string(),
            reason: format!("bad exponent {exponent:?}"),
        })?;
        let f = SphereSelfMap::power(n);
        let label = f.to_string();
        return Ok((f, label));
    }
    let word = parse_word(spec)?;
    let lift = lift_word(&word);
    let component = component.unwrap_or(1);
    let f = if component == 1 { lift.f1 } else { lift.f2 };
    let label = format!("component {component} of the lift of {word}: {f}");
    Ok((f, label))
}

fn degree(args: &DegreeArgs, g: &GlobalOpts, out: &Output) -> Outcome {
    let (f, label) = parse_map(&args.map, args.component)?;
    let target = match args.target.as_deref() {
        Some(&[w, x, y, z]) => {
            let q = Quaternion::new(w, x, y, z);
            if !(q.norm() > 0.0 && q.norm().is_finite()) {
                return Err(Failure::Usage("--target must be a nonzero quaternion".into()));
            }
            UnitQuaternion::normalize(q)
        }
        _ => default_target(),
    };
    let methods: &[MethodArg] = match args.method {
        MethodArg::All => &[MethodArg::Exact, MethodArg::Integral, MethodArg::Preimage],
        ref m => std::slice::from_ref(m),
    };

    out.line(format!("map: {label}"));
    let mut results = Vec::new();
    for method in methods {
        let result = match method {
            MethodArg::Exact => degree_exact(&f)?,
            MethodArg::Integral => degree_integral(&f, resolution(g)?)?,
            MethodArg::Preimage => degree_preimage(&f, target, seeds(g))?,
            MethodArg::All => unreachable!(),
        };
        out.line(&result);
        results.push(result);
    }
    let agree = results.windows(2).all(|w| w[0].degree == w[1].degree);
    if !agree {
        out.line("methods disagree");
    }

    #[derive(Serialize)]
    struct Doc<'a> {
        map: &'a str,
        results: &'a [DegreeResult],
        agree: bool,
    }
    out.document(&Doc {
        map: &label,
        results: &results,
        agree,
    });
    Ok(if agree { EXIT_OK } else { EXIT_NUMERICAL })
}

fn lift(args: &LiftArgs, g: &GlobalOpts, out: &Output) -> Outcome {
    let word = parse_word(&args.word)?;
    let symbolic = lift_word(&word);
    let d1 = degree_exact(&symbolic.f1)?;
    let d2 = degree_exact(&symbolic.f2)?;
    out.line(format!("word: {word}"));
    out.line(format!("f1: {}  {d1}", symbolic.f1));
    out.line(format!("f2: {}  {d2}", symbolic.f2));

    let numeric = if args.numeric {
        let res = resolution(g)?;
        let lifted = lift_numeric(&MapToSO4::Word(word.clone()).opaque(), res)?;
        let base = lifted.evaluate(UnitQuaternion::IDENTITY)?;
        let (n1, n2) = lifted.degree_integrals(res)?;
        out.line(format!("numeric lift at 1: ({}, {})", base.q1, base.q2));
        out.line(format!("numeric f1: {n1}"));
        out.line(format!("numeric f2: {n2}"));
        Some([n1, n2])
    } else {
        None
    };
    let class = class_from_degrees(d1.degree, d2.degree);
    out.line(&class);

    #[derive(Serialize)]
    struct Doc {
        word: String,
        f1: String,
        f2: String,
        degrees: [DegreeResult; 2],
        #[serde(skip_serializing_if = "Option::is_none")]
        numeric: Option<[DegreeResult; 2]>,
        class: BundleClass,
    }
    out.document(&Doc {
        word: word.to_string(),
        f1: symbolic.f1.to_string(),
        f2: symbolic.f2.to_string(),
        degrees: [d1, d2],
        numeric,
        class,
    });
    Ok(EXIT_OK)
}

fn classify(args: &ClassifyArgs, g: &GlobalOpts, out: &Output) -> Outcome {
    let word = parse_word(&args.word)?;
    #[derive(Serialize)]
    struct Doc {
        word: String,
        class: BundleClass,
        #[serde(skip_serializing_if = "Option::is_none")]
        degrees: Option<Vec<DegreeResult>>,
    }
    let doc = if args.numeric {
        let options = NumericOptions {
            resolution: resolution(g)?,
            cross_check: args.cross_check,
            seeds: seeds(g),
            ..NumericOptions::default()
        };
        let result = classify_numeric(&MapToSO4::Word(word.clone()).opaque(), &options)?;
        let mut degrees = vec![result.first, result.second];
        if let Some((p1, p2)) = result.preimage {
            degrees.extend([p1, p2]);
        }
        for (n, d) in degrees.iter().enumerate() {
            out.line(format!("f{}: {d}", n % 2 + 1));
        }
        Doc {
            word: word.to_string(),
            class: result.class,
            degrees: Some(degrees),
        }
    } else {
        Doc {
            word: word.to_string(),
            class: classify_word(&word),
            degrees: None,
        }
    };
    out.line(&doc.class);
    out.document(&doc);
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct Verdict {
    manifold: ManifoldData,
    decision: Decision,
    #[serde(skip_serializing_if = "Option::is_none")]
    obstruction: Option<(i64, i64)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    obstruction_error: Option<String>,
}

fn verdict(m: ManifoldData) -> Verdict {
    let decision = is_parallelizable(&m);
    let (obstruction, obstruction_error) = match obstruction_degrees(&m) {
        Ok(d) => (Some(d), None),
        Err(e) => (None, Some(e.to_string())),
    };
    Verdict {
        manifold: m,
        decision,
        obstruction,
        obstruction_error,
    }
}

fn print_verdict(v: &Verdict, out: &Output) {
    let failing = v.decision.failing();
    if failing.is_empty() {
        out.line(format!("{}: PARALLELIZABLE", v.manifold.name));
    } else {
        let names: Vec<String> = failing.iter().map(ToString::to_string).collect();
        out.line(format!("{}: NOT PARALLELIZABLE (failing: {})", v.manifold.name, names.join(", ")));
    }
    let values: Vec<&str> = v.decision.conditions.iter().map(|c| c.value.as_str()).collect();
    out.line(format!("  {}", values.join(", ")));
    if let Provenance::FromForm(form) = &v.manifold.provenance {
        out.line(format!(
            "  from intersection form: b₁ = {}, rank {}, σ = {}, det {}",
            form.b1, form.rank, form.signature, form.determinant
        ));
        for w in &form.warnings {
            out.line(format!("  warning: {w}"));
        }
    }
    match (&v.obstruction, &v.obstruction_error) {
        (Some((d1, d2)), _) => out.line(format!("  obstruction (d₁, d₂) = ({d1}, {d2})")),
        (_, Some(e)) => out.line(format!("  obstruction: {e}")),
        _ => {}
    }
}

fn check(args: &CheckArgs, out: &Output) -> Outcome {
    let manifolds = match (&args.catalog, &args.file) {
        (Some(name), _) if name.eq_ignore_ascii_case("all") => catalog(),
        (Some(name), _) => vec![catalog_entry(name)?],
        (None, Some(path)) => load_manifolds(path)?,
        (None, None) => return Err(Failure::Usage("give --catalog NAME or a manifold file".into())),
    };
    let verdicts: Vec<Verdict> = manifolds.into_iter().map(verdict).collect();
    for v in &verdicts {
        print_verdict(v, out);
    }
    out.document(&verdicts);
    Ok(EXIT_OK)
}

fn list_catalog(out: &Output) -> Outcome {
    let entries = catalog();
    for m in &entries {
        let verdict = if is_parallelizable(m).parallelizable {
            "parallelizable"
        } else {
            "not parallelizable"
        };
        out.line(format!(
            "{:<7} χ = {:<3} p₁ = {:<4} w₂ {} 0   {verdict}",
            m.name,
            m.euler,
            m.p1,
            if m.w2_zero { "=" } else { "≠" }
        ));
    }
    out.document(&entries);
    Ok(EXIT_OK)
}

fn verify(g: &GlobalOpts, out: &Output) -> Outcome {
    let config = VerifyConfig {
        seed: g.seed.unwrap_or(DEFAULT_SEED),
        resolution: resolution(g)?,
        ..VerifyConfig::default()
    };
    let started = Instant::now();
    let report = verify_with(&config, |claim| out.line(claim));
    let passed = report.claims.iter().filter(|c| c.pass).count();
    out.line(format!(
        "{passed}/{} claims pass (seed {}, {:.1} s)",
        report.claims.len(),
        config.seed,
        started.elapsed().as_secs_f64()
    ));
    out.document(&report);
    Ok(if report.passed { EXIT_OK } else { EXIT_VERIFICATION })
}
