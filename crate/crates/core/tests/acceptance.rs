//! Acceptance suite: one PASS/FAIL line per criterion, each with a runtime
//! budget. Run with `cargo test --test acceptance -- --nocapture` to see
//! the report.

mod common;

use std::panic::{self, AssertUnwindSafe};
use std::process::Command;
use std::time::{Duration, Instant};

use common::{
    all_diagrams, check_preemptions, cnf_text, fixture, hamming_depth, random_diagram,
    random_formula, random_topological_order, read_fixture, var_names,
};
use num_rational::Ratio;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sizelogic::core_revision::{
    models, parse_formula, peel, peel_formula, Hamming, ModelSet, Universe,
};
use sizelogic::inheritance::{DiagramError, InferOptions, InheritanceDiagram, Status};
use sizelogic::sweep::{self, SweepConfig};
use sizelogic::{Fact, Hypotheses, PreferentialStructure, SizeAlgebra, SizeClass};

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Runs one criterion, prints its line and reports whether it passed.
fn criterion(id: u32, name: &str, budget: Duration, f: impl FnOnce() -> Check) -> bool {
    let start = Instant::now();
    let outcome = panic::catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
        let msg = p
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_else(|| "panic".into());
        Err(msg)
    });
    let elapsed = start.elapsed();
    let (pass, detail) = match outcome {
        Ok(detail) if elapsed <= budget => (true, detail),
        Ok(detail) => (false, format!("{detail}; over budget of {:.0?}", budget)),
        Err(e) => (false, e),
    };
    println!(
        "criterion {id} [{}] {name} ({:.2} s): {detail}",
        if pass { "PASS" } else { "FAIL" },
        elapsed.as_secs_f64()
    );
    pass
}

fn structure(name: &str) -> PreferentialStructure {
    PreferentialStructure::parse(&read_fixture(name)).unwrap()
}

fn diagram(name: &str) -> InheritanceDiagram {
    InheritanceDiagram::parse(&read_fixture(name)).unwrap()
}

const DIAGRAMS: [&str; 5] = [
    "tweety.dia",
    "nixon.dia",
    "extended_nixon.dia",
    "up_down.dia",
    "two_nixon.dia",
];

fn worked_examples() -> Check {
    // Absolute: {a} < {b} relative to {a,b} but not relative to {a,b,c}
    let s = structure("absolute.pref");
    let alg = SizeAlgebra::new(&s);
    let set = |n: &[&str]| s.subset_from_names(n).unwrap();
    let (a, b) = (set(&["a"]), set(&["b"]));
    ensure(alg.less(a, b, Some(a | b)) == Ok(true), || {
        "Absolute: {a}<{b} in {a,b}".into()
    })?;
    ensure(alg.less(a, b, Some(s.universe())) == Ok(false), || {
        "Absolute: {a}<{b} in {a,b,c}".into()
    })?;
    ensure(
        alg.classify(s.universe(), a) == Ok(SizeClass::Small)
            && alg.classify(s.universe(), b) == Ok(SizeClass::Small),
        || "Absolute: both singletons small in {a,b,c}".into(),
    )?;

    // Non-Trans: {c} < {b} < {a} but not {c} < {a}
    let s = structure("non_trans.pref");
    let alg = SizeAlgebra::new(&s);
    let set = |n: &[&str]| s.subset_from_names(n).unwrap();
    let (a, b, c) = (set(&["a"]), set(&["b"]), set(&["c"]));
    ensure(
        alg.less(c, b, None) == Ok(true)
            && alg.less(b, a, None) == Ok(true)
            && alg.less(c, a, None) == Ok(false),
        || "Non-Trans: < chain does not break".into(),
    )?;
    ensure(!s.is_smooth(), || "Non-Trans: structure is smooth".into())?;

    // Trans-No-Rank: {x1} <' {x2} <' {x3} but never {x1} <' {x3}
    let s = structure("trans_no_rank.pref");
    let alg = SizeAlgebra::new(&s);
    let set = |n: &[&str]| s.subset_from_names(n).unwrap();
    let (x1, x2, x3) = (set(&["x1"]), set(&["x2"]), set(&["x3"]));
    ensure(s.is_transitive() && s.is_smooth() && !s.is_ranked(), || {
        "Trans-No-Rank: shape".into()
    })?;
    ensure(
        alg.less_prime(x2, x3, Some(set(&["x2", "x3", "x4"]))) == Ok(true)
            && alg.less_prime(x1, x2, Some(set(&["x1", "x2", "y"]))) == Ok(true),
        || "Trans-No-Rank: <' links".into(),
    )?;
    ensure(
        s.universe()
            .subsets()
            .filter(|z| (x1 | x3).is_subset_of(*z))
            .all(|z| alg.less_prime(x1, x3, Some(z)) == Ok(false)),
        || "Trans-No-Rank: {x1} <' {x3} in some Z".into(),
    )?;

    let status = |d: &InheritanceDiagram, src: &str, t: &str| {
        d.infer(src).unwrap().target(d.node(t).unwrap()).status
    };

    let d = diagram("tweety.dia");
    let r = d.infer("D").unwrap();
    ensure(status(&d, "D", "A") == Status::OutBig, || {
        "Tweety: D -> A not OUT_BIG".into()
    })?;
    let preemptions: usize = r
        .trace
        .iter()
        .map(|e| match e {
            sizelogic::inheritance::TraceEvent::Step { preempted, .. } => preempted.len(),
            _ => 0,
        })
        .sum();
    ensure(preemptions == 1, || {
        format!("Tweety: {preemptions} preemptions, expected one change")
    })?;

    let d = diagram("nixon.dia");
    let y = d.infer("U").unwrap().target(d.node("Y").unwrap()).clone();
    ensure(
        y.status == Status::Split
            && y.in_fraction == Ratio::new(1, 2)
            && y.out_fraction == Ratio::new(1, 2),
        || "Nixon: Y not split 1/2".into(),
    )?;

    let d = diagram("extended_nixon.dia");
    ensure(status(&d, "Z", "Y") == Status::InBig, || {
        "Extended Nixon: Y not IN_BIG".into()
    })?;
    ensure(status(&d, "Z", "X") == Status::OutBig, || {
        "Extended Nixon: X not OUT_BIG".into()
    })?;

    let d = diagram("up_down.dia");
    ensure(
        status(&d, "Z", "Y") == Status::InBig
            && status(&d, "Z", "V") == Status::InBig
            && status(&d, "Z", "X") == Status::OutBig,
        || "Up-Down: Z is not mostly in Y via V".into(),
    )?;

    let d = diagram("two_nixon.dia");
    let r = d.infer("U").unwrap();
    ensure(
        r.cells.len() == 4 && r.cells.iter().all(|c| c.fraction() == Ratio::new(1, 4)),
        || "Two-Nixon: not four quarter cells".into(),
    )?;
    Ok("3 structures and 5 diagrams reproduce the stated outcomes".into())
}

fn theorem_sweep() -> Check {
    let config = SweepConfig {
        max_size: 7,
        exhaustive_max: 4,
        samples: 1000,
        seed: 42,
        hypotheses: Hypotheses::Enforce,
    };
    let reports = sweep::run(&Fact::ALL, &config);
    let mut summary = Vec::new();
    for r in &reports {
        ensure(r.violations == 0, || {
            format!(
                "{} has {} counterexamples: {:?}",
                r.fact, r.violations, r.examples
            )
        })?;
        ensure(r.held > 0, || format!("{} never applied", r.fact))?;
        summary.push(format!("{} {}/{}", r.fact, r.held, r.structures));
    }
    // Remark on <: forward direction everywhere, converse refuted by A = B
    let mut converse_equal = false;
    for s in sweep::corpus(&config) {
        let (forward, converse) = SizeAlgebra::new(&s).check_remark_less();
        ensure(forward.holds(), || {
            format!("Remark <: forward fails on {s:?}")
        })?;
        // with A = B = X nonempty, B is big in A ∪ B but A is not small
        let u = s.universe();
        let refuted = SizeAlgebra::new(&s).classify(u, u) == Ok(SizeClass::Big);
        converse_equal |= converse.is_some() && refuted;
    }
    ensure(converse_equal, || {
        "Remark <: no converse counterexample with A = B".into()
    })?;
    Ok(format!(
        "{} structures, zero violations (held: {}); converse of Remark < refuted with A = B",
        reports[0].structures,
        summary.join(", ")
    ))
}

fn triangle_sweep() -> Check {
    let mut diagrams = 0;
    let mut decisions = 0;
    for n in 1..=5 {
        for d in all_diagrams(n, 8) {
            decisions += check_preemptions(&d)?;
            diagrams += 1;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    for i in 0..500 {
        let d = random_diagram(&mut rng, 2 + i % 4, 8);
        decisions += check_preemptions(&d)?;
        diagrams += 1;
    }
    let mutual = InheritanceDiagram::parse("nodes B C\nC -> B\nB -> C\n");
    ensure(
        matches!(mutual, Err(DiagramError::CycleDetected(_))),
        || "mutual positive arrows were accepted".into(),
    )?;
    Ok(format!(
        "{diagrams} diagrams, {decisions} arrow decisions match derive_specificity; mutual positive arrows rejected"
    ))
}

fn core_equivalence() -> Check {
    let vars = var_names(3);
    let u = Universe::new(&vars).unwrap();
    let mut sets = 0;
    for mask in 1u32..255 {
        let members: Vec<bool> = (0..8).map(|x| mask >> x & 1 == 1).collect();
        let x = ModelSet::from_assignments(3, (0..8u32).filter(|&y| members[y as usize]));
        let p = peel(&x, &Hamming).map_err(|e| e.to_string())?;
        for (i, layer) in p.layers.iter().enumerate() {
            let stratum = ModelSet::from_assignments(
                3,
                (0..8u32).filter(|&y| {
                    members[y as usize] && hamming_depth(&members, y) == Some(i as u32 + 1)
                }),
            );
            ensure(*layer == stratum, || {
                format!("layer {i} differs from depth stratum for {mask:08b}")
            })?;
        }
        let covered: usize = p.layers.iter().map(ModelSet::len).sum();
        ensure(covered == x.len(), || {
            format!("layers do not cover {mask:08b}")
        })?;
        let phi = parse_formula(&cnf_text(&vars, &members), &u).map_err(|e| e.to_string())?;
        let fp = peel_formula(&phi, &u, &Hamming).map_err(|e| e.to_string())?;
        ensure(fp.peeling == p, || {
            format!("set and formula peeling differ for {mask:08b}")
        })?;
        sets += 1;
    }
    ensure(sets == 254, || format!("{sets} sets"))?;

    let vars = var_names(8);
    let u = Universe::new(&vars).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let mut formulas = 0;
    while formulas < 200 {
        let text = random_formula(&mut rng, 8, 6);
        let phi = parse_formula(&text, &u).map_err(|e| e.to_string())?;
        let x = models(&phi, &u);
        if x.is_empty() {
            continue;
        }
        let p = peel(&x, &Hamming).map_err(|e| e.to_string())?;
        let fp = peel_formula(&phi, &u, &Hamming).map_err(|e| e.to_string())?;
        ensure(fp.peeling == p, || {
            format!("set and formula peeling differ for {text}")
        })?;
        let mut union = ModelSet::empty(8);
        for l in &p.layers {
            ensure(!l.is_empty() && l.is_disjoint(&union), || {
                format!("layers overlap for {text}")
            })?;
            union = union.union(l);
        }
        ensure(union == x, || format!("layers do not cover {text}"))?;
        formulas += 1;
    }
    Ok("254 sets over 3 variables: layers = depth strata, set = formula route; 200 formulas over 8 variables agree".into())
}

fn order_independence() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let mut runs = 0;
    for name in DIAGRAMS {
        let d = diagram(name);
        for source in 0..d.len() {
            let base = d
                .infer_from(source, &InferOptions::default(), None)
                .map_err(|e| e.to_string())?;
            for _ in 0..20 {
                let order = random_topological_order(&mut rng, &d);
                let r = d
                    .infer_from(source, &InferOptions::default(), Some(&order))
                    .map_err(|e| e.to_string())?;
                ensure(
                    r.targets == base.targets && r.canonical_cells() == base.canonical_cells(),
                    || {
                        format!(
                            "{name} from {} differs under order {order:?}",
                            d.name(source)
                        )
                    },
                )?;
                runs += 1;
            }
        }
    }
    Ok(format!("{runs} randomized orders, identical results"))
}

fn determinism() -> Check {
    let f = |n: &str| fixture(n).to_string_lossy().into_owned();
    let mut commands: Vec<Vec<String>> = Vec::new();
    for s in [
        "absolute.pref",
        "non_trans.pref",
        "trans_no_rank.pref",
        "flat.pref",
    ] {
        commands.push(vec!["structure-check".into(), f(s)]);
    }
    for (d, src) in [
        ("tweety.dia", "D"),
        ("nixon.dia", "U"),
        ("extended_nixon.dia", "Z"),
        ("up_down.dia", "Z"),
        ("two_nixon.dia", "U"),
    ] {
        commands.push(vec!["infer".into(), f(d), src.into(), "--explain".into()]);
    }
    commands.push(vec![
        "core".into(),
        "--vars".into(),
        "p,q,r".into(),
        "--formula".into(),
        "p | q".into(),
    ]);
    for extra in [&[][..], &["--ignore-hypotheses"][..]] {
        let mut c: Vec<String> = [
            "verify",
            "all",
            "--max-size",
            "6",
            "--samples",
            "300",
            "--seed",
            "42",
        ]
        .iter()
        .map(|s| s.to_string())
        .collect();
        c.extend(extra.iter().map(|s| s.to_string()));
        commands.push(c);
    }
    for args in &commands {
        let run = || {
            Command::new(env!("CARGO_BIN_EXE_sizelogic"))
                .arg("--json")
                .args(args)
                .output()
                .unwrap()
        };
        let (a, b) = (run(), run());
        ensure(a.status.success(), || {
            format!("{args:?} exited with {:?}", a.status.code())
        })?;
        ensure(a.stdout == b.stdout && !a.stdout.is_empty(), || {
            format!("{args:?} output differs between runs")
        })?;
    }
    Ok(format!(
        "{} commands byte-identical across two runs",
        commands.len()
    ))
}

#[test]
fn acceptance() {
    let results = [
        criterion(
            1,
            "worked examples",
            Duration::from_secs(1),
            worked_examples,
        ),
        criterion(
            2,
            "exhaustive theorem sweep",
            Duration::from_secs(60),
            theorem_sweep,
        ),
        criterion(
            3,
            "triangle specificity sweep",
            Duration::from_secs(30),
            triangle_sweep,
        ),
        criterion(
            4,
            "core equivalence",
            Duration::from_secs(30),
            core_equivalence,
        ),
        criterion(
            5,
            "order independence",
            Duration::from_secs(5),
            order_independence,
        ),
        criterion(6, "json determinism", Duration::from_secs(60), determinism),
    ];
    let failed: Vec<usize> = results
        .iter()
        .enumerate()
        .filter(|(_, &ok)| !ok)
        .map(|(i, _)| i + 1)
        .collect();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
