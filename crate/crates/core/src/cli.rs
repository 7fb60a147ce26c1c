//! Command-line front end.
//!
//! [`run`] parses arguments, executes one command and returns the process
//! exit code: 0 on success, 1 when a verification sweep finds a
//! counterexample, 2 on input errors.

use std::fs;
use std::io::{self, Read, Write};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::core_revision::{
    self, depth_set, parse_formula, peel, peel_formula, Depth, Formula, Hamming, ModelSet, Universe,
};
use crate::inheritance::{Fraction, InferOptions, InheritanceDiagram, TargetResult};
use crate::prefstruct::{PreferentialStructure, Subset};
use crate::size_algebra::{Fact, Hypotheses, SizeAlgebra, SizeVerdict, VERIFY_MAX_ELEMENTS};
use crate::sweep::{self, SweepConfig, DEFAULT_SEED, EXHAUSTIVE_CAP};

pub const EXIT_OK: i32 = 0;
pub const EXIT_COUNTEREXAMPLE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

/// Largest structure size enumerated exhaustively unless asked otherwise.
const DEFAULT_EXHAUSTIVE: usize = 4;

#[derive(Debug, Parser)]
#[command(
    name = "sizelogic",
    version,
    about = "Size-based nonmonotonic reasoning toolkit"
)]
struct Cli {
    /// Machine-readable JSON output.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Report structural properties and coherence conditions of a structure.
    StructureCheck {
        /// Structure file, or `-` for stdin.
        path: String,
    },
    /// Size queries: classify a set, or compare two sets with < or <'.
    Size {
        path: String,
        #[arg(long, value_enum, default_value = "classify")]
        mode: SizeMode,
        /// Comma-separated element list.
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        #[arg(long)]
        b: Option<String>,
        /// Reference set; defaults to the universe for `classify` and to
        /// A ∪ B for comparisons.
        #[arg(long)]
        x: Option<String>,
    },
    /// Check facts over exhaustive and sampled structure corpora.
    Verify {
        /// Fact ids (e.g. coher, less-trans) or `all`.
        #[arg(default_value = "all")]
        facts: Vec<String>,
        #[arg(long, default_value_t = 4)]
        max_size: usize,
        /// Enumerate all structures up to this size (default: min(max-size, 4)).
        #[arg(long)]
        exhaustive: Option<usize>,
        /// Seeded random structures of size 2..=max-size.
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Also check facts outside their hypothesis class.
        #[arg(long)]
        ignore_hypotheses: bool,
        /// Exit 1 on counterexamples outside the hypothesis class too.
        #[arg(long)]
        strict: bool,
    },
    /// Inheritance inference from a source node.
    Infer {
        /// Diagram file, or `-` for stdin.
        path: String,
        source: String,
        #[arg(long)]
        target: Option<String>,
        /// Print the per-cell reasoning trace.
        #[arg(long)]
        explain: bool,
        /// Halves created by a split do not inherit the split node's own arrows.
        #[arg(long)]
        no_split_inheritance: bool,
    },
    /// Depth core and peeling of a formula's models (Hamming distance).
    Core {
        /// Comma-separated variable list; the first is the leftmost bit.
        #[arg(long)]
        vars: String,
        #[arg(long, allow_hyphen_values = true)]
        formula: String,
        #[arg(long, default_value_t = 2)]
        m: u32,
        #[arg(long, value_enum, default_value = "both")]
        method: CoreMethod,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SizeMode {
    Classify,
    Less,
    LessPrime,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CoreMethod {
    Depth,
    Peel,
    Both,
}

/// Output of a command: text lines or a JSON document, plus exit code.
struct Report {
    text: Vec<String>,
    json: Value,
    code: i32,
}

impl Report {
    fn ok(text: Vec<String>, json: Value) -> Self {
        Report {
            text,
            json,
            code: EXIT_OK,
        }
    }
}

/// Runs the CLI on `args` (including the program name).
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    let result = match cli.command {
        Command::StructureCheck { path } => structure_check(&path),
        Command::Size {
            path,
            mode,
            a,
            b,
            x,
        } => size(&path, mode, &a, b.as_deref(), x.as_deref()),
        Command::Verify {
            facts,
            max_size,
            exhaustive,
            samples,
            seed,
            ignore_hypotheses,
            strict,
        } => {
            let config = SweepConfig {
                max_size,
                exhaustive_max: exhaustive.unwrap_or(max_size.min(DEFAULT_EXHAUSTIVE)),
                samples,
                seed,
                hypotheses: if ignore_hypotheses {
                    Hypotheses::Ignore
                } else {
                    Hypotheses::Enforce
                },
            };
            verify(&facts, &config, strict)
        }
        Command::Infer {
            path,
            source,
            target,
            explain,
            no_split_inheritance,
        } => infer(
            &path,
            &source,
            target.as_deref(),
            explain,
            !no_split_inheritance,
        ),
        Command::Core {
            vars,
            formula,
            m,
            method,
        } => core(&vars, &formula, m, method),
    };
    match result {
        Ok(report) => {
            let written = if cli.json {
                let doc =
                    serde_json::to_string_pretty(&report.json).expect("JSON values serialize");
                writeln!(out, "{doc}")
            } else {
                report.text.iter().try_for_each(|l| writeln!(out, "{l}"))
            };
            if let Err(e) = written {
                let _ = writeln!(err, "error: {e}");
                return EXIT_INPUT;
            }
            report.code
        }
        Err(msg) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_INPUT
        }
    }
}

fn read_input(path: &str) -> Result<String, String> {
    if path == "-" {
        let mut s = String::new();
        io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| format!("reading stdin: {e}"))?;
        Ok(s)
    } else {
        fs::read_to_string(path).map_err(|e| format!("{path}: {e}"))
    }
}

fn load_structure(path: &str) -> Result<PreferentialStructure, String> {
    PreferentialStructure::parse(&read_input(path)?).map_err(|e| format!("{path}: {e}"))
}

fn parse_set(s: &PreferentialStructure, list: &str) -> Result<Subset, String> {
    let names: Vec<&str> = list
        .split(',')
        .map(str::trim)
        .filter(|n| !n.is_empty())
        .collect();
    s.subset_from_names(&names).map_err(|e| e.to_string())
}

fn structure_check(path: &str) -> Result<Report, String> {
    let s = load_structure(path)?;
    if s.len() > VERIFY_MAX_ELEMENTS {
        return Err(format!(
            "structure has {} elements, checks support at most {VERIFY_MAX_ELEMENTS}",
            s.len()
        ));
    }
    let alg = SizeAlgebra::new(&s);
    let transitive = s.is_transitive();
    let ranked = s.is_ranked();
    let smooth = s.smoothness_witness();

    let mut text = vec![
        format!("elements: {}", s.names().join(" ")),
        format!("transitive: {transitive}"),
    ];
    let smooth_json = match smooth {
        None => {
            text.push("smooth: true".into());
            json!({ "holds": true, "witness": null })
        }
        Some((a, x)) => {
            text.push(format!(
                "smooth: false (in {}, {} is beaten but not by a minimal element)",
                s.show(a),
                s.name(x)
            ));
            json!({ "holds": false, "witness": { "set": s.names_of(a), "element": s.name(x) } })
        }
    };
    text.push(format!("ranked: {ranked}"));

    let checks: [(&str, SizeVerdict); 5] = [
        ("Coh1", alg.check_coh1()),
        ("Coh2", alg.check_coh2()),
        ("muPR", alg.check_mu_pr()),
        ("muCUM", alg.check_mu_cum()),
        ("mu=", alg.check_mu_eq()),
    ];
    let mut checks_json = serde_json::Map::new();
    for (name, verdict) in &checks {
        text.push(format!("{name}: {}", verdict.render(&s)));
        checks_json.insert(name.to_string(), verdict.to_json(&s));
    }
    let ranks = if ranked { s.ranks().ok() } else { None };
    if let Some(r) = &ranks {
        let shown: Vec<String> = r
            .iter()
            .enumerate()
            .map(|(i, k)| format!("{}={k}", s.name(i)))
            .collect();
        text.push(format!("ranks: {}", shown.join(" ")));
    }
    let json = json!({
        "elements": s.names(),
        "transitive": transitive,
        "smooth": smooth_json,
        "ranked": ranked,
        "ranks": ranks,
        "checks": checks_json,
    });
    Ok(Report::ok(text, json))
}

fn size(
    path: &str,
    mode: SizeMode,
    a: &str,
    b: Option<&str>,
    x: Option<&str>,
) -> Result<Report, String> {
    let s = load_structure(path)?;
    let alg = SizeAlgebra::new(&s);
    let a = parse_set(&s, a)?;
    let x = x.map(|x| parse_set(&s, x)).transpose()?;
    if mode == SizeMode::Classify {
        let x = x.unwrap_or(s.universe());
        let class = alg.classify(x, a).map_err(|e| e.to_string())?;
        let text = vec![format!("{} in {}: {class}", s.show(a), s.show(x))];
        let json = json!({
            "mode": "classify",
            "a": s.names_of(a),
            "x": s.names_of(x),
            "class": class,
        });
        return Ok(Report::ok(text, json));
    }
    let b = parse_set(&s, b.ok_or("comparison modes need --b")?)?;
    let reference = x.unwrap_or(a | b);
    let (value, symbol, name) = match mode {
        SizeMode::Less => (alg.less(a, b, Some(reference)), "<", "less"),
        _ => (alg.less_prime(a, b, Some(reference)), "<'", "less-prime"),
    };
    let value = value.map_err(|e| e.to_string())?;
    let text = vec![format!(
        "{} {symbol} {} in {}: {value}",
        s.show(a),
        s.show(b),
        s.show(reference)
    )];
    let json = json!({
        "mode": name,
        "a": s.names_of(a),
        "b": s.names_of(b),
        "x": s.names_of(reference),
        "result": value,
    });
    Ok(Report::ok(text, json))
}

fn parse_facts(ids: &[String]) -> Result<Vec<Fact>, String> {
    if ids.iter().any(|f| f.eq_ignore_ascii_case("all")) {
        return Ok(Fact::ALL.to_vec());
    }
    let mut facts = ids
        .iter()
        .map(|f| f.parse::<Fact>())
        .collect::<Result<Vec<_>, _>>()?;
    facts.sort();
    facts.dedup();
    Ok(facts)
}

fn verify(ids: &[String], config: &SweepConfig, strict: bool) -> Result<Report, String> {
    let facts = parse_facts(ids)?;
    if config.max_size == 0 || config.max_size > VERIFY_MAX_ELEMENTS {
        return Err(format!(
            "--max-size must be between 1 and {VERIFY_MAX_ELEMENTS}"
        ));
    }
    if config.exhaustive_max > EXHAUSTIVE_CAP {
        return Err(format!("--exhaustive is capped at {EXHAUSTIVE_CAP}"));
    }
    let reports = sweep::run(&facts, config);
    let samples = if config.max_size >= 2 {
        config.samples
    } else {
        0
    };
    let mut code = EXIT_OK;
    let mut text = vec![format!(
        "corpus: all structures up to {} elements, {} samples up to {} elements, seed {}{}",
        config.exhaustive_max.min(config.max_size),
        samples,
        config.max_size,
        config.seed,
        if config.hypotheses == Hypotheses::Ignore {
            ", hypotheses ignored"
        } else {
            ""
        }
    )];
    for r in &reports {
        if r.violations > 0 || (strict && r.expected_failures > 0) {
            code = EXIT_COUNTEREXAMPLE;
        }
        let mut line = format!(
            "{}: {} structures, {} held, {} vacuous, {} violations",
            r.fact, r.structures, r.held, r.vacuous, r.violations
        );
        if config.hypotheses == Hypotheses::Ignore {
            line.push_str(&format!(", {} outside hypotheses", r.expected_failures));
        }
        text.push(line);
        for c in &r.examples {
            let kind = if c.in_hypothesis {
                "counterexample"
            } else {
                "outside hypotheses"
            };
            text.push(format!("  {kind}: {}", c.witness));
            text.push(format!(
                "    on: {}",
                c.structure.trim_end().replace('\n', "; ")
            ));
        }
    }
    let json = json!({
        "config": {
            "max_size": config.max_size,
            "exhaustive": config.exhaustive_max.min(config.max_size),
            "samples": samples,
            "seed": config.seed,
            "hypotheses": if config.hypotheses == Hypotheses::Ignore { "ignore" } else { "enforce" },
            "strict": strict,
        },
        "reports": reports,
        "ok": code == EXIT_OK,
    });
    Ok(Report { text, json, code })
}

fn fraction(f: Fraction) -> String {
    format!("{}/{}", f.numer(), f.denom())
}

fn infer(
    path: &str,
    source: &str,
    target: Option<&str>,
    explain: bool,
    split_inheritance: bool,
) -> Result<Report, String> {
    let d = InheritanceDiagram::parse(&read_input(path)?).map_err(|e| format!("{path}: {e}"))?;
    let src = d.node(source).map_err(|e| e.to_string())?;
    let tgt = target
        .map(|t| d.node(t))
        .transpose()
        .map_err(|e| e.to_string())?;
    let opts = InferOptions {
        inherit_into_split_halves: split_inheritance,
    };
    let result = d.infer_from(src, &opts, None).map_err(|e| e.to_string())?;

    let shown: Vec<&TargetResult> = match tgt {
        Some(t) => vec![result.target(t)],
        None => result.targets.iter().collect(),
    };
    let mut text = vec![format!("source: {source}")];
    let mut targets_json = Vec::new();
    for t in &shown {
        text.push(format!(
            "{}: {} (in {}, out {}, unknown {})",
            d.name(t.target),
            t.status,
            fraction(t.in_fraction),
            fraction(t.out_fraction),
            fraction(t.unknown_fraction)
        ));
        targets_json.push(json!({
            "node": d.name(t.target),
            "status": t.status,
            "in": fraction(t.in_fraction),
            "out": fraction(t.out_fraction),
            "unknown": fraction(t.unknown_fraction),
        }));
    }
    let cells = result.canonical_cells();
    let mut cells_json = Vec::new();
    if result.cells.len() > 1 {
        text.push(format!("cells: {}", cells.len()));
    }
    for (depth, membership) in &cells {
        let f = Fraction::new(1, 1u64 << depth);
        let entries: serde_json::Map<String, Value> = membership
            .iter()
            .enumerate()
            .map(|(i, m)| (d.name(i).to_string(), json!(m)))
            .collect();
        if result.cells.len() > 1 {
            let row: Vec<String> = membership
                .iter()
                .enumerate()
                .map(|(i, m)| format!("{}={}", d.name(i), json!(m).as_str().unwrap_or("?")))
                .collect();
            text.push(format!("  {}: {}", fraction(f), row.join(" ")));
        }
        cells_json.push(json!({ "fraction": fraction(f), "membership": entries }));
    }
    let mut json = json!({
        "source": source,
        "targets": targets_json,
        "cells": cells_json,
    });
    if explain {
        let events: Vec<String> = result
            .trace
            .iter()
            .filter(|e| tgt.is_none_or(|t| e.target() == t))
            .map(|e| d.render_event(e))
            .collect();
        text.push("trace:".into());
        text.extend(events.iter().map(|e| format!("  {e}")));
        json["trace"] = json!(events);
    }
    Ok(Report::ok(text, json))
}

fn show_depth(d: Depth) -> Value {
    match d {
        Depth::Finite(k) => json!(k),
        Depth::Infinite => json!("inf"),
    }
}

fn set_json(u: &Universe, s: &ModelSet) -> Value {
    json!(s.iter().map(|x| u.show_assignment(x)).collect::<Vec<_>>())
}

fn core(vars: &str, formula: &str, m: u32, method: CoreMethod) -> Result<Report, String> {
    let u = Universe::parse_list(vars).map_err(|e| e.to_string())?;
    let phi: Formula = parse_formula(formula, &u).map_err(|e| e.to_string())?;
    let xs = core_revision::models(&phi, &u);
    if xs.is_empty() {
        return Err(core_revision::CoreError::UnsatisfiableInput.to_string());
    }
    let mut text = vec![
        format!("formula: {}", phi.render(&u)),
        format!("variables: {}", u.vars().join(",")),
        format!("models: {}", u.show_set(&xs)),
    ];
    let mut json = json!({
        "formula": phi.render(&u),
        "variables": u.vars(),
        "models": set_json(&u, &xs),
    });

    let err = |e: core_revision::CoreError| e.to_string();
    let mut depth_core = None;
    if method != CoreMethod::Peel {
        let depth = depth_set(&xs, &Hamming).map_err(err)?;
        let c = core_revision::core(&xs, m, &Hamming).map_err(err)?;
        text.push(format!("depth: {depth}"));
        let mut strata = Vec::new();
        if let Depth::Finite(top) = depth {
            for k in 1..=top {
                let stratum = ModelSet::from_assignments(
                    u.len(),
                    xs.iter().filter(|&x| {
                        core_revision::depth_point(&xs, x, &Hamming) == Ok(Depth::Finite(k))
                    }),
                );
                text.push(format!("  depth {k}: {}", u.show_set(&stratum)));
                strata.push(set_json(&u, &stratum));
            }
        }
        text.push(format!("core (m={m}): {}", u.show_set(&c)));
        json["depth"] = show_depth(depth);
        json["strata"] = json!(strata);
        json["m"] = json!(m);
        json["core"] = set_json(&u, &c);
        depth_core = Some(c);
    }
    if method != CoreMethod::Depth {
        let p = peel(&xs, &Hamming).map_err(err)?;
        let fp = peel_formula(&phi, &u, &Hamming).map_err(err)?;
        text.push("peel layers:".into());
        for (i, z) in p.layers.iter().enumerate() {
            text.push(format!("  Z{i}: {}", u.show_set(z)));
        }
        let idx = p.last().div_ceil(2);
        text.push(format!("peel core (X{idx}): {}", u.show_set(&p.core)));
        let formula_agrees = fp.peeling == p;
        text.push(format!("formula route agrees: {formula_agrees}"));
        json["layers"] = json!(p.layers.iter().map(|z| set_json(&u, z)).collect::<Vec<_>>());
        json["peel_core"] = set_json(&u, &p.core);
        json["formula_route_agrees"] = json!(formula_agrees);
        if let Some(c) = &depth_core {
            let same = *c == p.core;
            text.push(format!(
                "peel core {} core with m={m}",
                if same { "equals" } else { "differs from" }
            ));
            json["peel_core_equals_core"] = json!(same);
        }
    }
    Ok(Report::ok(text, json))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_cli(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let mut full = vec!["sizelogic"];
        full.extend_from_slice(args);
        let code = run(full, &mut out, &mut err);
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn core_command_on_disjunction() {
        let (code, out, _) =
            run_cli(&["core", "--vars", "p,q,r", "--formula", "p | q", "--m", "1"]);
        assert_eq!(code, 0);
        assert!(out.contains("depth: 2"), "{out}");
        assert!(out.contains("core (m=1): {110, 111}"), "{out}");
        assert!(out.contains("Z0: {100, 010, 101, 011}"), "{out}");
        assert!(out.contains("formula route agrees: true"), "{out}");
    }

    #[test]
    fn input_errors_exit_2() {
        assert_eq!(
            run_cli(&["core", "--vars", "p", "--formula", "p & !p"]).0,
            2
        );
        assert_eq!(run_cli(&["core", "--vars", "p", "--formula", "p &"]).0, 2);
        assert_eq!(run_cli(&["structure-check", "/nonexistent/file"]).0, 2);
        assert_eq!(run_cli(&["no-such-command"]).0, 2);
        assert_eq!(run_cli(&["verify", "bogus"]).0, 2);
        assert_eq!(run_cli(&["verify", "--max-size", "9"]).0, 2);
    }

    #[test]
    fn help_exits_0() {
        let (code, out, _) = run_cli(&["--help"]);
        assert_eq!(code, 0);
        assert!(out.contains("structure-check"));
    }

    #[test]
    fn fractions_are_exact() {
        assert_eq!(fraction(Fraction::new(2, 4)), "1/2");
        assert_eq!(fraction(Fraction::from_integer(1)), "1/1");
        assert_eq!(fraction(Fraction::from_integer(0)), "0/1");
    }
}
