//! Fact verification sweeps over corpora of structures.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::generate::{all_structures, random_structure, StructureKind};
use crate::prefstruct::PreferentialStructure;
use crate::size_algebra::{
    Fact, Hypotheses, SizeAlgebra, SizeError, SizeVerdict, VERIFY_MAX_ELEMENTS,
};

pub const DEFAULT_SEED: u64 = 42;

/// Enumerating every structure beyond five elements is infeasible.
pub const EXHAUSTIVE_CAP: usize = 5;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepConfig {
    /// Largest structure size in the corpus.
    pub max_size: usize,
    /// Every structure up to this size is enumerated.
    pub exhaustive_max: usize,
    /// Random structures of size `2..=max_size`.
    pub samples: usize,
    pub seed: u64,
    pub hypotheses: Hypotheses,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            max_size: 4,
            exhaustive_max: 4,
            samples: 0,
            seed: DEFAULT_SEED,
            hypotheses: Hypotheses::Enforce,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub structure: String,
    pub witness: String,
    /// Whether the structure satisfies the fact's hypotheses.
    pub in_hypothesis: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FactReport {
    pub fact: String,
    pub structures: usize,
    pub held: usize,
    /// Hypothesis failed (including unranked structures for rank facts).
    pub vacuous: usize,
    /// Counterexamples on structures satisfying the hypotheses.
    pub violations: usize,
    /// Counterexamples outside the hypothesis class (only with
    /// [`Hypotheses::Ignore`]).
    pub expected_failures: usize,
    /// First few counterexamples, in corpus order.
    pub examples: Vec<Counterexample>,
}

impl FactReport {
    pub fn clean(&self) -> bool {
        self.violations == 0
    }
}

const KEPT_EXAMPLES: usize = 3;

/// The corpus: all structures up to `exhaustive_max` elements, then
/// `samples` seeded random ones cycling through DAG, transitive and ranked
/// shapes.
pub fn corpus(config: &SweepConfig) -> Vec<PreferentialStructure> {
    let exhaustive = config
        .exhaustive_max
        .min(config.max_size)
        .min(EXHAUSTIVE_CAP);
    let mut out: Vec<PreferentialStructure> = (1..=exhaustive).flat_map(all_structures).collect();
    if config.max_size >= 2 {
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        for i in 0..config.samples {
            let n = rng.gen_range(2..=config.max_size);
            let kind = StructureKind::ALL[i % StructureKind::ALL.len()];
            out.push(random_structure(&mut rng, n, kind));
        }
    }
    out
}

enum Outcome {
    Held,
    Vacuous,
    Violation(String),
    Expected(String),
}

fn evaluate(s: &PreferentialStructure, fact: Fact, hyp: Hypotheses) -> Outcome {
    let alg = SizeAlgebra::new(s);
    let enforced = alg.verify_fact(fact);
    match enforced {
        Ok(SizeVerdict::Holds) => Outcome::Held,
        Ok(SizeVerdict::Fails(w)) => Outcome::Violation(w.render(s)),
        Ok(SizeVerdict::Vacuous(_)) | Err(SizeError::NotRanked) => {
            if hyp == Hypotheses::Enforce {
                return Outcome::Vacuous;
            }
            match alg.verify_fact_with(fact, Hypotheses::Ignore) {
                Ok(SizeVerdict::Fails(w)) => Outcome::Expected(w.render(s)),
                _ => Outcome::Vacuous,
            }
        }
        Err(e) => panic!("verification of {fact} failed on {s:?}: {e}"),
    }
}

/// Runs every fact in `facts` over the corpus described by `config`.
pub fn run(facts: &[Fact], config: &SweepConfig) -> Vec<FactReport> {
    assert!(
        config.max_size <= VERIFY_MAX_ELEMENTS,
        "max_size {} exceeds {VERIFY_MAX_ELEMENTS}",
        config.max_size
    );
    let structures = corpus(config);
    let outcomes: Vec<Vec<Outcome>> = structures
        .par_iter()
        .map(|s| {
            facts
                .iter()
                .map(|&f| evaluate(s, f, config.hypotheses))
                .collect()
        })
        .collect();

    facts
        .iter()
        .enumerate()
        .map(|(k, fact)| {
            let mut report = FactReport {
                fact: fact.id().to_string(),
                structures: structures.len(),
                held: 0,
                vacuous: 0,
                violations: 0,
                expected_failures: 0,
                examples: Vec::new(),
            };
            for (s, row) in structures.iter().zip(&outcomes) {
                let (witness, in_hypothesis) = match &row[k] {
                    Outcome::Held => {
                        report.held += 1;
                        continue;
                    }
                    Outcome::Vacuous => {
                        report.vacuous += 1;
                        continue;
                    }
                    Outcome::Violation(w) => {
                        report.violations += 1;
                        (w, true)
                    }
                    Outcome::Expected(w) => {
                        report.expected_failures += 1;
                        (w, false)
                    }
                };
                if report.examples.len() < KEPT_EXAMPLES {
                    report.examples.push(Counterexample {
                        structure: s.to_text(),
                        witness: witness.clone(),
                        in_hypothesis,
                    });
                }
            }
            report
        })
        .collect()
}
