//! The filter/ideal size algebra generated by μ.
//!
//! Relative to a nonempty reference set `X`, a subset `A ⊆ X` is
//!
//! * BIG (in the filter F(X)) iff `μ(X) ⊆ A`,
//! * SMALL (in the ideal I(X)) iff `A ∩ μ(X) = ∅`,
//! * MEDIUM otherwise.
//!
//! On top of the three-valued classification sit the size relations
//! `A <_X B` (A small, B big) and the weaker `A <'_X B`, the coherence
//! conditions (Coh1)/(Coh2), the μ-rules (μPR), (μCUM), (μ=), and a set of
//! exhaustive verifiers that quantify each result about these notions over
//! every subset of a structure and return a counterexample when one exists.

use std::fmt;
use std::str::FromStr;

use fixedbitset::FixedBitSet;
use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::prefstruct::{all_subsets, PreferentialStructure, StructureError, Subset};

/// Structures above this size are rejected by [`SizeAlgebra::verify_fact`];
/// several facts quantify over triples of subsets.
pub const VERIFY_MAX_ELEMENTS: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SizeError {
    #[error("set is not a subset of the reference set")]
    NotASubset,
    #[error("reference set is empty")]
    EmptyReference,
    #[error("the structure is not ranked")]
    NotRanked,
    #[error("structure has {0} elements, verification supports at most {VERIFY_MAX_ELEMENTS}")]
    TooLarge(usize),
    #[error(transparent)]
    Structure(#[from] StructureError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum SizeClass {
    Big,
    Medium,
    Small,
}

impl fmt::Display for SizeClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SizeClass::Big => "BIG",
            SizeClass::Medium => "MEDIUM",
            SizeClass::Small => "SMALL",
        })
    }
}

/// The verifiable results about the size algebra.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Fact {
    /// Big subsets can replace their supersets in size comparisons.
    Subset,
    /// (Coh1) ⟺ (μPR); (μCUM) ⟹ (Coh2); (Coh1)+(Coh2) ⟹ (μCUM).
    Coher,
    /// `<` is transitive on smooth structures.
    LessTrans,
    /// `<'` characterised through ranks on ranked structures.
    Rk,
    /// `<'` is transitive on ranked structures.
    TransRank,
    /// `<` survives replacing the right side by a medium part and the left
    /// side by a non-big part.
    LessM,
    /// Specificity triangle and the impossibility of mutual `<`.
    TriangleCorollary,
}

impl Fact {
    pub const ALL: [Fact; 7] = [
        Fact::Subset,
        Fact::Coher,
        Fact::LessTrans,
        Fact::Rk,
        Fact::TransRank,
        Fact::LessM,
        Fact::TriangleCorollary,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Fact::Subset => "SUBSET",
            Fact::Coher => "COHER",
            Fact::LessTrans => "LESS_TRANS",
            Fact::Rk => "RK",
            Fact::TransRank => "TRANS_RANK",
            Fact::LessM => "LESS_M",
            Fact::TriangleCorollary => "TRIANGLE_COROLLARY",
        }
    }

    /// Whether the fact is only meaningful for ranked structures.
    pub fn needs_ranking(self) -> bool {
        matches!(self, Fact::Rk | Fact::TransRank | Fact::LessM)
    }
}

impl fmt::Display for Fact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Fact {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let norm = s.trim().to_ascii_uppercase().replace('-', "_");
        Fact::ALL
            .into_iter()
            .find(|f| f.id() == norm)
            .ok_or_else(|| format!("unknown fact `{s}`"))
    }
}

/// Whether a verifier checks a fact's hypotheses before its statement.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Hypotheses {
    /// Structures outside the hypothesis class yield `Vacuous` (or
    /// `NotRanked` for rank-dependent facts).
    #[default]
    Enforce,
    /// Check the statement on every structure.
    Ignore,
}

/// Counterexample: named subsets plus a short description.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub sets: Vec<(&'static str, Subset)>,
    pub note: String,
}

impl Witness {
    fn new(note: impl Into<String>, sets: &[(&'static str, Subset)]) -> Self {
        Witness {
            sets: sets.to_vec(),
            note: note.into(),
        }
    }

    pub fn get(&self, label: &str) -> Option<Subset> {
        self.sets.iter().find(|(l, _)| *l == label).map(|&(_, s)| s)
    }

    pub fn render(&self, s: &PreferentialStructure) -> String {
        let sets: Vec<String> = self
            .sets
            .iter()
            .map(|(l, set)| format!("{l}={}", s.show(*set)))
            .collect();
        format!("{} [{}]", self.note, sets.join(", "))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SizeVerdict {
    Holds,
    /// The fact's hypothesis fails, so it says nothing about this structure.
    Vacuous(String),
    Fails(Witness),
}

impl SizeVerdict {
    /// True for `Holds` and `Vacuous`.
    pub fn holds(&self) -> bool {
        !matches!(self, SizeVerdict::Fails(_))
    }

    pub fn is_vacuous(&self) -> bool {
        matches!(self, SizeVerdict::Vacuous(_))
    }

    pub fn witness(&self) -> Option<&Witness> {
        match self {
            SizeVerdict::Fails(w) => Some(w),
            _ => None,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            SizeVerdict::Holds => "holds",
            SizeVerdict::Vacuous(_) => "vacuous",
            SizeVerdict::Fails(_) => "fails",
        }
    }

    pub fn to_json(&self, s: &PreferentialStructure) -> Value {
        match self {
            SizeVerdict::Holds => json!({ "holds": true, "witness": null }),
            SizeVerdict::Vacuous(why) => json!({ "holds": true, "vacuous": why, "witness": null }),
            SizeVerdict::Fails(w) => {
                let sets: serde_json::Map<String, Value> = w
                    .sets
                    .iter()
                    .map(|(l, set)| (l.to_string(), json!(s.names_of(*set))))
                    .collect();
                json!({ "holds": false, "witness": { "note": w.note, "sets": sets } })
            }
        }
    }

    pub fn render(&self, s: &PreferentialStructure) -> String {
        match self {
            SizeVerdict::Holds => "holds".into(),
            SizeVerdict::Vacuous(why) => format!("vacuous ({why})"),
            SizeVerdict::Fails(w) => format!("FAILS: {}", w.render(s)),
        }
    }
}

fn check(ok: bool, witness: impl FnOnce() -> Witness) -> Result<(), Witness> {
    if ok {
        Ok(())
    } else {
        Err(witness())
    }
}

fn verdict(r: Result<(), Witness>) -> SizeVerdict {
    match r {
        Ok(()) => SizeVerdict::Holds,
        Err(w) => SizeVerdict::Fails(w),
    }
}

/// A binary relation on the subsets of an `n`-element universe, with
/// successor lists for fast transitivity checks.
struct SubsetRelation {
    size: usize,
    bits: FixedBitSet,
    succ: Vec<Vec<u32>>,
}

impl SubsetRelation {
    fn build(n: usize, pred: impl Fn(Subset, Subset) -> bool) -> Self {
        let size = 1usize << n;
        let mut bits = FixedBitSet::with_capacity(size * size);
        let mut succ = vec![Vec::new(); size];
        for (a, row) in succ.iter_mut().enumerate() {
            for b in 0..size {
                if pred(Subset::from_bits(a as u32), Subset::from_bits(b as u32)) {
                    bits.insert(a * size + b);
                    row.push(b as u32);
                }
            }
        }
        SubsetRelation { size, bits, succ }
    }

    fn holds(&self, a: u32, b: u32) -> bool {
        self.bits.contains(a as usize * self.size + b as usize)
    }

    /// First `(x, y, z)` with `x R y R z` but not `x R z`.
    fn intransitive_triple(&self) -> Option<(Subset, Subset, Subset)> {
        for x in 0..self.size as u32 {
            for &y in &self.succ[x as usize] {
                for &z in &self.succ[y as usize] {
                    if !self.holds(x, z) {
                        return Some((
                            Subset::from_bits(x),
                            Subset::from_bits(y),
                            Subset::from_bits(z),
                        ));
                    }
                }
            }
        }
        None
    }
}

/// `rk(b)` is strictly better (lower layer) than `rk(a)`; the empty set
/// has rank ∞.
fn rank_below(b: Option<usize>, a: Option<usize>) -> bool {
    match (b, a) {
        (Some(b), Some(a)) => b < a,
        (Some(_), None) => true,
        _ => false,
    }
}

/// Size notions of one structure, with μ tabulated over all subsets.
pub struct SizeAlgebra<'s> {
    s: &'s PreferentialStructure,
    mu: Vec<Subset>,
}

impl<'s> SizeAlgebra<'s> {
    pub fn new(s: &'s PreferentialStructure) -> Self {
        let mu = all_subsets(s.len()).map(|a| s.minimal(a)).collect();
        SizeAlgebra { s, mu }
    }

    pub fn structure(&self) -> &'s PreferentialStructure {
        self.s
    }

    fn n(&self) -> usize {
        self.s.len()
    }

    /// μ(A), with μ(∅) = ∅.
    pub fn mu(&self, a: Subset) -> Subset {
        self.mu[a.bits() as usize]
    }

    fn big(&self, x: Subset, a: Subset) -> bool {
        self.mu(x).is_subset_of(a)
    }

    fn small(&self, x: Subset, a: Subset) -> bool {
        a.is_disjoint(self.mu(x))
    }

    fn medium(&self, x: Subset, a: Subset) -> bool {
        !self.big(x, a) && !self.small(x, a)
    }

    fn class_of(&self, x: Subset, a: Subset) -> SizeClass {
        if self.big(x, a) {
            SizeClass::Big
        } else if self.small(x, a) {
            SizeClass::Small
        } else {
            SizeClass::Medium
        }
    }

    /// `A <_X B` without argument checks. Callers guarantee `X ≠ ∅`.
    fn less_in(&self, x: Subset, a: Subset, b: Subset) -> bool {
        self.small(x, a) && self.big(x, b)
    }

    fn less_prime_in(&self, x: Subset, a: Subset, b: Subset) -> bool {
        match self.class_of(x, b) {
            SizeClass::Big => !self.big(x, a),
            SizeClass::Medium => self.small(x, a),
            SizeClass::Small => false,
        }
    }

    /// `A < B` relative to `A ∪ B`; false when both are empty.
    fn less_default(&self, a: Subset, b: Subset) -> bool {
        let x = a | b;
        !x.is_empty() && self.less_in(x, a, b)
    }

    fn less_prime_default(&self, a: Subset, b: Subset) -> bool {
        let x = a | b;
        !x.is_empty() && self.less_prime_in(x, a, b)
    }

    fn reference(&self, a: Subset, b: Subset, x: Option<Subset>) -> Result<Subset, SizeError> {
        let x = x.unwrap_or(a | b);
        self.s.check_subset(x)?;
        if !a.is_subset_of(x) || !b.is_subset_of(x) {
            return Err(SizeError::NotASubset);
        }
        if x.is_empty() {
            return Err(SizeError::EmptyReference);
        }
        Ok(x)
    }

    /// Classifies `A` relative to the reference set `X`.
    pub fn classify(&self, x: Subset, a: Subset) -> Result<SizeClass, SizeError> {
        self.s.check_subset(x)?;
        if x.is_empty() {
            return Err(SizeError::EmptyReference);
        }
        if !a.is_subset_of(x) {
            return Err(SizeError::NotASubset);
        }
        Ok(self.class_of(x, a))
    }

    /// `A <_X B`: `A` is small and `B` is big in `X` (default `A ∪ B`).
    pub fn less(&self, a: Subset, b: Subset, x: Option<Subset>) -> Result<bool, SizeError> {
        let x = self.reference(a, b, x)?;
        Ok(self.less_in(x, a, b))
    }

    /// `A <'_X B`: `B` big and `A` not big, or `B` medium and `A` small.
    pub fn less_prime(&self, a: Subset, b: Subset, x: Option<Subset>) -> Result<bool, SizeError> {
        let x = self.reference(a, b, x)?;
        Ok(self.less_prime_in(x, a, b))
    }

    /// Length of the longest chain `B = C_0 ⊇ C_1 ⊇ .. ⊇ C_k = A` in which
    /// each `C_{i+1}` is small in `C_i`; 0 when `A` is not small in `B`.
    pub fn small_degree(&self, a: Subset, b: Subset) -> Result<usize, SizeError> {
        self.s.check_subset(b)?;
        if b.is_empty() {
            return Err(SizeError::EmptyReference);
        }
        if !a.is_subset_of(b) {
            return Err(SizeError::NotASubset);
        }
        let mut memo: Vec<Option<Option<usize>>> = vec![None; 1 << self.n()];
        Ok(self.chain_to(a, b, &mut memo).unwrap_or(0))
    }

    /// Longest small-step chain from `c` down to `a` (`a ⊆ c`), `None` if
    /// there is none.
    fn chain_to(
        &self,
        a: Subset,
        c: Subset,
        memo: &mut Vec<Option<Option<usize>>>,
    ) -> Option<usize> {
        if c == a {
            return Some(0);
        }
        if let Some(known) = memo[c.bits() as usize] {
            return known;
        }
        let m = self.mu(c);
        let best = if a.meets(m) {
            None
        } else {
            // next link: a ⊆ c' ⊆ c − μ(c)
            (c - m - a)
                .subsets()
                .filter_map(|extra| self.chain_to(a, a | extra, memo))
                .max()
                .map(|k| k + 1)
        };
        memo[c.bits() as usize] = Some(best);
        best
    }

    // ---- μ-rules and coherence -------------------------------------------

    /// (μPR): `X ⊆ Y ⟹ μ(Y) ∩ X ⊆ μ(X)`.
    pub fn check_mu_pr(&self) -> SizeVerdict {
        verdict(self.first_mu_pr_failure().map_or(Ok(()), |(x, y)| {
            Err(Witness::new("μ(Y) ∩ X ⊄ μ(X)", &[("X", x), ("Y", y)]))
        }))
    }

    fn first_mu_pr_failure(&self) -> Option<(Subset, Subset)> {
        for y in all_subsets(self.n()) {
            let my = self.mu(y);
            for x in y.subsets() {
                if !(my & x).is_subset_of(self.mu(x)) {
                    return Some((x, y));
                }
            }
        }
        None
    }

    /// (μCUM): `μ(X) ⊆ Y ⊆ X ⟹ μ(X) = μ(Y)`.
    pub fn check_mu_cum(&self) -> SizeVerdict {
        for x in all_subsets(self.n()) {
            let mx = self.mu(x);
            for rest in (x - mx).subsets() {
                let y = mx | rest;
                if self.mu(y) != mx {
                    return SizeVerdict::Fails(Witness::new(
                        "μ(X) ⊆ Y ⊆ X but μ(Y) ≠ μ(X)",
                        &[("X", x), ("Y", y)],
                    ));
                }
            }
        }
        SizeVerdict::Holds
    }

    /// (μ=): `X ⊆ Y, X ∩ μ(Y) ≠ ∅ ⟹ μ(X) = μ(Y) ∩ X`.
    pub fn check_mu_eq(&self) -> SizeVerdict {
        for y in all_subsets(self.n()) {
            let my = self.mu(y);
            for x in y.subsets() {
                if x.meets(my) && self.mu(x) != my & x {
                    return SizeVerdict::Fails(Witness::new(
                        "X ⊆ Y meets μ(Y) but μ(X) ≠ μ(Y) ∩ X",
                        &[("X", x), ("Y", y)],
                    ));
                }
            }
        }
        SizeVerdict::Holds
    }

    /// (Coh1): `X ⊆ Y ⟹ I(X) ⊆ I(Y)`, checked through its element form:
    /// the largest member of I(X) is `X − μ(X)`, so the condition reduces to
    /// (μPR).
    pub fn check_coh1(&self) -> SizeVerdict {
        verdict(self.first_mu_pr_failure().map_or(Ok(()), |(x, y)| {
            let a = x - self.mu(x);
            Err(Witness::new(
                "A ∈ I(X), X ⊆ Y, but A ∉ I(Y)",
                &[("A", a), ("X", x), ("Y", y)],
            ))
        }))
    }

    /// (Coh2): `A, B ∈ I(X), A ∩ B = ∅ ⟹ A ∈ I(X − B)`, checked as: for
    /// every `B` small in `X`, `μ(X − B) ⊆ μ(X)`.
    pub fn check_coh2(&self) -> SizeVerdict {
        for x in all_subsets(self.n()) {
            let mx = self.mu(x);
            for b in (x - mx).subsets() {
                if !self.mu(x - b).is_subset_of(mx) {
                    let a = x - mx - b;
                    return SizeVerdict::Fails(Witness::new(
                        "A, B ∈ I(X) disjoint but A ∉ I(X − B)",
                        &[("A", a), ("B", b), ("X", x)],
                    ));
                }
            }
        }
        SizeVerdict::Holds
    }

    /// (Coh1) quantified literally over `X ⊆ Y` and every `A ∈ I(X)`.
    pub fn check_coh1_literal(&self) -> SizeVerdict {
        for y in all_subsets(self.n()) {
            for x in y.subsets() {
                for a in x.subsets() {
                    if self.small(x, a) && !self.small(y, a) {
                        return SizeVerdict::Fails(Witness::new(
                            "A ∈ I(X), X ⊆ Y, but A ∉ I(Y)",
                            &[("A", a), ("X", x), ("Y", y)],
                        ));
                    }
                }
            }
        }
        SizeVerdict::Holds
    }

    /// (Coh2) quantified literally over `X` and disjoint `A, B ∈ I(X)`.
    pub fn check_coh2_literal(&self) -> SizeVerdict {
        for x in all_subsets(self.n()) {
            for a in x.subsets() {
                if !self.small(x, a) {
                    continue;
                }
                for b in (x - a).subsets() {
                    if self.small(x, b) && !self.small(x - b, a) {
                        return SizeVerdict::Fails(Witness::new(
                            "A, B ∈ I(X) disjoint but A ∉ I(X − B)",
                            &[("A", a), ("B", b), ("X", x)],
                        ));
                    }
                }
            }
        }
        SizeVerdict::Holds
    }

    /// Forward direction of `X ∈ I(X ∪ Y) ⟹ Y ∈ F(X ∪ Y)`, plus the first
    /// pair refuting the converse.
    pub fn check_remark_less(&self) -> (SizeVerdict, Option<(Subset, Subset)>) {
        let n = self.n();
        let mut forward = SizeVerdict::Holds;
        let mut converse = None;
        for x in all_subsets(n) {
            for y in all_subsets(n) {
                let u = x | y;
                if u.is_empty() {
                    continue;
                }
                let x_small = self.small(u, x);
                let y_big = self.big(u, y);
                if x_small && !y_big && forward.holds() {
                    forward = SizeVerdict::Fails(Witness::new(
                        "X ∈ I(X ∪ Y) but Y ∉ F(X ∪ Y)",
                        &[("X", x), ("Y", y)],
                    ));
                }
                if y_big && !x_small && converse.is_none() {
                    converse = Some((x, y));
                }
            }
        }
        (forward, converse)
    }

    // ---- fact verifiers --------------------------------------------------

    /// Verifies `fact` on this structure, treating failed hypotheses as
    /// vacuous truth.
    pub fn verify_fact(&self, fact: Fact) -> Result<SizeVerdict, SizeError> {
        self.verify_fact_with(fact, Hypotheses::Enforce)
    }

    pub fn verify_fact_with(&self, fact: Fact, hyp: Hypotheses) -> Result<SizeVerdict, SizeError> {
        if self.n() > VERIFY_MAX_ELEMENTS {
            return Err(SizeError::TooLarge(self.n()));
        }
        let enforce = hyp == Hypotheses::Enforce;
        if fact.needs_ranking() && (enforce || fact == Fact::Rk) && !self.s.is_ranked() {
            return Err(SizeError::NotRanked);
        }
        let result = match fact {
            Fact::Subset => {
                if enforce && !(self.check_coh1().holds() && self.check_coh2().holds()) {
                    return Ok(SizeVerdict::Vacuous("Coh1+Coh2 do not hold".into()));
                }
                self.fact_subset()
            }
            Fact::Coher => self.fact_coher(),
            Fact::LessTrans => {
                if enforce && !self.s.is_smooth() {
                    return Ok(SizeVerdict::Vacuous("structure is not smooth".into()));
                }
                self.fact_less_trans()
            }
            Fact::Rk => self.fact_rk(),
            Fact::TransRank => self.fact_trans_rank(),
            Fact::LessM => self.fact_less_m(),
            Fact::TriangleCorollary => {
                if enforce && !self.check_coh1().holds() {
                    return Ok(SizeVerdict::Vacuous("Coh1 does not hold".into()));
                }
                self.fact_triangle()
            }
        };
        Ok(verdict(result))
    }

    fn nonempty_subsets(&self) -> impl Iterator<Item = Subset> {
        all_subsets(self.n()).skip(1)
    }

    /// Members of F(X): `μ(X) ∪ R` for `R ⊆ X − μ(X)`.
    fn filter_of(&self, x: Subset) -> impl Iterator<Item = Subset> {
        let m = self.mu(x);
        (x - m).subsets().map(move |r| m | r)
    }

    fn fact_subset(&self) -> Result<(), Witness> {
        // (1) X ∈ F(X') ⟹ (X ∩ A ∈ F(X) ⟺ X' ∩ A ∈ F(X'))
        for xp in self.nonempty_subsets() {
            for x in self.filter_of(xp) {
                for a in xp.subsets() {
                    check(self.big(x, x & a) == self.big(xp, xp & a), || {
                        Witness::new(
                            "X ∈ F(X') but X ∩ A ∈ F(X) and X' ∩ A ∈ F(X') differ",
                            &[("X", x), ("X'", xp), ("A", a)],
                        )
                    })?;
                }
            }
        }
        // (2) X' ∈ F(X), Y' ∈ F(Y): X<Y, X'<Y, X<Y', X'<Y' all agree. Since
        // X and Y range over all nonempty sets, it is enough to compare
        // X<Y with X'<Y and with X<Y'.
        for x in self.nonempty_subsets() {
            for y in self.nonempty_subsets() {
                let base = self.less_default(x, y);
                for xp in self.filter_of(x) {
                    check(self.less_default(xp, y) == base, || {
                        Witness::new(
                            "X<Y and X'<Y differ",
                            &[("X", x), ("X'", xp), ("Y", y), ("Y'", y)],
                        )
                    })?;
                }
                for yp in self.filter_of(y) {
                    check(self.less_default(x, yp) == base, || {
                        Witness::new(
                            "X<Y and X<Y' differ",
                            &[("X", x), ("X'", x), ("Y", y), ("Y'", yp)],
                        )
                    })?;
                }
            }
        }
        Ok(())
    }

    fn fact_coher(&self) -> Result<(), Witness> {
        let coh1 = self.check_coh1_literal();
        let coh2 = self.check_coh2_literal();
        let mu_pr = self.check_mu_pr();
        let mu_cum = self.check_mu_cum();
        let carry = |v: &SizeVerdict, note: &str| {
            let mut w = v
                .witness()
                .cloned()
                .unwrap_or_else(|| Witness::new("", &[]));
            w.note = format!("{note}: {}", w.note);
            w
        };
        if coh1.holds() != mu_pr.holds() {
            let failing = if coh1.holds() { &mu_pr } else { &coh1 };
            return Err(carry(failing, "(Coh1) and (μPR) disagree"));
        }
        if mu_cum.holds() && !coh2.holds() {
            return Err(carry(&coh2, "(μCUM) holds but (Coh2) fails"));
        }
        if coh1.holds() && coh2.holds() && !mu_cum.holds() {
            return Err(carry(&mu_cum, "(Coh1)+(Coh2) hold but (μCUM) fails"));
        }
        Ok(())
    }

    fn fact_less_trans(&self) -> Result<(), Witness> {
        let rel = SubsetRelation::build(self.n(), |a, b| self.less_default(a, b));
        match rel.intransitive_triple() {
            None => Ok(()),
            Some((x, y, z)) => Err(Witness::new(
                "X<Y and Y<Z but not X<Z",
                &[("X", x), ("Y", y), ("Z", z)],
            )),
        }
    }

    fn fact_trans_rank(&self) -> Result<(), Witness> {
        let rel = SubsetRelation::build(self.n(), |a, b| self.less_prime_default(a, b));
        match rel.intransitive_triple() {
            None => Ok(()),
            Some((x, y, z)) => Err(Witness::new(
                "X<'Y and Y<'Z but not X<'Z",
                &[("X", x), ("Y", y), ("Z", z)],
            )),
        }
    }

    fn fact_rk(&self) -> Result<(), Witness> {
        let ranks = self.s.ranks().expect("checked by caller");
        let rk = |a: Subset| self.mu(a).iter().next().map(|i| ranks[i]);
        // relative form
        for x in self.nonempty_subsets() {
            let (rx, mx) = (rk(x), self.mu(x));
            for a in x.subsets() {
                for b in x.subsets() {
                    let (ra, rb) = (rk(a), rk(b));
                    let by_rank = (rank_below(rb, ra) && rb == rx)
                        || (rb == ra
                            && ra == rx
                            && self.mu(a).is_proper_subset_of(self.mu(b))
                            && self.mu(b) == mx);
                    check(self.less_prime_in(x, a, b) == by_rank, || {
                        Witness::new(
                            "A <'_X B disagrees with its rank characterisation",
                            &[("A", a), ("B", b), ("X", x)],
                        )
                    })?;
                }
            }
        }
        // absolute form, X = A ∪ B
        for a in all_subsets(self.n()) {
            for b in all_subsets(self.n()) {
                if (a | b).is_empty() {
                    continue;
                }
                let (ra, rb) = (rk(a), rk(b));
                let by_rank =
                    rank_below(rb, ra) || (ra == rb && self.mu(a).is_proper_subset_of(self.mu(b)));
                check(self.less_prime_default(a, b) == by_rank, || {
                    Witness::new(
                        "A <' B disagrees with its rank characterisation",
                        &[("A", a), ("B", b)],
                    )
                })?;
            }
        }
        Ok(())
    }

    fn fact_less_m(&self) -> Result<(), Witness> {
        let n = self.n();
        // X<Y, Y' ∈ M(Y) ⟹ X<Y'
        for x in all_subsets(n) {
            for y in all_subsets(n) {
                if !self.less_default(x, y) {
                    continue;
                }
                for yp in y.subsets().filter(|&yp| self.medium(y, yp)) {
                    check(self.less_default(x, yp), || {
                        Witness::new(
                            "X<Y, Y' ∈ M(Y) but not X<Y'",
                            &[("X", x), ("Y", y), ("Y'", yp)],
                        )
                    })?;
                }
            }
        }
        // X<Y, Y' ∈ M(Y), X' ∈ M(X) ∪ I(X) ⟹ X'<Y'. By the first part X<Y'
        // holds, so scan pairs X<Y' and only search for a matching Y when a
        // candidate X' fails.
        for x in self.nonempty_subsets() {
            for yp in self.nonempty_subsets() {
                if !self.less_default(x, yp) {
                    continue;
                }
                for xp in x.subsets().filter(|&xp| !self.big(x, xp)) {
                    if self.less_default(xp, yp) {
                        continue;
                    }
                    let outside = !yp;
                    let found = (outside & self.s.universe())
                        .subsets()
                        .map(|extra| yp | extra)
                        .find(|&y| self.medium(y, yp) && self.less_default(x, y));
                    if let Some(y) = found {
                        return Err(Witness::new(
                            "X<Y, Y' ∈ M(Y), X' ∈ M(X) ∪ I(X) but not X'<Y'",
                            &[("X", x), ("Y", y), ("X'", xp), ("Y'", yp)],
                        ));
                    }
                }
            }
        }
        Ok(())
    }

    fn fact_triangle(&self) -> Result<(), Witness> {
        for b in self.nonempty_subsets() {
            for c in self.nonempty_subsets() {
                // C ⇒ B, and some A with B ⇒ A, C ⇏ A (or the polarities
                // swapped) exists iff μ(B) and μ(C) are disjoint; A = μ(B)
                // realises it.
                let premise = self.big(c, c & b) && self.mu(b).is_disjoint(self.mu(c));
                if premise {
                    check(self.less_default(c, b), || {
                        Witness::new(
                            "C ⇒ B, B ⇒ A, C ⇏ A but not C<B",
                            &[("A", self.mu(b)), ("B", b), ("C", c)],
                        )
                    })?;
                }
                check(
                    !(self.less_default(b, c) && self.less_default(c, b)),
                    || Witness::new("B<C and C<B", &[("B", b), ("C", c)]),
                )?;
            }
        }
        Ok(())
    }
}
