//! Finite preferential structures.
//!
//! A structure is a finite set of named elements together with a strict
//! "beats" relation. `x ≺ y` (stored as the pair `(x, y)`) means `x` beats
//! `y`, so `y` is not minimal in any set that also contains `x`. Every size
//! notion in [`crate::size_algebra`] is generated from the μ operator
//! defined here.
//!
//! The relation is required to be irreflexive and acyclic. On finite
//! structures this is exactly the condition under which μ(A) is nonempty
//! for every nonempty A.

use std::collections::HashMap;
use std::fmt;
use std::ops::{BitAnd, BitOr, Not, Sub};

use thiserror::Error;

/// Largest number of elements a structure may hold (subsets are `u32` masks
/// and most checks enumerate all 2^n subsets).
pub const MAX_ELEMENTS: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StructureError {
    #[error("duplicate element name `{0}`")]
    DuplicateName(String),
    #[error("unknown element name `{0}`")]
    UnknownName(String),
    #[error("reflexive pair on `{0}`: no element may beat itself")]
    ReflexivePair(String),
    #[error("preference relation has a cycle: {}", .0.join(" < "))]
    CycleDetected(Vec<String>),
    #[error("{0} elements given, at most {MAX_ELEMENTS} are supported")]
    TooManyElements(usize),
    #[error("operation needs a nonempty set")]
    EmptyInput,
    #[error("subset {0:#x} has bits outside the universe")]
    OutOfRange(u32),
    #[error("element `{0}` is not in the structure")]
    NoSuchElement(usize),
    #[error("the structure is not ranked")]
    NotRanked,
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
}

/// A subset of a structure's elements, one bit per element in declaration
/// order.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Subset(u32);

impl Subset {
    pub const EMPTY: Subset = Subset(0);

    pub const fn from_bits(bits: u32) -> Self {
        Subset(bits)
    }

    pub const fn bits(self) -> u32 {
        self.0
    }

    /// The set `{0, .., n-1}`.
    pub fn full(n: usize) -> Self {
        debug_assert!(n <= 32);
        if n >= 32 {
            Subset(u32::MAX)
        } else {
            Subset((1u32 << n) - 1)
        }
    }

    pub fn singleton(i: usize) -> Self {
        Subset(1 << i)
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(it: I) -> Self {
        it.into_iter().fold(Subset::EMPTY, |s, i| s.with(i))
    }

    pub fn with(self, i: usize) -> Self {
        Subset(self.0 | (1 << i))
    }

    pub fn without(self, i: usize) -> Self {
        Subset(self.0 & !(1 << i))
    }

    pub fn contains(self, i: usize) -> bool {
        i < 32 && self.0 & (1 << i) != 0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_subset_of(self, other: Subset) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_proper_subset_of(self, other: Subset) -> bool {
        self.is_subset_of(other) && self != other
    }

    pub fn is_disjoint(self, other: Subset) -> bool {
        self.0 & other.0 == 0
    }

    pub fn meets(self, other: Subset) -> bool {
        !self.is_disjoint(other)
    }

    /// Element indices in increasing order.
    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let i = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(i)
            }
        })
    }

    /// All subsets of `self` (including `∅` and `self`), in increasing
    /// numeric order.
    pub fn subsets(self) -> Subsets {
        Subsets {
            mask: self.0,
            next: Some(0),
        }
    }
}

impl BitOr for Subset {
    type Output = Subset;
    fn bitor(self, rhs: Subset) -> Subset {
        Subset(self.0 | rhs.0)
    }
}

impl BitAnd for Subset {
    type Output = Subset;
    fn bitand(self, rhs: Subset) -> Subset {
        Subset(self.0 & rhs.0)
    }
}

impl Sub for Subset {
    type Output = Subset;
    fn sub(self, rhs: Subset) -> Subset {
        Subset(self.0 & !rhs.0)
    }
}

impl Not for Subset {
    type Output = Subset;
    fn not(self) -> Subset {
        Subset(!self.0)
    }
}

impl fmt::Debug for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// Iterator over the submasks of a mask.
pub struct Subsets {
    mask: u32,
    next: Option<u32>,
}

impl Iterator for Subsets {
    type Item = Subset;

    fn next(&mut self) -> Option<Subset> {
        let cur = self.next?;
        self.next = if cur == self.mask {
            None
        } else {
            Some((cur | !self.mask).wrapping_add(1) & self.mask)
        };
        Some(Subset(cur))
    }
}

/// Every subset of an `n`-element universe, `∅` first.
pub fn all_subsets(n: usize) -> impl Iterator<Item = Subset> {
    (0..1u32 << n).map(Subset)
}

/// A finite preferential structure with an irreflexive, acyclic relation.
///
/// Immutable once built.
#[derive(Clone, PartialEq, Eq)]
pub struct PreferentialStructure {
    names: Vec<String>,
    index: HashMap<String, usize>,
    /// `beaters[x]` = `{x' : x' ≺ x}`.
    beaters: Vec<Subset>,
    /// `beaten[x]` = `{y : x ≺ y}`.
    beaten: Vec<Subset>,
}

impl PreferentialStructure {
    /// Builds and validates a structure from element names and
    /// `(beater, beaten)` pairs.
    pub fn build<N, P>(names: &[N], pairs: &[(P, P)]) -> Result<Self, StructureError>
    where
        N: AsRef<str>,
        P: AsRef<str>,
    {
        if names.len() > MAX_ELEMENTS {
            return Err(StructureError::TooManyElements(names.len()));
        }
        let mut index = HashMap::with_capacity(names.len());
        for (i, name) in names.iter().enumerate() {
            let name = name.as_ref();
            if index.insert(name.to_string(), i).is_some() {
                return Err(StructureError::DuplicateName(name.to_string()));
            }
        }
        let lookup = |name: &str| {
            index
                .get(name)
                .copied()
                .ok_or_else(|| StructureError::UnknownName(name.to_string()))
        };
        let mut idx_pairs = Vec::with_capacity(pairs.len());
        for (a, b) in pairs {
            idx_pairs.push((lookup(a.as_ref())?, lookup(b.as_ref())?));
        }
        let names = names.iter().map(|n| n.as_ref().to_string()).collect();
        Self::from_index_pairs(names, index, &idx_pairs)
    }

    /// Builds a structure over elements named `a`, `b`, ... (or `e0`, `e1`,
    /// ... past 26) from index pairs.
    pub fn from_indices(n: usize, pairs: &[(usize, usize)]) -> Result<Self, StructureError> {
        if n > MAX_ELEMENTS {
            return Err(StructureError::TooManyElements(n));
        }
        let names: Vec<String> = (0..n).map(default_name).collect();
        for &(a, b) in pairs {
            if a >= n {
                return Err(StructureError::NoSuchElement(a));
            }
            if b >= n {
                return Err(StructureError::NoSuchElement(b));
            }
        }
        let index = names.iter().cloned().zip(0..).collect();
        Self::from_index_pairs(names, index, pairs)
    }

    fn from_index_pairs(
        names: Vec<String>,
        index: HashMap<String, usize>,
        pairs: &[(usize, usize)],
    ) -> Result<Self, StructureError> {
        let n = names.len();
        let mut beaters = vec![Subset::EMPTY; n];
        let mut beaten = vec![Subset::EMPTY; n];
        for &(a, b) in pairs {
            if a == b {
                return Err(StructureError::ReflexivePair(names[a].clone()));
            }
            beaters[b] = beaters[b].with(a);
            beaten[a] = beaten[a].with(b);
        }
        if let Some(cycle) = find_cycle(&beaten) {
            let mut named: Vec<String> = cycle.iter().map(|&i| names[i].clone()).collect();
            named.push(names[cycle[0]].clone());
            return Err(StructureError::CycleDetected(named));
        }
        Ok(PreferentialStructure {
            names,
            index,
            beaters,
            beaten,
        })
    }

    /// Parses the line-oriented structure format:
    ///
    /// ```text
    /// # comment
    /// elements: a b c
    /// prefers: c b      # c beats b
    /// ```
    pub fn parse(text: &str) -> Result<Self, StructureError> {
        let mut names: Option<(usize, Vec<String>)> = None;
        let mut pairs: Vec<(usize, String, String)> = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line_no = lineno + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let syntax = |message: String| StructureError::Syntax {
                line: line_no,
                message,
            };
            let (key, rest) = line.split_once(':').ok_or_else(|| {
                syntax(format!("expected `elements:` or `prefers:`, got `{line}`"))
            })?;
            let words: Vec<&str> = rest.split_whitespace().collect();
            match key.trim() {
                "elements" => {
                    if names.is_some() {
                        return Err(syntax("`elements:` given twice".into()));
                    }
                    for w in &words {
                        if !is_identifier(w) {
                            return Err(syntax(format!("invalid element name `{w}`")));
                        }
                    }
                    names = Some((line_no, words.iter().map(|w| w.to_string()).collect()));
                }
                "prefers" => {
                    if words.len() != 2 {
                        return Err(syntax(format!(
                            "`prefers:` takes exactly two elements, got {}",
                            words.len()
                        )));
                    }
                    pairs.push((line_no, words[0].to_string(), words[1].to_string()));
                }
                other => return Err(syntax(format!("unknown directive `{other}`"))),
            }
        }
        let (decl_line, names) = names.ok_or(StructureError::Syntax {
            line: 0,
            message: "missing `elements:` line".into(),
        })?;
        // Name-level errors carry the line they occurred on.
        let mut seen = HashMap::new();
        for n in &names {
            if seen.insert(n.as_str(), ()).is_some() {
                return Err(StructureError::Syntax {
                    line: decl_line,
                    message: StructureError::DuplicateName(n.clone()).to_string(),
                });
            }
        }
        for (line, a, b) in &pairs {
            for x in [a, b] {
                if !seen.contains_key(x.as_str()) {
                    return Err(StructureError::Syntax {
                        line: *line,
                        message: StructureError::UnknownName(x.clone()).to_string(),
                    });
                }
            }
            if a == b {
                return Err(StructureError::Syntax {
                    line: *line,
                    message: StructureError::ReflexivePair(a.clone()).to_string(),
                });
            }
        }
        let pairs: Vec<(String, String)> = pairs.into_iter().map(|(_, a, b)| (a, b)).collect();
        Self::build(&names, &pairs)
    }

    /// Renders the structure in the format accepted by [`Self::parse`].
    pub fn to_text(&self) -> String {
        let mut out = format!("elements: {}\n", self.names.join(" "));
        for (a, b) in self.pairs() {
            out.push_str(&format!("prefers: {} {}\n", self.names[a], self.names[b]));
        }
        out
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    /// The set of all elements.
    pub fn universe(&self) -> Subset {
        Subset::full(self.len())
    }

    /// `x ≺ y`: `x` beats `y`.
    pub fn beats(&self, x: usize, y: usize) -> bool {
        self.beaten[x].contains(y)
    }

    pub fn beaters(&self, x: usize) -> Subset {
        self.beaters[x]
    }

    pub fn beaten_by(&self, x: usize) -> Subset {
        self.beaten[x]
    }

    /// All `(beater, beaten)` pairs, sorted.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        (0..self.len())
            .flat_map(|a| self.beaten[a].iter().map(move |b| (a, b)))
            .collect()
    }

    pub fn subset_from_names<S: AsRef<str>>(&self, names: &[S]) -> Result<Subset, StructureError> {
        names.iter().try_fold(Subset::EMPTY, |acc, n| {
            let n = n.as_ref();
            self.index_of(n)
                .map(|i| acc.with(i))
                .ok_or_else(|| StructureError::UnknownName(n.to_string()))
        })
    }

    pub fn names_of(&self, s: Subset) -> Vec<&str> {
        s.iter().map(|i| self.names[i].as_str()).collect()
    }

    /// Renders a subset as `{a,b}`.
    pub fn show(&self, s: Subset) -> String {
        format!("{{{}}}", self.names_of(s).join(","))
    }

    pub fn check_subset(&self, s: Subset) -> Result<(), StructureError> {
        if s.is_subset_of(self.universe()) {
            Ok(())
        } else {
            Err(StructureError::OutOfRange(s.bits()))
        }
    }

    /// μ(A): the elements of `A` beaten by no element of `A`.
    pub fn mu(&self, a: Subset) -> Result<Subset, StructureError> {
        self.check_subset(a)?;
        if a.is_empty() {
            return Err(StructureError::EmptyInput);
        }
        Ok(self.minimal(a))
    }

    /// Total version of [`Self::mu`]: `minimal(∅) = ∅`.
    pub fn minimal(&self, a: Subset) -> Subset {
        a.iter()
            .filter(|&x| self.beaters[x].is_disjoint(a))
            .fold(Subset::EMPTY, Subset::with)
    }

    pub fn is_transitive(&self) -> bool {
        // x ≺ y requires every beater of x to beat y as well
        (0..self.len()).all(|y| {
            self.beaters[y]
                .iter()
                .all(|x| self.beaters[x].is_subset_of(self.beaters[y]))
        })
    }

    /// Every non-minimal element of every subset is beaten by a minimal
    /// element of that subset.
    pub fn is_smooth(&self) -> bool {
        self.smoothness_witness().is_none()
    }

    /// First `(A, x)` violating smoothness, if any.
    pub fn smoothness_witness(&self) -> Option<(Subset, usize)> {
        for a in all_subsets(self.len()) {
            let m = self.minimal(a);
            for x in (a - m).iter() {
                if self.beaters[x].is_disjoint(m) {
                    return Some((a, x));
                }
            }
        }
        None
    }

    /// Incomparable elements have the same beaters and beat the same
    /// elements.
    pub fn is_ranked(&self) -> bool {
        let n = self.len();
        for x in 0..n {
            for y in x + 1..n {
                let incomparable = !self.beats(x, y) && !self.beats(y, x);
                if incomparable
                    && (self.beaters[x] != self.beaters[y] || self.beaten[x] != self.beaten[y])
                {
                    return false;
                }
            }
        }
        true
    }

    /// Layer index of every element: 0 for unbeaten elements, otherwise one
    /// more than the highest layer among its beaters.
    pub fn ranks(&self) -> Result<Vec<usize>, StructureError> {
        if !self.is_ranked() {
            return Err(StructureError::NotRanked);
        }
        Ok(self.longest_beater_chain())
    }

    fn longest_beater_chain(&self) -> Vec<usize> {
        let n = self.len();
        let mut rank: Vec<Option<usize>> = vec![None; n];
        // acyclic, so repeated passes settle in at most n rounds
        while rank.iter().any(Option::is_none) {
            for x in 0..n {
                if rank[x].is_some() {
                    continue;
                }
                let bs = self.beaters[x];
                if bs.iter().all(|b| rank[b].is_some()) {
                    rank[x] = Some(bs.iter().map(|b| rank[b].unwrap() + 1).max().unwrap_or(0));
                }
            }
        }
        rank.into_iter().map(Option::unwrap).collect()
    }

    pub fn rank_of(&self, x: usize) -> Result<usize, StructureError> {
        if x >= self.len() {
            return Err(StructureError::NoSuchElement(x));
        }
        Ok(self.ranks()?[x])
    }

    /// rk(A) := rank of the elements of μ(A), which all share one layer in a
    /// ranked structure.
    pub fn rank_of_set(&self, a: Subset) -> Result<usize, StructureError> {
        let m = self.mu(a)?;
        let ranks = self.ranks()?;
        Ok(ranks[m.iter().next().expect("μ of a nonempty set is nonempty")])
    }
}

impl fmt::Debug for PreferentialStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pairs: Vec<String> = self
            .pairs()
            .into_iter()
            .map(|(a, b)| format!("{}<{}", self.names[a], self.names[b]))
            .collect();
        write!(
            f,
            "Structure[{}; {}]",
            self.names.join(" "),
            pairs.join(", ")
        )
    }
}

fn default_name(i: usize) -> String {
    if i < 26 {
        ((b'a' + i as u8) as char).to_string()
    } else {
        format!("e{i}")
    }
}

pub(crate) fn is_identifier(w: &str) -> bool {
    let mut chars = w.chars();
    match chars.next() {
        Some(c) if c.is_alphanumeric() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_alphanumeric() || c == '_' || c == '\'')
}

/// Returns the vertices of one directed cycle in the graph `succ`, in path
/// order, or `None` if the graph is acyclic.
fn find_cycle(succ: &[Subset]) -> Option<Vec<usize>> {
    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        New,
        Active,
        Done,
    }
    fn visit(
        v: usize,
        succ: &[Subset],
        mark: &mut [Mark],
        stack: &mut Vec<usize>,
    ) -> Option<Vec<usize>> {
        mark[v] = Mark::Active;
        stack.push(v);
        for w in succ[v].iter() {
            match mark[w] {
                Mark::Active => {
                    let start = stack.iter().position(|&u| u == w).unwrap();
                    return Some(stack[start..].to_vec());
                }
                Mark::New => {
                    if let Some(c) = visit(w, succ, mark, stack) {
                        return Some(c);
                    }
                }
                Mark::Done => {}
            }
        }
        stack.pop();
        mark[v] = Mark::Done;
        None
    }
    let mut mark = vec![Mark::New; succ.len()];
    let mut stack = Vec::new();
    for v in 0..succ.len() {
        if mark[v] == Mark::New {
            if let Some(c) = visit(v, succ, &mut mark, &mut stack) {
                return Some(c);
            }
        }
    }
    None
}
