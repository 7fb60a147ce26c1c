//! Brute-force oracles shared by the integration tests. They work on raw
//! pair lists and bitmasks and restate every definition from scratch, so
//! they share no code with the library.

#![allow(dead_code)]

use std::collections::{BTreeSet, VecDeque};
use std::path::PathBuf;

use rand::seq::SliceRandom;
use rand::Rng;
use sizelogic::inheritance::{InheritanceDiagram, Polarity};

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
}

pub fn read_fixture(name: &str) -> String {
    std::fs::read_to_string(fixture(name)).unwrap()
}

/// A relation on `0..n`; `(x, y)` means x beats y.
#[derive(Debug, Clone)]
pub struct Rel {
    pub n: usize,
    pub pairs: Vec<(usize, usize)>,
}

impl Rel {
    pub fn beats(&self, x: usize, y: usize) -> bool {
        self.pairs.contains(&(x, y))
    }

    pub fn universe(&self) -> u32 {
        (1u32 << self.n) - 1
    }

    pub fn mu(&self, a: u32) -> u32 {
        let mut m = 0;
        for x in members(a) {
            if !members(a).any(|y| self.beats(y, x)) {
                m |= 1 << x;
            }
        }
        m
    }

    pub fn big(&self, x: u32, a: u32) -> bool {
        self.mu(x) & !a == 0
    }

    pub fn small(&self, x: u32, a: u32) -> bool {
        self.mu(x) & a == 0
    }

    pub fn medium(&self, x: u32, a: u32) -> bool {
        !self.big(x, a) && !self.small(x, a)
    }

    pub fn less_in(&self, x: u32, a: u32, b: u32) -> bool {
        self.small(x, a) && self.big(x, b)
    }

    pub fn less(&self, a: u32, b: u32) -> bool {
        a | b != 0 && self.less_in(a | b, a, b)
    }

    pub fn less_prime_in(&self, x: u32, a: u32, b: u32) -> bool {
        (self.big(x, b) && !self.big(x, a)) || (self.medium(x, b) && self.small(x, a))
    }

    pub fn is_transitive(&self) -> bool {
        self.pairs.iter().all(|&(x, y)| {
            self.pairs
                .iter()
                .filter(|p| p.0 == y)
                .all(|&(_, z)| self.beats(x, z))
        })
    }

    /// Every beaten element of a set is beaten by one of its minimal
    /// elements.
    pub fn is_smooth(&self) -> bool {
        (0..=self.universe()).all(|a| {
            let m = self.mu(a);
            members(a & !m).all(|x| members(m).any(|y| self.beats(y, x)))
        })
    }

    /// Longest chain of beaters above `x`.
    pub fn height(&self, x: usize) -> usize {
        (0..self.n)
            .filter(|&y| self.beats(y, x))
            .map(|y| 1 + self.height(y))
            .max()
            .unwrap_or(0)
    }

    /// Ranked: the relation is exactly "lower height beats higher height".
    pub fn is_ranked(&self) -> bool {
        (0..self.n)
            .all(|x| (0..self.n).all(|y| self.beats(x, y) == (self.height(x) < self.height(y))))
    }

    pub fn is_acyclic(&self) -> bool {
        let mut alive = self.universe();
        loop {
            let source = members(alive).find(|&x| !members(alive).any(|y| self.beats(y, x)));
            match source {
                Some(x) => alive &= !(1 << x),
                None => return alive == 0,
            }
        }
    }
}

pub fn members(a: u32) -> impl Iterator<Item = usize> + Clone {
    (0..32).filter(move |i| a >> i & 1 == 1)
}

pub fn submasks(a: u32) -> impl Iterator<Item = u32> {
    (0..=a).filter(move |s| s & !a == 0)
}

/// All irreflexive acyclic relations on `n` elements.
pub fn all_relations(n: usize) -> Vec<Rel> {
    let slots: Vec<(usize, usize)> = (0..n)
        .flat_map(|x| (0..n).map(move |y| (x, y)))
        .filter(|(x, y)| x != y)
        .collect();
    (0u64..1 << slots.len())
        .map(|mask| Rel {
            n,
            pairs: slots
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &p)| p)
                .collect(),
        })
        .filter(Rel::is_acyclic)
        .collect()
}

/// Every chain `b = C_0 ⊋ .. ⊋ C_k = a` whose links are small in their
/// predecessor, enumerated without memoization; returns the longest `k`.
pub fn longest_small_chain(rel: &Rel, a: u32, c: u32) -> Option<usize> {
    if c == a {
        return Some(0);
    }
    submasks(c)
        .filter(|&next| next != c && next & a == a && rel.small(c, next))
        .filter_map(|next| longest_small_chain(rel, a, next))
        .max()
        .map(|k| k + 1)
}

/// Hamming depth of `x` in the set `s` over `n` variables, by scanning the
/// complement.
pub fn hamming_depth(s: &[bool], x: u32) -> Option<u32> {
    (0..s.len() as u32)
        .filter(|&y| !s[y as usize])
        .map(|y| (x ^ y).count_ones())
        .min()
}

/// Diagram on nodes `n0..`, one arrow per `(from, to, positive)`.
pub fn diagram(n: usize, arrows: &[(usize, usize, bool)]) -> InheritanceDiagram {
    let names: Vec<String> = (0..n).map(|i| format!("n{i}")).collect();
    let arrows: Vec<(String, String, Polarity)> = arrows
        .iter()
        .map(|&(a, b, pos)| {
            let p = if pos {
                Polarity::Positive
            } else {
                Polarity::Negative
            };
            (names[a].clone(), names[b].clone(), p)
        })
        .collect();
    InheritanceDiagram::build(&names, &arrows).unwrap()
}

/// Every diagram on `n` nodes whose arrows go from lower to higher index,
/// with at most `max_arrows` arrows. Up to relabelling this is every DAG.
pub fn all_diagrams(n: usize, max_arrows: usize) -> impl Iterator<Item = InheritanceDiagram> {
    let slots: Vec<(usize, usize)> = (0..n)
        .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
        .collect();
    let total = 3u64.pow(slots.len() as u32);
    (0..total).filter_map(move |mut code| {
        let mut arrows = Vec::new();
        for &(a, b) in &slots {
            match code % 3 {
                1 => arrows.push((a, b, true)),
                2 => arrows.push((a, b, false)),
                _ => {}
            }
            code /= 3;
        }
        (arrows.len() <= max_arrows).then(|| diagram(n, &arrows))
    })
}

/// Random DAG diagram with `n` nodes and at most `max_arrows` arrows,
/// oriented along a random permutation.
pub fn random_diagram<R: Rng>(rng: &mut R, n: usize, max_arrows: usize) -> InheritanceDiagram {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut slots: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .collect();
    slots.shuffle(rng);
    let k = rng.gen_range(0..=max_arrows.min(slots.len()));
    let arrows: Vec<(usize, usize, bool)> = slots[..k]
        .iter()
        .map(|&(i, j)| (order[i], order[j], rng.gen_bool(0.6)))
        .collect();
    diagram(n, &arrows)
}

/// Random topological order, choosing uniformly among available nodes.
pub fn random_topological_order<R: Rng>(rng: &mut R, d: &InheritanceDiagram) -> Vec<usize> {
    let n = d.len();
    let mut indegree = vec![0usize; n];
    for a in d.arrows() {
        indegree[a.to] += 1;
    }
    let mut ready: Vec<usize> = (0..n).filter(|&v| indegree[v] == 0).collect();
    let mut order = Vec::with_capacity(n);
    while !ready.is_empty() {
        let v = ready.swap_remove(rng.gen_range(0..ready.len()));
        order.push(v);
        for a in d.arrows().iter().filter(|a| a.from == v) {
            indegree[a.to] -= 1;
            if indegree[a.to] == 0 {
                ready.push(a.to);
            }
        }
    }
    order
}

/// Positive-path reachability by breadth-first search over positive arrows.
pub fn positive_reach(d: &InheritanceDiagram, from: usize, to: usize) -> bool {
    let mut seen = vec![false; d.len()];
    let mut queue = VecDeque::from([from]);
    while let Some(u) = queue.pop_front() {
        for a in d
            .arrows()
            .iter()
            .filter(|a| a.from == u && a.polarity == Polarity::Positive)
        {
            if a.to == to {
                return true;
            }
            if !seen[a.to] {
                seen[a.to] = true;
                queue.push_back(a.to);
            }
        }
    }
    false
}

/// `(more specific, less specific, via)` for every pair of conflicting
/// arrows into a common node whose tails are linked by a positive path.
pub fn specificity_oracle(d: &InheritanceDiagram) -> BTreeSet<(usize, usize, usize)> {
    let mut out = BTreeSet::new();
    for a in d.arrows() {
        for b in d.arrows() {
            if a.to == b.to && a.polarity != b.polarity && positive_reach(d, a.from, b.from) {
                out.insert((a.from, b.from, a.to));
            }
        }
    }
    out
}

/// Runs inference from every source and checks that each preemption in the
/// trace is backed by a specificity judgement and that every applicable
/// arrow with a more specific conflicting applicable arrow is preempted.
/// Returns the number of preemption decisions checked.
pub fn check_preemptions(d: &InheritanceDiagram) -> Result<usize, String> {
    use sizelogic::inheritance::{InferOptions, TraceEvent};
    let specs: BTreeSet<(usize, usize, usize)> = d
        .derive_specificity()
        .iter()
        .map(|s| (s.more_specific, s.less_specific, s.via))
        .collect();
    if specs != specificity_oracle(d) {
        return Err(format!(
            "derive_specificity disagrees with oracle on\n{d:?}"
        ));
    }
    let mut checked = 0;
    for source in 0..d.len() {
        let result = d
            .infer_from(source, &InferOptions::default(), None)
            .map_err(|e| e.to_string())?;
        for e in &result.trace {
            let TraceEvent::Step {
                target,
                applicable,
                preempted,
                ..
            } = e
            else {
                continue;
            };
            let arrows = d.arrows();
            for &k in applicable {
                let expected = applicable
                    .iter()
                    .any(|&j| specs.contains(&(arrows[j].from, arrows[k].from, *target)));
                let actual = preempted.iter().find(|p| p.arrow == k);
                if expected != actual.is_some() {
                    return Err(format!(
                        "arrow {} into {target} from source {source}: expected preempted = {expected}\n{d:?}",
                        d.show_arrow(&arrows[k])
                    ));
                }
                if let Some(p) = actual {
                    if !specs.contains(&(arrows[p.by].from, arrows[k].from, *target)) {
                        return Err(format!("preemption without specificity\n{d:?}"));
                    }
                }
                checked += 1;
            }
        }
    }
    Ok(checked)
}

/// Random formula text over variables `v0..v{n-1}`.
pub fn random_formula<R: Rng>(rng: &mut R, n: usize, depth: u32) -> String {
    if depth == 0 || rng.gen_bool(0.2) {
        return match rng.gen_range(0..20) {
            0 => "true".into(),
            1 => "false".into(),
            _ => format!("v{}", rng.gen_range(0..n)),
        };
    }
    let a = random_formula(rng, n, depth - 1);
    match rng.gen_range(0..4) {
        0 => format!("!{a}"),
        1 => format!("({a} & {})", random_formula(rng, n, depth - 1)),
        2 => format!("({a} | {})", random_formula(rng, n, depth - 1)),
        _ => format!("({a} -> {})", random_formula(rng, n, depth - 1)),
    }
}

pub fn var_names(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("v{i}")).collect()
}

/// Conjunctive normal form text for a set of assignments: one clause
/// excluding each non-member.
pub fn cnf_text(vars: &[String], members: &[bool]) -> String {
    let clauses: Vec<String> = (0..members.len() as u32)
        .filter(|&x| !members[x as usize])
        .map(|x| {
            let lits: Vec<String> = vars
                .iter()
                .enumerate()
                .map(|(j, v)| {
                    if x >> j & 1 == 1 {
                        format!("!{v}")
                    } else {
                        v.clone()
                    }
                })
                .collect();
            format!("({})", lits.join(" | "))
        })
        .collect();
    if clauses.is_empty() {
        "true".into()
    } else {
        clauses.join(" & ")
    }
}
