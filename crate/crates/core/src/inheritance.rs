//! Defeasible inheritance diagrams read through size.
//!
//! A positive arrow `U -> V` says "most U are V" (`U ∩ V` is big in `U`), a
//! negative arrow `U -/> V` says "most U are not V". Inference from a source
//! node proceeds strictly downward: the source's population is tracked as a
//! set of cells, each a dyadic fraction of the source with an IN/OUT/UNKNOWN
//! membership per node. Arrows only apply inside cells where their tail is
//! IN. Conflicting arrows are resolved by specificity (a tail that reaches
//! the other tail along positive arrows wins); unresolved conflicts split
//! the cell into two medium halves.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap};
use std::fmt;

use fixedbitset::FixedBitSet;
use num_rational::Ratio;
use serde::Serialize;
use thiserror::Error;

use crate::prefstruct::is_identifier;

/// Exact dyadic fraction of the source population.
pub type Fraction = Ratio<u64>;

/// Hard cap on the number of cells a single query may create.
pub const MAX_CELLS: usize = 1 << 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DiagramError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("unknown node `{0}`")]
    UnknownNode(String),
    #[error("duplicate node `{0}`")]
    DuplicateNode(String),
    #[error("diagram has a cycle: {}", .0.join(" -> "))]
    CycleDetected(Vec<String>),
    #[error("`{0}` has both a positive and a negative arrow to `{1}`")]
    ConflictingParallelArrows(String, String),
    #[error("node order is not a topological order of the diagram")]
    NotATopologicalOrder,
    #[error("inference needs more than {MAX_CELLS} cells")]
    TooManyCells,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Polarity {
    Positive,
    Negative,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Arrow {
    pub from: usize,
    pub to: usize,
    pub polarity: Polarity,
}

/// A validated diagram: the union of positive and negative arrows is acyclic
/// and no pair of nodes carries both polarities in the same direction.
#[derive(Clone)]
pub struct InheritanceDiagram {
    names: Vec<String>,
    index: HashMap<String, usize>,
    arrows: Vec<Arrow>,
    incoming: Vec<Vec<usize>>,
    /// `pos_reach[u][v]`: a path of one or more positive arrows from u to v.
    pos_reach: Vec<FixedBitSet>,
}

impl InheritanceDiagram {
    pub fn build<N: AsRef<str>>(
        names: &[N],
        arrows: &[(N, N, Polarity)],
    ) -> Result<Self, DiagramError> {
        let mut index = HashMap::new();
        for (i, n) in names.iter().enumerate() {
            if index.insert(n.as_ref().to_string(), i).is_some() {
                return Err(DiagramError::DuplicateNode(n.as_ref().to_string()));
            }
        }
        let lookup = |n: &N| {
            index
                .get(n.as_ref())
                .copied()
                .ok_or_else(|| DiagramError::UnknownNode(n.as_ref().to_string()))
        };
        let mut idx_arrows = Vec::with_capacity(arrows.len());
        for (a, b, p) in arrows {
            idx_arrows.push(Arrow {
                from: lookup(a)?,
                to: lookup(b)?,
                polarity: *p,
            });
        }
        let names = names.iter().map(|n| n.as_ref().to_string()).collect();
        Self::from_arrows(names, index, idx_arrows)
    }

    fn from_arrows(
        names: Vec<String>,
        index: HashMap<String, usize>,
        raw: Vec<Arrow>,
    ) -> Result<Self, DiagramError> {
        let n = names.len();
        let mut arrows: Vec<Arrow> = Vec::with_capacity(raw.len());
        for a in raw {
            if !arrows.contains(&a) {
                arrows.push(a);
            }
        }
        for a in &arrows {
            if a.from == a.to {
                return Err(DiagramError::CycleDetected(vec![
                    names[a.from].clone(),
                    names[a.from].clone(),
                ]));
            }
            if arrows
                .iter()
                .any(|b| b.from == a.from && b.to == a.to && b.polarity != a.polarity)
            {
                return Err(DiagramError::ConflictingParallelArrows(
                    names[a.from].clone(),
                    names[a.to].clone(),
                ));
            }
        }
        let mut succ = vec![Vec::new(); n];
        let mut incoming = vec![Vec::new(); n];
        for (k, a) in arrows.iter().enumerate() {
            succ[a.from].push(a.to);
            incoming[a.to].push(k);
        }
        if let Some(cycle) = find_cycle(&succ) {
            let mut named: Vec<String> = cycle.iter().map(|&i| names[i].clone()).collect();
            named.push(names[cycle[0]].clone());
            return Err(DiagramError::CycleDetected(named));
        }
        let mut d = InheritanceDiagram {
            names,
            index,
            arrows,
            incoming,
            pos_reach: Vec::new(),
        };
        d.pos_reach = d.positive_reachability();
        Ok(d)
    }

    fn positive_reachability(&self) -> Vec<FixedBitSet> {
        let n = self.len();
        let mut reach = vec![FixedBitSet::with_capacity(n); n];
        // reverse topological order: successors are complete before their
        // predecessors
        for &u in self.topological_order().iter().rev() {
            let mut r = FixedBitSet::with_capacity(n);
            for a in self
                .arrows
                .iter()
                .filter(|a| a.from == u && a.polarity == Polarity::Positive)
            {
                r.insert(a.to);
                r.union_with(&reach[a.to]);
            }
            reach[u] = r;
        }
        reach
    }

    /// Parses the diagram language:
    ///
    /// ```text
    /// nodes U V X Y      # one or more `nodes` lines
    /// U -> V             # most U are V
    /// X -/> Y            # most X are not Y
    /// ```
    pub fn parse(text: &str) -> Result<Self, DiagramError> {
        let mut names: Vec<String> = Vec::new();
        let mut index: HashMap<String, usize> = HashMap::new();
        let mut arrows = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line_no = lineno + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let syntax = |message: String| DiagramError::Syntax {
                line: line_no,
                message,
            };
            let mut words = line.split_whitespace();
            if words.next() == Some("nodes") {
                for w in words {
                    if !is_identifier(w) {
                        return Err(syntax(format!("invalid node name `{w}`")));
                    }
                    if index.insert(w.to_string(), names.len()).is_some() {
                        return Err(syntax(
                            DiagramError::DuplicateNode(w.to_string()).to_string(),
                        ));
                    }
                    names.push(w.to_string());
                }
                continue;
            }
            let (lhs, rhs, polarity) = if let Some((l, r)) = line.split_once("-/>") {
                (l, r, Polarity::Negative)
            } else if let Some((l, r)) = line.split_once("->") {
                (l, r, Polarity::Positive)
            } else {
                return Err(syntax(format!(
                    "expected `nodes`, `A -> B` or `A -/> B`, got `{line}`"
                )));
            };
            let mut ends = [0usize; 2];
            for (slot, side) in ends.iter_mut().zip([lhs.trim(), rhs.trim()]) {
                if !is_identifier(side) {
                    return Err(syntax(format!("invalid node name `{side}`")));
                }
                *slot = *index.get(side).ok_or_else(|| {
                    syntax(DiagramError::UnknownNode(side.to_string()).to_string())
                })?;
            }
            arrows.push(Arrow {
                from: ends[0],
                to: ends[1],
                polarity,
            });
        }
        Self::from_arrows(names, index, arrows)
    }

    /// Renders the diagram in the format accepted by [`Self::parse`].
    pub fn to_text(&self) -> String {
        let mut out = format!("nodes {}\n", self.names.join(" "));
        for a in &self.arrows {
            out.push_str(&self.show_arrow(a));
            out.push('\n');
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

    pub fn node(&self, name: &str) -> Result<usize, DiagramError> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| DiagramError::UnknownNode(name.to_string()))
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn show_arrow(&self, a: &Arrow) -> String {
        let op = match a.polarity {
            Polarity::Positive => "->",
            Polarity::Negative => "-/>",
        };
        format!("{} {op} {}", self.names[a.from], self.names[a.to])
    }

    /// Copy of the diagram without the arrow at index `k`.
    pub fn without_arrow(&self, k: usize) -> Self {
        let mut arrows = self.arrows.clone();
        arrows.remove(k);
        Self::from_arrows(self.names.clone(), self.index.clone(), arrows)
            .expect("removing an arrow keeps a diagram valid")
    }

    /// A path of one or more positive arrows from `u` to `v`.
    pub fn positive_path(&self, u: usize, v: usize) -> bool {
        self.pos_reach[u].contains(v)
    }

    fn has_arrow(&self, from: usize, to: usize, polarity: Polarity) -> bool {
        self.arrows.contains(&Arrow { from, to, polarity })
    }

    /// Kahn's algorithm, ties broken by declaration order.
    pub fn topological_order(&self) -> Vec<usize> {
        let n = self.len();
        let mut indeg = vec![0usize; n];
        for a in &self.arrows {
            indeg[a.to] += 1;
        }
        let mut ready: BinaryHeap<Reverse<usize>> =
            (0..n).filter(|&v| indeg[v] == 0).map(Reverse).collect();
        let mut order = Vec::with_capacity(n);
        while let Some(Reverse(v)) = ready.pop() {
            order.push(v);
            for a in self.arrows.iter().filter(|a| a.from == v) {
                indeg[a.to] -= 1;
                if indeg[a.to] == 0 {
                    ready.push(Reverse(a.to));
                }
            }
        }
        order
    }

    pub fn is_topological_order(&self, order: &[usize]) -> bool {
        let n = self.len();
        if order.len() != n {
            return false;
        }
        let mut pos = vec![usize::MAX; n];
        for (i, &v) in order.iter().enumerate() {
            if v >= n || pos[v] != usize::MAX {
                return false;
            }
            pos[v] = i;
        }
        self.arrows.iter().all(|a| pos[a.from] < pos[a.to])
    }

    fn reachable_from(&self, source: usize) -> FixedBitSet {
        let mut seen = FixedBitSet::with_capacity(self.len());
        let mut stack = vec![source];
        seen.insert(source);
        while let Some(u) = stack.pop() {
            for a in self.arrows.iter().filter(|a| a.from == u) {
                if !seen.put(a.to) {
                    stack.push(a.to);
                }
            }
        }
        seen
    }

    /// Every specificity judgement the diagram supports: for each pair of
    /// conflicting arrows into a common node, the tail that reaches the
    /// other tail along positive arrows is the smaller (more specific) set.
    /// A direct positive arrow between the tails is the triangle pattern;
    /// a longer positive path is a chain of such steps.
    pub fn derive_specificity(&self) -> Vec<Specificity> {
        let mut out = Vec::new();
        for (via, arrows_in) in self.incoming.iter().enumerate() {
            for &i in arrows_in {
                for &j in arrows_in {
                    let (a, b) = (self.arrows[i], self.arrows[j]);
                    if a.polarity == b.polarity || !self.positive_path(a.from, b.from) {
                        continue;
                    }
                    let kind = if self.has_arrow(a.from, b.from, Polarity::Positive) {
                        SpecificityKind::Triangle
                    } else {
                        SpecificityKind::Chain
                    };
                    out.push(Specificity {
                        more_specific: a.from,
                        less_specific: b.from,
                        via,
                        kind,
                    });
                }
            }
        }
        out.sort();
        out.dedup();
        out
    }

    pub fn infer(&self, source: &str) -> Result<InferenceResult, DiagramError> {
        let s = self.node(source)?;
        self.infer_from(s, &InferOptions::default(), None)
    }

    /// Runs inference from `source`, optionally along a caller-chosen
    /// topological order.
    pub fn infer_from(
        &self,
        source: usize,
        opts: &InferOptions,
        order: Option<&[usize]>,
    ) -> Result<InferenceResult, DiagramError> {
        let n = self.len();
        if source >= n {
            return Err(DiagramError::UnknownNode(format!("#{source}")));
        }
        let default_order;
        let order = match order {
            Some(o) => {
                if !self.is_topological_order(o) {
                    return Err(DiagramError::NotATopologicalOrder);
                }
                o
            }
            None => {
                default_order = self.topological_order();
                &default_order
            }
        };
        let reachable = self.reachable_from(source);

        let mut start = Cell {
            depth: 0,
            membership: vec![Membership::Unknown; n],
            from_split: FixedBitSet::with_capacity(n),
        };
        start.membership[source] = Membership::In;
        let mut cells = vec![start];
        let mut trace = vec![TraceEvent::Source { node: source }];

        for &t in order {
            if t == source {
                continue;
            }
            if !reachable.contains(t) {
                trace.push(TraceEvent::Unreachable { target: t });
                continue;
            }
            let mut next = Vec::with_capacity(cells.len());
            for (ci, cell) in cells.into_iter().enumerate() {
                let (step, outcome) = self.decide(t, ci, &cell, opts);
                trace.push(step);
                match outcome {
                    Outcome::Split => {
                        let mut yes = cell.clone();
                        yes.depth += 1;
                        yes.membership[t] = Membership::In;
                        yes.from_split.insert(t);
                        let mut no = cell;
                        no.depth += 1;
                        no.membership[t] = Membership::Out;
                        no.from_split.insert(t);
                        next.push(yes);
                        next.push(no);
                    }
                    other => {
                        let mut cell = cell;
                        cell.membership[t] = match other {
                            Outcome::In => Membership::In,
                            Outcome::Out => Membership::Out,
                            _ => Membership::Unknown,
                        };
                        next.push(cell);
                    }
                }
            }
            if next.len() > MAX_CELLS || next.iter().any(|c| c.depth >= 63) {
                return Err(DiagramError::TooManyCells);
            }
            cells = next;
        }

        let targets = (0..n)
            .map(|t| {
                let mut acc = [Fraction::from_integer(0); 3];
                for c in &cells {
                    let slot = match c.membership[t] {
                        Membership::In => 0,
                        Membership::Out => 1,
                        Membership::Unknown => 2,
                    };
                    acc[slot] += c.fraction();
                }
                TargetResult::new(t, acc[0], acc[1], acc[2])
            })
            .collect();
        Ok(InferenceResult {
            source,
            targets,
            cells,
            trace,
        })
    }

    /// One cell's decision on target `t`.
    fn decide(
        &self,
        t: usize,
        cell_index: usize,
        cell: &Cell,
        opts: &InferOptions,
    ) -> (TraceEvent, Outcome) {
        let mut applicable = Vec::new();
        let mut blocked = Vec::new();
        for &k in &self.incoming[t] {
            let u = self.arrows[k].from;
            let usable = cell.membership[u] == Membership::In
                && (opts.inherit_into_split_halves || !cell.from_split.contains(u));
            if usable {
                applicable.push(k);
            } else {
                blocked.push(k);
            }
        }
        let mut preempted = Vec::new();
        let mut survivors = Vec::new();
        for &k in &applicable {
            let a = self.arrows[k];
            let by = applicable.iter().copied().find(|&j| {
                let b = self.arrows[j];
                b.polarity != a.polarity && self.positive_path(b.from, a.from)
            });
            match by {
                Some(j) => preempted.push(Preemption { arrow: k, by: j }),
                None => survivors.push(k),
            }
        }
        let pos = survivors
            .iter()
            .any(|&k| self.arrows[k].polarity == Polarity::Positive);
        let neg = survivors
            .iter()
            .any(|&k| self.arrows[k].polarity == Polarity::Negative);
        let outcome = match (pos, neg) {
            (true, true) => Outcome::Split,
            (true, false) => Outcome::In,
            (false, true) => Outcome::Out,
            (false, false) => Outcome::Unknown,
        };
        let event = TraceEvent::Step {
            target: t,
            cell: cell_index,
            depth: cell.depth,
            applicable,
            preempted,
            blocked,
            outcome,
        };
        (event, outcome)
    }

    /// The part of the inference trace that decides `target`.
    pub fn explain(&self, source: &str, target: &str) -> Result<Vec<TraceEvent>, DiagramError> {
        let s = self.node(source)?;
        let t = self.node(target)?;
        let result = self.infer_from(s, &InferOptions::default(), None)?;
        Ok(result
            .trace
            .into_iter()
            .filter(|e| e.target() == t)
            .collect())
    }

    pub fn render_event(&self, e: &TraceEvent) -> String {
        match e {
            TraceEvent::Source { node } => {
                format!("{}: source, IN by definition", self.names[*node])
            }
            TraceEvent::Unreachable { target } => {
                format!(
                    "{}: not reachable from the source, UNKNOWN",
                    self.names[*target]
                )
            }
            TraceEvent::Step {
                target,
                cell,
                depth,
                applicable,
                preempted,
                blocked,
                outcome,
            } => {
                let arrows = |ks: &[usize]| {
                    ks.iter()
                        .map(|&k| self.show_arrow(&self.arrows[k]))
                        .collect::<Vec<_>>()
                        .join(", ")
                };
                let mut out = format!(
                    "{} [cell {cell}, fraction 1/{}]:",
                    self.names[*target],
                    1u64 << depth
                );
                if applicable.is_empty() {
                    out.push_str(" no applicable arrows;");
                } else {
                    out.push_str(&format!(" applicable {};", arrows(applicable)));
                }
                for p in preempted {
                    let (a, b) = (self.arrows[p.arrow], self.arrows[p.by]);
                    out.push_str(&format!(
                        " {} preempted by {} ({} is more specific than {});",
                        self.show_arrow(&a),
                        self.show_arrow(&b),
                        self.names[b.from],
                        self.names[a.from]
                    ));
                }
                if !blocked.is_empty() {
                    out.push_str(&format!(" inapplicable {};", arrows(blocked)));
                }
                let verdict = match outcome {
                    Outcome::In => "IN".to_string(),
                    Outcome::Out => "OUT".to_string(),
                    Outcome::Unknown => "UNKNOWN".to_string(),
                    Outcome::Split => {
                        "unresolved conflict, split into IN and OUT halves".to_string()
                    }
                };
                out.push_str(&format!(" => {verdict}"));
                out
            }
        }
    }
}

impl fmt::Debug for InheritanceDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SpecificityKind {
    /// Direct positive arrow between the two tails.
    Triangle,
    /// Positive path of length two or more.
    Chain,
}

/// `more_specific < less_specific`, witnessed by conflicting arrows into
/// `via`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Specificity {
    pub more_specific: usize,
    pub less_specific: usize,
    pub via: usize,
    pub kind: SpecificityKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InferOptions {
    /// Whether the halves produced by splitting on a node inherit that
    /// node's own outgoing arrows. OUT halves never do.
    pub inherit_into_split_halves: bool,
}

impl Default for InferOptions {
    fn default() -> Self {
        InferOptions {
            inherit_into_split_halves: true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Membership {
    In,
    Out,
    Unknown,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Outcome {
    In,
    Out,
    Unknown,
    Split,
}

/// A part of the source population of size `2^-depth`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cell {
    pub depth: u32,
    pub membership: Vec<Membership>,
    from_split: FixedBitSet,
}

impl Cell {
    pub fn fraction(&self) -> Fraction {
        Fraction::new(1, 1u64 << self.depth)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Status {
    InBig,
    OutBig,
    Split,
    None,
    Mixed,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::InBig => "IN_BIG",
            Status::OutBig => "OUT_BIG",
            Status::Split => "SPLIT",
            Status::None => "NONE",
            Status::Mixed => "MIXED",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TargetResult {
    pub target: usize,
    pub status: Status,
    pub in_fraction: Fraction,
    pub out_fraction: Fraction,
    pub unknown_fraction: Fraction,
}

impl TargetResult {
    fn new(
        target: usize,
        in_fraction: Fraction,
        out_fraction: Fraction,
        unknown_fraction: Fraction,
    ) -> Self {
        let zero = Fraction::from_integer(0);
        let one = Fraction::from_integer(1);
        let status = if in_fraction == one {
            Status::InBig
        } else if out_fraction == one {
            Status::OutBig
        } else if unknown_fraction == one {
            Status::None
        } else if in_fraction > zero && out_fraction > zero && unknown_fraction == zero {
            Status::Split
        } else {
            Status::Mixed
        };
        TargetResult {
            target,
            status,
            in_fraction,
            out_fraction,
            unknown_fraction,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Preemption {
    pub arrow: usize,
    pub by: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TraceEvent {
    Source {
        node: usize,
    },
    Unreachable {
        target: usize,
    },
    Step {
        target: usize,
        /// Index of the cell in the cell list before this target.
        cell: usize,
        depth: u32,
        applicable: Vec<usize>,
        preempted: Vec<Preemption>,
        /// Arrows into the target whose tail is not IN in this cell.
        blocked: Vec<usize>,
        outcome: Outcome,
    },
}

impl TraceEvent {
    pub fn target(&self) -> usize {
        match self {
            TraceEvent::Source { node } => *node,
            TraceEvent::Unreachable { target } | TraceEvent::Step { target, .. } => *target,
        }
    }
}

#[derive(Debug, Clone)]
pub struct InferenceResult {
    pub source: usize,
    /// One entry per node, in declaration order (the source is IN_BIG).
    pub targets: Vec<TargetResult>,
    pub cells: Vec<Cell>,
    pub trace: Vec<TraceEvent>,
}

impl InferenceResult {
    pub fn target(&self, t: usize) -> &TargetResult {
        &self.targets[t]
    }

    /// Cells as `(depth, membership)` in sorted order; equal for every
    /// processing order.
    pub fn canonical_cells(&self) -> Vec<(u32, Vec<Membership>)> {
        let mut cells: Vec<_> = self
            .cells
            .iter()
            .map(|c| (c.depth, c.membership.clone()))
            .collect();
        cells.sort();
        cells
    }
}

fn find_cycle(succ: &[Vec<usize>]) -> Option<Vec<usize>> {
    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        New,
        Active,
        Done,
    }
    fn visit(
        v: usize,
        succ: &[Vec<usize>],
        mark: &mut [Mark],
        stack: &mut Vec<usize>,
    ) -> Option<Vec<usize>> {
        mark[v] = Mark::Active;
        stack.push(v);
        for &w in &succ[v] {
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
    (0..succ.len()).find_map(|v| {
        if mark[v] == Mark::New {
            visit(v, succ, &mut mark, &mut stack)
        } else {
            None
        }
    })
}
