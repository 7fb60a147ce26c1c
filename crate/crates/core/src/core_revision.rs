//! Depth, core and distance-based revision over propositional models.
//!
//! Models are assignments over a fixed variable list, encoded as integers
//! with variable `j` at bit `j`. A [`ModelSet`] is a set of such
//! assignments; [`Formula`]s denote model sets by truth-table enumeration.
//!
//! The core of a set collects the members that lie deep inside it, far from
//! the complement. It is computed in two ways: directly from depths, and by
//! peeling the set with repeated revision by its growing complement.

use std::collections::HashMap;
use std::fmt;

use fixedbitset::FixedBitSet;
use thiserror::Error;

pub const MAX_VARS: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoreError {
    #[error("syntax error at offset {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("invalid variable name `{0}`")]
    InvalidVariable(String),
    #[error("{0} variables given, at most {MAX_VARS} are supported")]
    TooManyVariables(usize),
    #[error("assignment is not a member of the set")]
    NotAMember,
    #[error("operation needs a nonempty set")]
    EmptyInput,
    #[error("formula is unsatisfiable")]
    UnsatisfiableInput,
    #[error("core multiplier must be at least 1")]
    InvalidMultiplier,
    #[error("invalid distance: {0}")]
    InvalidDistance(String),
    #[error("model sets range over different variable counts")]
    UniverseMismatch,
}

/// The declared variables, in bit order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Universe {
    vars: Vec<String>,
    index: HashMap<String, usize>,
}

impl Universe {
    pub fn new<S: AsRef<str>>(vars: &[S]) -> Result<Self, CoreError> {
        if vars.len() > MAX_VARS {
            return Err(CoreError::TooManyVariables(vars.len()));
        }
        let mut index = HashMap::new();
        for (i, v) in vars.iter().enumerate() {
            let v = v.as_ref();
            if !is_var_name(v) || index.insert(v.to_string(), i).is_some() {
                return Err(CoreError::InvalidVariable(v.to_string()));
            }
        }
        Ok(Universe {
            vars: vars.iter().map(|v| v.as_ref().to_string()).collect(),
            index,
        })
    }

    /// Comma- or whitespace-separated variable list.
    pub fn parse_list(text: &str) -> Result<Self, CoreError> {
        let vars: Vec<&str> = text
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|s| !s.is_empty())
            .collect();
        Self::new(&vars)
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn len(&self) -> usize {
        self.vars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vars.is_empty()
    }

    /// Number of assignments, `2^n`.
    pub fn size(&self) -> usize {
        1 << self.vars.len()
    }

    pub fn all(&self) -> ModelSet {
        ModelSet::all(self.len())
    }

    /// Assignment as a bit string, first declared variable leftmost.
    pub fn show_assignment(&self, x: u32) -> String {
        (0..self.len())
            .map(|j| if x >> j & 1 == 1 { '1' } else { '0' })
            .collect()
    }

    pub fn parse_assignment(&self, bits: &str) -> Option<u32> {
        if bits.len() != self.len() {
            return None;
        }
        bits.chars()
            .enumerate()
            .try_fold(0u32, |acc, (j, c)| match c {
                '0' => Some(acc),
                '1' => Some(acc | 1 << j),
                _ => None,
            })
    }

    pub fn show_set(&self, s: &ModelSet) -> String {
        let items: Vec<String> = s.iter().map(|x| self.show_assignment(x)).collect();
        format!("{{{}}}", items.join(", "))
    }
}

fn is_var_name(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some('a'..='z'))
        && chars.all(|c| c.is_ascii_lowercase() || c.is_ascii_digit() || c == '_')
        && s != "true"
        && s != "false"
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    Const(bool),
    Var(usize),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
}

impl Formula {
    pub fn negate(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn eval(&self, x: u32) -> bool {
        match self {
            Formula::Const(b) => *b,
            Formula::Var(j) => x >> j & 1 == 1,
            Formula::Not(f) => !f.eval(x),
            Formula::And(a, b) => a.eval(x) && b.eval(x),
            Formula::Or(a, b) => a.eval(x) || b.eval(x),
            Formula::Implies(a, b) => !a.eval(x) || b.eval(x),
        }
    }

    /// Full disjunctive normal form of a model set: one conjunction of all
    /// literals per member, `false` for the empty set.
    pub fn dnf(models: &ModelSet) -> Formula {
        let n = models.num_vars();
        let term = |x: u32| {
            (0..n)
                .map(|j| {
                    if x >> j & 1 == 1 {
                        Formula::Var(j)
                    } else {
                        Formula::negate(Formula::Var(j))
                    }
                })
                .reduce(Formula::and)
                .unwrap_or(Formula::Const(true))
        };
        models
            .iter()
            .map(term)
            .reduce(Formula::or)
            .unwrap_or(Formula::Const(false))
    }

    pub fn render(&self, u: &Universe) -> String {
        self.render_prec(u, 0)
    }

    // precedence: 0 implies, 1 or, 2 and, 3 not/atom
    fn render_prec(&self, u: &Universe, ctx: u8) -> String {
        let (prec, s) = match self {
            Formula::Const(b) => (3, b.to_string()),
            Formula::Var(j) => (3, u.vars[*j].clone()),
            Formula::Not(f) => (3, format!("!{}", f.render_prec(u, 3))),
            Formula::And(a, b) => (
                2,
                format!("{} & {}", a.render_prec(u, 2), b.render_prec(u, 3)),
            ),
            Formula::Or(a, b) => (
                1,
                format!("{} | {}", a.render_prec(u, 1), b.render_prec(u, 2)),
            ),
            Formula::Implies(a, b) => (
                0,
                format!("{} -> {}", a.render_prec(u, 1), b.render_prec(u, 0)),
            ),
        };
        if prec < ctx {
            format!("({s})")
        } else {
            s
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Var(String),
    True,
    False,
    Not,
    And,
    Or,
    Implies,
    LParen,
    RParen,
}

fn tokenize(text: &str) -> Result<Vec<(usize, Token)>, CoreError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        let tok = match c {
            ' ' | '\t' | '\n' | '\r' => {
                i += 1;
                continue;
            }
            '!' => Token::Not,
            '&' => Token::And,
            '|' => Token::Or,
            '(' => Token::LParen,
            ')' => Token::RParen,
            '-' if bytes.get(i + 1) == Some(&b'>') => {
                out.push((i, Token::Implies));
                i += 2;
                continue;
            }
            'a'..='z' => {
                let start = i;
                while i < bytes.len()
                    && (bytes[i].is_ascii_lowercase()
                        || bytes[i].is_ascii_digit()
                        || bytes[i] == b'_')
                {
                    i += 1;
                }
                let word = &text[start..i];
                let tok = match word {
                    "true" => Token::True,
                    "false" => Token::False,
                    _ => Token::Var(word.to_string()),
                };
                out.push((start, tok));
                continue;
            }
            other => {
                return Err(CoreError::Syntax {
                    offset: i,
                    message: format!("unexpected character `{other}`"),
                })
            }
        };
        out.push((i, tok));
        i += 1;
    }
    Ok(out)
}

struct Parser<'a> {
    tokens: Vec<(usize, Token)>,
    pos: usize,
    end: usize,
    universe: &'a Universe,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.tokens.get(self.pos).map_or(self.end, |(o, _)| *o)
    }

    fn error(&self, message: impl Into<String>) -> CoreError {
        CoreError::Syntax {
            offset: self.offset(),
            message: message.into(),
        }
    }

    fn eat(&mut self, t: &Token) -> bool {
        if self.peek() == Some(t) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    // implication := disjunction ( "->" implication )?
    fn implication(&mut self) -> Result<Formula, CoreError> {
        let lhs = self.disjunction()?;
        if self.eat(&Token::Implies) {
            let rhs = self.implication()?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> Result<Formula, CoreError> {
        let mut f = self.conjunction()?;
        while self.eat(&Token::Or) {
            f = Formula::or(f, self.conjunction()?);
        }
        Ok(f)
    }

    fn conjunction(&mut self) -> Result<Formula, CoreError> {
        let mut f = self.unary()?;
        while self.eat(&Token::And) {
            f = Formula::and(f, self.unary()?);
        }
        Ok(f)
    }

    fn unary(&mut self) -> Result<Formula, CoreError> {
        let tok = self.peek().cloned();
        match tok {
            Some(Token::Not) => {
                self.pos += 1;
                Ok(Formula::negate(self.unary()?))
            }
            Some(Token::LParen) => {
                self.pos += 1;
                let f = self.implication()?;
                if !self.eat(&Token::RParen) {
                    return Err(self.error("expected `)`"));
                }
                Ok(f)
            }
            Some(Token::True) => {
                self.pos += 1;
                Ok(Formula::Const(true))
            }
            Some(Token::False) => {
                self.pos += 1;
                Ok(Formula::Const(false))
            }
            Some(Token::Var(name)) => {
                self.pos += 1;
                self.universe
                    .index
                    .get(&name)
                    .map(|&j| Formula::Var(j))
                    .ok_or(CoreError::UnknownVariable(name))
            }
            Some(t) => Err(self.error(format!("unexpected {t:?}"))),
            None => Err(self.error("unexpected end of formula")),
        }
    }
}

/// Parses a formula over the variables of `u`. Precedence, tightest first:
/// `!`, `&`, `|`, `->` (right-associative).
pub fn parse_formula(text: &str, u: &Universe) -> Result<Formula, CoreError> {
    let mut p = Parser {
        tokens: tokenize(text)?,
        pos: 0,
        end: text.len(),
        universe: u,
    };
    let f = p.implication()?;
    if p.pos != p.tokens.len() {
        return Err(p.error("trailing input"));
    }
    Ok(f)
}

/// A set of assignments over `num_vars` variables.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ModelSet {
    num_vars: usize,
    bits: FixedBitSet,
}

impl ModelSet {
    pub fn empty(num_vars: usize) -> Self {
        assert!(num_vars <= MAX_VARS);
        ModelSet {
            num_vars,
            bits: FixedBitSet::with_capacity(1 << num_vars),
        }
    }

    pub fn all(num_vars: usize) -> Self {
        let mut s = Self::empty(num_vars);
        s.bits.insert_range(..);
        s
    }

    pub fn from_assignments<I: IntoIterator<Item = u32>>(num_vars: usize, it: I) -> Self {
        let mut s = Self::empty(num_vars);
        for x in it {
            s.insert(x);
        }
        s
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn insert(&mut self, x: u32) {
        self.bits.insert(x as usize);
    }

    pub fn contains(&self, x: u32) -> bool {
        self.bits.contains(x as usize)
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_clear()
    }

    pub fn is_full(&self) -> bool {
        self.len() == 1 << self.num_vars
    }

    /// Members in increasing order.
    pub fn iter(&self) -> impl Iterator<Item = u32> + '_ {
        self.bits.ones().map(|x| x as u32)
    }

    pub fn union(&self, other: &ModelSet) -> ModelSet {
        let mut s = self.clone();
        s.bits.union_with(&other.bits);
        s
    }

    pub fn intersection(&self, other: &ModelSet) -> ModelSet {
        let mut s = self.clone();
        s.bits.intersect_with(&other.bits);
        s
    }

    pub fn difference(&self, other: &ModelSet) -> ModelSet {
        let mut s = self.clone();
        s.bits.difference_with(&other.bits);
        s
    }

    pub fn complement(&self) -> ModelSet {
        let mut s = self.clone();
        s.bits.toggle_range(..);
        s
    }

    pub fn is_subset_of(&self, other: &ModelSet) -> bool {
        self.bits.is_subset(&other.bits)
    }

    pub fn is_disjoint(&self, other: &ModelSet) -> bool {
        self.bits.is_disjoint(&other.bits)
    }
}

impl fmt::Debug for ModelSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// The models of `f`, by enumerating all assignments.
pub fn models(f: &Formula, u: &Universe) -> ModelSet {
    ModelSet::from_assignments(u.len(), (0..u.size() as u32).filter(|&x| f.eval(x)))
}

/// A distance on assignments: symmetric, zero exactly on the diagonal
/// (identity is only required as `d(x, x) = 0`).
pub trait Distance: Sync {
    fn distance(&self, x: u32, y: u32) -> u32;

    /// For every assignment, its distance to the nearest member of `set`
    /// (`None` when `set` is empty).
    fn distances_to(&self, set: &ModelSet) -> Vec<Option<u32>> {
        let size = 1u32 << set.num_vars();
        (0..size)
            .map(|x| set.iter().map(|y| self.distance(x, y)).min())
            .collect()
    }
}

/// Number of differing variables.
#[derive(Debug, Clone, Copy, Default)]
pub struct Hamming;

impl Distance for Hamming {
    fn distance(&self, x: u32, y: u32) -> u32 {
        (x ^ y).count_ones()
    }

    /// Multi-source breadth-first search over the hypercube.
    fn distances_to(&self, set: &ModelSet) -> Vec<Option<u32>> {
        let n = set.num_vars();
        let mut dist: Vec<Option<u32>> = vec![None; 1 << n];
        let mut frontier: Vec<u32> = set.iter().collect();
        for &x in &frontier {
            dist[x as usize] = Some(0);
        }
        let mut level = 0;
        while !frontier.is_empty() {
            level += 1;
            let mut next = Vec::new();
            for x in frontier {
                for j in 0..n {
                    let y = x ^ (1 << j);
                    if dist[y as usize].is_none() {
                        dist[y as usize] = Some(level);
                        next.push(y);
                    }
                }
            }
            frontier = next;
        }
        dist
    }
}

/// A distance given as a full table, validated on construction.
#[derive(Debug, Clone)]
pub struct TableDistance {
    num_vars: usize,
    table: Vec<u32>,
}

impl TableDistance {
    /// Tabulates `f` over all pairs of assignments and checks symmetry and
    /// `d(x, x) = 0`. Limited to 8 variables (a 65536-entry table).
    pub fn new(num_vars: usize, f: impl Fn(u32, u32) -> u32) -> Result<Self, CoreError> {
        if num_vars > 8 {
            return Err(CoreError::InvalidDistance(
                "tables are limited to 8 variables".into(),
            ));
        }
        let size = 1u32 << num_vars;
        let mut table = Vec::with_capacity((size * size) as usize);
        for x in 0..size {
            for y in 0..size {
                table.push(f(x, y));
            }
        }
        let d = TableDistance { num_vars, table };
        for x in 0..size {
            if d.distance(x, x) != 0 {
                return Err(CoreError::InvalidDistance(format!("d({x}, {x}) ≠ 0")));
            }
            for y in 0..x {
                if d.distance(x, y) != d.distance(y, x) {
                    return Err(CoreError::InvalidDistance(format!(
                        "d({x}, {y}) ≠ d({y}, {x})"
                    )));
                }
            }
        }
        Ok(d)
    }
}

impl Distance for TableDistance {
    fn distance(&self, x: u32, y: u32) -> u32 {
        self.table[((x as usize) << self.num_vars) + y as usize]
    }
}

/// A depth value; the whole universe has no complement and infinite depth.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Depth {
    Finite(u32),
    Infinite,
}

impl fmt::Display for Depth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Depth::Finite(k) => write!(f, "{k}"),
            Depth::Infinite => f.write_str("inf"),
        }
    }
}

fn depths(x: &ModelSet, d: &dyn Distance) -> Vec<Option<u32>> {
    d.distances_to(&x.complement())
}

/// Distance from `point` to the nearest assignment outside `x`.
pub fn depth_point(x: &ModelSet, point: u32, d: &dyn Distance) -> Result<Depth, CoreError> {
    if (point as usize) >= 1 << x.num_vars() || !x.contains(point) {
        return Err(CoreError::NotAMember);
    }
    Ok(x.complement()
        .iter()
        .map(|y| d.distance(point, y))
        .min()
        .map_or(Depth::Infinite, Depth::Finite))
}

/// Largest member depth.
pub fn depth_set(x: &ModelSet, d: &dyn Distance) -> Result<Depth, CoreError> {
    if x.is_empty() {
        return Err(CoreError::EmptyInput);
    }
    if x.is_full() {
        return Ok(Depth::Infinite);
    }
    let ds = depths(x, d);
    Ok(Depth::Finite(
        x.iter().filter_map(|p| ds[p as usize]).max().unwrap_or(0),
    ))
}

/// Members whose depth is at least `1/m` of the set's depth, compared as
/// `m · depth(x) ≥ depth(X)`.
pub fn core(x: &ModelSet, m: u32, d: &dyn Distance) -> Result<ModelSet, CoreError> {
    if m == 0 {
        return Err(CoreError::InvalidMultiplier);
    }
    let top = match depth_set(x, d)? {
        Depth::Infinite => return Ok(x.clone()),
        Depth::Finite(k) => u64::from(k),
    };
    let ds = depths(x, d);
    Ok(ModelSet::from_assignments(
        x.num_vars(),
        x.iter()
            .filter(|&p| u64::from(m) * u64::from(ds[p as usize].unwrap_or(0)) >= top),
    ))
}

/// The members of `x` closest to `y`; `x` itself when `y` is empty.
pub fn revise(y: &ModelSet, x: &ModelSet, d: &dyn Distance) -> Result<ModelSet, CoreError> {
    if x.is_empty() {
        return Err(CoreError::EmptyInput);
    }
    if y.num_vars() != x.num_vars() {
        return Err(CoreError::UniverseMismatch);
    }
    if y.is_empty() {
        return Ok(x.clone());
    }
    let ds = d.distances_to(y);
    let best = x.iter().filter_map(|p| ds[p as usize]).min();
    Ok(ModelSet::from_assignments(
        x.num_vars(),
        x.iter().filter(|&p| ds[p as usize] == best),
    ))
}

/// Result of peeling a set from the outside in.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Peeling {
    /// `Z_0, .., Z_n`: successive outer layers, partitioning the input.
    pub layers: Vec<ModelSet>,
    /// `X_0 ⊋ X_1 ⊋ .. ⊋ X_n`: what remains before each layer is removed.
    pub remainders: Vec<ModelSet>,
    /// `X_⌈n/2⌉`.
    pub core: ModelSet,
}

impl Peeling {
    /// Index of the last layer.
    pub fn last(&self) -> usize {
        self.layers.len() - 1
    }
}

fn core_index(last: usize) -> usize {
    last.div_ceil(2)
}

/// Repeatedly revises the complement by the remaining set and removes the
/// revised part, until the revision returns everything that is left.
pub fn peel(x0: &ModelSet, d: &dyn Distance) -> Result<Peeling, CoreError> {
    if x0.is_empty() {
        return Err(CoreError::EmptyInput);
    }
    if x0.is_full() {
        return Ok(Peeling {
            layers: vec![x0.clone()],
            remainders: vec![x0.clone()],
            core: x0.clone(),
        });
    }
    let mut outside = x0.complement();
    let mut rest = x0.clone();
    let mut layers = Vec::new();
    let mut remainders = vec![x0.clone()];
    loop {
        let z = revise(&outside, &rest, d)?;
        let done = z == rest;
        layers.push(z.clone());
        if done {
            break;
        }
        rest = rest.difference(&z);
        outside = outside.union(&z);
        remainders.push(rest.clone());
    }
    let core = remainders[core_index(layers.len() - 1)].clone();
    Ok(Peeling {
        layers,
        remainders,
        core,
    })
}

/// [`core`] applied to the models of `phi`.
pub fn core_formula(
    phi: &Formula,
    u: &Universe,
    m: u32,
    d: &dyn Distance,
) -> Result<ModelSet, CoreError> {
    let xs = models(phi, u);
    if xs.is_empty() {
        return Err(CoreError::UnsatisfiableInput);
    }
    core(&xs, m, d)
}

/// Peeling carried out on formulas: each layer formula is the revision of
/// the accumulated outside formula by the remaining formula, and the core
/// is the disjunction of the remaining formulas from the middle index on.
#[derive(Debug, Clone)]
pub struct FormulaPeeling {
    pub layer_formulas: Vec<Formula>,
    pub core_formula: Formula,
    pub peeling: Peeling,
}

pub fn peel_formula(
    phi: &Formula,
    u: &Universe,
    d: &dyn Distance,
) -> Result<FormulaPeeling, CoreError> {
    let x0 = models(phi, u);
    if x0.is_empty() {
        return Err(CoreError::UnsatisfiableInput);
    }
    let mut psi = Formula::negate(phi.clone());
    if models(&psi, u).is_empty() {
        return Ok(FormulaPeeling {
            layer_formulas: vec![phi.clone()],
            core_formula: phi.clone(),
            peeling: Peeling {
                layers: vec![x0.clone()],
                remainders: vec![x0.clone()],
                core: x0,
            },
        });
    }
    let mut phis = vec![phi.clone()];
    let mut taus = Vec::new();
    loop {
        let current = phis.last().unwrap();
        let rest = models(current, u);
        let tau = Formula::dnf(&revise(&models(&psi, u), &rest, d)?);
        let done = models(&tau, u) == rest;
        taus.push(tau.clone());
        if done {
            break;
        }
        let next = Formula::and(current.clone(), Formula::negate(tau.clone()));
        psi = Formula::or(psi, tau);
        phis.push(next);
    }
    let last = taus.len() - 1;
    let core_formula = phis[core_index(last)..=last]
        .iter()
        .cloned()
        .reduce(Formula::or)
        .expect("nonempty range");
    let peeling = Peeling {
        layers: taus.iter().map(|t| models(t, u)).collect(),
        remainders: phis.iter().map(|p| models(p, u)).collect(),
        core: models(&core_formula, u),
    };
    Ok(FormulaPeeling {
        layer_formulas: taus,
        core_formula,
        peeling,
    })
}
