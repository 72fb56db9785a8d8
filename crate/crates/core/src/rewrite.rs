//! Words in the generators `r_i`, `e_i` and `δ^{±1}`, the Brauer relations
//! as a height-graded rewrite system, and bounded reduction.
//!
//! The search works on commutation classes: two words differing by swaps of
//! letters on distinct non-adjacent nodes are the same state, represented by
//! the lexicographically least word of the class.

use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;

use rustc_hash::{FxHashMap, FxHashSet};
use serde::{Deserialize, Serialize};

use crate::admissible::{act_e, act_r, AdmissibleSet};
use crate::error::{Error, Result};
use crate::rootsystem::{Node, RootSystem};

/// A monoid generator. The derived order `E(1) < … < E(n) < R(1) < …` is the
/// token order used for canonical representatives.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Gen {
    E(Node),
    R(Node),
}

impl Gen {
    pub fn node(self) -> Node {
        match self {
            Gen::E(i) | Gen::R(i) => i,
        }
    }

    pub fn is_r(self) -> bool {
        matches!(self, Gen::R(_))
    }
}

impl fmt::Display for Gen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Gen::E(i) => write!(f, "e{i}"),
            Gen::R(i) => write!(f, "r{i}"),
        }
    }
}

impl FromStr for Gen {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("bad token `{s}`"));
        let (kind, num) = s.split_at(s.char_indices().nth(1).map_or(s.len(), |(i, _)| i));
        let node: Node = num.parse().map_err(|_| bad())?;
        if node == 0 {
            return Err(bad());
        }
        match kind {
            "e" => Ok(Gen::E(node)),
            "r" => Ok(Gen::R(node)),
            _ => Err(bad()),
        }
    }
}

/// An element of the free monoid: a δ-power times a product of generators.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(try_from = "WordJson", into = "WordJson")]
pub struct Word {
    pub delta: i32,
    pub tokens: Vec<Gen>,
}

#[derive(Serialize, Deserialize)]
struct WordJson {
    delta: i32,
    tokens: Vec<String>,
}

impl TryFrom<WordJson> for Word {
    type Error = Error;

    fn try_from(j: WordJson) -> Result<Self> {
        let tokens = j.tokens.iter().map(|t| t.parse()).collect::<Result<_>>()?;
        Ok(Word { delta: j.delta, tokens })
    }
}

impl From<Word> for WordJson {
    fn from(w: Word) -> Self {
        WordJson { delta: w.delta, tokens: w.tokens.iter().map(|t| t.to_string()).collect() }
    }
}

impl Word {
    pub fn new(delta: i32, tokens: Vec<Gen>) -> Self {
        Self { delta, tokens }
    }

    pub fn identity() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    /// Product `self · other`.
    pub fn concat(&self, other: &Word) -> Word {
        let mut tokens = self.tokens.clone();
        tokens.extend_from_slice(&other.tokens);
        Word { delta: self.delta + other.delta, tokens }
    }

    pub fn with_delta(mut self, delta: i32) -> Word {
        self.delta = delta;
        self
    }

    /// Checks every node index against the rank of `sys`.
    pub fn validate(&self, sys: &RootSystem) -> Result<()> {
        for t in &self.tokens {
            let i = t.node();
            if i == 0 || i as usize > sys.rank() {
                return Err(Error::NodeOutOfRange { node: i as usize, rank: sys.rank() });
            }
        }
        Ok(())
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::with_capacity(self.tokens.len() + 1);
        if self.delta != 0 {
            parts.push(format!("d^{}", self.delta));
        }
        parts.extend(self.tokens.iter().map(|t| t.to_string()));
        if parts.is_empty() {
            return f.write_str("1");
        }
        f.write_str(&parts.join(" "))
    }
}

impl FromStr for Word {
    type Err = Error;

    /// Parses `"d^-2 e6 e5 r2"`; `"1"` and the empty string denote the identity.
    fn from_str(s: &str) -> Result<Self> {
        let mut w = Word::default();
        for (pos, part) in s.split_whitespace().enumerate() {
            if let Some(exp) = part.strip_prefix("d^") {
                if pos != 0 {
                    return Err(Error::Parse("δ-power must come first".into()));
                }
                w.delta = exp.parse().map_err(|_| Error::Parse(format!("bad δ exponent `{exp}`")))?;
            } else if part == "1" && s.split_whitespace().count() == 1 {
                return Ok(w);
            } else {
                w.tokens.push(part.parse()?);
            }
        }
        Ok(w)
    }
}

/// Number of `r` tokens.
pub fn word_height(w: &Word) -> usize {
    w.tokens.iter().filter(|t| t.is_r()).count()
}

/// The anti-involution `op`: tokens reversed, δ-power kept.
pub fn op_reverse(w: &Word) -> Word {
    let mut tokens = w.tokens.clone();
    tokens.reverse();
    Word { delta: w.delta, tokens }
}

/// Side of the monoid action on admissible sets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// Image of `set` under a word; δ acts trivially. The right action is the left
/// action of the reversed word.
pub fn act_word(sys: &RootSystem, w: &Word, side: Side, set: &AdmissibleSet) -> Result<AdmissibleSet> {
    let mut cur = set.clone();
    let mut apply = |t: &Gen| -> Result<()> {
        cur = match *t {
            Gen::R(i) => act_r(sys, i, &cur),
            Gen::E(i) => act_e(sys, i, &cur)?,
        };
        Ok(())
    };
    match side {
        Side::Left => w.tokens.iter().rev().try_for_each(&mut apply)?,
        Side::Right => w.tokens.iter().try_for_each(&mut apply)?,
    }
    Ok(cur)
}

/// Labels of the Brauer relations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[allow(clippy::upper_case_acronyms)]
pub enum RuleLabel {
    RSrr,
    RSer,
    RSre,
    HSee,
    HCrr,
    HCer,
    HCee,
    HNrrr,
    HNrer,
    RNrre,
    RNerr,
    HNree,
    RNere,
    HNeer,
    HNeee,
    HTeere,
    RTerre,
}

impl RuleLabel {
    pub const ALL: [RuleLabel; 17] = [
        RuleLabel::RSrr,
        RuleLabel::RSer,
        RuleLabel::RSre,
        RuleLabel::HSee,
        RuleLabel::HCrr,
        RuleLabel::HCer,
        RuleLabel::HCee,
        RuleLabel::HNrrr,
        RuleLabel::HNrer,
        RuleLabel::RNrre,
        RuleLabel::RNerr,
        RuleLabel::HNree,
        RuleLabel::RNere,
        RuleLabel::HNeer,
        RuleLabel::HNeee,
        RuleLabel::HTeere,
        RuleLabel::RTerre,
    ];

    pub fn kind(self) -> RuleKind {
        if format!("{self:?}").starts_with('R') {
            RuleKind::Reducing
        } else {
            RuleKind::Homogeneous
        }
    }

    pub fn context(self) -> Context {
        use RuleLabel::*;
        match self {
            RSrr | RSer | RSre | HSee => Context::Single,
            HCrr | HCer | HCee => Context::Commuting,
            HNrrr | HNrer | RNrre | RNerr | HNree | RNere | HNeer | HNeee => Context::Adjacent,
            HTeere | RTerre => Context::Path,
        }
    }

    /// Change of the δ-exponent when rewriting left to right.
    pub fn delta_change(self) -> i32 {
        if self == RuleLabel::HSee {
            1
        } else {
            0
        }
    }

    fn pattern(self) -> (&'static [Sym], &'static [Sym]) {
        use RuleLabel::*;
        use Sym::*;
        use Var::*;
        match self {
            RSrr => (&[R(I), R(I)], &[]),
            RSer => (&[E(I), R(I)], &[E(I)]),
            RSre => (&[R(I), E(I)], &[E(I)]),
            HSee => (&[E(I), E(I)], &[E(I)]),
            HCrr => (&[R(I), R(J)], &[R(J), R(I)]),
            HCer => (&[E(I), R(J)], &[R(J), E(I)]),
            HCee => (&[E(I), E(J)], &[E(J), E(I)]),
            HNrrr => (&[R(I), R(J), R(I)], &[R(J), R(I), R(J)]),
            HNrer => (&[R(J), E(I), R(J)], &[R(I), E(J), R(I)]),
            RNrre => (&[R(J), R(I), E(J)], &[E(I), E(J)]),
            RNerr => (&[E(I), R(J), R(I)], &[E(I), E(J)]),
            HNree => (&[R(J), E(I), E(J)], &[R(I), E(J)]),
            RNere => (&[E(I), R(J), E(I)], &[E(I)]),
            HNeer => (&[E(J), E(I), R(J)], &[E(J), R(I)]),
            HNeee => (&[E(I), E(J), E(I)], &[E(I)]),
            HTeere => (&[E(J), E(I), R(K), E(J)], &[E(J), R(I), E(K), E(J)]),
            RTerre => (&[E(J), R(I), R(K), E(J)], &[E(J), E(I), E(K), E(J)]),
        }
    }
}

impl fmt::Display for RuleLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

impl FromStr for RuleLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        RuleLabel::ALL
            .into_iter()
            .find(|l| format!("{l:?}") == s)
            .ok_or_else(|| Error::Parse(format!("unknown rule `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RuleKind {
    Reducing,
    Homogeneous,
}

/// Adjacency constraint on the rule variables.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Context {
    /// One node `i`.
    Single,
    /// `i ≁ j`, `i ≠ j`.
    Commuting,
    /// `i ∼ j`.
    Adjacent,
    /// `i ∼ j ∼ k`, `i ≠ k`.
    Path,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Var {
    I,
    J,
    K,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Sym {
    R(Var),
    E(Var),
}

/// Values of the rule variables. For the right-to-left use of (HNeee) the
/// node `j` is free and must be supplied.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Binding {
    pub i: Node,
    pub j: Option<Node>,
    pub k: Option<Node>,
}

impl Binding {
    pub fn i(i: Node) -> Self {
        Self { i, j: None, k: None }
    }

    pub fn ij(i: Node, j: Node) -> Self {
        Self { i, j: Some(j), k: None }
    }

    pub fn ijk(i: Node, j: Node, k: Node) -> Self {
        Self { i, j: Some(j), k: Some(k) }
    }

    fn get(&self, v: Var) -> Result<Node> {
        match v {
            Var::I => Ok(self.i),
            Var::J => self.j.ok_or_else(|| Error::ConstraintViolation("binding lacks j".into())),
            Var::K => self.k.ok_or_else(|| Error::ConstraintViolation("binding lacks k".into())),
        }
    }
}

/// A relation used in one direction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rule {
    pub label: RuleLabel,
    /// Left to right when true.
    pub forward: bool,
}

impl Rule {
    pub fn forward(label: RuleLabel) -> Self {
        Self { label, forward: true }
    }

    pub fn backward(label: RuleLabel) -> Self {
        Self { label, forward: false }
    }
}

/// One relation instantiated at concrete nodes, read left to right.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RuleInstance {
    pub label: RuleLabel,
    pub binding: Binding,
    pub lhs: Vec<Gen>,
    pub rhs: Vec<Gen>,
    pub delta: i32,
}

fn check_context(sys: &RootSystem, label: RuleLabel, b: &Binding) -> Result<()> {
    let n = sys.rank() as Node;
    let in_range = |x: Node| (1..=n).contains(&x);
    let vars: Vec<Node> = [Some(b.i), b.j, b.k].into_iter().flatten().collect();
    if let Some(&bad) = vars.iter().find(|&&x| !in_range(x)) {
        return Err(Error::NodeOutOfRange { node: bad as usize, rank: n as usize });
    }
    let fail = || Error::ConstraintViolation(label.to_string());
    match label.context() {
        Context::Single => Ok(()),
        Context::Commuting => {
            let j = b.get(Var::J)?;
            (b.i != j && !sys.adjacent(b.i, j)).then_some(()).ok_or_else(fail)
        }
        Context::Adjacent => sys.adjacent(b.i, b.get(Var::J)?).then_some(()).ok_or_else(fail),
        Context::Path => {
            let (j, k) = (b.get(Var::J)?, b.get(Var::K)?);
            (sys.adjacent(b.i, j) && sys.adjacent(j, k) && b.i != k).then_some(()).ok_or_else(fail)
        }
    }
}

fn instantiate(pattern: &[Sym], b: &Binding) -> Result<Vec<Gen>> {
    pattern
        .iter()
        .map(|s| match *s {
            Sym::R(v) => b.get(v).map(Gen::R),
            Sym::E(v) => b.get(v).map(Gen::E),
        })
        .collect()
}

/// Left and right sides of `label` at `binding`, checking the constraints.
pub fn rule_instance(sys: &RootSystem, label: RuleLabel, binding: Binding) -> Result<RuleInstance> {
    check_context(sys, label, &binding)?;
    let (l, r) = label.pattern();
    Ok(RuleInstance { label, binding, lhs: instantiate(l, &binding)?, rhs: instantiate(r, &binding)?, delta: label.delta_change() })
}

/// Every valid instantiation of every relation on the diagram of `sys`.
pub fn all_rule_instances(sys: &RootSystem) -> Vec<RuleInstance> {
    let nodes: Vec<Node> = sys.nodes().collect();
    let mut out = Vec::new();
    for label in RuleLabel::ALL {
        for &i in &nodes {
            let bindings: Vec<Binding> = match label.context() {
                Context::Single => vec![Binding::i(i)],
                Context::Commuting | Context::Adjacent => nodes.iter().map(|&j| Binding::ij(i, j)).collect(),
                Context::Path => nodes
                    .iter()
                    .flat_map(|&j| nodes.iter().map(move |&k| Binding::ijk(i, j, k)))
                    .collect(),
            };
            out.extend(bindings.into_iter().filter_map(|b| rule_instance(sys, label, b).ok()));
        }
    }
    out
}

/// Rewrites `w` with `rule` at token `position`.
pub fn apply_rule_at(sys: &RootSystem, w: &Word, rule: Rule, position: usize, binding: Binding) -> Result<Word> {
    if !rule.forward && rule.label.kind() == RuleKind::Reducing {
        return Err(Error::ConstraintViolation(format!("{} only rewrites left to right", rule.label)));
    }
    let inst = rule_instance(sys, rule.label, binding)?;
    let (from, to, delta) = if rule.forward {
        (&inst.lhs, &inst.rhs, inst.delta)
    } else {
        (&inst.rhs, &inst.lhs, -inst.delta)
    };
    let end = position + from.len();
    if end > w.tokens.len() || w.tokens[position..end] != from[..] {
        return Err(Error::PatternMismatch { rule: rule.label.to_string(), position });
    }
    let mut tokens = w.tokens[..position].to_vec();
    tokens.extend_from_slice(to);
    tokens.extend_from_slice(&w.tokens[end..]);
    Ok(Word { delta: w.delta + delta, tokens })
}

/// Resource limits for the homogeneous-class searches.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchCaps {
    pub max_extra_length: usize,
    pub max_visited: usize,
}

impl Default for SearchCaps {
    fn default() -> Self {
        Self { max_extra_length: 8, max_visited: 200_000 }
    }
}

impl SearchCaps {
    pub fn new(max_extra_length: usize, max_visited: usize) -> Result<Self> {
        if max_extra_length == 0 || max_visited == 0 {
            return Err(Error::Parse("search caps must be positive".into()));
        }
        Ok(Self { max_extra_length, max_visited })
    }

    /// Caps used for one escalation retry.
    pub fn escalated(self) -> Self {
        Self { max_extra_length: self.max_extra_length + 4, max_visited: self.max_visited.saturating_mul(5) }
    }
}

/// Result of [`reduce`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reduction {
    pub word: Word,
    /// True when a search was cut short by the caps.
    pub saturated: bool,
    /// Number of height-lowering rewrites applied.
    pub reducing_steps: usize,
}

impl Reduction {
    pub fn already_reduced(&self) -> bool {
        self.reducing_steps == 0
    }
}

/// Answer of [`homog_equiv`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Equivalence {
    Equivalent,
    /// Same commutation class reached with δ-exponents differing by this
    /// amount (first minus second); the words are not equivalent.
    DeltaOffset(i32),
    NotFoundWithinCaps,
}

const MAX_SEARCH_LEN: usize = 256;

#[derive(Clone, Copy, PartialEq, Eq, Default)]
struct Bits([u64; 4]);

impl Bits {
    fn set(&mut self, i: usize) {
        self.0[i >> 6] |= 1 << (i & 63);
    }

    fn get(&self, i: usize) -> bool {
        self.0[i >> 6] >> (i & 63) & 1 == 1
    }

    fn or(&mut self, o: &Bits) {
        for (a, b) in self.0.iter_mut().zip(o.0) {
            *a |= b;
        }
    }

    fn intersects(&self, o: &Bits) -> bool {
        self.0.iter().zip(o.0).any(|(a, b)| a & b != 0)
    }
}

#[derive(Debug, Clone)]
struct Move {
    variants: Vec<Vec<u8>>,
    rhs: Vec<u8>,
    delta: i32,
    height_drop: usize,
    len_change: isize,
}

/// Concrete rewrite moves of one diagram, indexed for matching modulo
/// commutation.
#[derive(Debug, Clone)]
pub struct Rewriter {
    n: usize,
    commute: Vec<bool>,
    moves: Vec<Move>,
    by_first: Vec<Vec<(u32, u32)>>,
}

impl Rewriter {
    pub fn new(sys: &RootSystem) -> Self {
        let n = sys.rank();
        let mut commute = vec![false; 4 * n * n];
        for a in 0..2 * n {
            for b in 0..2 * n {
                let (x, y) = ((a % n) as Node + 1, (b % n) as Node + 1);
                commute[a * 2 * n + b] = x != y && !sys.adjacent(x, y);
            }
        }
        let mut rw = Rewriter { n, commute, moves: Vec::new(), by_first: vec![Vec::new(); 2 * n] };
        let mut seen: FxHashSet<(Vec<u8>, Vec<u8>, i32)> = FxHashSet::default();
        let mut push = |rw: &mut Rewriter, lhs: &[Gen], rhs: &[Gen], delta: i32| {
            let l = rw.encode(lhs);
            let r = rw.encode(rhs);
            if !seen.insert((l.clone(), r.clone(), delta)) {
                return;
            }
            let height = |t: &[u8]| t.iter().filter(|&&x| x as usize >= rw.n).count();
            let variants = rw.linearizations(&l);
            rw.moves.push(Move {
                height_drop: height(&l) - height(&r),
                len_change: r.len() as isize - l.len() as isize,
                variants,
                rhs: r,
                delta,
            });
        };
        for inst in all_rule_instances(sys) {
            if inst.label.context() == Context::Commuting {
                continue;
            }
            push(&mut rw, &inst.lhs, &inst.rhs, inst.delta);
            if inst.label.kind() == RuleKind::Homogeneous {
                push(&mut rw, &inst.rhs, &inst.lhs, -inst.delta);
            }
        }
        for (m, mv) in rw.moves.iter().enumerate() {
            for (v, var) in mv.variants.iter().enumerate() {
                rw.by_first[var[0] as usize].push((m as u32, v as u32));
            }
        }
        rw
    }

    fn encode(&self, tokens: &[Gen]) -> Vec<u8> {
        tokens
            .iter()
            .map(|t| match *t {
                Gen::E(i) => i - 1,
                Gen::R(i) => self.n as u8 + i - 1,
            })
            .collect()
    }

    fn decode(&self, tokens: &[u8]) -> Vec<Gen> {
        tokens
            .iter()
            .map(|&t| {
                if (t as usize) < self.n {
                    Gen::E(t + 1)
                } else {
                    Gen::R(t - self.n as u8 + 1)
                }
            })
            .collect()
    }

    fn commutes(&self, a: u8, b: u8) -> bool {
        self.commute[a as usize * 2 * self.n + b as usize]
    }

    /// All words in the commutation class of `w` (used for short patterns).
    fn linearizations(&self, w: &[u8]) -> Vec<Vec<u8>> {
        let mut out = vec![w.to_vec()];
        let mut head = 0;
        while head < out.len() {
            let cur = out[head].clone();
            head += 1;
            for p in 0..cur.len().saturating_sub(1) {
                if self.commutes(cur[p], cur[p + 1]) {
                    let mut next = cur.clone();
                    next.swap(p, p + 1);
                    if !out.contains(&next) {
                        out.push(next);
                    }
                }
            }
        }
        out
    }

    /// Lexicographically least word of the commutation class.
    fn canonical(&self, w: &[u8]) -> Vec<u8> {
        let len = w.len();
        let mut indeg = vec![0u16; len];
        for q in 0..len {
            for p in 0..q {
                if !self.commutes(w[p], w[q]) {
                    indeg[q] += 1;
                }
            }
        }
        let mut done = vec![false; len];
        let mut out = Vec::with_capacity(len);
        for _ in 0..len {
            let pick = (0..len)
                .filter(|&q| !done[q] && indeg[q] == 0)
                .min_by_key(|&q| (w[q], q))
                .expect("a dependency order is acyclic");
            done[pick] = true;
            out.push(w[pick]);
            for q in pick + 1..len {
                if !done[q] && !self.commutes(w[pick], w[q]) {
                    indeg[q] -= 1;
                }
            }
        }
        out
    }

    fn dependencies(&self, w: &[u8]) -> Vec<Bits> {
        let len = w.len();
        let mut after = vec![Bits::default(); len];
        for p in (0..len).rev() {
            let mut acc = Bits::default();
            for q in p + 1..len {
                if !self.commutes(w[p], w[q]) && !acc.get(q) {
                    acc.set(q);
                    let aq = after[q];
                    acc.or(&aq);
                }
            }
            after[p] = acc;
        }
        after
    }

    /// Calls `f(move, chosen positions)` for every occurrence of a rule's
    /// left side as a factor of the commutation class of `w`.
    fn for_each_match(&self, w: &[u8], deps: &[Bits], mut f: impl FnMut(u32, &[usize]) -> bool) {
        let mut chosen = Vec::with_capacity(4);
        for p in 0..w.len() {
            for &(m, v) in &self.by_first[w[p] as usize] {
                let var = &self.moves[m as usize].variants[v as usize];
                chosen.clear();
                chosen.push(p);
                if !self.extend_match(w, deps, var, &mut chosen, &mut |pos| f(m, pos)) {
                    return;
                }
            }
        }
    }

    fn extend_match(&self, w: &[u8], deps: &[Bits], pattern: &[u8], chosen: &mut Vec<usize>, f: &mut dyn FnMut(&[usize]) -> bool) -> bool {
        if chosen.len() == pattern.len() {
            if self.is_convex(deps, chosen) {
                return f(chosen);
            }
            return true;
        }
        let want = pattern[chosen.len()];
        let last = *chosen.last().expect("match starts with one position");
        for q in last + 1..w.len() {
            if w[q] != want {
                continue;
            }
            chosen.push(q);
            let go_on = self.extend_match(w, deps, pattern, chosen, f);
            chosen.pop();
            if !go_on {
                return false;
            }
        }
        true
    }

    fn is_convex(&self, deps: &[Bits], chosen: &[usize]) -> bool {
        let mut set = Bits::default();
        for &c in chosen {
            set.set(c);
        }
        let (lo, hi) = (chosen[0], *chosen.last().expect("nonempty"));
        (lo + 1..hi).filter(|q| !set.get(*q)).all(|q| {
            let after_chosen = chosen.iter().any(|&c| c < q && deps[c].get(q));
            !(after_chosen && deps[q].intersects(&set))
        })
    }

    fn splice(&self, w: &[u8], deps: &[Bits], chosen: &[usize], rhs: &[u8]) -> Vec<u8> {
        let (lo, hi) = (chosen[0], *chosen.last().expect("nonempty"));
        let mut before = w[..lo].to_vec();
        let mut after = Vec::new();
        for q in lo + 1..hi {
            if chosen.contains(&q) {
                continue;
            }
            if chosen.iter().any(|&c| c < q && deps[c].get(q)) {
                after.push(w[q]);
            } else {
                before.push(w[q]);
            }
        }
        before.extend_from_slice(rhs);
        before.extend(after);
        before.extend_from_slice(&w[hi + 1..]);
        self.canonical(&before)
    }

    fn height(&self, w: &[u8]) -> usize {
        w.iter().filter(|&&t| t as usize >= self.n).count()
    }

    fn to_word(&self, w: &[u8], delta: i32) -> Word {
        Word { delta, tokens: self.decode(w) }
    }

    /// Canonical representative of the commutation class of `w`.
    pub fn commutation_canonical(&self, w: &Word) -> Word {
        self.to_word(&self.canonical(&self.encode(&w.tokens)), w.delta)
    }

    /// Words one height-preserving move away from `w`, up to commutation and
    /// of length at most `max_len`.
    pub fn homogeneous_moves(&self, w: &Word, max_len: usize) -> Vec<Word> {
        let mut out = Vec::new();
        self.neighbours(&self.canonical(&self.encode(&w.tokens)), max_len, &mut out);
        out.into_iter().map(|(t, d)| self.to_word(&t, w.delta + d)).collect()
    }

    /// First (leftmost) rewrite lowering height or length, if any.
    fn first_shrink(&self, w: &[u8]) -> Option<(Vec<u8>, i32, usize)> {
        let deps = self.dependencies(w);
        let mut best: Option<(Vec<u8>, i32, usize)> = None;
        self.for_each_match(w, &deps, |m, pos| {
            let mv = &self.moves[m as usize];
            if mv.height_drop > 0 || mv.len_change < 0 {
                best = Some((self.splice(w, &deps, pos, &mv.rhs), mv.delta, mv.height_drop));
                return false;
            }
            true
        });
        best
    }

    /// Homogeneous neighbours within `max_len`, plus whether some reducing
    /// rewrite lands strictly below `(height, bound_len)`.
    fn neighbours(&self, w: &[u8], max_len: usize, out: &mut Vec<(Vec<u8>, i32)>) {
        let deps = self.dependencies(w);
        self.for_each_match(w, &deps, |m, pos| {
            let mv = &self.moves[m as usize];
            if mv.height_drop == 0 && (w.len() as isize + mv.len_change) as usize <= max_len {
                out.push((self.splice(w, &deps, pos, &mv.rhs), mv.delta));
            }
            true
        });
    }

    /// A rewrite of `w` that lowers height, or length below `len_bound`.
    fn progress(&self, w: &[u8], len_bound: usize) -> Option<(Vec<u8>, i32, usize)> {
        let deps = self.dependencies(w);
        let mut found = None;
        self.for_each_match(w, &deps, |m, pos| {
            let mv = &self.moves[m as usize];
            let new_len = (w.len() as isize + mv.len_change) as usize;
            if mv.height_drop > 0 || (mv.len_change < 0 && new_len < len_bound) {
                found = Some((self.splice(w, &deps, pos, &mv.rhs), mv.delta, mv.height_drop));
                return false;
            }
            true
        });
        found
    }

    /// Bounded reduction; stops early once the height reaches `floor`.
    pub fn reduce_with_floor(&self, w: &Word, caps: SearchCaps, floor: Option<usize>) -> Reduction {
        let mut cur = self.canonical(&self.encode(&w.tokens));
        let mut delta = w.delta;
        let mut steps = 0;
        let mut saturated = false;
        let mut explored: Option<Vec<(Vec<u8>, i32)>> = None;
        loop {
            while let Some((next, d, drop)) = self.first_shrink(&cur) {
                cur = next;
                delta += d;
                steps += drop.min(1);
            }
            if cur.len() > MAX_SEARCH_LEN {
                saturated = true;
                break;
            }
            if floor.is_some_and(|f| self.height(&cur) <= f) {
                break;
            }
            match self.search_progress(&cur, delta, caps) {
                Search::Found(next, d, drop) => {
                    cur = next;
                    delta = d;
                    steps += drop.min(1);
                }
                Search::Exhausted(class) => {
                    explored = Some(class);
                    break;
                }
                Search::Capped(class) => {
                    saturated = true;
                    explored = Some(class);
                    break;
                }
            }
        }
        let class = match explored {
            Some(c) => c,
            None if cur.len() <= MAX_SEARCH_LEN => {
                let caps = SearchCaps { max_extra_length: 0, ..caps };
                match self.search_progress(&cur, delta, caps) {
                    Search::Exhausted(c) | Search::Capped(c) => c,
                    Search::Found(..) => vec![(cur.clone(), delta)],
                }
            }
            None => vec![(cur.clone(), delta)],
        };
        let (best, d) = class
            .into_iter()
            .min_by(|a, b| (a.0.len(), &a.0).cmp(&(b.0.len(), &b.0)))
            .expect("class contains the start word");
        Reduction { word: self.to_word(&best, d), saturated, reducing_steps: steps }
    }

    fn search_progress(&self, start: &[u8], delta: i32, caps: SearchCaps) -> Search {
        let max_len = start.len() + caps.max_extra_length;
        let mut seen: FxHashMap<Vec<u8>, i32> = FxHashMap::default();
        let mut order: Vec<(Vec<u8>, i32)> = vec![(start.to_vec(), delta)];
        seen.insert(start.to_vec(), delta);
        let mut head = 0;
        let mut buf = Vec::new();
        while head < order.len() {
            let (cur, d) = order[head].clone();
            head += 1;
            if let Some((next, dd, drop)) = self.progress(&cur, start.len()) {
                return Search::Found(next, d + dd, drop);
            }
            buf.clear();
            self.neighbours(&cur, max_len, &mut buf);
            for (next, dd) in buf.drain(..) {
                if seen.contains_key(&next) {
                    continue;
                }
                if order.len() >= caps.max_visited {
                    return Search::Capped(order);
                }
                seen.insert(next.clone(), d + dd);
                order.push((next, d + dd));
            }
        }
        Search::Exhausted(order)
    }

    /// Bidirectional search for a chain of homogeneous rewrites.
    pub fn homog_equiv(&self, a: &Word, b: &Word, caps: SearchCaps) -> Equivalence {
        let ea = self.canonical(&self.encode(&a.tokens));
        let eb = self.canonical(&self.encode(&b.tokens));
        if self.height(&ea) != self.height(&eb) {
            return Equivalence::NotFoundWithinCaps;
        }
        let max_len = ea.len().max(eb.len()) + caps.max_extra_length;
        let mut sides: [(FxHashMap<Vec<u8>, i32>, VecDeque<Vec<u8>>); 2] = [
            (FxHashMap::from_iter([(ea.clone(), a.delta)]), VecDeque::from([ea])),
            (FxHashMap::from_iter([(eb.clone(), b.delta)]), VecDeque::from([eb])),
        ];
        let verdict = |da: i32, db: i32| if da == db { Equivalence::Equivalent } else { Equivalence::DeltaOffset(da - db) };
        if let Some(&db) = sides[1].0.get(sides[0].1.front().expect("seeded")) {
            return verdict(a.delta, db);
        }
        let mut buf = Vec::new();
        let mut visited = 2;
        loop {
            let s = if sides[0].1.len() <= sides[1].1.len() { 0 } else { 1 };
            let Some(cur) = sides[s].1.pop_front() else {
                return Equivalence::NotFoundWithinCaps;
            };
            let d = sides[s].0[&cur];
            buf.clear();
            self.neighbours(&cur, max_len, &mut buf);
            for (next, dd) in buf.drain(..) {
                if sides[s].0.contains_key(&next) {
                    continue;
                }
                let nd = d + dd;
                if let Some(&other) = sides[1 - s].0.get(&next) {
                    return if s == 0 { verdict(nd, other) } else { verdict(other, nd) };
                }
                visited += 1;
                if visited > caps.max_visited {
                    return Equivalence::NotFoundWithinCaps;
                }
                sides[s].0.insert(next.clone(), nd);
                sides[s].1.push_back(next);
            }
        }
    }
}

enum Search {
    Found(Vec<u8>, i32, usize),
    Exhausted(Vec<(Vec<u8>, i32)>),
    Capped(Vec<(Vec<u8>, i32)>),
}

/// Reduces `w` within `caps`: greedy height/length-lowering rewrites, then
/// searches through the homogeneous class for further ones.
pub fn reduce(sys: &RootSystem, w: &Word, caps: SearchCaps) -> Result<Reduction> {
    w.validate(sys)?;
    Ok(Rewriter::new(sys).reduce_with_floor(w, caps, None))
}

/// Searches for a chain of homogeneous rewrites between `a` and `b`.
pub fn homog_equiv(sys: &RootSystem, a: &Word, b: &Word, caps: SearchCaps) -> Result<Equivalence> {
    a.validate(sys)?;
    b.validate(sys)?;
    Ok(Rewriter::new(sys).homog_equiv(a, b, caps))
}
