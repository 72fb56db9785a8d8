//! Admissible sets of mutually orthogonal positive roots and the Brauer
//! monoid action on them.
//!
//! Sets are stored as sorted lists of positive-root indices of a
//! [`RootSystem`]; since positive roots are kept sorted by height, this is the
//! canonical (height, coefficient) order.

use std::cmp::Ordering;
use std::collections::VecDeque;
use std::fmt;

use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rootsystem::{CartanType, CoxeterDiagram, Node, Root, RootSystem};

/// Default resource guard for orbit enumeration.
pub const DEFAULT_ORBIT_CAP: usize = 10_000_000;

/// A set of mutually orthogonal positive roots, kept sorted by root index.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct AdmissibleSet(Vec<u16>);

impl AdmissibleSet {
    pub fn empty() -> Self {
        Self(Vec::new())
    }

    /// Wraps sorted, deduplicated indices without checking admissibility.
    pub fn from_indices(mut indices: Vec<u16>) -> Self {
        indices.sort_unstable();
        indices.dedup();
        Self(indices)
    }

    /// Looks roots up in `sys`, then checks they are orthogonal, positive and
    /// admissible.
    pub fn from_roots(sys: &RootSystem, roots: &[Root]) -> Result<Self> {
        let idx = indices_of(sys, roots)?;
        let set = Self::from_indices(idx);
        if !is_admissible(sys, &set.0)? {
            return Err(Error::NotOrthogonal("set is orthogonal but not admissible".into()));
        }
        Ok(set)
    }

    pub fn indices(&self) -> &[u16] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, index: u16) -> bool {
        self.0.binary_search(&index).is_ok()
    }

    pub fn roots(&self, sys: &RootSystem) -> Vec<Root> {
        self.0.iter().map(|&i| sys.root(i).clone()).collect()
    }

    /// Nodes whose simple root lies in the set.
    pub fn simple_nodes(&self, sys: &RootSystem) -> Vec<Node> {
        sys.nodes().filter(|&i| self.contains(sys.simple_index(i))).collect()
    }

    pub fn is_subset(&self, other: &AdmissibleSet) -> bool {
        self.0.iter().all(|&i| other.contains(i))
    }

    pub fn display<'a>(&'a self, sys: &'a RootSystem) -> impl fmt::Display + 'a {
        DisplaySet(self, sys)
    }
}

struct DisplaySet<'a>(&'a AdmissibleSet, &'a RootSystem);

impl fmt::Display for DisplaySet<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0 .0.iter().map(|&i| self.1.root(i).to_string()).collect();
        write!(f, "{{{}}}", parts.join("; "))
    }
}

fn indices_of(sys: &RootSystem, roots: &[Root]) -> Result<Vec<u16>> {
    let mut idx = Vec::with_capacity(roots.len());
    for r in roots {
        if r.0.len() != sys.rank() {
            return Err(Error::DimensionMismatch { expected: sys.rank(), found: r.0.len() });
        }
        match sys.index_of(r) {
            Some(i) => idx.push(i),
            None => return Err(Error::NotOrthogonal(format!("{r} is not a positive root"))),
        }
    }
    Ok(idx)
}

fn check_orthogonal(sys: &RootSystem, set: &[u16]) -> Result<()> {
    for (a, &x) in set.iter().enumerate() {
        for &y in &set[a + 1..] {
            if x == y || sys.inner_idx(x, y) != 0 {
                return Err(Error::NotOrthogonal(format!("{} and {}", sys.root(x), sys.root(y))));
            }
        }
    }
    Ok(())
}

/// Calls `f` with the positive representative of `2β − Σ(β,βᵢ)βᵢ` for every
/// positive root β and every triple βᵢ of `set` having inner product ±1 with β.
fn for_each_triple_requirement(sys: &RootSystem, set: &[u16], mut f: impl FnMut(u16, Root) -> Result<bool>) -> Result<bool> {
    let n = sys.rank();
    let mut linked = Vec::with_capacity(set.len());
    for beta in 0..sys.num_positive() as u16 {
        linked.clear();
        linked.extend(set.iter().copied().filter(|&g| sys.inner_idx(beta, g).abs() == 1));
        if linked.len() < 3 {
            continue;
        }
        let b = sys.root(beta);
        for x in 0..linked.len() {
            for y in x + 1..linked.len() {
                for z in y + 1..linked.len() {
                    let mut v: Vec<i16> = b.0.iter().map(|&c| 2 * c as i16).collect();
                    for &g in &[linked[x], linked[y], linked[z]] {
                        let c = sys.inner_idx(beta, g) as i16;
                        for (k, &gc) in sys.root(g).0.iter().enumerate() {
                            v[k] -= c * gc as i16;
                        }
                    }
                    debug_assert_eq!(v.len(), n);
                    let root = Root(v.into_iter().map(|c| c as i8).collect()).abs();
                    if !f(beta, root)? {
                        return Ok(false);
                    }
                }
            }
        }
    }
    Ok(true)
}

/// Whether an orthogonal set of positive roots (by index) is admissible.
///
/// Every 3-subset of the roots having inner product ±1 with a given positive
/// root is tested.
pub fn is_admissible(sys: &RootSystem, set: &[u16]) -> Result<bool> {
    check_orthogonal(sys, set)?;
    let mut sorted = set.to_vec();
    sorted.sort_unstable();
    for_each_triple_requirement(sys, &sorted, |_, root| {
        let idx = sys.index_of(&root).ok_or_else(|| Error::Invariant(format!("{root} has norm 2 but is not a root")))?;
        Ok(sorted.binary_search(&idx).is_ok())
    })
}

/// Same as [`is_admissible`] on root vectors.
pub fn is_admissible_roots(sys: &RootSystem, roots: &[Root]) -> Result<bool> {
    is_admissible(sys, &indices_of(sys, roots)?)
}

/// The admissible closure: smallest admissible superset of `set`.
pub fn closure(sys: &RootSystem, set: &[u16]) -> Result<AdmissibleSet> {
    check_orthogonal(sys, set)?;
    let mut cur = AdmissibleSet::from_indices(set.to_vec());
    loop {
        let mut additions: Vec<u16> = Vec::new();
        for_each_triple_requirement(sys, &cur.0, |_, root| {
            let idx = sys.index_of(&root).ok_or_else(|| Error::Invariant(format!("{root} is not a root")))?;
            if !cur.contains(idx) && !additions.contains(&idx) {
                additions.push(idx);
            }
            Ok(true)
        })?;
        if additions.is_empty() {
            return Ok(cur);
        }
        let mut next = cur.0.clone();
        next.extend(additions);
        next.sort_unstable();
        if check_orthogonal(sys, &next).is_err() {
            return Err(Error::ClosureInconsistent(AdmissibleSet(next).display(sys).to_string()));
        }
        cur = AdmissibleSet(next);
    }
}

/// Closure of root vectors.
pub fn closure_roots(sys: &RootSystem, roots: &[Root]) -> Result<AdmissibleSet> {
    closure(sys, &indices_of(sys, roots)?)
}

/// `B_Y`: closure of the simple roots indexed by `nodes`.
pub fn coclique_closure(sys: &RootSystem, nodes: &[Node]) -> Result<AdmissibleSet> {
    let idx: Vec<u16> = nodes.iter().map(|&i| sys.simple_index(i)).collect();
    closure(sys, &idx)
}

/// Image under the reflection in a positive root, signs dropped.
pub fn act_reflection(sys: &RootSystem, mirror: u16, set: &AdmissibleSet) -> AdmissibleSet {
    let mut out: Vec<u16> = set.0.iter().map(|&g| sys.reflect_idx(mirror, g).index).collect();
    out.sort_unstable();
    AdmissibleSet(out)
}

/// `r_i B`.
pub fn act_r(sys: &RootSystem, i: Node, set: &AdmissibleSet) -> AdmissibleSet {
    act_reflection(sys, sys.simple_index(i), set)
}

/// `e_i B`, choosing the first root of `B` not orthogonal to `α_i` in case 3.
pub fn act_e(sys: &RootSystem, i: Node, set: &AdmissibleSet) -> Result<AdmissibleSet> {
    let a = sys.simple_index(i);
    if set.contains(a) {
        return Ok(set.clone());
    }
    match set.0.iter().copied().find(|&g| sys.inner_idx(g, a) != 0) {
        None => {
            let mut next = set.0.clone();
            next.push(a);
            closure(sys, &next)
        }
        Some(beta) => Ok(act_reflection(sys, beta, &act_reflection(sys, a, set))),
    }
}

/// `e_i B` computed with an explicit witness `β ∈ B∖α_i^⊥` in case 3.
///
/// Returns `None` when `beta` is not a valid witness. The action does not
/// depend on the witness; this entry point exists to check exactly that.
pub fn act_e_with_witness(sys: &RootSystem, i: Node, set: &AdmissibleSet, beta: u16) -> Option<AdmissibleSet> {
    let a = sys.simple_index(i);
    if set.contains(a) || !set.contains(beta) || sys.inner_idx(beta, a) == 0 {
        return None;
    }
    Some(act_reflection(sys, beta, &act_reflection(sys, a, set)))
}

/// Position of `r_i B` relative to `B` in the orbit order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Comparison {
    Fixed,
    Raising,
    Lowering,
}

/// Compares `r_i B` with `B`: lowering iff some minimal-height root β of
/// `B ∖ r_iB` has `het(r_iβ) < het(β)`.
pub fn compare(sys: &RootSystem, i: Node, set: &AdmissibleSet) -> Comparison {
    let image = act_r(sys, i, set);
    if image == *set {
        return Comparison::Fixed;
    }
    let moved: Vec<u16> = set.0.iter().copied().filter(|&g| !image.contains(g)).collect();
    let min_height = moved.iter().map(|&g| sys.height_of(g)).min().expect("a moved set has a moved root");
    let a = sys.simple_index(i);
    let lowers = moved
        .iter()
        .filter(|&&g| sys.height_of(g) == min_height)
        .any(|&g| sys.height_of(sys.reflect_idx(a, g).index) < min_height);
    if lowers {
        Comparison::Lowering
    } else {
        Comparison::Raising
    }
}

/// Level of an admissible set: its height in the orbit poset, then the sorted
/// multiset of root heights.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Level {
    pub set_height: u32,
    pub root_heights: Vec<u8>,
}

/// Set of pairwise non-adjacent nodes.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Coclique(pub Vec<Node>);

impl Coclique {
    pub fn new(sys: &RootSystem, mut nodes: Vec<Node>) -> Result<Self> {
        nodes.sort_unstable();
        nodes.dedup();
        for &a in &nodes {
            if a == 0 || a as usize > sys.rank() {
                return Err(Error::NodeOutOfRange { node: a as usize, rank: sys.rank() });
            }
            for &b in &nodes {
                if sys.adjacent(a, b) {
                    return Err(Error::Parse(format!("nodes {a} and {b} are adjacent")));
                }
            }
        }
        Ok(Self(nodes))
    }

    pub fn nodes(&self) -> &[Node] {
        &self.0
    }
}

impl fmt::Display for Coclique {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("∅");
        }
        let parts: Vec<String> = self.0.iter().map(|n| n.to_string()).collect();
        f.write_str(&parts.join(","))
    }
}

/// One row of the orbit table for an exceptional type.
#[derive(Debug, Clone, Copy)]
pub struct OrbitRow {
    pub set_size: usize,
    pub perp_type: &'static str,
    pub my_type: &'static str,
    pub coclique: &'static [Node],
    pub height0_count: usize,
    /// Number of orbit members containing `α_n`, where listed.
    pub containing_last: Option<usize>,
}

const E6_ROWS: &[OrbitRow] = &[
    OrbitRow { set_size: 1, perp_type: "A5", my_type: "A5", coclique: &[6], height0_count: 6, containing_last: None },
    OrbitRow { set_size: 2, perp_type: "A3", my_type: "A2", coclique: &[4, 6], height0_count: 20, containing_last: Some(15) },
    OrbitRow { set_size: 4, perp_type: "∅", my_type: "∅", coclique: &[2, 3, 6], height0_count: 15, containing_last: Some(15) },
];

const E7_ROWS: &[OrbitRow] = &[
    OrbitRow { set_size: 1, perp_type: "D6", my_type: "D6", coclique: &[7], height0_count: 7, containing_last: None },
    OrbitRow { set_size: 2, perp_type: "A1 D4", my_type: "A1 A3", coclique: &[5, 7], height0_count: 27, containing_last: Some(30) },
    OrbitRow { set_size: 3, perp_type: "D4", my_type: "A2", coclique: &[2, 5, 7], height0_count: 21, containing_last: Some(15) },
    OrbitRow { set_size: 4, perp_type: "A1 A1 A1", my_type: "A1", coclique: &[2, 3, 7], height0_count: 35, containing_last: Some(60) },
    OrbitRow { set_size: 7, perp_type: "∅", my_type: "∅", coclique: &[2, 3, 5, 7], height0_count: 15, containing_last: Some(15) },
];

const E8_ROWS: &[OrbitRow] = &[
    OrbitRow { set_size: 1, perp_type: "E7", my_type: "E7", coclique: &[8], height0_count: 8, containing_last: None },
    OrbitRow { set_size: 2, perp_type: "D6", my_type: "A5", coclique: &[6, 8], height0_count: 35, containing_last: Some(63) },
    OrbitRow { set_size: 4, perp_type: "D4", my_type: "A2", coclique: &[2, 3, 8], height0_count: 84, containing_last: Some(315) },
    OrbitRow { set_size: 8, perp_type: "∅", my_type: "∅", coclique: &[2, 3, 5, 8], height0_count: 50, containing_last: Some(135) },
];

/// Nonempty rows of the orbit table for E6, E7, E8.
pub fn orbit_table(t: CartanType) -> Result<&'static [OrbitRow]> {
    match t {
        CartanType::E6 => Ok(E6_ROWS),
        CartanType::E7 => Ok(E7_ROWS),
        CartanType::E8 => Ok(E8_ROWS),
        other => Err(Error::UnsupportedType(format!("{other} has no orbit table"))),
    }
}

/// The orbit representatives `𝒴`, starting with the empty coclique.
pub fn cocliques_y(sys: &RootSystem) -> Result<Vec<Coclique>> {
    let mut out = vec![Coclique(Vec::new())];
    out.extend(orbit_table(sys.cartan())?.iter().map(|row| Coclique(row.coclique.to_vec())));
    Ok(out)
}

/// The coclique `Y` whose orbit contains `set`, identified by size.
pub fn classify_orbit(sys: &RootSystem, set: &AdmissibleSet) -> Result<Coclique> {
    if set.is_empty() {
        return Ok(Coclique(Vec::new()));
    }
    orbit_table(sys.cartan())?
        .iter()
        .find(|row| row.set_size == set.len())
        .map(|row| Coclique(row.coclique.to_vec()))
        .ok_or(Error::UnknownOrbit(set.len()))
}

/// Type decomposition of the roots orthogonal to every root of `set`.
pub fn subsystem_type(sys: &RootSystem, set: &AdmissibleSet) -> Result<Vec<CartanType>> {
    let perp: Vec<u16> = (0..sys.num_positive() as u16)
        .filter(|&b| set.0.iter().all(|&g| sys.inner_idx(b, g) == 0))
        .collect();
    let in_perp = |r: &Root| sys.index_of(r).is_some_and(|i| perp.binary_search(&i).is_ok());
    // simple roots of the subsystem: positive roots that are not a sum of two
    let simple: Vec<u16> = perp
        .iter()
        .copied()
        .filter(|&b| {
            !perp.iter().any(|&x| {
                let diff = Root(sys.root(b).0.iter().zip(&sys.root(x).0).map(|(p, q)| p - q).collect());
                diff.is_positive() && in_perp(&diff)
            })
        })
        .collect();
    let k = simple.len();
    let adjacency = (0..k)
        .map(|a| {
            (0..k)
                .map(|b| match sys.inner_idx(simple[a], simple[b]) {
                    -1 => true,
                    0 | 2 => false,
                    _ => unreachable!("distinct simple roots have nonpositive inner products"),
                })
                .collect()
        })
        .collect();
    CoxeterDiagram::from_adjacency((0..k as Node).collect(), adjacency).classify()
}

/// Raising edge `lower → upper = r_node(lower)` of the orbit poset.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverEdge {
    pub lower: u32,
    pub upper: u32,
    pub node: Node,
}

const NONE: u32 = u32::MAX;

/// A `W`-orbit of admissible sets with its poset structure.
#[derive(Debug, Clone)]
pub struct OrbitPoset {
    rank: usize,
    members: Vec<AdmissibleSet>,
    lookup: FxHashMap<AdmissibleSet, u32>,
    r_moves: Vec<u32>,
    e_moves: Vec<u32>,
    comparisons: Vec<Comparison>,
    cover_edges: Vec<CoverEdge>,
    heights: Vec<u32>,
    max_index: u32,
    base: u32,
    coclique: Coclique,
}

/// Enumerates the orbit of `start` with the default member cap.
pub fn enumerate_orbit(sys: &RootSystem, start: &AdmissibleSet) -> Result<OrbitPoset> {
    enumerate_orbit_capped(sys, start, DEFAULT_ORBIT_CAP)
}

fn bfs_orbit(sys: &RootSystem, start: &AdmissibleSet, cap: usize) -> Result<Vec<AdmissibleSet>> {
    let mut seen: FxHashMap<AdmissibleSet, ()> = FxHashMap::default();
    let mut order = vec![start.clone()];
    seen.insert(start.clone(), ());
    let mut head = 0;
    while head < order.len() {
        let cur = order[head].clone();
        head += 1;
        for i in sys.nodes() {
            let next = act_r(sys, i, &cur);
            if !seen.contains_key(&next) {
                if order.len() >= cap {
                    return Err(Error::OrbitTooLarge(cap));
                }
                seen.insert(next.clone(), ());
                order.push(next);
            }
        }
    }
    Ok(order)
}

/// Picks the base point of an orbit: the table's `B_Y` for exceptional types,
/// otherwise the member that is the closure of the most simple roots, ties
/// broken by the smallest node list.
fn find_base(sys: &RootSystem, members: &[AdmissibleSet]) -> Result<(AdmissibleSet, Coclique)> {
    let size = members[0].len();
    if sys.cartan().is_exceptional() {
        let y = classify_orbit(sys, &members[0])?;
        return Ok((coclique_closure(sys, &y.0)?, y));
    }
    let mut best: Option<(Vec<Node>, &AdmissibleSet)> = None;
    for m in members {
        let simple = m.simple_nodes(sys);
        if simple.len() < best.as_ref().map_or(0, |b| b.0.len()) {
            continue;
        }
        if simple.is_empty() && size > 0 {
            continue;
        }
        if coclique_closure(sys, &simple)? != *m {
            continue;
        }
        let better = match &best {
            None => true,
            Some((b, _)) => simple.len() > b.len() || (simple.len() == b.len() && simple < *b),
        };
        if better {
            best = Some((simple, m));
        }
    }
    let (nodes, set) = best.ok_or_else(|| Error::Invariant("orbit has no coclique closure".into()))?;
    Ok((set.clone(), Coclique(nodes)))
}

/// Enumerates the orbit of `start`, failing once more than `cap` members
/// are found.
pub fn enumerate_orbit_capped(sys: &RootSystem, start: &AdmissibleSet, cap: usize) -> Result<OrbitPoset> {
    let found = bfs_orbit(sys, start, cap)?;
    let (base_set, coclique) = find_base(sys, &found)?;
    if !found.contains(&base_set) {
        return Err(Error::Invariant(format!("B_Y for {coclique} is not in the orbit")));
    }
    // canonical order: BFS from the base point with sorted node expansion
    let members = bfs_orbit(sys, &base_set, cap)?;
    let lookup: FxHashMap<AdmissibleSet, u32> = members.iter().enumerate().map(|(i, m)| (m.clone(), i as u32)).collect();
    let n = sys.rank();
    let count = members.len();
    let mut r_moves = vec![NONE; count * n];
    let mut e_moves = vec![NONE; count * n];
    let mut comparisons = vec![Comparison::Fixed; count * n];
    let mut cover_edges = Vec::new();
    for (m, set) in members.iter().enumerate() {
        for i in sys.nodes() {
            let slot = m * n + i as usize - 1;
            r_moves[slot] = lookup[&act_r(sys, i, set)];
            let cmp = compare(sys, i, set);
            comparisons[slot] = cmp;
            if cmp == Comparison::Raising {
                cover_edges.push(CoverEdge { lower: m as u32, upper: r_moves[slot], node: i });
            }
            let a = sys.simple_index(i);
            if set.contains(a) {
                e_moves[slot] = m as u32;
            } else if let Some(&beta) = set.0.iter().find(|&&g| sys.inner_idx(g, a) != 0) {
                let img = act_reflection(sys, beta, &act_reflection(sys, a, set));
                e_moves[slot] = lookup[&img];
            }
        }
    }
    let maxima: Vec<usize> = (0..count)
        .filter(|&m| (0..n).all(|i| comparisons[m * n + i] != Comparison::Raising))
        .collect();
    let max_index = match maxima.as_slice() {
        [m] => *m as u32,
        _ => return Err(Error::Invariant(format!("orbit has {} maximal elements", maxima.len()))),
    };
    // distance to the maximum along raising edges
    let mut below: Vec<Vec<u32>> = vec![Vec::new(); count];
    for e in &cover_edges {
        below[e.upper as usize].push(e.lower);
    }
    let mut dist = vec![u32::MAX; count];
    dist[max_index as usize] = 0;
    let mut queue = VecDeque::from([max_index]);
    while let Some(u) = queue.pop_front() {
        for &l in &below[u as usize] {
            if dist[l as usize] == u32::MAX {
                dist[l as usize] = dist[u as usize] + 1;
                queue.push_back(l);
            }
        }
    }
    if dist.contains(&u32::MAX) {
        return Err(Error::Invariant("orbit member not below the maximal element".into()));
    }
    let base = 0u32;
    let d = dist[base as usize];
    let mut heights = Vec::with_capacity(count);
    for &l in &dist {
        if l > d {
            return Err(Error::Invariant("orbit member below the base point".into()));
        }
        heights.push(d - l);
    }
    for e in &cover_edges {
        if heights[e.upper as usize] != heights[e.lower as usize] + 1 {
            return Err(Error::Invariant(format!("raising edge at node {} skips a height", e.node)));
        }
    }
    Ok(OrbitPoset { rank: n, members, lookup, r_moves, e_moves, comparisons, cover_edges, heights, max_index, base, coclique })
}

impl OrbitPoset {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn members(&self) -> &[AdmissibleSet] {
        &self.members
    }

    pub fn member(&self, index: u32) -> &AdmissibleSet {
        &self.members[index as usize]
    }

    pub fn index_of(&self, set: &AdmissibleSet) -> Option<u32> {
        self.lookup.get(set).copied()
    }

    pub fn cover_edges(&self) -> &[CoverEdge] {
        &self.cover_edges
    }

    pub fn heights(&self) -> &[u32] {
        &self.heights
    }

    pub fn height(&self, index: u32) -> u32 {
        self.heights[index as usize]
    }

    pub fn max_index(&self) -> u32 {
        self.max_index
    }

    pub fn max_element(&self) -> &AdmissibleSet {
        self.member(self.max_index)
    }

    /// Index of `B_Y` (always 0 with the canonical ordering).
    pub fn base(&self) -> u32 {
        self.base
    }

    pub fn base_set(&self) -> &AdmissibleSet {
        self.member(self.base)
    }

    /// Nodes of the coclique `Y` with `B_Y` as base point.
    pub fn coclique(&self) -> &Coclique {
        &self.coclique
    }

    /// Index of `r_i B`.
    pub fn r_move(&self, index: u32, i: Node) -> u32 {
        self.r_moves[index as usize * self.rank + i as usize - 1]
    }

    /// Index of `e_i B` when it stays in the orbit (`α_i` not orthogonal to `B`).
    pub fn e_move(&self, index: u32, i: Node) -> Option<u32> {
        let v = self.e_moves[index as usize * self.rank + i as usize - 1];
        (v != NONE).then_some(v)
    }

    pub fn comparison(&self, index: u32, i: Node) -> Comparison {
        self.comparisons[index as usize * self.rank + i as usize - 1]
    }

    pub fn level(&self, sys: &RootSystem, index: u32) -> Level {
        let mut root_heights: Vec<u8> = self.member(index).0.iter().map(|&g| sys.height_of(g)).collect();
        root_heights.sort_unstable();
        Level { set_height: self.height(index), root_heights }
    }

    /// Nodes `k` with `r_k B < B`, ascending.
    pub fn lowering_nodes(&self, index: u32) -> Vec<Node> {
        (1..=self.rank as Node).filter(|&k| self.comparison(index, k) == Comparison::Lowering).collect()
    }
}

/// Members of height 0.
pub fn height0_members(orbit: &OrbitPoset) -> Vec<AdmissibleSet> {
    (0..orbit.len() as u32).filter(|&m| orbit.height(m) == 0).map(|m| orbit.member(m).clone()).collect()
}

/// Number of members containing `α_node`.
pub fn count_containing(sys: &RootSystem, orbit: &OrbitPoset, node: Node) -> usize {
    let a = sys.simple_index(node);
    orbit.members().iter().filter(|m| m.contains(a)).count()
}

/// Lowering-e-nodes of the member at `index`: pairs `(k, j)` with `j ∼ k`,
/// `α_j ∈ B`, `het(e_kB) = het(B)` and `L(e_kB) < L(B)`, sorted.
pub fn lowering_e_nodes(sys: &RootSystem, orbit: &OrbitPoset, index: u32) -> Vec<(Node, Node)> {
    let set = orbit.member(index);
    let level = orbit.level(sys, index);
    let mut out = Vec::new();
    for k in sys.nodes() {
        if set.contains(sys.simple_index(k)) {
            continue;
        }
        let Some(image) = orbit.e_move(index, k) else { continue };
        if orbit.height(image) != level.set_height || orbit.level(sys, image).cmp(&level) != Ordering::Less {
            continue;
        }
        for j in sys.diagram().neighbors(k) {
            if set.contains(sys.simple_index(j)) {
                out.push((k, j));
            }
        }
    }
    out
}

/// Type `M_Y`: the diagram induced on nodes orthogonal to every root of the
/// orbit's maximal element.
pub fn m_y_type(sys: &RootSystem, orbit: &OrbitPoset) -> CoxeterDiagram {
    let top = orbit.max_element();
    let keep: Vec<Node> = sys
        .nodes()
        .filter(|&i| top.0.iter().all(|&g| sys.inner_idx(g, sys.simple_index(i)) == 0))
        .collect();
    sys.diagram().induced(&keep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootsystem::format_types;

    fn e6() -> RootSystem {
        RootSystem::new(CartanType::E6).unwrap()
    }

    fn simple(sys: &RootSystem, nodes: &[Node]) -> Vec<u16> {
        nodes.iter().map(|&i| sys.simple_index(i)).collect()
    }

    fn example_set(sys: &RootSystem) -> AdmissibleSet {
        AdmissibleSet::from_roots(sys, &[Root::simple(6, 4), Root(vec![1, 1, 2, 2, 1, 0])]).unwrap()
    }

    #[test]
    fn small_sets_are_admissible() {
        let sys = e6();
        assert!(is_admissible(&sys, &[]).unwrap());
        assert!(is_admissible(&sys, &simple(&sys, &[1])).unwrap());
        assert!(is_admissible(&sys, &simple(&sys, &[1, 6])).unwrap());
    }

    #[test]
    fn three_simple_roots_need_closure() {
        let sys = e6();
        let x = simple(&sys, &[2, 3, 6]);
        assert!(!is_admissible(&sys, &x).unwrap());
        let cl = closure(&sys, &x).unwrap();
        assert_eq!(cl.len(), 4);
        assert!(is_admissible(&sys, cl.indices()).unwrap());
    }

    #[test]
    fn worked_example_is_admissible() {
        let sys = e6();
        let b = example_set(&sys);
        assert!(is_admissible(&sys, b.indices()).unwrap());
    }

    #[test]
    fn closure_trivial_cases() {
        let sys = e6();
        assert!(closure(&sys, &[]).unwrap().is_empty());
        let b = example_set(&sys);
        assert_eq!(closure(&sys, b.indices()).unwrap(), b);
        assert!(closure(&sys, &simple(&sys, &[3, 4])).is_err());
    }

    #[test]
    fn r_action_examples() {
        let sys = e6();
        let empty = AdmissibleSet::empty();
        assert_eq!(act_r(&sys, 3, &empty), empty);
        let a2 = AdmissibleSet::from_indices(simple(&sys, &[2]));
        assert_eq!(act_r(&sys, 2, &a2), a2);
        let a6 = AdmissibleSet::from_indices(simple(&sys, &[6]));
        let img = act_r(&sys, 5, &a6);
        assert_eq!(img.roots(&sys), vec![Root(vec![0, 0, 0, 0, 1, 1])]);
    }

    #[test]
    fn e_action_examples() {
        let sys = e6();
        let empty = AdmissibleSet::empty();
        assert_eq!(act_e(&sys, 3, &empty).unwrap().indices(), &simple(&sys, &[3])[..]);
        let b = example_set(&sys);
        assert_eq!(act_e(&sys, 4, &b).unwrap(), b);
        // α_j ends up in e_j B for any j adjacent to a node i with α_i ∈ B
        let e = act_e(&sys, 3, &b).unwrap();
        assert!(e.contains(sys.simple_index(3)));
    }

    #[test]
    fn compare_examples() {
        let sys = e6();
        let a2 = AdmissibleSet::from_indices(simple(&sys, &[2]));
        assert_eq!(compare(&sys, 2, &a2), Comparison::Fixed);
        let a6 = AdmissibleSet::from_indices(simple(&sys, &[6]));
        assert_eq!(compare(&sys, 5, &a6), Comparison::Raising);
        let b = example_set(&sys);
        let got: Vec<Comparison> = sys.nodes().map(|i| compare(&sys, i, &b)).collect();
        use Comparison::*;
        assert_eq!(got, [Fixed, Raising, Raising, Fixed, Raising, Raising]);
    }

    #[test]
    fn e6_orbit_sizes() {
        let sys = e6();
        let sizes: Vec<usize> = cocliques_y(&sys)
            .unwrap()
            .iter()
            .map(|y| enumerate_orbit(&sys, &coclique_closure(&sys, &y.0).unwrap()).unwrap().len())
            .collect();
        assert_eq!(sizes, [1, 36, 270, 135]);
    }

    #[test]
    fn heights_start_at_zero_and_grow_by_one() {
        let sys = e6();
        let orbit = enumerate_orbit(&sys, &AdmissibleSet::from_indices(simple(&sys, &[1]))).unwrap();
        assert_eq!(orbit.height(orbit.base()), 0);
        assert_eq!(orbit.base_set().indices(), &simple(&sys, &[6])[..]);
        // singletons: height of the set is root height minus one
        for (m, set) in orbit.members().iter().enumerate() {
            assert_eq!(orbit.height(m as u32) + 1, sys.height_of(set.indices()[0]) as u32);
        }
        for e in orbit.cover_edges() {
            assert_eq!(orbit.height(e.upper), orbit.height(e.lower) + 1);
        }
    }

    fn check_table(t: CartanType) {
        let sys = RootSystem::new(t).unwrap();
        let last = sys.rank() as Node;
        for row in orbit_table(t).unwrap() {
            let base = coclique_closure(&sys, row.coclique).unwrap();
            assert_eq!(base.len(), row.set_size);
            let orbit = enumerate_orbit(&sys, &base).unwrap();
            assert_eq!(height0_members(&orbit).len(), row.height0_count);
            assert_eq!(format_types(&subsystem_type(&sys, &base).unwrap()), row.perp_type);
            assert_eq!(m_y_type(&sys, &orbit).type_string().unwrap(), row.my_type);
            if let Some(c) = row.containing_last {
                assert_eq!(count_containing(&sys, &orbit, last), c);
            }
        }
    }

    #[test]
    fn e6_table_columns() {
        check_table(CartanType::E6);
    }

    #[test]
    fn e7_table_columns() {
        check_table(CartanType::E7);
    }

    #[test]
    fn e8_table_columns() {
        check_table(CartanType::E8);
    }

    #[test]
    fn classify_by_size() {
        let sys = e6();
        assert_eq!(classify_orbit(&sys, &AdmissibleSet::from_indices(simple(&sys, &[2]))).unwrap().0, vec![6]);
        assert_eq!(classify_orbit(&sys, &AdmissibleSet::empty()).unwrap().0, Vec::<Node>::new());
        let e8 = RootSystem::new(CartanType::E8).unwrap();
        let four = coclique_closure(&e8, &[2, 3, 8]).unwrap();
        assert_eq!(classify_orbit(&e8, &four).unwrap().0, vec![2, 3, 8]);
        assert!(classify_orbit(&sys, &AdmissibleSet::from_indices(simple(&sys, &[1, 2, 6]))).is_err());
    }

    #[test]
    fn worked_example_lowering_e_nodes() {
        let sys = e6();
        let b = example_set(&sys);
        let orbit = enumerate_orbit(&sys, &b).unwrap();
        let m = orbit.index_of(&b).unwrap();
        assert!(orbit.lowering_nodes(m).is_empty());
        assert_eq!(orbit.height(m), 2);
        let pairs = lowering_e_nodes(&sys, &orbit, m);
        assert!(pairs.contains(&(3, 4)), "{pairs:?}");
        let after = orbit.e_move(m, 3).unwrap();
        assert_eq!(orbit.lowering_nodes(after), vec![2, 5]);
    }

    #[test]
    fn base_point_has_no_lowering_e_requirement() {
        let sys = e6();
        let base = coclique_closure(&sys, &[4, 6]).unwrap();
        let orbit = enumerate_orbit(&sys, &base).unwrap();
        assert!(lowering_e_nodes(&sys, &orbit, orbit.base()).is_empty());
    }

    #[test]
    fn orbit_cap_is_enforced() {
        let sys = e6();
        let base = coclique_closure(&sys, &[4, 6]).unwrap();
        assert!(matches!(enumerate_orbit_capped(&sys, &base, 100), Err(Error::OrbitTooLarge(100))));
    }
}
