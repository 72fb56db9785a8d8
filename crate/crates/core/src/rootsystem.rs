//! Simply laced root systems in the simple-root basis.
//!
//! Nodes are numbered from 1 with the Bourbaki labeling. Roots are integer
//! coefficient vectors over the simple roots; the bilinear form is the Cartan
//! matrix, so everything here is exact integer arithmetic.

use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;

use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Diagram node, numbered from 1.
pub type Node = u8;

/// Connected simply laced Cartan type.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CartanType {
    A(u8),
    D(u8),
    E6,
    E7,
    E8,
}

impl CartanType {
    pub fn rank(self) -> usize {
        match self {
            CartanType::A(n) | CartanType::D(n) => n as usize,
            CartanType::E6 => 6,
            CartanType::E7 => 7,
            CartanType::E8 => 8,
        }
    }

    pub fn is_exceptional(self) -> bool {
        matches!(self, CartanType::E6 | CartanType::E7 | CartanType::E8)
    }

    /// Edges of the Bourbaki-labeled diagram.
    pub fn edges(self) -> Vec<(Node, Node)> {
        match self {
            CartanType::A(n) => (1..n).map(|i| (i, i + 1)).collect(),
            CartanType::D(n) => {
                let mut e: Vec<_> = (1..n - 1).map(|i| (i, i + 1)).collect();
                e.push((n - 2, n));
                e
            }
            CartanType::E6 | CartanType::E7 | CartanType::E8 => {
                let mut e = vec![(1, 3), (3, 4), (4, 5), (5, 6), (2, 4)];
                if self.rank() >= 7 {
                    e.push((6, 7));
                }
                if self.rank() >= 8 {
                    e.push((7, 8));
                }
                e
            }
        }
    }

    /// Order of the Weyl group, from the standard product formulas.
    pub fn weyl_order(self) -> u64 {
        match self {
            CartanType::A(n) => (1..=n as u64 + 1).product(),
            CartanType::D(n) => (1..=n as u64).product::<u64>() << (n - 1),
            CartanType::E6 => 51_840,
            CartanType::E7 => 2_903_040,
            CartanType::E8 => 696_729_600,
        }
    }

    /// Number of positive roots.
    pub fn positive_root_count(self) -> usize {
        let n = self.rank();
        match self {
            CartanType::A(_) => n * (n + 1) / 2,
            CartanType::D(_) => n * (n - 1),
            CartanType::E6 => 36,
            CartanType::E7 => 63,
            CartanType::E8 => 120,
        }
    }

    fn validate(self) -> Result<Self> {
        let ok = match self {
            CartanType::A(n) => (1..=32).contains(&n),
            CartanType::D(n) => (4..=32).contains(&n),
            _ => true,
        };
        if ok {
            Ok(self)
        } else {
            Err(Error::UnsupportedType(self.to_string()))
        }
    }
}

impl fmt::Display for CartanType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CartanType::A(n) => write!(f, "A{n}"),
            CartanType::D(n) => write!(f, "D{n}"),
            CartanType::E6 => f.write_str("E6"),
            CartanType::E7 => f.write_str("E7"),
            CartanType::E8 => f.write_str("E8"),
        }
    }
}

impl FromStr for CartanType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let unsupported = || Error::UnsupportedType(s.to_string());
        let (head, tail) = s.split_at(s.find(|c: char| c.is_ascii_digit()).ok_or_else(unsupported)?);
        let n: u8 = tail.parse().map_err(|_| unsupported())?;
        let t = match (head.to_ascii_uppercase().as_str(), n) {
            ("A", n) => CartanType::A(n),
            ("D", n) => CartanType::D(n),
            ("E", 6) => CartanType::E6,
            ("E", 7) => CartanType::E7,
            ("E", 8) => CartanType::E8,
            _ => return Err(unsupported()),
        };
        t.validate()
    }
}

/// A simply laced Coxeter diagram on labeled nodes.
///
/// Used both for full diagrams of a [`CartanType`] and for induced
/// subdiagrams, which may be disconnected or empty.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoxeterDiagram {
    nodes: Vec<Node>,
    adjacency: Vec<Vec<bool>>,
}

impl CoxeterDiagram {
    pub fn of_type(t: CartanType) -> Self {
        let n = t.rank();
        let mut adjacency = vec![vec![false; n]; n];
        for (a, b) in t.edges() {
            adjacency[a as usize - 1][b as usize - 1] = true;
            adjacency[b as usize - 1][a as usize - 1] = true;
        }
        Self { nodes: (1..=n as Node).collect(), adjacency }
    }

    /// Diagram on arbitrary labels; `adjacency` is indexed by position.
    pub fn from_adjacency(nodes: Vec<Node>, adjacency: Vec<Vec<bool>>) -> Self {
        Self { nodes, adjacency }
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Adjacency by position.
    pub fn adjacent_at(&self, a: usize, b: usize) -> bool {
        self.adjacency[a][b]
    }

    fn position(&self, node: Node) -> Option<usize> {
        self.nodes.iter().position(|&x| x == node)
    }

    /// Adjacency by node label.
    pub fn adjacent(&self, a: Node, b: Node) -> bool {
        match (self.position(a), self.position(b)) {
            (Some(x), Some(y)) => self.adjacency[x][y],
            _ => false,
        }
    }

    pub fn neighbors(&self, node: Node) -> Vec<Node> {
        match self.position(node) {
            Some(p) => (0..self.len()).filter(|&q| self.adjacency[p][q]).map(|q| self.nodes[q]).collect(),
            None => Vec::new(),
        }
    }

    /// Subdiagram induced on `keep` (labels not in the diagram are ignored).
    pub fn induced(&self, keep: &[Node]) -> Self {
        let pos: Vec<usize> = (0..self.len()).filter(|&p| keep.contains(&self.nodes[p])).collect();
        let nodes = pos.iter().map(|&p| self.nodes[p]).collect();
        let adjacency = pos.iter().map(|&p| pos.iter().map(|&q| self.adjacency[p][q]).collect()).collect();
        Self { nodes, adjacency }
    }

    /// Connected components as position lists, each sorted.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.len();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            let mut comp = vec![start];
            let mut queue = VecDeque::from([start]);
            while let Some(p) = queue.pop_front() {
                for q in 0..n {
                    if self.adjacency[p][q] && !seen[q] {
                        seen[q] = true;
                        comp.push(q);
                        queue.push_back(q);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    /// ADE type of every connected component, sorted.
    pub fn classify(&self) -> Result<Vec<CartanType>> {
        let mut types = Vec::new();
        for comp in self.components() {
            types.push(classify_component(self, &comp)?);
        }
        types.sort();
        Ok(types)
    }

    /// Human form of the type, e.g. `A1 A3`, or `∅` for the empty diagram.
    pub fn type_string(&self) -> Result<String> {
        Ok(format_types(&self.classify()?))
    }
}

/// Renders a list of component types, `∅` when empty.
pub fn format_types(types: &[CartanType]) -> String {
    if types.is_empty() {
        "∅".to_string()
    } else {
        types.iter().map(|t| t.to_string()).collect::<Vec<_>>().join(" ")
    }
}

fn classify_component(d: &CoxeterDiagram, comp: &[usize]) -> Result<CartanType> {
    let n = comp.len();
    let degree = |p: usize| comp.iter().filter(|&&q| d.adjacency[p][q]).count();
    let edges: usize = comp.iter().map(|&p| degree(p)).sum::<usize>() / 2;
    let fail = || Error::Classification(format!("component on nodes {:?}", comp.iter().map(|&p| d.nodes[p]).collect::<Vec<_>>()));
    if edges + 1 != n {
        return Err(fail());
    }
    let branches: Vec<usize> = comp.iter().copied().filter(|&p| degree(p) >= 3).collect();
    match branches.as_slice() {
        [] => {
            if comp.iter().any(|&p| degree(p) > 2) {
                return Err(fail());
            }
            Ok(CartanType::A(n as u8))
        }
        [b] if degree(*b) == 3 => {
            // arm lengths from the branch node
            let mut arms = Vec::new();
            for &start in comp.iter().filter(|&&q| d.adjacency[*b][q]) {
                let (mut prev, mut cur, mut len) = (*b, start, 1);
                loop {
                    let next: Vec<usize> = comp.iter().copied().filter(|&q| d.adjacency[cur][q] && q != prev).collect();
                    match next.as_slice() {
                        [] => break,
                        [x] => {
                            prev = cur;
                            cur = *x;
                            len += 1;
                        }
                        _ => return Err(fail()),
                    }
                }
                arms.push(len);
            }
            arms.sort_unstable();
            match arms.as_slice() {
                [1, 1, _] => Ok(CartanType::D(n as u8)),
                [1, 2, 2] => Ok(CartanType::E6),
                [1, 2, 3] => Ok(CartanType::E7),
                [1, 2, 4] => Ok(CartanType::E8),
                _ => Err(fail()),
            }
        }
        _ => Err(fail()),
    }
}

/// Integer vector over the simple roots.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Root(pub Vec<i8>);

impl Root {
    pub fn simple(n: usize, node: Node) -> Self {
        let mut v = vec![0; n];
        v[node as usize - 1] = 1;
        Root(v)
    }

    pub fn coeffs(&self) -> &[i8] {
        &self.0
    }

    pub fn is_positive(&self) -> bool {
        self.0.iter().all(|&c| c >= 0) && self.0.iter().any(|&c| c > 0)
    }

    pub fn is_negative(&self) -> bool {
        self.0.iter().all(|&c| c <= 0) && self.0.iter().any(|&c| c < 0)
    }

    pub fn negated(&self) -> Root {
        Root(self.0.iter().map(|&c| -c).collect())
    }

    /// Positive representative of `±self`.
    pub fn abs(&self) -> Root {
        if self.is_negative() {
            self.negated()
        } else {
            self.clone()
        }
    }

    /// Node index if this is a simple root.
    pub fn simple_node(&self) -> Option<Node> {
        let mut found = None;
        for (i, &c) in self.0.iter().enumerate() {
            match c {
                0 => {}
                1 if found.is_none() => found = Some(i as Node + 1),
                _ => return None,
            }
        }
        found
    }

    /// Parses `a<i>` or a comma-separated coefficient vector.
    pub fn parse(s: &str, n: usize) -> Result<Root> {
        let s = s.trim();
        let bad = || Error::Parse(format!("malformed root `{s}`"));
        if let Some(rest) = s.strip_prefix('a') {
            let node: usize = rest.parse().map_err(|_| bad())?;
            if node == 0 || node > n {
                return Err(Error::NodeOutOfRange { node, rank: n });
            }
            return Ok(Root::simple(n, node as Node));
        }
        let coeffs = s
            .split(',')
            .map(|t| t.trim().parse::<i8>().map_err(|_| bad()))
            .collect::<Result<Vec<_>>>()?;
        if coeffs.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: coeffs.len() });
        }
        Ok(Root(coeffs))
    }
}

impl fmt::Display for Root {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(i) = self.simple_node() {
            return write!(f, "a{i}");
        }
        let parts: Vec<String> = self.0.iter().map(|c| c.to_string()).collect();
        f.write_str(&parts.join(","))
    }
}

/// Sum of the simple-basis coefficients.
pub fn root_height(v: &Root) -> i32 {
    v.0.iter().map(|&c| c as i32).sum()
}

/// A positive root index together with a sign.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SignedRoot {
    pub index: u16,
    pub negative: bool,
}

/// Positive roots of a simply laced type with precomputed reflection tables.
#[derive(Debug, Clone)]
pub struct RootSystem {
    cartan: CartanType,
    diagram: CoxeterDiagram,
    gram: Vec<Vec<i8>>,
    positive: Vec<Root>,
    heights: Vec<u8>,
    index: FxHashMap<Root, u16>,
    /// `inner[a * p + b]` is the form on positive roots `a` and `b`.
    inner: Vec<i8>,
    /// `reflect[a * p + b]` is `r_a(b)` for positive roots `a`, `b`.
    reflect: Vec<SignedRoot>,
    simple: Vec<u16>,
}

impl RootSystem {
    pub fn new(cartan: CartanType) -> Result<Self> {
        build_root_system(cartan)
    }

    pub fn cartan(&self) -> CartanType {
        self.cartan
    }

    pub fn rank(&self) -> usize {
        self.cartan.rank()
    }

    pub fn diagram(&self) -> &CoxeterDiagram {
        &self.diagram
    }

    pub fn gram(&self) -> &[Vec<i8>] {
        &self.gram
    }

    pub fn nodes(&self) -> impl Iterator<Item = Node> {
        1..=self.rank() as Node
    }

    pub fn adjacent(&self, a: Node, b: Node) -> bool {
        a != b && self.gram[a as usize - 1][b as usize - 1] == -1
    }

    pub fn positive_roots(&self) -> &[Root] {
        &self.positive
    }

    pub fn num_positive(&self) -> usize {
        self.positive.len()
    }

    pub fn root(&self, index: u16) -> &Root {
        &self.positive[index as usize]
    }

    pub fn height_of(&self, index: u16) -> u8 {
        self.heights[index as usize]
    }

    /// Index of a positive root.
    pub fn index_of(&self, root: &Root) -> Option<u16> {
        self.index.get(root).copied()
    }

    /// Index and sign of any root.
    pub fn signed_index(&self, root: &Root) -> Option<SignedRoot> {
        let negative = root.is_negative();
        let key = if negative { root.negated() } else { root.clone() };
        self.index_of(&key).map(|index| SignedRoot { index, negative })
    }

    /// Index of the simple root `α_node`.
    pub fn simple_index(&self, node: Node) -> u16 {
        self.simple[node as usize - 1]
    }

    pub fn is_root(&self, v: &Root) -> bool {
        self.signed_index(v).is_some()
    }

    /// The form on two positive roots by index.
    #[inline]
    pub fn inner_idx(&self, a: u16, b: u16) -> i8 {
        self.inner[a as usize * self.positive.len() + b as usize]
    }

    /// `r_a(b)` on positive root indices.
    #[inline]
    pub fn reflect_idx(&self, mirror: u16, v: u16) -> SignedRoot {
        self.reflect[mirror as usize * self.positive.len() + v as usize]
    }

    /// Symmetric bilinear form extended from the Cartan matrix.
    pub fn inner(&self, a: &Root, b: &Root) -> Result<i32> {
        let n = self.rank();
        for v in [a, b] {
            if v.0.len() != n {
                return Err(Error::DimensionMismatch { expected: n, found: v.0.len() });
            }
        }
        Ok(inner_raw(&self.gram, &a.0, &b.0))
    }

    /// `v − (v, mirror)·mirror`.
    pub fn reflect(&self, mirror: &Root, v: &Root) -> Result<Root> {
        if !self.is_root(mirror) {
            return Err(Error::NotARoot(mirror.to_string()));
        }
        let c = self.inner(v, mirror)?;
        Ok(Root(v.0.iter().zip(&mirror.0).map(|(&x, &m)| (x as i32 - c * m as i32) as i8).collect()))
    }

    /// The highest root.
    pub fn highest_root(&self) -> &Root {
        self.positive.last().expect("root systems are nonempty")
    }
}

fn inner_raw(gram: &[Vec<i8>], a: &[i8], b: &[i8]) -> i32 {
    let mut s = 0i32;
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            s += x as i32 * gram[i][j] as i32 * y as i32;
        }
    }
    s
}

/// Enumerates the positive roots by closing the simple roots under simple
/// reflections, then sorts them by height and coefficients.
pub fn build_root_system(cartan: CartanType) -> Result<RootSystem> {
    let cartan = cartan.validate()?;
    let diagram = CoxeterDiagram::of_type(cartan);
    let n = cartan.rank();
    let gram: Vec<Vec<i8>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { 2 } else if diagram.adjacent_at(i, j) { -1 } else { 0 }).collect())
        .collect();

    let mut found: FxHashMap<Root, ()> = FxHashMap::default();
    let mut queue: VecDeque<Root> = VecDeque::new();
    for i in 1..=n as Node {
        let r = Root::simple(n, i);
        found.insert(r.clone(), ());
        queue.push_back(r);
    }
    while let Some(v) = queue.pop_front() {
        for i in 0..n {
            let c: i32 = (0..n).map(|j| gram[i][j] as i32 * v.0[j] as i32).sum();
            if c == 0 {
                continue;
            }
            let mut w = v.clone();
            w.0[i] = (w.0[i] as i32 - c) as i8;
            if w.is_positive() && !found.contains_key(&w) {
                found.insert(w.clone(), ());
                queue.push_back(w);
            }
        }
    }
    let mut positive: Vec<Root> = found.into_keys().collect();
    // ties by descending coefficients, so simple roots come in node order
    positive.sort_by(|a, b| root_height(a).cmp(&root_height(b)).then_with(|| b.0.cmp(&a.0)));

    let p = positive.len();
    let index: FxHashMap<Root, u16> = positive.iter().enumerate().map(|(i, r)| (r.clone(), i as u16)).collect();
    let heights = positive.iter().map(|r| root_height(r) as u8).collect();
    let mut inner = vec![0i8; p * p];
    let mut reflect = vec![SignedRoot { index: 0, negative: false }; p * p];
    for a in 0..p {
        for b in 0..p {
            let c = inner_raw(&gram, &positive[a].0, &positive[b].0);
            inner[a * p + b] = c as i8;
            let w = Root(positive[b].0.iter().zip(&positive[a].0).map(|(&x, &m)| (x as i32 - c * m as i32) as i8).collect());
            let negative = w.is_negative();
            let key = if negative { w.negated() } else { w };
            let idx = *index.get(&key).expect("reflections preserve the root system");
            reflect[a * p + b] = SignedRoot { index: idx, negative };
        }
    }
    let simple = (1..=n as Node).map(|i| index[&Root::simple(n, i)]).collect();
    Ok(RootSystem { cartan, diagram, gram, positive, heights, index, inner, reflect, simple })
}
