//! Canonical words `a_B`, `a_B^b`, the generator sets `S_Y`, and the normal
//! form `δ^i a_B ê_Y h a_{B'}^op` of monoid elements.
//!
//! Monoid elements are evaluated in the model of [`crate::tracking`] as
//! `δ^k e_C w`. Two words are equal in the monoid iff their sets agree, their
//! δ-weights agree and their Weyl factors agree modulo `N(C) = {z : e_C z = e_C}`.
//! For the base point `B_Y` this subgroup `N_0` is generated by the
//! reflections in `B_Y` and the ambiguity of the witness `β` in case 3 of the
//! `e`-action, transported to `B_Y`. The quotient `Stab(B_Y)/N_0` is
//! identified with `W(M_Y)` through the factors of the `S_Y` generators.

use std::collections::VecDeque;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use rustc_hash::{FxHashMap, FxHashSet};
use serde::{Deserialize, Serialize};

use crate::admissible::{
    classify_orbit, coclique_closure, cocliques_y, enumerate_orbit, lowering_e_nodes, m_y_type, AdmissibleSet, Coclique,
    OrbitPoset,
};
use crate::error::{Error, Result};
use crate::rewrite::{op_reverse, word_height, Equivalence, Gen, Rewriter, SearchCaps, Word};
use crate::rootsystem::{CartanType, CoxeterDiagram, Node, Root, RootSystem};
use crate::tracking::{root_reflection, simple_reflection, step, track, Tracked};
use crate::weyl::{CoxeterElement, WMat, WeylGroup};

/// Generator words `x` of `S_Y = {x ê_Y}`, as listed per orbit row. The
/// E7 row with `Y = {5,7}` lists two words for a rank-4 `M_Y`; it is completed
/// with `r_2`, `r_3`, which commute with `e_5`, `e_7`.
const SY_WORDS: &[(CartanType, &[Node], &[&str])] = &[
    (CartanType::E6, &[6], &["e6 e5 e4 e3 r2 e4 e5", "r1", "r2", "r3", "r4"]),
    (CartanType::E6, &[4, 6], &["e4 e3 r2", "r1"]),
    (CartanType::E6, &[2, 3, 6], &[]),
    (CartanType::E7, &[7], &["e7 e6 e5 e4 e3 r2 e4 e5 e6", "r1", "r2", "r3", "r4", "r5"]),
    (CartanType::E7, &[5, 7], &["e5 e4 e3 r2 e4", "r1", "r2", "r3"]),
    (CartanType::E7, &[2, 5, 7], &["r1", "r3"]),
    (CartanType::E7, &[2, 3, 7], &["r5"]),
    (CartanType::E7, &[2, 3, 5, 7], &[]),
    (CartanType::E8, &[8], &["e8 e7 e6 e5 e4 e3 r2 e4 e5 e6 e7", "r1", "r2", "r3", "r4", "r5", "r6"]),
    (CartanType::E8, &[6, 8], &["e6 e5 e4 e3 r2 e4 e5", "r1", "r2", "r3", "r4"]),
    (CartanType::E8, &[2, 3, 8], &["r5", "r6"]),
    (CartanType::E8, &[2, 3, 5, 8], &[]),
];

/// Number of generators the orbit table itself lists for the E7 row `{5,7}`.
pub const E7_57_LISTED: usize = 2;

/// `ê_Y = e_Y δ^{-|Y|}` with the nodes in increasing order.
pub fn hat_e(y: &Coclique) -> Word {
    Word::new(-(y.nodes().len() as i32), y.nodes().iter().map(|&i| Gen::E(i)).collect())
}

/// Whether a word realizes `a_B` or `a_B^b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Direction {
    Forward,
    Backward,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CanonicalWord {
    pub word: Word,
    pub target: AdmissibleSet,
    pub direction: Direction,
}

/// The generator set `S_Y` with the diagram of `M_Y` on generator positions.
#[derive(Debug, Clone)]
pub struct GeneratorSetSY {
    pub coclique: Coclique,
    pub gens: Vec<Word>,
    pub my_diagram: CoxeterDiagram,
}

/// The generator words of `S_Y` as given by the orbit table, each followed by
/// `ê_Y`. Empty for rows without generators and for `Y = ∅`.
pub fn sy_words(sys: &RootSystem, y: &Coclique) -> Result<Vec<Word>> {
    if y.nodes().is_empty() {
        return Ok(sys.nodes().map(|i| Word::new(0, vec![Gen::R(i)])).collect());
    }
    let (_, _, words) = SY_WORDS
        .iter()
        .find(|(t, nodes, _)| *t == sys.cartan() && *nodes == y.nodes())
        .ok_or_else(|| Error::UnknownOrbit(y.nodes().len()))?;
    let hat = hat_e(y);
    words.iter().map(|s| Ok(s.parse::<Word>()?.concat(&hat))).collect()
}

/// How `Stab(B_Y)/N_0` is identified with `W(M_Y)`.
#[derive(Debug, Clone)]
enum Psi {
    /// `Y = ∅`: the Weyl group itself.
    Identity,
    /// `M_Y = ∅`.
    Trivial,
    /// The quotient acts faithfully on `B_Y^⊥`, each generator as the
    /// reflection in `roots[s]`; descents are read off a regular vector.
    Linear { roots: Vec<Vec<i8>>, rho: Vec<f64> },
    /// Coset representatives `g_h^{-1}` for every `h ∈ W(M_Y)`.
    Table { n0: FxHashSet<WMat>, entries: Vec<(WMat, WMat)> },
}

#[derive(Debug)]
struct Canon {
    word: Word,
    tracked: Tracked,
}

/// Everything needed for normal forms within one orbit `W B_Y`.
#[derive(Debug)]
pub struct OrbitModel {
    index: usize,
    rank: usize,
    orbit: OrbitPoset,
    gens: Vec<Word>,
    gen_factors: Vec<WMat>,
    my: WeylGroup,
    psi: Psi,
    n0_order: u128,
    a: Vec<OnceLock<Arc<Canon>>>,
    aback: Vec<OnceLock<Word>>,
    v_inv: Vec<OnceLock<WMat>>,
}

/// Closes `gens` under multiplication.
pub fn generate_group(gens: &[WMat], identity: WMat, cap: usize) -> Result<FxHashSet<WMat>> {
    let mut set = FxHashSet::from_iter([identity]);
    let mut stack = vec![identity];
    while let Some(x) = stack.pop() {
        for g in gens {
            let y = x.mul(g);
            if set.insert(y) {
                if set.len() > cap {
                    return Err(Error::CapsExhausted(format!("subgroup larger than {cap}")));
                }
                stack.push(y);
            }
        }
    }
    Ok(set)
}

/// Generators of `N_0 = {z ∈ W : e_{B_Y} z = e_{B_Y}}`.
pub fn n0_generators(sys: &RootSystem, orbit: &OrbitPoset, weyl: &WeylGroup) -> Vec<WMat> {
    let mut gens: Vec<WMat> = orbit.base_set().indices().iter().map(|&b| root_reflection(sys, b)).collect();
    // t[C] maps B_Y to C
    let mut t: Vec<Option<WMat>> = vec![None; orbit.len()];
    t[orbit.base() as usize] = Some(weyl.identity());
    for m in 0..orbit.len() as u32 {
        let cur = t[m as usize].expect("orbit listed in BFS order from the base");
        for i in sys.nodes() {
            let next = orbit.r_move(m, i) as usize;
            if t[next].is_none() {
                t[next] = Some(simple_reflection(sys, i).mul(&cur));
            }
        }
    }
    let t_inv: Vec<WMat> = t.iter().map(|x| weyl.inverse(&x.expect("orbit is connected"))).collect();
    for (m, c) in orbit.members().iter().enumerate() {
        for i in sys.nodes() {
            let a = sys.simple_index(i);
            if c.contains(a) {
                continue;
            }
            let witnesses: Vec<u16> = c.indices().iter().copied().filter(|&g| sys.inner_idx(g, a) != 0).collect();
            if witnesses.len() < 2 {
                continue;
            }
            let target = orbit.e_move(m as u32, i).expect("case 3 stays in the orbit") as usize;
            let first = root_reflection(sys, witnesses[0]);
            for &b in &witnesses[1..] {
                let d = first.mul(&root_reflection(sys, b));
                let tt = t[target].expect("orbit is connected");
                gens.push(t_inv[target].mul(&d).mul(&tt));
            }
        }
    }
    gens.sort();
    gens.dedup();
    gens
}

const N0_CAP: usize = 5_000_000;
const TABLE_MAX: u128 = 50_000;

/// `|Stab(B_Y)| / |N_0|`, computed from the orbit alone. For the orbits of
/// the table this is `|W(M_Y)|`.
pub fn stabilizer_quotient_order(sys: &RootSystem, orbit: &OrbitPoset) -> Result<u128> {
    let weyl = WeylGroup::new(sys.diagram())?;
    let n0 = generate_group(&n0_generators(sys, orbit, &weyl), weyl.identity(), N0_CAP)?;
    let stab = weyl.order() / orbit.len() as u128;
    if !stab.is_multiple_of(n0.len() as u128) {
        return Err(Error::Invariant(format!("|N_0| = {} does not divide |Stab| = {stab}", n0.len())));
    }
    Ok(stab / n0.len() as u128)
}

fn gram_inner(gram: &[Vec<i8>], a: &[f64], b: &[f64]) -> f64 {
    let mut s = 0.0;
    for i in 0..a.len() {
        for j in 0..b.len() {
            s += a[i] * gram[i][j] as f64 * b[j];
        }
    }
    s
}

fn solve(mut m: Vec<Vec<f64>>, mut rhs: Vec<f64>) -> Option<Vec<f64>> {
    let n = rhs.len();
    for col in 0..n {
        let piv = (col..n).max_by(|&a, &b| m[a][col].abs().total_cmp(&m[b][col].abs()))?;
        if m[piv][col].abs() < 1e-12 {
            return None;
        }
        m.swap(col, piv);
        rhs.swap(col, piv);
        for r in 0..n {
            if r != col {
                let f = m[r][col] / m[col][col];
                for c in col..n {
                    m[r][c] -= f * m[col][c];
                }
                rhs[r] -= f * rhs[col];
            }
        }
    }
    Some((0..n).map(|i| rhs[i] / m[i][i]).collect())
}

fn diagram_on_positions(k: usize, mut adjacent: impl FnMut(usize, usize) -> bool) -> CoxeterDiagram {
    let adjacency = (0..k).map(|a| (0..k).map(|b| a != b && adjacent(a, b)).collect()).collect();
    CoxeterDiagram::from_adjacency((0..k as Node).collect(), adjacency)
}

impl OrbitModel {
    fn build(sys: &RootSystem, index: usize, y: &Coclique) -> Result<Self> {
        let weyl = WeylGroup::new(sys.diagram())?;
        let base = coclique_closure(sys, y.nodes())?;
        let orbit = enumerate_orbit(sys, &base)?;
        let gens = sy_words(sys, y)?;
        let slots = orbit.len();
        let mut model = OrbitModel {
            index,
            rank: sys.rank(),
            orbit,
            gens,
            gen_factors: Vec::new(),
            my: WeylGroup::new(&CoxeterDiagram::from_adjacency(Vec::new(), Vec::new()))?,
            psi: Psi::Trivial,
            n0_order: 1,
            a: (0..slots).map(|_| OnceLock::new()).collect(),
            aback: (0..slots).map(|_| OnceLock::new()).collect(),
            v_inv: (0..slots).map(|_| OnceLock::new()).collect(),
        };
        for g in &model.gens {
            let t = track(sys, g)?;
            if t.set != base {
                return Err(Error::Invariant(format!("generator {g} does not fix B_Y")));
            }
            model.gen_factors.push(t.w);
        }
        if y.nodes().is_empty() {
            model.my = weyl.clone();
            model.psi = Psi::Identity;
            return Ok(model);
        }
        let stab = weyl.order() / model.orbit.len() as u128;
        if model.gens.is_empty() {
            model.n0_order = stab;
            return Ok(model);
        }
        let n0 = generate_group(&n0_generators(sys, &model.orbit, &weyl), weyl.identity(), N0_CAP)?;
        model.n0_order = n0.len() as u128;
        let g = &model.gen_factors;
        let k = g.len();
        for s in 0..k {
            if !n0.contains(&g[s].mul(&g[s])) {
                return Err(Error::Invariant(format!("generator {s} of S_Y is not an involution")));
            }
        }
        let mut bad = None;
        let diagram = diagram_on_positions(k, |a, b| {
            let x = g[a].mul(&g[b]);
            let x2 = x.mul(&x);
            if n0.contains(&x2) {
                false
            } else if n0.contains(&x2.mul(&x)) {
                true
            } else {
                bad = Some((a, b));
                false
            }
        });
        if let Some((a, b)) = bad {
            return Err(Error::Invariant(format!("generators {a}, {b} of S_Y violate the braid relations")));
        }
        model.my = WeylGroup::new(&diagram)?;
        if stab != model.n0_order * model.my.order() {
            return Err(Error::Invariant(format!(
                "|Stab| = {stab}, |N_0| = {}, |W(M_Y)| = {}",
                model.n0_order,
                model.my.order()
            )));
        }
        model.psi = if base.len() == 1 && model.n0_order == 2 {
            Self::linear(sys, &base, g)?
        } else if model.my.order() <= TABLE_MAX {
            Self::table(&weyl, &model.my, g, n0)?
        } else {
            return Err(Error::UnsupportedType(format!("no identification of W(M_Y) for Y = {y}")));
        };
        Ok(model)
    }

    fn linear(sys: &RootSystem, base: &AdmissibleSet, g: &[WMat]) -> Result<Psi> {
        let beta = base.indices()[0];
        let r_beta = root_reflection(sys, beta);
        let mut roots = Vec::new();
        for (s, gs) in g.iter().enumerate() {
            let found = (0..sys.num_positive() as u16).filter(|&c| sys.inner_idx(c, beta) == 0).find(|&c| {
                let rc = root_reflection(sys, c);
                *gs == rc || *gs == rc.mul(&r_beta)
            });
            let c = found.ok_or_else(|| Error::Invariant(format!("generator {s} is not a reflection on B_Y^⊥")))?;
            roots.push(sys.root(c).0.clone());
        }
        let k = roots.len();
        let fr: Vec<Vec<f64>> = roots.iter().map(|r| r.iter().map(|&x| x as f64).collect()).collect();
        let gram: Vec<Vec<f64>> = (0..k).map(|a| (0..k).map(|b| gram_inner(sys.gram(), &fr[a], &fr[b])).collect()).collect();
        if gram.iter().flatten().enumerate().any(|(p, &x)| p % (k + 1) != 0 && x > 0.5) {
            return Err(Error::Invariant("generator roots are not a simple system".into()));
        }
        let c = solve(gram, vec![1.0; k]).ok_or_else(|| Error::Invariant("generator roots are dependent".into()))?;
        let rho = (0..sys.rank()).map(|i| (0..k).map(|t| c[t] * fr[t][i]).sum()).collect();
        Ok(Psi::Linear { roots, rho })
    }

    fn table(weyl: &WeylGroup, my: &WeylGroup, g: &[WMat], n0: FxHashSet<WMat>) -> Result<Psi> {
        let mut entries: Vec<(WMat, WMat)> = Vec::new();
        let mut seen: FxHashMap<WMat, WMat> = FxHashMap::from_iter([(my.identity(), weyl.identity())]);
        let mut queue = VecDeque::from([my.identity()]);
        while let Some(h) = queue.pop_front() {
            let gh = seen[&h];
            entries.push((weyl.inverse(&gh), h));
            for (s, gs) in g.iter().enumerate() {
                let next = h.mul(my.gen(s));
                if let std::collections::hash_map::Entry::Vacant(v) = seen.entry(next) {
                    v.insert(gh.mul(gs));
                    queue.push_back(next);
                }
            }
        }
        // distinct elements must give distinct cosets N_0 g_h
        let mut keys = FxHashSet::default();
        for (inv, _) in &entries {
            let gh = weyl.inverse(inv);
            let key = n0.iter().map(|n| n.mul(&gh)).min().expect("N_0 contains the identity");
            if !keys.insert(key) {
                return Err(Error::Invariant("S_Y generates fewer cosets of N_0 than |W(M_Y)|".into()));
            }
        }
        Ok(Psi::Table { n0, entries })
    }

    /// Position of `Y` in `𝒴`.
    pub fn index(&self) -> usize {
        self.index
    }

    pub fn coclique(&self) -> &Coclique {
        self.orbit.coclique()
    }

    pub fn orbit(&self) -> &OrbitPoset {
        &self.orbit
    }

    /// The group `W(M_Y)` on generator positions.
    pub fn weyl_my(&self) -> &WeylGroup {
        &self.my
    }

    /// `|N_0|`; for rows without generators, `|Stab(B_Y)|`.
    pub fn n0_order(&self) -> u128 {
        self.n0_order
    }

    pub fn generator_set(&self) -> GeneratorSetSY {
        GeneratorSetSY { coclique: self.coclique().clone(), gens: self.gens.clone(), my_diagram: self.my.diagram().clone() }
    }

    fn member(&self, set: &AdmissibleSet) -> Result<u32> {
        self.orbit.index_of(set).ok_or_else(|| Error::Invariant(format!("set of size {} outside the orbit of {}", set.len(), self.coclique())))
    }

    /// `ψ`: the element `h` of `W(M_Y)` with `z ∈ N_0 g_h`.
    fn psi(&self, sys: &RootSystem, z: &WMat) -> Result<CoxeterElement> {
        match &self.psi {
            Psi::Identity => Ok(CoxeterElement::from_matrix(&self.my, *z)),
            Psi::Trivial => Ok(CoxeterElement::identity(&self.my)),
            Psi::Linear { roots, rho } => {
                let mut v: Vec<f64> = (0..sys.rank()).map(|i| (0..sys.rank()).map(|k| z.get(i, k) as f64 * rho[k]).sum()).collect();
                let fr: Vec<Vec<f64>> = roots.iter().map(|r| r.iter().map(|&x| x as f64).collect()).collect();
                let mut word = Vec::new();
                let limit = sys.num_positive();
                while let Some(s) = (0..fr.len()).find(|&s| gram_inner(sys.gram(), &v, &fr[s]) < -1e-9) {
                    let c = gram_inner(sys.gram(), &v, &fr[s]);
                    for (x, r) in v.iter_mut().zip(&fr[s]) {
                        *x -= c * r;
                    }
                    word.push(s as u8);
                    if word.len() > limit {
                        break;
                    }
                }
                if v.iter().zip(rho).any(|(a, b)| (a - b).abs() > 1e-6) {
                    return Err(Error::Invariant("element outside Stab(B_Y)".into()));
                }
                CoxeterElement::from_word(&self.my, &word)
            }
            Psi::Table { n0, entries } => entries
                .iter()
                .find(|(inv, _)| n0.contains(&z.mul(inv)))
                .map(|(_, h)| CoxeterElement::from_matrix(&self.my, *h))
                .ok_or_else(|| Error::Invariant("element outside Stab(B_Y)".into())),
        }
    }

    /// `ζ_Y(h)`: the product of the generator words along the reduced word
    /// of `h`, or `ê_Y` for the identity.
    pub fn zeta(&self, h: &CoxeterElement) -> Word {
        if h.is_identity() {
            return hat_e(self.coclique());
        }
        h.word().iter().fold(Word::identity(), |acc, &s| acc.concat(&self.gens[s as usize]))
    }

    fn height0_path(&self, from: u32, to: u32) -> Result<Vec<Node>> {
        let mut prev: FxHashMap<u32, (u32, Node)> = FxHashMap::default();
        prev.insert(from, (from, 0));
        let mut queue = VecDeque::from([from]);
        while let Some(cur) = queue.pop_front() {
            if cur == to {
                let mut path = Vec::new();
                let mut x = cur;
                while x != from {
                    let (p, i) = prev[&x];
                    path.push(i);
                    x = p;
                }
                path.reverse();
                return Ok(path);
            }
            for i in 1..=self.rank as Node {
                let Some(next) = self.orbit.e_move(cur, i) else { continue };
                if self.orbit.height(next) == 0 && !prev.contains_key(&next) {
                    prev.insert(next, (cur, i));
                    queue.push_back(next);
                }
            }
        }
        Err(Error::Invariant(format!("height-0 member {to} unreachable from {from} by e-moves")))
    }

    /// Brink–Howlett word: `e`-tokens taking `from` to `to` in the left
    /// action through height-0 members.
    fn bh_word(&self, from: u32, to: u32) -> Result<Word> {
        let path = self.height0_path(from, to)?;
        Ok(Word::new(0, path.iter().rev().map(|&i| Gen::E(i)).collect()))
    }

    fn canon(&self, sys: &RootSystem, m: u32) -> Result<Arc<Canon>> {
        if let Some(c) = self.a[m as usize].get() {
            return Ok(c.clone());
        }
        let (word, tracked) = match self.rule(sys, m)? {
            Rule::R(k) => {
                let inner = self.canon(sys, self.orbit.r_move(m, k))?;
                (Word::new(0, vec![Gen::R(k)]).concat(&inner.word), step(sys, Gen::R(k), &inner.tracked, None)?)
            }
            Rule::E(k, j) => {
                let below = self.orbit.e_move(m, k).expect("lowering e-node");
                let inner = self.canon(sys, below)?;
                (Word::new(0, vec![Gen::E(j)]).concat(&inner.word), step(sys, Gen::E(j), &inner.tracked, None)?)
            }
            Rule::Base => {
                let word = self.bh_word(self.orbit.base(), m)?.concat(&hat_e(self.coclique()));
                let tracked = track(sys, &word)?;
                (word, tracked)
            }
        };
        if tracked.set != *self.orbit.member(m) {
            return Err(Error::Invariant(format!("a_B lands outside B for member {m}")));
        }
        let c = Arc::new(Canon { word, tracked });
        let _ = self.a[m as usize].set(c.clone());
        Ok(c)
    }

    fn rule(&self, sys: &RootSystem, m: u32) -> Result<Rule> {
        if self.orbit.member(m).simple_nodes(sys).len() == self.orbit.base_set().simple_nodes(sys).len() {
            if self.orbit.height(m) != 0 {
                return Err(Error::Invariant(format!("member {m} has all simple roots of B_Y but positive height")));
            }
            return Ok(Rule::Base);
        }
        if let Some(&k) = self.orbit.lowering_nodes(m).first() {
            return Ok(Rule::R(k));
        }
        if let Some(&(k, j)) = lowering_e_nodes(sys, &self.orbit, m).first() {
            return Ok(Rule::E(k, j));
        }
        Err(Error::Invariant(format!("no rule defines a_B for member {m}")))
    }

    fn aback_word(&self, sys: &RootSystem, m: u32) -> Result<Word> {
        if let Some(w) = self.aback[m as usize].get() {
            return Ok(w.clone());
        }
        let word = match self.rule(sys, m)? {
            Rule::R(k) => Word::new(0, vec![Gen::R(k)]).concat(&self.aback_word(sys, self.orbit.r_move(m, k))?),
            Rule::E(k, _) => {
                let below = self.orbit.e_move(m, k).expect("lowering e-node");
                Word::new(0, vec![Gen::E(k)]).concat(&self.aback_word(sys, below)?)
            }
            Rule::Base => op_reverse(&self.bh_word(m, self.orbit.base())?).concat(&hat_e(self.coclique())),
        };
        let _ = self.aback[m as usize].set(word.clone());
        Ok(word)
    }

    /// Inverse Weyl factor of `op(a_B)`.
    fn v_inverse(&self, sys: &RootSystem, weyl: &WeylGroup, m: u32) -> Result<WMat> {
        if let Some(v) = self.v_inv[m as usize].get() {
            return Ok(*v);
        }
        let a = self.canon(sys, m)?;
        let t = track(sys, &op_reverse(&a.word))?;
        let v = weyl.inverse(&t.w);
        let _ = self.v_inv[m as usize].set(v);
        Ok(v)
    }
}

enum Rule {
    R(Node),
    E(Node, Node),
    Base,
}

/// The triple `(B, h, B')` with a δ-exponent: the monomial
/// `δ^delta · a_B · ζ_Y(h) · op(a_{B'})`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct NormalForm {
    pub cartan: CartanType,
    pub coclique: Coclique,
    pub b: AdmissibleSet,
    pub bp: AdmissibleSet,
    pub h: CoxeterElement,
    pub delta: i32,
}

#[derive(Serialize, Deserialize)]
struct NormalFormJson {
    #[serde(rename = "type")]
    cartan: String,
    #[serde(rename = "Y")]
    y: Vec<Node>,
    #[serde(rename = "B")]
    b: Vec<Vec<i8>>,
    #[serde(rename = "Bp")]
    bp: Vec<Vec<i8>>,
    h: Vec<u8>,
    delta: i32,
}

impl NormalForm {
    pub fn to_json(&self, sys: &RootSystem) -> serde_json::Value {
        let roots = |s: &AdmissibleSet| s.roots(sys).into_iter().map(|r| r.0).collect();
        serde_json::to_value(NormalFormJson {
            cartan: self.cartan.to_string(),
            y: self.coclique.nodes().to_vec(),
            b: roots(&self.b),
            bp: roots(&self.bp),
            h: self.h.word().to_vec(),
            delta: self.delta,
        })
        .expect("plain data serializes")
    }

    pub fn from_json(monoid: &BrauerMonoid, value: &serde_json::Value) -> Result<Self> {
        let raw: NormalFormJson = serde_json::from_value(value.clone())?;
        let sys = monoid.sys();
        if raw.cartan != sys.cartan().to_string() {
            return Err(Error::Parse(format!("normal form of type {} given for {}", raw.cartan, sys.cartan())));
        }
        let set = |v: Vec<Vec<i8>>| AdmissibleSet::from_roots(sys, &v.into_iter().map(Root).collect::<Vec<_>>());
        let coclique = Coclique::new(sys, raw.y)?;
        let model = monoid.model_for(&coclique)?;
        let nf = NormalForm {
            cartan: sys.cartan(),
            b: set(raw.b)?,
            bp: set(raw.bp)?,
            h: CoxeterElement::from_word(model.weyl_my(), &raw.h)?,
            coclique,
            delta: raw.delta,
        };
        model.member(&nf.b)?;
        model.member(&nf.bp)?;
        Ok(nf)
    }
}

impl fmt::Display for NormalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let h: Vec<String> = self.h.word().iter().map(|s| s.to_string()).collect();
        write!(f, "Y={} |B|={} |B'|={} h=[{}] delta={}", self.coclique, self.b.len(), self.bp.len(), h.join(" "), self.delta)
    }
}

/// One relation checked by [`BrauerMonoid::verify_matsumoto_tits`].
#[derive(Debug, Clone, Serialize)]
pub struct RelationCheck {
    pub relation: String,
    pub lhs: String,
    pub rhs: String,
    /// The two sides agree in the monoid model.
    pub model: bool,
    /// Outcome of the rewrite engine on the reduced sides.
    pub rewrite: Equivalence,
}

impl RelationCheck {
    pub fn passed(&self) -> bool {
        self.model && self.rewrite == Equivalence::Equivalent
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct MatsumotoTitsReport {
    pub coclique: Coclique,
    pub my_type: String,
    pub relations: Vec<RelationCheck>,
}

impl MatsumotoTitsReport {
    pub fn passed(&self) -> bool {
        self.relations.iter().all(RelationCheck::passed)
    }
}

/// Orbit models of one exceptional root system, built on demand.
#[derive(Debug)]
pub struct BrauerMonoid {
    sys: RootSystem,
    weyl: WeylGroup,
    cocliques: Vec<Coclique>,
    models: Vec<Mutex<Option<Arc<OrbitModel>>>>,
    rewriter: OnceLock<Rewriter>,
}

impl BrauerMonoid {
    pub fn new(sys: RootSystem) -> Result<Self> {
        let cocliques = cocliques_y(&sys)?;
        let weyl = WeylGroup::new(sys.diagram())?;
        let models = cocliques.iter().map(|_| Mutex::new(None)).collect();
        Ok(Self { sys, weyl, cocliques, models, rewriter: OnceLock::new() })
    }

    pub fn of_type(t: CartanType) -> Result<Self> {
        Self::new(RootSystem::new(t)?)
    }

    pub fn sys(&self) -> &RootSystem {
        &self.sys
    }

    pub fn weyl(&self) -> &WeylGroup {
        &self.weyl
    }

    /// `𝒴`, starting with `∅`.
    pub fn cocliques(&self) -> &[Coclique] {
        &self.cocliques
    }

    pub fn model(&self, index: usize) -> Result<Arc<OrbitModel>> {
        let slot = self.models.get(index).ok_or(Error::UnknownOrbit(index))?;
        let mut guard = slot.lock().map_err(|_| Error::Invariant("poisoned orbit model".into()))?;
        if let Some(m) = guard.as_ref() {
            return Ok(m.clone());
        }
        let m = Arc::new(OrbitModel::build(&self.sys, index, &self.cocliques[index])?);
        *guard = Some(m.clone());
        Ok(m)
    }

    pub fn model_for(&self, y: &Coclique) -> Result<Arc<OrbitModel>> {
        let index = self.cocliques.iter().position(|c| c == y).ok_or_else(|| Error::Parse(format!("{y} is not an orbit representative")))?;
        self.model(index)
    }

    pub fn model_of_set(&self, set: &AdmissibleSet) -> Result<Arc<OrbitModel>> {
        self.model_for(&classify_orbit(&self.sys, set)?)
    }

    /// The shortest `e`-word moving `from` to `to` among height-0 members.
    pub fn brink_howlett(&self, from: &AdmissibleSet, to: &AdmissibleSet) -> Result<Word> {
        let model = self.model_of_set(from)?;
        let (a, b) = (model.member(from)?, model.member(to)?);
        if model.orbit.height(a) != 0 || model.orbit.height(b) != 0 {
            return Err(Error::Invariant("Brink–Howlett words join members of height 0".into()));
        }
        model.bh_word(a, b)
    }

    pub fn build_ab(&self, set: &AdmissibleSet) -> Result<CanonicalWord> {
        let model = self.model_of_set(set)?;
        let c = model.canon(&self.sys, model.member(set)?)?;
        Ok(CanonicalWord { word: c.word.clone(), target: set.clone(), direction: Direction::Forward })
    }

    pub fn build_aback(&self, set: &AdmissibleSet) -> Result<CanonicalWord> {
        let model = self.model_of_set(set)?;
        let word = model.aback_word(&self.sys, model.member(set)?)?;
        Ok(CanonicalWord { word, target: set.clone(), direction: Direction::Backward })
    }

    pub fn sy_generators(&self, y: &Coclique) -> Result<GeneratorSetSY> {
        Ok(self.model_for(y)?.generator_set())
    }

    fn synth_zero(&self, model: &OrbitModel, b: u32, h: &CoxeterElement, bp: u32) -> Result<Word> {
        let a = model.canon(&self.sys, b)?;
        let ap = model.canon(&self.sys, bp)?;
        Ok(a.word.concat(&model.zeta(h)).concat(&op_reverse(&ap.word)))
    }

    /// The word `δ^i a_B ζ_Y(h) op(a_{B'})` of a normal form.
    pub fn synthesize(&self, nf: &NormalForm) -> Result<Word> {
        let model = self.model_for(&nf.coclique)?;
        let w = self.synth_zero(&model, model.member(&nf.b)?, &nf.h, model.member(&nf.bp)?)?;
        Ok(w.concat(&Word::new(nf.delta, Vec::new())))
    }

    pub fn decompose(&self, w: &Word) -> Result<NormalForm> {
        let t = track(&self.sys, w)?;
        let model = self.model_of_set(&t.set)?;
        let b = model.member(&t.set)?;
        let bp_set = track(&self.sys, &op_reverse(w))?.set;
        let bp = model.member(&bp_set)?;
        let a = model.canon(&self.sys, b)?;
        let u_inv = self.weyl.inverse(&a.tracked.w);
        let z = u_inv.mul(&t.w).mul(&model.v_inverse(&self.sys, &self.weyl, bp)?);
        let h = model.psi(&self.sys, &z)?;
        let base = track(&self.sys, &self.synth_zero(&model, b, &h, bp)?)?;
        if base.set != t.set {
            return Err(Error::Invariant("synthesized word changes the left image".into()));
        }
        Ok(NormalForm {
            cartan: self.sys.cartan(),
            coclique: model.coclique().clone(),
            b: t.set,
            bp: bp_set,
            h,
            delta: t.delta - base.delta,
        })
    }

    pub fn multiply(&self, x: &NormalForm, y: &NormalForm) -> Result<NormalForm> {
        self.decompose(&self.synthesize(x)?.concat(&self.synthesize(y)?))
    }

    /// `h` and the δ-exponent of a word whose image lies in `δ^ℤ H_Y`.
    pub fn peel(&self, w: &Word, y: &Coclique) -> Result<(CoxeterElement, i32)> {
        let model = self.model_for(y)?;
        let t = track(&self.sys, w)?;
        let back = track(&self.sys, &op_reverse(w))?.set;
        if t.set != *model.orbit.base_set() || back != t.set {
            return Err(Error::Invariant(format!("word does not lie in H_Y for Y = {y}")));
        }
        let h = model.psi(&self.sys, &t.w)?;
        let own = track(&self.sys, &model.zeta(&h))?.delta;
        Ok((h, t.delta - own))
    }

    pub fn rewriter(&self) -> &Rewriter {
        self.rewriter.get_or_init(|| Rewriter::new(&self.sys))
    }

    /// [`Self::peel`] by rewriting alone: repeatedly find a generator `s`
    /// with `s · current` reducing to one less height, then match the
    /// height-0 residue against `ê_Y`.
    pub fn peel_by_descent(&self, w: &Word, y: &Coclique, caps: SearchCaps) -> Result<(CoxeterElement, i32)> {
        let model = self.model_for(y)?;
        let rw = self.rewriter();
        let mut cur = rw.reduce_with_floor(w, caps, None).word;
        let mut word = Vec::new();
        while word_height(&cur) > 0 {
            let target = word_height(&cur) - 1;
            let found = model.gens.iter().enumerate().find_map(|(s, g)| {
                let r = rw.reduce_with_floor(&g.concat(&cur), caps, Some(target)).word;
                (word_height(&r) == target).then_some((s, r))
            });
            let (s, next) = found.ok_or_else(|| Error::CapsExhausted(format!("no descent at height {}", target + 1)))?;
            word.push(s as u8);
            cur = next;
        }
        let delta = match rw.homog_equiv(&cur, &hat_e(y), caps) {
            Equivalence::Equivalent => 0,
            Equivalence::DeltaOffset(k) => k,
            Equivalence::NotFoundWithinCaps => return Err(Error::CapsExhausted("height-0 residue not matched with ê_Y".into())),
        };
        Ok((CoxeterElement::from_word(&model.my, &word)?, delta))
    }

    /// `c_B`: the element of `δ^ℤ H_Y` given by `op(a_B^b) · a_B`.
    pub fn correction(&self, set: &AdmissibleSet) -> Result<(CoxeterElement, i32)> {
        let model = self.model_of_set(set)?;
        let w = op_reverse(&self.build_aback(set)?.word).concat(&self.build_ab(set)?.word);
        self.peel(&w, model.coclique())
    }

    /// Matsumoto–Tits relations of `M_Y` on `S_Y`: `s² = ê_Y`, and the
    /// commutation or braid relation for each pair of generators.
    pub fn verify_matsumoto_tits(&self, y: &Coclique, caps: SearchCaps) -> Result<MatsumotoTitsReport> {
        let model = self.model_for(y)?;
        let rw = self.rewriter();
        let gens = &model.gens;
        let mut relations = Vec::new();
        let mut check = |relation: String, lhs: Word, rhs: Word| -> Result<()> {
            let (tl, tr) = (track(&self.sys, &lhs)?, track(&self.sys, &rhs)?);
            let model_ok = tl.set == tr.set && tl.delta == tr.delta && model.psi(&self.sys, &tl.w)? == model.psi(&self.sys, &tr.w)?;
            let floor = Some(word_height(&rhs).min(word_height(&lhs)));
            let l = rw.reduce_with_floor(&lhs, caps, floor).word;
            let r = rw.reduce_with_floor(&rhs, caps, floor).word;
            let rewrite = if word_height(&l) != word_height(&r) {
                Equivalence::NotFoundWithinCaps
            } else {
                rw.homog_equiv(&l, &r, caps)
            };
            relations.push(RelationCheck { relation, lhs: lhs.to_string(), rhs: rhs.to_string(), model: model_ok, rewrite });
            Ok(())
        };
        let hat = hat_e(y);
        for (s, g) in gens.iter().enumerate() {
            check(format!("s{s}^2"), g.concat(g), hat.clone())?;
        }
        let diagram = model.my.diagram();
        for s in 0..gens.len() {
            for t in s + 1..gens.len() {
                let (a, b) = (&gens[s], &gens[t]);
                if diagram.adjacent_at(s, t) {
                    check(format!("s{s} s{t} s{s}"), a.concat(b).concat(a), b.concat(a).concat(b))?;
                } else {
                    check(format!("s{s} s{t}"), a.concat(b), b.concat(a))?;
                }
            }
        }
        Ok(MatsumotoTitsReport { coclique: y.clone(), my_type: diagram.type_string()?, relations })
    }

    /// Lower bound for the height of any word equal to `w`: the height of
    /// its normal form.
    pub fn height_floor(&self, w: &Word) -> Result<usize> {
        let nf = self.decompose(w)?;
        let model = self.model_for(&nf.coclique)?;
        let (b, bp) = (model.member(&nf.b)?, model.member(&nf.bp)?);
        Ok(model.orbit.height(b) as usize + nf.h.length() + model.orbit.height(bp) as usize)
    }
}

/// Orbits of the admissible closures of cocliques, one representative
/// coclique each, smallest cocliques first. The empty coclique comes first.
pub fn coclique_orbits(sys: &RootSystem) -> Result<Vec<(Coclique, OrbitPoset)>> {
    let n = sys.rank();
    let mut cocliques: Vec<Vec<Node>> = Vec::new();
    for mask in 0u32..1 << n {
        let nodes: Vec<Node> = (0..n).filter(|&i| mask >> i & 1 == 1).map(|i| i as Node + 1).collect();
        if nodes.iter().all(|&a| nodes.iter().all(|&b| !sys.adjacent(a, b))) {
            cocliques.push(nodes);
        }
    }
    cocliques.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    let mut out: Vec<(Coclique, OrbitPoset)> = Vec::new();
    for nodes in cocliques {
        let Ok(set) = coclique_closure(sys, &nodes) else { continue };
        if out.iter().any(|(_, o)| o.index_of(&set).is_some()) {
            continue;
        }
        out.push((Coclique(nodes), enumerate_orbit(sys, &set)?));
    }
    Ok(out)
}

/// The table cocliques `𝒴` for E6, E7, E8, otherwise one coclique per
/// orbit as found by [`coclique_orbits`].
pub fn orbit_representatives(sys: &RootSystem) -> Result<Vec<Coclique>> {
    if sys.cartan().is_exceptional() {
        return cocliques_y(sys);
    }
    Ok(coclique_orbits(sys)?.into_iter().map(|(y, _)| y).collect())
}

/// `Σ_Y |W(M_Y)| · |WB_Y|²` over all coclique orbits, with `M_∅ = M` and
/// `M_Y` read off the maximal member of each orbit.
pub fn rank(sys: &RootSystem) -> Result<u64> {
    let mut total: u128 = 0;
    for (y, orbit) in coclique_orbits(sys)? {
        let my = if y.nodes().is_empty() { sys.diagram().clone() } else { m_y_type(sys, &orbit) };
        total += WeylGroup::new(&my)?.order() * (orbit.len() as u128).pow(2);
    }
    u64::try_from(total).map_err(|_| Error::Invariant("rank exceeds 64 bits".into()))
}

/// The same sum with `|W(M_Y)|` replaced by `|Stab(B_Y)| / |N_0|`.
pub fn rank_by_stabilizers(sys: &RootSystem) -> Result<u64> {
    let weyl = WeylGroup::new(sys.diagram())?;
    let mut total: u128 = 0;
    for (y, orbit) in coclique_orbits(sys)? {
        let q = if y.nodes().is_empty() { weyl.order() } else { stabilizer_quotient_order(sys, &orbit)? };
        total += q * (orbit.len() as u128).pow(2);
    }
    u64::try_from(total).map_err(|_| Error::Invariant("rank exceeds 64 bits".into()))
}

/// Rank of the Temperley–Lieb subalgebra: `1 + Σ_{Y≠∅} |(WB_Y)^0|²`.
pub fn tl_rank(sys: &RootSystem) -> Result<u64> {
    let mut total = 1u64;
    for y in cocliques_y(sys)?.iter().skip(1) {
        let orbit = enumerate_orbit(sys, &coclique_closure(sys, y.nodes())?)?;
        let h0 = (0..orbit.len() as u32).filter(|&m| orbit.height(m) == 0).count() as u64;
        total += h0 * h0;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rewrite::{act_word, Side};

    fn e6() -> BrauerMonoid {
        BrauerMonoid::of_type(CartanType::E6).unwrap()
    }

    fn y(nodes: &[Node]) -> Coclique {
        Coclique(nodes.to_vec())
    }

    #[test]
    fn generator_sets_follow_the_table() {
        let m = e6();
        let g = m.sy_generators(&y(&[6])).unwrap();
        assert_eq!(g.gens.len(), 5);
        assert_eq!(g.gens[0], "d^-1 e6 e5 e4 e3 r2 e4 e5 e6".parse().unwrap());
        assert_eq!(g.my_diagram.type_string().unwrap(), "A5");
        let g = m.sy_generators(&y(&[4, 6])).unwrap();
        assert_eq!(g.gens, vec!["d^-2 e4 e3 r2 e4 e6".parse().unwrap(), "d^-2 r1 e4 e6".parse().unwrap()]);
        assert!(m.sy_generators(&y(&[2, 3, 6])).unwrap().gens.is_empty());
        let e8 = BrauerMonoid::of_type(CartanType::E8).unwrap();
        let g = e8.sy_generators(&y(&[2, 3, 8])).unwrap();
        assert_eq!(g.gens, vec!["d^-3 r5 e2 e3 e8".parse().unwrap(), "d^-3 r6 e2 e3 e8".parse().unwrap()]);
    }

    #[test]
    fn base_point_words() {
        let m = e6();
        for (i, c) in m.cocliques().to_vec().iter().enumerate().skip(1) {
            let model = m.model(i).unwrap();
            let base = model.orbit().base_set().clone();
            assert_eq!(m.build_ab(&base).unwrap().word, hat_e(c));
            assert_eq!(m.build_aback(&base).unwrap().word, hat_e(c));
            assert!(m.brink_howlett(&base, &base).unwrap().is_empty());
        }
    }

    #[test]
    fn brink_howlett_reaches_every_height0_member() {
        let m = e6();
        for i in 1..m.cocliques().len() {
            let model = m.model(i).unwrap();
            let base = model.orbit().base_set().clone();
            let zero: Vec<_> = (0..model.orbit().len() as u32).filter(|&k| model.orbit().height(k) == 0).collect();
            assert_eq!(zero.len(), [6, 20, 15][i - 1]);
            for &k in &zero {
                let target = model.orbit().member(k).clone();
                let w = m.brink_howlett(&base, &target).unwrap();
                assert!(w.tokens.iter().all(|t| !t.is_r()));
                assert_eq!(act_word(m.sys(), &w, Side::Left, &base).unwrap(), target);
            }
        }
    }

    #[test]
    fn worked_example_has_height_two() {
        let m = e6();
        let sys = m.sys();
        let b = AdmissibleSet::from_roots(sys, &[Root::simple(6, 4), Root(vec![1, 1, 2, 2, 1, 0])]).unwrap();
        let a = m.build_ab(&b).unwrap().word;
        let quoted: Word = "d^-2 e4 r2 r5 e3 e4 e5 e1 e3 e4 e6".parse().unwrap();
        assert_eq!(word_height(&a), 2);
        for side in [Side::Left, Side::Right] {
            let empty = AdmissibleSet::empty();
            assert_eq!(act_word(sys, &a, side, &empty).unwrap(), act_word(sys, &quoted, side, &empty).unwrap());
        }
        assert_eq!(m.decompose(&quoted).unwrap(), m.decompose(&a).unwrap());
    }

    #[test]
    fn trivial_decompositions() {
        let m = e6();
        let c = y(&[6]);
        let hat = hat_e(&c);
        let nf = m.decompose(&hat).unwrap();
        assert_eq!(nf.coclique, c);
        assert!(nf.h.is_identity());
        assert_eq!(nf.delta, 0);
        let b = m.model(1).unwrap().orbit().member(7).clone();
        let nf = m.decompose(&m.build_ab(&b).unwrap().word).unwrap();
        assert_eq!((nf.b.clone(), nf.bp.clone(), nf.delta), (b, m.model(1).unwrap().orbit().base_set().clone(), 0));
        let id = m.decompose(&Word::identity()).unwrap();
        assert!(id.coclique.nodes().is_empty() && id.h.is_identity());
        let x = m.decompose(&"e6".parse().unwrap()).unwrap();
        assert_eq!(m.multiply(&id, &x).unwrap(), x);
        let xx = m.multiply(&x, &x).unwrap();
        assert_eq!(xx.delta, x.delta + 1);
        assert_eq!((xx.b, xx.bp, xx.h), (x.b, x.bp, x.h));
    }

    #[test]
    fn peel_single_generators() {
        let m = e6();
        let c = y(&[6]);
        let g = m.sy_generators(&c).unwrap();
        for (s, word) in g.gens.iter().enumerate() {
            let (h, d) = m.peel(word, &c).unwrap();
            assert_eq!((h.word(), d), (&[s as u8][..], 0));
        }
        let (h, d) = m.peel(&hat_e(&c).with_delta(2), &c).unwrap();
        assert!(h.is_identity());
        assert_eq!(d, 3);
    }

    #[test]
    fn two_generator_product_matches_matrix_product() {
        let m = e6();
        let c = y(&[6]);
        let g = m.sy_generators(&c).unwrap();
        let model = m.model(1).unwrap();
        let my = model.weyl_my();
        let (h, _) = m.peel(&g.gens[1].concat(&g.gens[0]), &c).unwrap();
        assert_eq!(*h.matrix(), my.gen(1).mul(my.gen(0)));
        assert_eq!(h.length(), 2);
    }

    #[test]
    fn json_round_trip() {
        let m = e6();
        let nf = m.decompose(&"e2 e3 r4 e6 e5 e4 e3 e1".parse().unwrap()).unwrap();
        let v = nf.to_json(m.sys());
        assert_eq!(v["type"], "E6");
        assert_eq!(NormalForm::from_json(&m, &v).unwrap(), nf);
    }

    #[test]
    fn small_ranks() {
        for (t, r) in [(CartanType::A(2), 15), (CartanType::A(3), 105), (CartanType::A(4), 945), (CartanType::D(4), 1569)] {
            let sys = RootSystem::new(t).unwrap();
            assert_eq!(rank(&sys).unwrap(), r, "{t}");
            assert_eq!(rank_by_stabilizers(&sys).unwrap(), r, "{t}");
        }
    }

    #[test]
    fn e6_ranks() {
        let sys = RootSystem::new(CartanType::E6).unwrap();
        assert_eq!(rank(&sys).unwrap(), 1_440_585);
        assert_eq!(tl_rank(&sys).unwrap(), 662);
    }
}
