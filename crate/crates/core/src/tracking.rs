//! Evaluation of words in the monoid model `δ^k · e_C · w`, with `C` an
//! admissible set and `w` a Weyl group element.
//!
//! Left multiplication by a generator:
//! `r_i · e_C w = e_{r_iC} · r_i w`;
//! `e_i · e_C w` is `δ e_C w` if `α_i ∈ C`, `e_{cl(C ∪ α_i)} w` if `α_i ⊥ C`,
//! and `e_{e_iC} · r_β r_i w` otherwise, for `β ∈ C` not orthogonal to `α_i`.
//! The Weyl factor is only defined up to the subgroup fixing `e_C` on the
//! left; see [`crate::normalform`].

use crate::admissible::{act_reflection, closure, AdmissibleSet};
use crate::error::{Error, Result};
use crate::rewrite::{Gen, Word};
use crate::rootsystem::{Node, RootSystem};
use crate::weyl::{WMat, MAX_RANK};

/// A monoid element `δ^delta · e_set · w`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Tracked {
    pub set: AdmissibleSet,
    pub w: WMat,
    pub delta: i32,
}

impl Tracked {
    pub fn identity(sys: &RootSystem) -> Self {
        Self { set: AdmissibleSet::empty(), w: WMat::identity(sys.rank()), delta: 0 }
    }

    /// `e_set` with trivial Weyl factor.
    pub fn at(sys: &RootSystem, set: AdmissibleSet) -> Self {
        Self { set, w: WMat::identity(sys.rank()), delta: 0 }
    }
}

/// Simple reflections and root reflections of `sys` as matrices.
pub fn simple_reflection(sys: &RootSystem, i: Node) -> WMat {
    root_reflection(sys, sys.simple_index(i))
}

pub fn root_reflection(sys: &RootSystem, root: u16) -> WMat {
    WMat::reflection(sys.gram(), &sys.root(root).0)
}

fn check_rank(sys: &RootSystem) -> Result<()> {
    if sys.rank() > MAX_RANK {
        return Err(Error::UnsupportedType(format!("monoid model above rank {MAX_RANK}")));
    }
    Ok(())
}

/// Left multiplication by one generator. In case 3 the witness `β` is the
/// first root of `C` not orthogonal to `α_i` unless `witness` is given.
pub fn step(sys: &RootSystem, g: Gen, t: &Tracked, witness: Option<u16>) -> Result<Tracked> {
    Ok(match g {
        Gen::R(i) => {
            let s = simple_reflection(sys, i);
            Tracked { set: act_reflection(sys, sys.simple_index(i), &t.set), w: s.mul(&t.w), delta: t.delta }
        }
        Gen::E(i) => {
            let a = sys.simple_index(i);
            if t.set.contains(a) {
                return Ok(Tracked { delta: t.delta + 1, ..t.clone() });
            }
            let beta = witness.or_else(|| t.set.indices().iter().copied().find(|&g| sys.inner_idx(g, a) != 0));
            match beta {
                None => {
                    let mut next = t.set.indices().to_vec();
                    next.push(a);
                    Tracked { set: closure(sys, &next)?, w: t.w, delta: t.delta }
                }
                Some(b) => {
                    if !t.set.contains(b) || sys.inner_idx(b, a) == 0 {
                        return Err(Error::Invariant(format!("bad witness for e{i}")));
                    }
                    let set = act_reflection(sys, b, &act_reflection(sys, a, &t.set));
                    let w = root_reflection(sys, b).mul(&simple_reflection(sys, i)).mul(&t.w);
                    Tracked { set, w, delta: t.delta }
                }
            }
        }
    })
}

/// Evaluates `word · start` (tokens applied right to left); the word's own
/// δ-power is added.
pub fn track_from(sys: &RootSystem, word: &Word, start: &Tracked) -> Result<Tracked> {
    check_rank(sys)?;
    word.validate(sys)?;
    let mut cur = start.clone();
    for &g in word.tokens.iter().rev() {
        cur = step(sys, g, &cur, None)?;
    }
    cur.delta += word.delta;
    Ok(cur)
}

/// Evaluates a word on the identity element.
pub fn track(sys: &RootSystem, word: &Word) -> Result<Tracked> {
    track_from(sys, word, &Tracked::identity(sys))
}

/// Exponent of δ in the monoid image of `word`: its own δ-power plus one for
/// each `e_i` meeting a set that already contains `α_i`.
pub fn delta_weight(sys: &RootSystem, word: &Word) -> Result<i32> {
    let mut set = AdmissibleSet::empty();
    let mut count = word.delta;
    for &g in word.tokens.iter().rev() {
        match g {
            Gen::R(i) => set = act_reflection(sys, sys.simple_index(i), &set),
            Gen::E(i) => {
                if set.contains(sys.simple_index(i)) {
                    count += 1;
                } else {
                    set = crate::admissible::act_e(sys, i, &set)?;
                }
            }
        }
    }
    Ok(count)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::admissible::enumerate_orbit;
    use crate::admissible::{coclique_closure, cocliques_y};
    use crate::rewrite::{all_rule_instances, act_word, Side};
    use crate::rootsystem::CartanType;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn sets_agree_with_the_action() {
        let sys = RootSystem::new(CartanType::E6).unwrap();
        let x = w("e4 r2 r5 e3 e4 e5 e1 e3 e4 e6");
        let t = track(&sys, &x).unwrap();
        assert_eq!(t.set, act_word(&sys, &x, Side::Left, &AdmissibleSet::empty()).unwrap());
        let right = act_word(&sys, &x, Side::Right, &AdmissibleSet::empty()).unwrap();
        // right image of e_C w is w^{-1} C
        let inv = crate::weyl::WeylGroup::new(sys.diagram()).unwrap().inverse(&t.w);
        let mapped: Vec<_> = t.set.roots(&sys).iter().map(|r| crate::rootsystem::Root(inv.apply(&r.0)).abs()).collect();
        assert_eq!(AdmissibleSet::from_roots(&sys, &mapped).unwrap(), right);
    }

    #[test]
    fn delta_weight_examples() {
        let sys = RootSystem::new(CartanType::E6).unwrap();
        assert_eq!(delta_weight(&sys, &w("e3 e3")).unwrap(), 1);
        assert_eq!(delta_weight(&sys, &w("d^1 e2 e3 e6")).unwrap(), 1);
        assert_eq!(delta_weight(&sys, &w("e2 e3 e6 e5 e4 e3 e2 e4 e5 e6")).unwrap(), 1);
        assert_eq!(delta_weight(&sys, &w("e1 e3 e1")).unwrap(), 0);
    }

    /// Each relation changes the δ count by its own δ change, on every set of
    /// every orbit.
    #[test]
    fn delta_weight_respects_every_rule_on_e6() {
        let sys = RootSystem::new(CartanType::E6).unwrap();
        let rules = all_rule_instances(&sys);
        for y in cocliques_y(&sys).unwrap() {
            let orbit = enumerate_orbit(&sys, &coclique_closure(&sys, y.nodes()).unwrap()).unwrap();
            for c in orbit.members() {
                let start = Tracked::at(&sys, c.clone());
                for r in &rules {
                    let l = track_from(&sys, &Word::new(0, r.lhs.clone()), &start).unwrap();
                    let rr = track_from(&sys, &Word::new(0, r.rhs.clone()), &start).unwrap();
                    assert_eq!(l.set, rr.set, "{:?} at {:?}", r.label, c);
                    assert_eq!(l.delta - rr.delta, r.delta, "{:?} at {:?}", r.label, c);
                }
            }
        }
    }
}
