#![allow(dead_code)]

use brauerlab::normalform::{BrauerMonoid, NormalForm};
use brauerlab::rewrite::{homog_equiv, word_height, Equivalence, Gen, Rewriter, SearchCaps, Word};
use brauerlab::rootsystem::RootSystem;
use brauerlab::weyl::CoxeterElement;
use rand::{rngs::StdRng, RngExt};

pub fn w(s: &str) -> Word {
    s.parse().unwrap()
}

/// `a ⇝ b`: `a` rewrites to the height of `b`, and the result is
/// homogeneously equivalent to `b`, δ-exponent included. Both sides are
/// shortened first; at the floor height only homogeneous moves apply.
pub fn derives(sys: &RootSystem, a: &Word, b: &Word, caps: SearchCaps) -> bool {
    let rw = Rewriter::new(sys);
    let floor = Some(word_height(b));
    let ra = rw.reduce_with_floor(a, caps, floor).word;
    let rb = rw.reduce_with_floor(b, caps, floor).word;
    word_height(&ra) == word_height(b) && word_height(&rb) == word_height(b) && homog_equiv(sys, &ra, &rb, caps).unwrap() == Equivalence::Equivalent
}

/// Random normal form of E-type with `het(B) + ℓ(h) + het(B') ≤ max_height`.
pub fn random_triple(m: &BrauerMonoid, rng: &mut StdRng, max_height: usize) -> NormalForm {
    let y = rng.random_range(0..m.cocliques().len());
    let model = m.model(y).unwrap();
    let orbit = model.orbit();
    let pick = |rng: &mut StdRng, budget: usize| {
        let low: Vec<u32> = (0..orbit.len() as u32).filter(|&k| orbit.height(k) as usize <= budget).collect();
        low[rng.random_range(0..low.len())]
    };
    let b = pick(rng, max_height);
    let left = max_height - orbit.height(b) as usize;
    let bp = pick(rng, left);
    let left = left - orbit.height(bp) as usize;
    let g = model.weyl_my();
    let h = if g.rank() == 0 {
        CoxeterElement::identity(g)
    } else {
        let len = rng.random_range(0..=left);
        let word: Vec<u8> = (0..len).map(|_| rng.random_range(0..g.rank() as u8)).collect();
        CoxeterElement::from_word(g, &word).unwrap()
    };
    NormalForm {
        cartan: m.sys().cartan(),
        coclique: model.coclique().clone(),
        b: orbit.member(b).clone(),
        bp: orbit.member(bp).clone(),
        h,
        delta: rng.random_range(-2..=2),
    }
}

/// A random walk of height-preserving rewrites.
pub fn perturb(rw: &Rewriter, word: &Word, rng: &mut StdRng, steps: usize) -> Word {
    let mut cur = word.clone();
    for _ in 0..steps {
        let moves = rw.homogeneous_moves(&cur, word.len() + 4);
        if moves.is_empty() {
            break;
        }
        cur = moves[rng.random_range(0..moves.len())].clone();
    }
    cur
}

pub fn random_word(rng: &mut StdRng, rank: usize, max_len: usize) -> Word {
    let len = rng.random_range(0..=max_len);
    let tokens = (0..len)
        .map(|_| {
            let i = rng.random_range(1..=rank as u8);
            if rng.random_bool(0.5) {
                Gen::E(i)
            } else {
                Gen::R(i)
            }
        })
        .collect();
    Word::new(0, tokens)
}
