mod common;

use std::collections::HashMap;

use brauerlab::admissible::lowering_e_nodes;
use brauerlab::normalform::{hat_e, tl_rank, BrauerMonoid};
use brauerlab::rewrite::{Gen, SearchCaps, Word};
use brauerlab::rootsystem::CartanType;
use brauerlab::tracking::track;
use common::{random_triple, w};
use rand::{rngs::StdRng, RngExt, SeedableRng};

#[test]
fn multiplication_is_associative() {
    let m = BrauerMonoid::of_type(CartanType::E6).unwrap();
    let mut rng = StdRng::seed_from_u64(7);
    for _ in 0..200 {
        let (x, y, z) = (random_triple(&m, &mut rng, 2), random_triple(&m, &mut rng, 2), random_triple(&m, &mut rng, 2));
        let left = m.multiply(&m.multiply(&x, &y).unwrap(), &z).unwrap();
        let right = m.multiply(&x, &m.multiply(&y, &z).unwrap()).unwrap();
        assert_eq!(left, right, "({x} {y}) {z}");
    }
}

#[test]
fn e_products_are_fixed_by_their_sets() {
    let m = BrauerMonoid::of_type(CartanType::E6).unwrap();
    let mut rng = StdRng::seed_from_u64(11);
    let mut seen: HashMap<(String, String), String> = HashMap::new();
    for _ in 0..20_000 {
        let len = rng.random_range(0..=12);
        let word = Word::new(0, (0..len).map(|_| Gen::E(rng.random_range(1..=6))).collect());
        let nf = m.decompose(&word).unwrap();
        let key = (format!("{:?}", nf.b), format!("{:?}", nf.bp));
        let h = format!("{:?}", nf.h.word());
        assert_eq!(seen.entry(key).or_insert_with(|| h.clone()), &h, "{word}");
    }
    assert!(seen.len() as u64 <= tl_rank(m.sys()).unwrap());
}

#[test]
fn lowering_choice_does_not_matter() {
    let m = BrauerMonoid::of_type(CartanType::E6).unwrap();
    let sys = m.sys();
    for i in 0..m.cocliques().len() {
        let model = m.model(i).unwrap();
        let orbit = model.orbit();
        for b in 0..orbit.len() as u32 {
            let target = m.decompose(&m.build_ab(orbit.member(b)).unwrap().word).unwrap();
            for (k, j) in lowering_e_nodes(sys, orbit, b) {
                let below = orbit.e_move(b, k).unwrap();
                let word = Word::new(0, vec![Gen::E(j)]).concat(&m.build_ab(orbit.member(below)).unwrap().word);
                assert_eq!(m.decompose(&word).unwrap(), target, "Y={} member {b} via ({k},{j})", model.coclique());
            }
        }
    }
}

#[test]
fn corrections_are_trivial() {
    let m = BrauerMonoid::of_type(CartanType::E6).unwrap();
    for i in 0..m.cocliques().len() {
        let model = m.model(i).unwrap();
        for b in model.orbit().members() {
            let (h, delta) = m.correction(b).unwrap();
            assert!(h.is_identity() && delta == 0);
        }
    }
}

#[test]
fn weyl_groups_of_the_quotients() {
    let cases = [
        (CartanType::E6, vec![6], 720u128),
        (CartanType::E6, vec![4, 6], 6),
        (CartanType::E6, vec![2, 3, 6], 1),
        (CartanType::E7, vec![2, 3, 7], 2),
        (CartanType::E7, vec![5, 7], 48),
        (CartanType::E7, vec![7], 23040),
        (CartanType::E8, vec![6, 8], 720),
        (CartanType::E8, vec![8], 2903040),
    ];
    for (t, nodes, order) in cases {
        let m = BrauerMonoid::of_type(t).unwrap();
        let y = m.cocliques().iter().find(|c| c.nodes() == nodes.as_slice()).unwrap().clone();
        let model = m.model_for(&y).unwrap();
        assert_eq!(model.weyl_my().order(), order, "{t} {y}");
        assert_eq!(m.sy_generators(&y).unwrap().gens.len(), model.weyl_my().rank());
    }
}

#[test]
fn descent_peel_agrees_with_the_model() {
    let m = BrauerMonoid::of_type(CartanType::E6).unwrap();
    let y = m.cocliques().iter().find(|c| c.nodes() == [4, 6]).unwrap().clone();
    let gens = m.sy_generators(&y).unwrap().gens;
    let caps = SearchCaps::default();
    for word in [hat_e(&y), gens[0].clone(), gens[0].concat(&gens[1])] {
        assert_eq!(m.peel_by_descent(&word, &y, caps).unwrap(), m.peel(&word, &y).unwrap(), "{word}");
    }
}

#[test]
fn worked_example_canonical_word() {
    let m = BrauerMonoid::of_type(CartanType::E6).unwrap();
    let word = w("e4 r2 r5 e3 e4 e5 e1 e3 e4 e6");
    let set = track(m.sys(), &word).unwrap().set;
    assert_eq!(m.build_ab(&set).unwrap().word.to_string(), "d^-2 e4 r2 r5 e3 e4 e5 e1 e3 e4 e6");
}
