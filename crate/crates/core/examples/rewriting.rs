//! Reduction and homogeneous equivalence of words.
use brauerlab::rewrite::{homog_equiv, reduce, SearchCaps, Word};
use brauerlab::rootsystem::{CartanType, RootSystem};

fn main() -> brauerlab::Result<()> {
    let sys = RootSystem::new(CartanType::E6)?;
    let caps = SearchCaps::default();
    for s in ["e2 e3 e3 e6", "e1 r3 e1", "e4 r3 r4 e3"] {
        let w: Word = s.parse()?;
        let r = reduce(&sys, &w, caps)?;
        println!("{w}  ->  {}  ({} height-lowering steps)", r.word, r.reducing_steps);
    }
    let (a, b): (Word, Word) = ("e1 r3 e1 e4 e6".parse()?, "e6 e1 r3 e1 e4".parse()?);
    println!("{a} ~ {b}: {:?}", homog_equiv(&sys, &a, &b, caps)?);
    Ok(())
}
