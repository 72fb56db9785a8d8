//! Type A words evaluated as Brauer diagrams.
use brauerlab::oracle_a::{diagram_count, eval_word_a};
use brauerlab::rewrite::Word;

fn main() -> brauerlab::Result<()> {
    for s in ["e1", "e1 e1", "e1 r2 e1", "r1 e2 r3 e1"] {
        let w: Word = s.parse()?;
        println!("{w:<14} {}", eval_word_a(4, &w)?);
    }
    for m in 1..=6 {
        println!("{m} strands: {} diagrams", diagram_count(m));
    }
    Ok(())
}
