//! Decompose words, multiply normal forms and rebuild words from them.
use brauerlab::normalform::BrauerMonoid;
use brauerlab::rewrite::Word;
use brauerlab::rootsystem::CartanType;

fn main() -> brauerlab::Result<()> {
    let m = BrauerMonoid::of_type(CartanType::E6)?;
    let x: Word = "e6 r5 e6 r4".parse()?;
    let y: Word = "e4 e6 r3 e2".parse()?;
    let (nx, ny) = (m.decompose(&x)?, m.decompose(&y)?);
    println!("{x}  =  {nx}");
    println!("{y}  =  {ny}");
    let p = m.multiply(&nx, &ny)?;
    println!("product  {p}");
    println!("as word  {}", m.synthesize(&p)?);
    println!("{}", p.to_json(m.sys()));
    Ok(())
}
