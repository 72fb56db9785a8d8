//! Positive roots of E6 and a reflection.
use brauerlab::rootsystem::{CartanType, RootSystem};

fn main() -> brauerlab::Result<()> {
    let sys = RootSystem::new(CartanType::E6)?;
    println!("{} positive roots, highest {:?}", sys.num_positive(), sys.highest_root().coeffs());
    let a4 = &sys.positive_roots()[sys.simple_index(4) as usize];
    for r in sys.positive_roots().iter().take(8) {
        println!("{:?} -> {:?}", r.coeffs(), sys.reflect(a4, r)?.coeffs());
    }
    Ok(())
}
