//! Ranks of the monoid algebras, computed two ways, and the Temperley-Lieb ranks.
use brauerlab::normalform::{rank, rank_by_stabilizers, tl_rank};
use brauerlab::rootsystem::{CartanType, RootSystem};

fn main() -> brauerlab::Result<()> {
    for t in [CartanType::A(3), CartanType::A(4), CartanType::D(4), CartanType::D(5)] {
        let sys = RootSystem::new(t)?;
        println!("{t:<3} rank {:>12}  by stabilizers {:>12}", rank(&sys)?, rank_by_stabilizers(&sys)?);
    }
    for t in [CartanType::E6, CartanType::E7, CartanType::E8] {
        let sys = RootSystem::new(t)?;
        println!("{t:<3} rank {:>12}  by stabilizers {:>12}  TL {:>6}", rank(&sys)?, rank_by_stabilizers(&sys)?, tl_rank(&sys)?);
    }
    Ok(())
}
