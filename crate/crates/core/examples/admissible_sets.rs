//! Closures of root sets and the action of generators on them.
use brauerlab::admissible::{act_e, act_r, coclique_closure};
use brauerlab::rootsystem::{CartanType, RootSystem};

fn main() -> brauerlab::Result<()> {
    let sys = RootSystem::new(CartanType::E7)?;
    let b = coclique_closure(&sys, &[2, 3, 5, 7])?;
    println!("closure of {{2,3,5,7}}: {}", b.display(&sys));
    for i in sys.nodes() {
        println!("r{i}: {}   e{i}: {}", act_r(&sys, i, &b).display(&sys), act_e(&sys, i, &b)?.display(&sys));
    }
    Ok(())
}
