//! Recomputed orbit summaries for E6, E7 and E8.
use brauerlab::cache::Cache;
use brauerlab::rootsystem::{CartanType, RootSystem};

fn main() -> brauerlab::Result<()> {
    let cache = Cache::disabled();
    for t in [CartanType::E6, CartanType::E7, CartanType::E8] {
        let sys = RootSystem::new(t)?;
        for s in cache.orbit_summaries(&sys)? {
            println!(
                "{t} Y={:<10} |B|={} orbit={:<6} height0={:<4} perp={:<6} M_Y={}",
                s.coclique.to_string(),
                s.set_size,
                s.orbit_size,
                s.height0,
                s.perp_type,
                s.my_type
            );
        }
    }
    Ok(())
}
