//! Coxeter relations of the generator sets S_Y, checked by rewriting.
use brauerlab::normalform::BrauerMonoid;
use brauerlab::rewrite::SearchCaps;
use brauerlab::rootsystem::CartanType;

fn main() -> brauerlab::Result<()> {
    let m = BrauerMonoid::of_type(CartanType::E6)?;
    for y in m.cocliques().to_vec() {
        let report = m.verify_matsumoto_tits(&y, SearchCaps::default())?;
        println!("Y={y} M_Y={} {}", report.my_type, if report.passed() { "ok" } else { "FAILED" });
        for r in &report.relations {
            println!("  {:<24} model={:?} rewrite={:?}", r.relation, r.model, r.rewrite);
        }
    }
    Ok(())
}
