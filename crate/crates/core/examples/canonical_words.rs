//! The words a_B and a_B^b for a few members of one orbit.
use brauerlab::normalform::BrauerMonoid;
use brauerlab::rootsystem::CartanType;

fn main() -> brauerlab::Result<()> {
    let m = BrauerMonoid::of_type(CartanType::E6)?;
    let model = m.model(2)?;
    let orbit = model.orbit();
    println!("Y = {}, {} members", model.coclique(), orbit.len());
    for k in (0..orbit.len() as u32).step_by(37) {
        let b = orbit.member(k);
        println!("height {}  {}", orbit.height(k), b.display(m.sys()));
        println!("  a_B   = {}", m.build_ab(b)?.word);
        println!("  a_B^b = {}", m.build_aback(b)?.word);
    }
    Ok(())
}
