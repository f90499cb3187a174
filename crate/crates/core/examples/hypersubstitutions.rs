//! Applying and composing hypersubstitutions, and enumerating monoids.

use hyperquasi::hypersub::{is_mf_member, monoid_elements, MonoidSpec, Preset};
use hyperquasi::syntax::{parse_hypersub, parse_term};
use hyperquasi::term::Signature;

fn main() {
    let sig = Signature::new("L", [("meet", 2), ("join", 2)]).unwrap();
    let dual = parse_hypersub(
        "{ meet(x, y) -> join(x, y); join(x, y) -> meet(x, y); }",
        &sig,
    )
    .unwrap();
    let flip = parse_hypersub(
        "{ meet(x, y) -> meet(y, x); join(x, y) -> join(x, y); }",
        &sig,
    )
    .unwrap();

    let t = parse_term("meet(x, join(y, z))", &sig).unwrap();
    println!("dual(t)        = {}", dual.apply(&t).unwrap());
    println!("flip(t)        = {}", flip.apply(&t).unwrap());

    let both = dual.compose(&flip).unwrap();
    println!("dual . flip    = {both}");
    println!("(dual . flip)(t) = {}", both.apply(&t).unwrap());
    println!(
        "dual . dual is the identity: {}",
        dual.compose(&dual).unwrap().is_identity()
    );
    println!("in MF: {}", is_mf_member(&both, &sig));

    let mf = monoid_elements(&MonoidSpec::Preset(Preset::MF), &sig).unwrap();
    println!("|MF| = {}", mf.len());
    let gen = MonoidSpec::Generated {
        generators: vec![dual, flip],
        cap: 64,
    };
    println!(
        "generated by dual and flip: {} elements",
        monoid_elements(&gen, &sig).unwrap().len()
    );
}
