//! Basic x-terms and their preservation by fundamental hypersubstitutions.

use hyperquasi::hypersub::{monoid_elements, MonoidSpec, Preset};
use hyperquasi::semantics::{basic_x_terms, check_basic_term_preservation, default_pool};
use hyperquasi::term::{Signature, Var};

fn main() {
    let sig = Signature::new("Flat", [("meet", 2), ("f", 2), ("zero", 0)]).unwrap();
    let x = Var(0);
    for depth in 0..=2 {
        let terms = basic_x_terms(&sig, x, depth, &default_pool(x, depth)).unwrap();
        println!("depth {depth}: {} terms", terms.len());
        for t in terms.iter().take(4) {
            println!("  {t}");
        }
    }

    let m = MonoidSpec::Preset(Preset::ZeroMeetFundamental {
        zero: "zero".into(),
        meet: "meet".into(),
    });
    for sigma in monoid_elements(&m, &sig).unwrap() {
        let r = check_basic_term_preservation(&sigma, &sig, 4).unwrap();
        println!("{sigma}: {} terms, preserved: {}", r.checked, r.holds());
    }
}
