//! A De Morgan style law holds in the two-element Boolean algebra under all of MF.

use std::path::Path;

use hyperquasi::hypersub::monoid_elements;
use hyperquasi::semantics::hyper_satisfies_theory_with;
use hyperquasi::workspace::Workspace;

fn main() {
    let ws =
        Workspace::from_files([Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures/boolean.hql")])
            .unwrap();
    let b2 = ws.algebra("B2").unwrap();
    let theory = ws.theory("DeMorgan").unwrap();
    let elements = monoid_elements(&ws.monoid("MF").unwrap().spec, b2.signature()).unwrap();
    println!("{}", theory.items[0]);
    println!("checked against {} hypersubstitutions", elements.len());
    let v = hyper_satisfies_theory_with(b2, theory, &elements).unwrap();
    println!("holds: {}", v.holds());
}
