//! Lattice laws as hyperidentities of the two-element lattice.

use std::path::Path;

use hyperquasi::semantics::hyper_satisfies_theory;
use hyperquasi::workspace::Workspace;

fn main() {
    let ws =
        Workspace::from_files([Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures/lattice.hql")])
            .unwrap();
    let l2 = ws.algebra("L2").unwrap();
    for t in ["Distributive", "DistributivePrinted"] {
        let theory = ws.theory(t).unwrap();
        for m in ["M4", "MF"] {
            let v = hyper_satisfies_theory(l2, theory, &ws.monoid(m).unwrap().spec).unwrap();
            match v.counterexample() {
                None => println!("{t} under {m}: holds"),
                Some(c) => println!("{t} under {m}: {}", c.describe(l2)),
            }
        }
    }
}
