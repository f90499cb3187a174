//! Hyperquasi-identities of the quasigroup (Z3, -) under three monoids.

use std::path::Path;

use hyperquasi::semantics::{hyper_satisfies_theory, Verdict};
use hyperquasi::workspace::Workspace;

fn main() {
    let ws = Workspace::from_files([
        Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures/quasigroup.hql")
    ])
    .unwrap();
    let z3 = ws.algebra("Z3").unwrap();
    let theory = ws.theory("Quasigroup").unwrap();
    for item in &theory.items {
        println!("  {item}");
    }
    for m in ["M34", "M12", "M2"] {
        let spec = &ws.monoid(m).unwrap().spec;
        match hyper_satisfies_theory(z3, theory, spec).unwrap() {
            Verdict::Holds => println!("{m}: holds"),
            Verdict::Fails(c) => {
                println!("{m}: fails, {}", c.describe(z3));
                println!("  {}", serde_json::to_string(&c.to_json(z3)).unwrap());
            }
        }
    }
}
