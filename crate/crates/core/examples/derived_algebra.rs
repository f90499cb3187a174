//! The derived algebra A^σ, and the identity A^σ ⊨ t = s iff A ⊨ σ(t) = σ(s).

use std::path::Path;

use hyperquasi::algebra::{derived_algebra, dump_algebra, eval, Assignment};
use hyperquasi::syntax::parse_term;
use hyperquasi::term::Var;
use hyperquasi::workspace::Workspace;

fn main() {
    let ws =
        Workspace::from_files([Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures/lattice.hql")])
            .unwrap();
    let c3 = ws.algebra("C3").unwrap();
    let dual = &ws.hypersub("dual").unwrap().sigma;

    let d = derived_algebra(c3, dual).unwrap().with_name("C3_dual");
    print!("{}", dump_algebra(c3));
    print!("{}", dump_algebra(&d));

    let t = parse_term("meet(x, join(y, x))", c3.signature()).unwrap();
    let image = dual.apply(&t).unwrap();
    let v = Assignment::from_pairs([(Var(0), 1), (Var(1), 2)]);
    println!(
        "{t} in C3_dual = {}, {image} in C3 = {}",
        d.label(eval(&t, &d, &v).unwrap()),
        c3.label(eval(&image, c3, &v).unwrap())
    );
}
