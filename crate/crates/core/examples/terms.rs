//! Terms, substitutions and quasi-identities over a small signature.

use hyperquasi::syntax::{parse_quasi, parse_term};
use hyperquasi::term::{terms_up_to_depth, Signature, Term, Var, VarSubstitution};

fn main() {
    let sig = Signature::new("L", [("meet", 2), ("join", 2)]).unwrap();

    let t = parse_term("meet(x, join(y, z))", &sig).unwrap();
    println!("term      {t}");
    println!("depth     {}", t.depth());
    println!(
        "variables {:?}",
        t.vars().iter().map(|v| v.to_string()).collect::<Vec<_>>()
    );

    // Both bindings act at once.
    let swap = VarSubstitution::from_pairs([(Var(0), Term::var(1)), (Var(1), Term::var(0))]);
    println!("swapped   {}", swap.apply(&t));

    let e = parse_quasi("meet(x, y) = x, join(x, y) = y => x = meet(x, y)", &sig).unwrap();
    println!("quasi     {e}");
    println!("premises  {}", e.premises().len());

    for depth in 0..3 {
        println!(
            "terms of depth <= {depth} over x0, x1: {}",
            terms_up_to_depth(&sig, 2, depth).len()
        );
    }
}
