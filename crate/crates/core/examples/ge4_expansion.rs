//! Replacing a generalized compatibility step by axioms and cuts.

use hyperquasi::proof::{check_proof, expand_ge4, ge4_line_bound, ge4_statement};
use hyperquasi::semantics::TheorySet;
use hyperquasi::syntax::{dump_proof, parse_term};
use hyperquasi::term::Signature;

fn main() {
    let sig = Signature::new("FG", [("f", 2), ("g", 1)]).unwrap();
    let p = parse_term("f(g(x0), f(x1, x0))", &sig).unwrap();
    let lhs = [
        parse_term("x2", &sig).unwrap(),
        parse_term("g(x3)", &sig).unwrap(),
    ];
    let rhs = [
        parse_term("x4", &sig).unwrap(),
        parse_term("x5", &sig).unwrap(),
    ];

    let target = ge4_statement(&sig, &p, &lhs, &rhs).unwrap();
    println!("{target}");
    let theory = TheorySet::empty("Empty", sig);
    let proof = expand_ge4(&p, &lhs, &rhs, &theory).unwrap();
    print!("{}", dump_proof(&proof));
    println!(
        "{} lines (bound {}), check: {:?}",
        proof.len(),
        ge4_line_bound(&p, target.premises().len()),
        check_proof(&proof)
    );
}
