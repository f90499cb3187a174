//! Pushing hypersubstitution steps to the hypotheses, then reducing to plain
//! quasi-equational logic over the hyperclosure.

use std::path::Path;

use hyperquasi::proof::{
    check_proof, hyperclose_with_origins, lift_from_closure, normalize, strip_to_closure,
    NormalizeOptions,
};
use hyperquasi::syntax::dump_proof;
use hyperquasi::workspace::Workspace;

fn main() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    let ws = Workspace::from_files([dir.join("quasigroup.hql"), dir.join("proofs.hql")]).unwrap();
    let p = ws.proof("CutThenFlip").unwrap();
    print!("{}", dump_proof(p));

    let n = normalize(p, NormalizeOptions::default()).unwrap();
    println!("normal form, {} lines:", n.len());
    print!("{}", dump_proof(&n));

    let spec = &ws.monoid("M34").unwrap().spec;
    let closure = hyperclose_with_origins(&p.theory, spec).unwrap();
    let q = strip_to_closure(&n, &closure).unwrap();
    println!("over the closure in {}: {:?}", q.logic, check_proof(&q));
    let back = lift_from_closure(&q, &closure, &p.theory, p.logic.clone()).unwrap();
    println!(
        "lifted back: {:?}, same conclusion: {}",
        check_proof(&back),
        back.conclusion() == p.conclusion()
    );
}
