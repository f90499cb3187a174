//! Building a proof in code, checking it, and catching a bad line.

use std::path::Path;

use hyperquasi::proof::{check_proof, Justification, Logic, Proof};
use hyperquasi::syntax::dump_proof;
use hyperquasi::term::{Identity, QuasiIdentity, Term};
use hyperquasi::workspace::Workspace;

fn main() {
    let ws = Workspace::from_files([
        Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures/quasigroup.hql")
    ])
    .unwrap();
    let theory = ws.theory("RightCancel").unwrap().clone();
    let m34 = ws.monoid("M34").unwrap();
    let flip = ws.hypersub("s4").unwrap();

    let mut p = Proof::new(
        theory,
        Logic::MHQ {
            monoid: m34.name.clone(),
            spec: m34.spec.clone(),
        },
    );
    p.push(Justification::Hyp(0)).unwrap();
    p.push(Justification::E2(Term::var(0), Term::var(1)))
        .unwrap();
    // Line 1 has a premise, so it cannot be the minor line of mp.
    p.push(Justification::Mp { minor: 0, major: 1 })
        .unwrap_err();
    p.push(Justification::Cut { minor: 0, major: 1 }).unwrap();
    p.push(Justification::HypSub {
        line: 2,
        sigma: flip.sigma.clone(),
        name: Some(flip.name.clone()),
    })
    .unwrap();
    print!("{}", dump_proof(&p));
    println!("check: {:?}", check_proof(&p));

    let mut bad = p.clone();
    bad.lines[1].stated = QuasiIdentity::identity(Term::var(0), Term::var(1));
    bad.lines[3].stated = QuasiIdentity::new([], Identity::new(Term::var(1), Term::var(0)));
    match check_proof(&bad) {
        Ok(()) => println!("tampered proof accepted"),
        Err(e) => println!("tampered proof rejected: {e}"),
    }
}
