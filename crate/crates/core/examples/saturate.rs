//! Bounded forward saturation of a theory, with a proof for every item.

use std::path::Path;

use hyperquasi::proof::{check_proof, saturate, Logic, SaturationCaps};
use hyperquasi::workspace::Workspace;

fn main() {
    let ws = Workspace::from_files([
        Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures/quasigroup.hql")
    ])
    .unwrap();
    let theory = ws.theory("RightCancel").unwrap();
    let m34 = ws.monoid("M34").unwrap();
    let logic = Logic::MHQ {
        monoid: m34.name.clone(),
        spec: m34.spec.clone(),
    };
    let caps = SaturationCaps {
        term_depth: 2,
        premise_count: 1,
        iterations: 2,
        max_items: 200,
    };
    let s = saturate(theory, logic, caps).unwrap();
    println!(
        "{} items after {} rounds (saturated: {}, truncated: {})",
        s.items.len(),
        s.rounds,
        s.saturated,
        s.truncated
    );
    for (e, _) in s.items.iter().take(8) {
        println!("  {e}");
    }
    let last = s.items.len() - 1;
    let p = s.proof_of(last);
    println!(
        "proof of the last item, {} lines: {:?}",
        p.len(),
        check_proof(&p)
    );
}
