//! Solidity of flat algebras: every derived algebra stays a 0-semilattice algebra.

use std::path::Path;

use hyperquasi::semantics::{check_absorption_star, is_flat, is_m_solid, zero_semilattice_base};
use hyperquasi::workspace::Workspace;

fn main() {
    let ws =
        Workspace::from_files([Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures/flat.hql")])
            .unwrap();
    let sig = ws.signature("Flat").unwrap();
    let base = zero_semilattice_base(sig, "meet", "zero").unwrap();
    for e in &base.items {
        println!("  {e}");
    }
    for name in ["F3", "F3Right", "F3Bad"] {
        println!(
            "{name} flat: {}",
            is_flat(ws.algebra(name).unwrap(), "meet", "zero").unwrap()
        );
    }

    let witnesses = vec![
        ws.algebra("F3").unwrap().clone(),
        ws.algebra("F3Right").unwrap().clone(),
    ];
    for m in ["M0Meet", "MStar"] {
        let r = is_m_solid(&base, &witnesses, &ws.monoid(m).unwrap().spec).unwrap();
        let bound = r
            .depth_bound
            .map(|d| format!(" (images up to depth {d})"))
            .unwrap_or_default();
        println!(
            "{m}: {} elements{bound}, {} failures",
            r.monoid_size,
            r.failures.len()
        );
    }

    let f3 = ws.algebra("F3").unwrap();
    match check_absorption_star(f3, "meet", "zero", 2, 2).unwrap() {
        None => println!("F3: every term of depth <= 2 is zero when one of its variables is"),
        Some(v) => println!("F3: {} at {} is {}", v.term, v.position, f3.label(v.value)),
    }
}
