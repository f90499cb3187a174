mod common;

use std::collections::BTreeSet;
use std::sync::OnceLock;

use common::*;
use hyperquasi::algebra::FiniteAlgebra;
use hyperquasi::hypersub::{monoid_elements, MonoidSpec};
use hyperquasi::proof::gen::{random_proof, GenConfig};
use hyperquasi::proof::{
    check_proof, hyperclose, hyperclose_with_origins, lift_from_closure, map_proof, normalize,
    saturate, strip_to_closure, Justification, Logic, NormalizeOptions, Proof, ProofErrorKind,
    SaturationCaps,
};
use hyperquasi::semantics::{satisfies_quasi, TheorySet};
use hyperquasi::term::{Identity, QuasiIdentity, Term, Var, VarSubstitution};
use proptest::prelude::*;

fn mul(a: Term, b: Term) -> Term {
    Term::app("mul", vec![a, b])
}

fn quasigroup() -> hyperquasi::workspace::Workspace {
    workspace(&["quasigroup.hql", "proofs.hql"])
}

fn mhq(ws: &hyperquasi::workspace::Workspace, m: &str) -> Logic {
    Logic::MHQ {
        monoid: m.into(),
        spec: ws.monoid(m).unwrap().spec.clone(),
    }
}

fn item_set(t: &TheorySet) -> BTreeSet<String> {
    t.items.iter().map(|e| e.to_string()).collect()
}

/// Every hypersubstitution step sits directly on a hypothesis.
fn is_normal(p: &Proof) -> bool {
    p.lines.iter().all(|l| match &l.just {
        Justification::HypSub { line, .. } => matches!(p.lines[*line].just, Justification::Hyp(_)),
        _ => true,
    })
}

#[test]
fn hypothesis_and_symmetry() {
    let ws = quasigroup();
    let theory = ws.theory("RightCancel").unwrap().clone();
    let mut p = Proof::new(theory.clone(), Logic::Q);
    p.push(Justification::Hyp(0)).unwrap();
    assert_eq!(p.conclusion(), Some(&theory.items[0]));
    p.push(Justification::E2(x(0), x(1))).unwrap();
    let e2 = QuasiIdentity::new([Identity::new(x(0), x(1))], Identity::new(x(1), x(0)));
    assert_eq!(p.conclusion(), Some(&e2));
    p.push(Justification::Cut { minor: 0, major: 1 }).unwrap();
    assert_eq!(check_proof(&p), Ok(()));
}

#[test]
fn cut_needs_the_conclusion_among_the_premises() {
    let ws = quasigroup();
    let mut p = Proof::new(ws.theory("RightCancel").unwrap().clone(), Logic::Q);
    p.push(Justification::Hyp(0)).unwrap();
    p.push(Justification::E2(x(1), x(0))).unwrap();
    let err = p
        .push(Justification::Cut { minor: 0, major: 1 })
        .unwrap_err();
    assert!(matches!(err, ProofErrorKind::CutMismatch { .. }), "{err}");
}

#[test]
fn every_fixture_proof_checks() {
    let ws = workspace(&["quasigroup.hql", "proofs.hql", "congruence.hql"]);
    for name in [
        "Mirror",
        "SubstThenFlip",
        "CutThenFlip",
        "CongruenceFlip",
        "FlipTwice",
        "Symmetric",
        "Nested",
    ] {
        assert_eq!(check_proof(ws.proof(name).unwrap()), Ok(()), "{name}");
    }
}

#[test]
fn subst_below_hypsub_is_swapped() {
    let ws = quasigroup();
    let p = ws.proof("SubstThenFlip").unwrap();
    let n = normalize(p, NormalizeOptions::default()).unwrap();
    assert_eq!(check_proof(&n), Ok(()));
    assert_eq!(n.conclusion(), p.conclusion());
    let rules: Vec<&str> = n.lines.iter().map(|l| l.just.rule_name()).collect();
    assert_eq!(rules, ["hyp", "hypsub", "subst"]);
    // z is sent to the flipped image of mul(x, y).
    if let Justification::Subst { delta, .. } = &n.lines[2].just {
        assert_eq!(delta.get(Var(2)), mul(x(1), x(0)));
    } else {
        panic!("last line is not a substitution");
    }
}

#[test]
fn hypsub_over_cut_moves_to_the_leaves() {
    let ws = quasigroup();
    let p = ws.proof("CutThenFlip").unwrap();
    let n = normalize(p, NormalizeOptions::default()).unwrap();
    assert_eq!(check_proof(&n), Ok(()));
    assert_eq!(n.conclusion(), p.conclusion());
    assert!(is_normal(&n));
    assert_eq!(n.lines.last().unwrap().just.rule_name(), "cut");
}

#[test]
fn expanded_congruence_is_plain_logic() {
    let ws = workspace(&["congruence.hql"]);
    let p = ws.proof("Nested").unwrap();
    let n = normalize(p, NormalizeOptions { expand_ge4: true }).unwrap();
    assert_eq!(check_proof(&n), Ok(()));
    assert_eq!(n.conclusion(), p.conclusion());
    assert!(n.lines.iter().all(|l| l.just.rule_name() != "ge4"));
}

#[test]
fn closure_under_the_flip() {
    let ws = quasigroup();
    let right = ws.theory("RightCancel").unwrap();
    let left = ws.theory("LeftCancel").unwrap();
    let c = hyperclose(right, &ws.monoid("M34").unwrap().spec).unwrap();
    let expected: BTreeSet<String> = item_set(right).union(&item_set(left)).cloned().collect();
    assert_eq!(item_set(&c), expected);
    assert_eq!(
        item_set(&hyperclose(right, &MonoidSpec::trivial()).unwrap()),
        item_set(right)
    );
}

#[test]
fn closure_size_and_idempotence() {
    let ws = quasigroup();
    for t in ["RightCancel", "LeftCancel", "Quasigroup"] {
        let t = ws.theory(t).unwrap();
        for m in ["M34", "M12", "M2"] {
            let spec = &ws.monoid(m).unwrap().spec;
            let size = monoid_elements(spec, &t.sig).unwrap().len();
            let c = hyperclose(t, spec).unwrap();
            assert!(c.len() <= t.len() * size);
            if m != "M2" {
                assert_eq!(
                    item_set(&hyperclose(&c, spec).unwrap()),
                    item_set(&c),
                    "{} {m}",
                    t.name
                );
            }
        }
    }
}

#[test]
fn saturating_nothing_gives_nothing() {
    let ws = quasigroup();
    let empty = TheorySet::empty("Empty", ws.signature("G").unwrap().clone());
    let s = saturate(&empty, mhq(&ws, "M34"), SaturationCaps::default()).unwrap();
    assert!(s.items.is_empty());
    assert!(s.saturated);
}

#[test]
fn saturation_finds_left_cancellation() {
    let ws = quasigroup();
    let right = ws.theory("RightCancel").unwrap();
    let left = &ws.theory("LeftCancel").unwrap().items[0];
    let s = saturate(right, mhq(&ws, "M34"), SaturationCaps::default()).unwrap();
    let (i, _) = s
        .items
        .iter()
        .enumerate()
        .find(|(_, (e, _))| e == left)
        .expect("derived");
    let p = s.proof_of(i);
    assert_eq!(check_proof(&p), Ok(()));
    assert_eq!(p.conclusion(), Some(left));
}

fn small_caps(iterations: usize) -> SaturationCaps {
    SaturationCaps {
        term_depth: 1,
        premise_count: 1,
        iterations,
        max_items: 10_000,
    }
}

#[test]
fn saturation_is_idempotent_at_a_fixpoint() {
    let ws = quasigroup();
    let right = ws.theory("RightCancel").unwrap();
    let caps = small_caps(20);
    let s = saturate(right, mhq(&ws, "M34"), caps).unwrap();
    assert!(s.saturated && !s.truncated);
    let first: BTreeSet<String> = s.items.iter().map(|(e, _)| e.to_string()).collect();
    let again = TheorySet::new(
        "Again",
        right.sig.clone(),
        s.items.iter().map(|(e, _)| e.clone()),
    )
    .unwrap();
    let t = saturate(&again, mhq(&ws, "M34"), caps).unwrap();
    let second: BTreeSet<String> = t.items.iter().map(|(e, _)| e.to_string()).collect();
    assert_eq!(first, second);
}

#[test]
fn saturation_is_monotone_in_the_round_cap() {
    let ws = quasigroup();
    let right = ws.theory("RightCancel").unwrap();
    let mut previous = BTreeSet::new();
    for rounds in 0..4 {
        let s = saturate(right, mhq(&ws, "M34"), small_caps(rounds)).unwrap();
        let items: BTreeSet<String> = s.items.iter().map(|(e, _)| e.to_string()).collect();
        assert!(previous.is_subset(&items), "round cap {rounds}");
        previous = items;
    }
}

#[test]
fn mapped_proofs_conclude_the_image() {
    let ws = quasigroup();
    let elements =
        monoid_elements(&ws.monoid("M34").unwrap().spec, ws.signature("G").unwrap()).unwrap();
    for name in [
        "Mirror",
        "SubstThenFlip",
        "CutThenFlip",
        "CongruenceFlip",
        "FlipTwice",
        "Symmetric",
    ] {
        let p = ws.proof(name).unwrap();
        for sigma in &elements {
            let m = map_proof(p, sigma).unwrap();
            assert_eq!(check_proof(&m), Ok(()), "{name} under {sigma}");
            let image = sigma.apply_quasi(p.conclusion().unwrap()).unwrap();
            assert_eq!(m.conclusion(), Some(&image), "{name} under {sigma}");
        }
    }
}

/// Models of each setting's theory up to size 2.
fn pool() -> &'static (Vec<Setting>, Vec<Vec<FiniteAlgebra>>) {
    static POOL: OnceLock<(Vec<Setting>, Vec<Vec<FiniteAlgebra>>)> = OnceLock::new();
    POOL.get_or_init(|| {
        let s = settings();
        let m = s.iter().map(|s| models(s, 2)).collect();
        (s, m)
    })
}

fn seeded(seed: u64) -> (usize, Proof) {
    let (settings, _) = pool();
    let i = (seed % settings.len() as u64) as usize;
    let s = &settings[i];
    (
        i,
        random_proof(
            &s.theory,
            s.logic.clone(),
            &s.elements,
            seed,
            GenConfig::default(),
        ),
    )
}

fn mutate(e: &QuasiIdentity) -> QuasiIdentity {
    let fresh = Term::var(99);
    QuasiIdentity::new(
        e.premises().to_vec(),
        Identity::new(e.conclusion.lhs.clone(), fresh),
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn generated_proofs_are_sound(seed in 1_000u64..1_000_000) {
        let (i, p) = seeded(seed);
        prop_assert_eq!(check_proof(&p), Ok(()));
        let conclusion = p.conclusion().unwrap();
        for a in &pool().1[i] {
            prop_assert!(satisfies_quasi(a, conclusion).unwrap().holds(), "{} in {:?}", conclusion, a);
        }
    }

    #[test]
    fn a_single_changed_line_is_caught(seed in 1_000u64..1_000_000, pick in 0usize..64) {
        let (_, mut p) = seeded(seed);
        let k = pick % p.len();
        p.lines[k].stated = mutate(&p.lines[k].stated);
        let err = check_proof(&p).unwrap_err();
        prop_assert_eq!(err.line, k + 1);
    }

    #[test]
    fn normal_forms_strip_and_lift(seed in 1_000u64..1_000_000) {
        let (i, p) = seeded(seed);
        let s = &pool().0[i];
        let n = normalize(&p, NormalizeOptions::default()).unwrap();
        prop_assert_eq!(check_proof(&n), Ok(()));
        prop_assert_eq!(n.conclusion(), p.conclusion());
        prop_assert!(is_normal(&n));
        let spec = match &s.logic {
            Logic::MHQ { spec, .. } => spec.clone(),
            _ => unreachable!(),
        };
        let closure = hyperclose_with_origins(&s.theory, &spec).unwrap();
        let q = strip_to_closure(&n, &closure).unwrap();
        prop_assert_eq!(&q.logic, &Logic::Q);
        prop_assert_eq!(check_proof(&q), Ok(()));
        let back = lift_from_closure(&q, &closure, &s.theory, s.logic.clone()).unwrap();
        prop_assert_eq!(check_proof(&back), Ok(()));
        prop_assert_eq!(back.conclusion(), p.conclusion());
    }

    #[test]
    fn substitution_lines_check(seed in 1_000u64..1_000_000, v in 0u32..3) {
        let (_, mut p) = seeded(seed);
        let last = p.len() - 1;
        let delta = VarSubstitution::from_pairs([(Var(v), mul_or_var(&p, v))]);
        p.push(Justification::Subst { line: last, delta: delta.clone() }).unwrap();
        prop_assert_eq!(check_proof(&p), Ok(()));
        let prev = &p.lines[last].stated;
        prop_assert_eq!(p.conclusion(), Some(&delta.apply_quasi(prev)));
    }
}

/// A well-formed replacement term for `x_v` in the proof's signature.
fn mul_or_var(p: &Proof, v: u32) -> Term {
    match p.signature().ops().iter().find(|d| d.arity > 0) {
        Some(d) => Term::app(
            d.name.clone(),
            (0..d.arity)
                .map(|i| Term::var((v + i as u32) % 3))
                .collect(),
        ),
        None => Term::var((v + 1) % 3),
    }
}
