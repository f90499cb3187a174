mod common;

use std::collections::BTreeSet;

use common::*;
use hyperquasi::algebra::{all_algebras, derived_algebra, FiniteAlgebra};
use hyperquasi::hypersub::{monoid_elements, Hypersubstitution, MonoidSpec, Preset};
use hyperquasi::semantics::{
    basic_depth, basic_x_terms, check_absorption_star, check_basic_term_preservation, default_pool,
    hyper_satisfies_theory, is_compatible, is_flat, is_m_solid, is_zero_semilattice,
    satisfies_quasi, satisfies_theory, zero_semilattice_base, TheorySet,
};
use hyperquasi::term::{Identity, QuasiIdentity, Signature, Term, Var};

fn flat_ws() -> hyperquasi::workspace::Workspace {
    workspace(&["flat.hql"])
}

fn meet(a: Term, b: Term) -> Term {
    Term::app("meet", vec![a, b])
}

/// Fixes meet and zero and sends `f` to `image`.
fn flat_sigma(sig: &Signature, image: Term) -> Hypersubstitution {
    Hypersubstitution::new(
        sig,
        [
            ("meet", meet(x(0), x(1))),
            ("f", image),
            ("zero", Term::constant("zero")),
        ],
    )
    .unwrap()
}

#[test]
fn z3_cancels_on_the_right_by_a_native_check() {
    let ws = workspace(&["quasigroup.hql"]);
    let z3 = ws.algebra("Z3").unwrap();
    let sub = |a: usize, b: usize| (a + 3 - b) % 3;
    let mut native = true;
    for x in 0..3 {
        for y in 0..3 {
            for z in 0..3 {
                if sub(x, z) == sub(y, z) && x != y {
                    native = false;
                }
            }
        }
    }
    assert!(native);
    let e = &ws.theory("RightCancel").unwrap().items[0];
    assert_eq!(satisfies_quasi(z3, e).unwrap().holds(), native);
}

#[test]
fn z3_table_is_subtraction() {
    let ws = workspace(&["quasigroup.hql"]);
    let z3 = ws.algebra("Z3").unwrap();
    for a in 0..3 {
        for b in 0..3 {
            assert_eq!(z3.apply_op("mul", &[a, b]), Some((a + 3 - b) % 3));
        }
    }
}

#[test]
fn two_element_lattice_refutes_x_equals_y() {
    let ws = workspace(&["lattice.hql"]);
    let l2 = ws.algebra("L2").unwrap();
    let e = QuasiIdentity::identity(x(0), x(1));
    let v = satisfies_quasi(l2, &e).unwrap();
    let c = v.counterexample().expect("refuted");
    assert_eq!(c.assignment.get(Var(0)), Some(0));
    assert_eq!(c.assignment.get(Var(1)), Some(1));
    let ops = algebra_ops(l2);
    let oracle = naive_refute(&e, 2, &ops).unwrap();
    assert_eq!(c.assignment.0, oracle);
}

#[test]
fn dual_of_the_chain_swaps_tables() {
    let ws = workspace(&["lattice.hql"]);
    let c3 = ws.algebra("C3").unwrap();
    let dual = &ws.hypersub("dual").unwrap().sigma;
    let d = derived_algebra(c3, dual).unwrap();
    assert_eq!(d.table_of("meet"), c3.table_of("join"));
    assert_eq!(d.table_of("join"), c3.table_of("meet"));
}

#[test]
fn every_lattice_law_matches_the_naive_oracle() {
    let ws = workspace(&["lattice.hql"]);
    for a in ["L2", "C3"] {
        let a = ws.algebra(a).unwrap();
        let ops = algebra_ops(a);
        for t in ["Distributive", "DistributivePrinted"] {
            for e in &ws.theory(t).unwrap().items {
                let lib = satisfies_quasi(a, e).unwrap();
                let oracle = naive_refute(e, a.size(), &ops);
                assert_eq!(lib.holds(), oracle.is_none(), "{e} in {}", a.name());
                if let (Some(c), Some(o)) = (lib.counterexample(), oracle) {
                    assert_eq!(c.assignment.0, o);
                }
            }
        }
    }
}

#[test]
fn flatness_of_the_fixtures() {
    let ws = flat_ws();
    assert!(is_flat(ws.algebra("F3").unwrap(), "meet", "zero").unwrap());
    assert!(is_flat(ws.algebra("F3Right").unwrap(), "meet", "zero").unwrap());
    // f(a, 0) = a is not absorbing.
    assert!(!is_flat(ws.algebra("F3Bad").unwrap(), "meet", "zero").unwrap());
}

#[test]
fn three_chain_with_bottom_is_not_flat() {
    let sig = Signature::new("C", [("meet", 2), ("zero", 0)]).unwrap();
    let chain = FiniteAlgebra::from_fn("C3", sig, 3, |op, args| match op {
        "meet" => args[0].min(args[1]),
        _ => 0,
    })
    .unwrap();
    assert!(is_zero_semilattice(&chain, "meet", "zero").unwrap().holds());
    assert!(!is_flat(&chain, "meet", "zero").unwrap());
    // m and 1 are distinct with meet m.
    assert_eq!(chain.apply_op("meet", &[1, 2]), Some(1));
}

/// Meet and `f` distribute in each argument, checked on the raw tables.
fn compatible_by_tables(a: &FiniteAlgebra) -> bool {
    let m = |p: usize, q: usize| a.apply_op("meet", &[p, q]).unwrap();
    let f = |p: usize, q: usize| a.apply_op("f", &[p, q]).unwrap();
    let n = a.size();
    for p in 0..n {
        for q in 0..n {
            for r in 0..n {
                if f(m(p, q), r) != m(f(p, r), f(q, r)) || f(r, m(p, q)) != m(f(r, p), f(r, q)) {
                    return false;
                }
            }
        }
    }
    true
}

#[test]
fn compatibility_matches_brute_force() {
    let ws = flat_ws();
    for name in ["F3", "F3Right"] {
        let a = ws.algebra(name).unwrap();
        assert_eq!(
            is_compatible(a, "meet", "zero").unwrap(),
            compatible_by_tables(a),
            "{name}"
        );
    }
    assert!(is_compatible(ws.algebra("F3").unwrap(), "meet", "zero").unwrap());
}

#[test]
fn zero_semilattice_base_agrees_with_the_fixture_theory() {
    let ws = flat_ws();
    let sig = ws.signature("Flat").unwrap();
    let base = zero_semilattice_base(sig, "meet", "zero").unwrap();
    let fixture = ws.theory("ZeroSemilattice").unwrap();
    for a in ["F3", "F3Bad", "F3Right"] {
        let a = ws.algebra(a).unwrap();
        assert_eq!(
            satisfies_theory(a, &base).unwrap().holds(),
            satisfies_theory(a, fixture).unwrap().holds()
        );
    }
}

/// Independent count: `c(0) = 1`, `c(n) = sum over f of arity(f) * c(n - 1)`.
fn basic_count(sig: &Signature, depth: usize) -> usize {
    let per_level: usize = sig.ops().iter().map(|d| d.arity).sum();
    per_level.pow(depth as u32)
}

#[test]
fn basic_terms_small_cases() {
    let flat = Signature::new("F", [("meet", 2), ("f", 2), ("zero", 0)]).unwrap();
    let pool = default_pool(Var(0), 8);
    assert_eq!(basic_x_terms(&flat, Var(0), 0, &pool).unwrap(), vec![x(0)]);

    let d1: BTreeSet<String> = basic_x_terms(&flat, Var(0), 1, &pool)
        .unwrap()
        .iter()
        .map(|t| t.to_string())
        .collect();
    let expected: BTreeSet<String> = ["meet(x0, x1)", "meet(x1, x0)", "f(x0, x1)", "f(x1, x0)"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    assert_eq!(d1, expected);

    let unary = Signature::new("U", [("g", 1)]).unwrap();
    let d2 = basic_x_terms(&unary, Var(0), 2, &[]).unwrap();
    assert_eq!(d2, vec![Term::app("g", vec![Term::app("g", vec![x(0)])])]);
}

#[test]
fn basic_term_counts_and_recognition() {
    let sigs = [
        Signature::new("F", [("meet", 2), ("f", 2), ("zero", 0)]).unwrap(),
        Signature::new("B", [("m", 2), ("n", 1), ("t", 3)]).unwrap(),
    ];
    for sig in &sigs {
        for depth in 0..=3 {
            let pool = default_pool(Var(0), depth * sig.max_arity().saturating_sub(1));
            let terms = basic_x_terms(sig, Var(0), depth, &pool).unwrap();
            assert_eq!(terms.len(), basic_count(sig, depth));
            let distinct: BTreeSet<&Term> = terms.iter().collect();
            assert_eq!(distinct.len(), terms.len());
            for t in &terms {
                assert_eq!(basic_depth(t, Var(0)), Some(depth), "{t}");
                t.check(sig).unwrap();
            }
        }
    }
}

#[test]
fn recognizer_rejects_non_basic_terms() {
    let bad = [
        meet(x(0), x(0)),
        meet(x(1), x(1)),
        meet(meet(x(0), x(1)), x(1)),
        meet(meet(x(0), x(1)), Term::constant("zero")),
        meet(x(1), x(2)),
    ];
    for t in &bad {
        assert_eq!(basic_depth(t, Var(0)), None, "{t}");
    }
    assert_eq!(basic_depth(&meet(meet(x(0), x(1)), x(2)), Var(0)), Some(2));
}

#[test]
fn flipped_fundamental_image_preserves_basic_terms() {
    let sig = flat_ws().signature("Flat").unwrap().clone();
    let sigma = flat_sigma(&sig, meet(x(1), x(0)));
    let r = check_basic_term_preservation(&sigma, &sig, 4).unwrap();
    assert!(r.holds());
    let expected: usize = (0..=4).map(|d| basic_count(&sig, d)).sum();
    assert_eq!(r.checked, expected);
}

#[test]
fn collapsing_image_breaks_basic_terms() {
    let sig = flat_ws().signature("Flat").unwrap().clone();
    let sigma = flat_sigma(&sig, meet(x(0), x(0)));
    let r = check_basic_term_preservation(&sigma, &sig, 2).unwrap();
    let (t, image) = r.violation.expect("violated");
    assert_eq!(basic_depth(&t, Var(0)), Some(1));
    assert_eq!(basic_depth(&image, Var(0)), None);
}

#[test]
fn preservation_requires_fundamental_images() {
    let sig = flat_ws().signature("Flat").unwrap().clone();
    let sigma = flat_sigma(&sig, meet(meet(x(0), x(1)), x(1)));
    assert!(check_basic_term_preservation(&sigma, &sig, 2).is_err());
}

#[test]
fn fundamental_preset_preserves_basic_terms() {
    let sig = flat_ws().signature("Flat").unwrap().clone();
    let m = MonoidSpec::Preset(Preset::ZeroMeetFundamental {
        zero: "zero".into(),
        meet: "meet".into(),
    });
    for sigma in monoid_elements(&m, &sig).unwrap() {
        assert!(
            check_basic_term_preservation(&sigma, &sig, 4)
                .unwrap()
                .holds(),
            "{sigma}"
        );
    }
}

#[test]
fn absorption_star_on_flat_fixtures() {
    let ws = flat_ws();
    for name in ["F3", "F3Right"] {
        let a = ws.algebra(name).unwrap();
        assert!(
            check_absorption_star(a, "meet", "zero", 2, 2)
                .unwrap()
                .is_none(),
            "{name}"
        );
    }
    assert!(check_absorption_star(ws.algebra("F3Bad").unwrap(), "meet", "zero", 2, 2).is_err());
}

#[test]
fn flat_fixtures_are_solid_for_both_presets() {
    let ws = flat_ws();
    let sig = ws.signature("Flat").unwrap();
    let base = zero_semilattice_base(sig, "meet", "zero").unwrap();
    let witnesses = vec![
        ws.algebra("F3").unwrap().clone(),
        ws.algebra("F3Right").unwrap().clone(),
    ];
    for m in ["M0Meet", "MStar"] {
        let spec = &ws.monoid(m).unwrap().spec;
        let r = is_m_solid(&base, &witnesses, spec).unwrap();
        assert!(r.holds(), "{m}: {:?}", r.failures.first());
    }
}

#[test]
fn variable_images_break_solidity() {
    let ws = flat_ws();
    let sig = ws.signature("Flat").unwrap();
    let base = zero_semilattice_base(sig, "meet", "zero").unwrap();
    let proj = flat_sigma(sig, x(0));
    let m = MonoidSpec::explicit(sig, [Hypersubstitution::identity(sig), proj]).unwrap();
    let r = is_m_solid(&base, &[ws.algebra("F3").unwrap().clone()], &m).unwrap();
    assert!(!r.holds());
}

fn small_theories() -> Vec<TheorySet> {
    let g = groupoid();
    let mul = |a: Term, b: Term| Term::app("mul", vec![a, b]);
    vec![
        TheorySet::new(
            "Comm",
            g.clone(),
            [QuasiIdentity::identity(mul(x(0), x(1)), mul(x(1), x(0)))],
        )
        .unwrap(),
        TheorySet::new(
            "Idem",
            g.clone(),
            [QuasiIdentity::identity(mul(x(0), x(0)), x(0))],
        )
        .unwrap(),
        TheorySet::new(
            "RightCancel",
            g,
            [QuasiIdentity::new(
                [Identity::new(mul(x(0), x(2)), mul(x(1), x(2)))],
                Identity::new(x(0), x(1)),
            )],
        )
        .unwrap(),
    ]
}

#[test]
fn trivial_monoid_is_classical_satisfaction() {
    for t in small_theories() {
        for n in 1..=3 {
            for a in all_algebras(&t.sig, n) {
                assert_eq!(
                    hyper_satisfies_theory(&a, &t, &MonoidSpec::trivial())
                        .unwrap()
                        .holds(),
                    satisfies_theory(&a, &t).unwrap().holds()
                );
            }
        }
    }
}

#[test]
fn models_shrink_as_the_depth_grows() {
    for t in small_theories() {
        let mut previous: Option<BTreeSet<Vec<usize>>> = None;
        for d in 0..=2 {
            let m = MonoidSpec::Preset(Preset::AllUpToDepth(d));
            let elements = monoid_elements(&m, &t.sig).unwrap();
            let models: BTreeSet<Vec<usize>> = all_algebras(&t.sig, 2)
                .filter(|a| {
                    hyperquasi::semantics::hyper_satisfies_theory_with(a, &t, &elements)
                        .unwrap()
                        .holds()
                })
                .map(|a| a.table(0).to_vec())
                .collect();
            if let Some(p) = &previous {
                assert!(models.is_subset(p), "{} at depth {d}", t.name);
            }
            previous = Some(models);
        }
    }
}

#[test]
fn solidity_agrees_with_hypersatisfaction_on_models() {
    let g = groupoid();
    let dual = Hypersubstitution::new(&g, [("mul", Term::app("mul", vec![x(1), x(0)]))]).unwrap();
    let proj = Hypersubstitution::new(&g, [("mul", x(0))]).unwrap();
    let monoids = [
        MonoidSpec::explicit(&g, [Hypersubstitution::identity(&g), dual]).unwrap(),
        MonoidSpec::explicit(&g, [Hypersubstitution::identity(&g), proj]).unwrap(),
        MonoidSpec::Preset(Preset::MF),
    ];
    for t in small_theories() {
        for m in &monoids {
            for a in all_algebras(&t.sig, 2).chain(all_algebras(&t.sig, 3)) {
                if !satisfies_theory(&a, &t).unwrap().holds() {
                    continue;
                }
                let solid = is_m_solid(&t, std::slice::from_ref(&a), m).unwrap().holds();
                let hyper = hyper_satisfies_theory(&a, &t, m).unwrap().holds();
                assert_eq!(solid, hyper, "{} {}", t.name, a.name());
            }
        }
    }
}
