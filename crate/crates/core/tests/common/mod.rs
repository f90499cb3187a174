#![allow(dead_code)]

use std::collections::{BTreeMap, HashMap};
use std::path::PathBuf;

use hyperquasi::algebra::{all_algebras, FiniteAlgebra};
use hyperquasi::hypersub::{monoid_elements, Hypersubstitution, MonoidSpec, Preset};
use hyperquasi::proof::gen::{random_proof, GenConfig};
use hyperquasi::proof::{Logic, Proof};
use hyperquasi::semantics::{hyper_satisfies_theory_with, TheorySet};
use hyperquasi::term::{Identity, QuasiIdentity, Signature, Term, Var};
use hyperquasi::workspace::Workspace;

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
}

pub fn workspace(names: &[&str]) -> Workspace {
    Workspace::from_files(names.iter().map(|n| fixture(n))).expect("fixtures load")
}

pub fn x(i: u32) -> Term {
    Term::var(i)
}

/// Plain recursive evaluation with operations given as a closure.
pub fn naive_eval(
    t: &Term,
    ops: &dyn Fn(&str, &[usize]) -> usize,
    env: &BTreeMap<Var, usize>,
) -> usize {
    match t {
        Term::Var(v) => env[v],
        Term::App(f, args) => {
            let vals: Vec<usize> = args.iter().map(|a| naive_eval(a, ops, env)).collect();
            ops(f, &vals)
        }
    }
}

/// All assignments of `vars` to `0..size`, first variable most significant.
pub fn assignments(vars: &[Var], size: usize) -> Vec<BTreeMap<Var, usize>> {
    let mut out = vec![BTreeMap::new()];
    for v in vars {
        out = out
            .into_iter()
            .flat_map(|env| {
                (0..size).map(move |e| {
                    let mut env = env.clone();
                    env.insert(*v, e);
                    env
                })
            })
            .collect();
    }
    out
}

/// First assignment under which all premises hold and the conclusion fails.
pub fn naive_refute(
    e: &QuasiIdentity,
    size: usize,
    ops: &dyn Fn(&str, &[usize]) -> usize,
) -> Option<BTreeMap<Var, usize>> {
    let vars: Vec<Var> = e.vars().into_iter().collect();
    let holds = |i: &Identity, env: &BTreeMap<Var, usize>| {
        naive_eval(&i.lhs, ops, env) == naive_eval(&i.rhs, ops, env)
    };
    assignments(&vars, size)
        .into_iter()
        .find(|env| e.premises().iter().all(|p| holds(p, env)) && !holds(&e.conclusion, env))
}

pub fn algebra_ops(a: &FiniteAlgebra) -> impl Fn(&str, &[usize]) -> usize + '_ {
    move |op, args| a.apply_op(op, args).expect("operation defined")
}

/// A theory, a monoid and its elements, used to generate proofs.
pub struct Setting {
    pub label: &'static str,
    pub theory: TheorySet,
    pub logic: Logic,
    pub elements: Vec<Hypersubstitution>,
}

fn mul(a: Term, b: Term) -> Term {
    Term::app("mul", vec![a, b])
}

pub fn groupoid() -> Signature {
    Signature::new("G", [("mul", 2)]).unwrap()
}

pub fn unary_sig() -> Signature {
    Signature::new("U", [("f", 1), ("g", 1), ("c", 0)]).unwrap()
}

fn setting(label: &'static str, theory: TheorySet, spec: MonoidSpec, monoid: &str) -> Setting {
    let elements = monoid_elements(&spec, &theory.sig).unwrap();
    Setting {
        label,
        theory,
        logic: Logic::MHQ {
            monoid: monoid.into(),
            spec,
        },
        elements,
    }
}

/// Three small theories with finite monoids.
pub fn settings() -> Vec<Setting> {
    let g = groupoid();
    let dual = Hypersubstitution::new(&g, [("mul", mul(x(1), x(0)))]).unwrap();
    let comm = TheorySet::new(
        "Comm",
        g.clone(),
        [QuasiIdentity::identity(mul(x(0), x(1)), mul(x(1), x(0)))],
    )
    .unwrap();
    let flip = MonoidSpec::explicit(&g, [Hypersubstitution::identity(&g), dual]).unwrap();

    let bands = TheorySet::new(
        "Bands",
        g.clone(),
        [
            QuasiIdentity::identity(mul(x(0), x(0)), x(0)),
            QuasiIdentity::identity(mul(mul(x(0), x(1)), x(2)), mul(x(0), mul(x(1), x(2)))),
            QuasiIdentity::new(
                [Identity::new(mul(x(0), x(1)), x(0))],
                Identity::new(mul(x(0), mul(x(1), x(2))), mul(x(0), x(2))),
            ),
        ],
    )
    .unwrap();

    let u = unary_sig();
    let f = |t: Term| Term::app("f", vec![t]);
    let gg = |t: Term| Term::app("g", vec![t]);
    let c = Term::constant("c");
    let unary = TheorySet::new(
        "Commuting",
        u,
        [
            QuasiIdentity::identity(f(gg(x(0))), gg(f(x(0)))),
            QuasiIdentity::new(
                [Identity::new(f(x(0)), c.clone())],
                Identity::new(f(c.clone()), c),
            ),
        ],
    )
    .unwrap();

    vec![
        setting("commutative groupoids, {id, dual}", comm, flip, "Flip"),
        setting(
            "bands with an absorption law, MF",
            bands,
            MonoidSpec::Preset(Preset::MF),
            "MF",
        ),
        setting(
            "two commuting unary operations, MF",
            unary,
            MonoidSpec::Preset(Preset::MF),
            "MF",
        ),
    ]
}

/// All algebras of size 1 to `max_size` that satisfy every image of the
/// theory under the setting's monoid.
pub fn models(s: &Setting, max_size: usize) -> Vec<FiniteAlgebra> {
    let mut out = Vec::new();
    for n in 1..=max_size {
        for a in all_algebras(&s.theory.sig, n) {
            if hyper_satisfies_theory_with(&a, &s.theory, &s.elements)
                .unwrap()
                .holds()
            {
                out.push(a);
            }
        }
    }
    out
}

pub const PROOF_COUNT: u64 = 200;

/// The seeded proofs: seed `k` uses setting `k mod 3`.
pub fn proofs(settings: &[Setting], count: u64) -> Vec<(u64, usize, Proof)> {
    (0..count)
        .map(|seed| {
            let i = (seed % settings.len() as u64) as usize;
            let s = &settings[i];
            let p = random_proof(
                &s.theory,
                s.logic.clone(),
                &s.elements,
                seed,
                GenConfig::default(),
            );
            (seed, i, p)
        })
        .collect()
}

/// Hash-consed terms over one binary symbol, for fast bulk evaluation.
#[derive(Default)]
pub struct Dag {
    /// `None` for a variable with that index, else the two children.
    pub nodes: Vec<Option<(u32, u32)>>,
    pub vars: Vec<u32>,
    index: HashMap<(u32, u32), u32>,
    var_index: HashMap<u32, u32>,
}

impl Dag {
    pub fn intern(&mut self, t: &Term) -> u32 {
        match t {
            Term::Var(v) => {
                if let Some(&i) = self.var_index.get(&v.0) {
                    return i;
                }
                let i = self.nodes.len() as u32;
                self.nodes.push(None);
                self.vars.push(v.0);
                self.var_index.insert(v.0, i);
                i
            }
            Term::App(_, args) => {
                assert_eq!(args.len(), 2, "binary signature only");
                let l = self.intern(&args[0]);
                let r = self.intern(&args[1]);
                if let Some(&i) = self.index.get(&(l, r)) {
                    return i;
                }
                let i = self.nodes.len() as u32;
                self.nodes.push(Some((l, r)));
                self.vars.push(u32::MAX);
                self.index.insert((l, r), i);
                i
            }
        }
    }

    /// Value of every node under all `size^2` assignments of `x0, x1`,
    /// with `table` the row-major operation table.
    pub fn eval_all(&self, table: &[usize], size: usize, out: &mut Vec<[u8; 9]>) {
        out.clear();
        let lanes = size * size;
        for (i, n) in self.nodes.iter().enumerate() {
            let mut v = [0u8; 9];
            match n {
                None => {
                    let var = self.vars[i];
                    for (k, slot) in v.iter_mut().enumerate().take(lanes) {
                        *slot = if var == 0 {
                            (k / size) as u8
                        } else {
                            (k % size) as u8
                        };
                    }
                }
                Some((l, r)) => {
                    let (a, b) = (out[*l as usize], out[*r as usize]);
                    for k in 0..lanes {
                        v[k] = table[a[k] as usize * size + b[k] as usize] as u8;
                    }
                }
            }
            out.push(v);
        }
    }
}
