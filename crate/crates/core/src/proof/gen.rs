//! Seeded random proofs and terms for randomized testing.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Justification, Logic, Proof};
use crate::hypersub::Hypersubstitution;
use crate::semantics::TheorySet;
use crate::term::{Identity, Signature, Term, Var, VarSubstitution};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GenConfig {
    /// Height of the derivation tree.
    pub max_depth: usize,
    /// Variables are drawn from `x0..x_{nvars-1}`.
    pub nvars: u32,
    /// Depth of freshly drawn terms.
    pub term_depth: usize,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig {
            max_depth: 5,
            nvars: 3,
            term_depth: 2,
        }
    }
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_term(rng: &mut impl Rng, sig: &Signature, nvars: u32, depth: usize) -> Term {
    let leaf = depth == 0 || rng.gen_bool(0.35);
    let ops: Vec<_> = sig
        .ops()
        .iter()
        .filter(|d| if leaf { d.arity == 0 } else { true })
        .collect();
    if leaf && (ops.is_empty() || nvars > 0 && rng.gen_bool(0.8)) {
        return Term::Var(Var(rng.gen_range(0..nvars.max(1))));
    }
    let d = ops.choose(rng).expect("signature has symbols");
    let args = (0..d.arity)
        .map(|_| random_term(rng, sig, nvars, depth.saturating_sub(1)))
        .collect();
    Term::App(d.name.clone(), args)
}

struct Gen<'a, R> {
    rng: &'a mut R,
    proof: Proof,
    elements: &'a [Hypersubstitution],
    cfg: GenConfig,
}

impl<R: Rng> Gen<'_, R> {
    fn term(&mut self) -> Term {
        random_term(
            self.rng,
            &self.proof.theory.sig,
            self.cfg.nvars,
            self.cfg.term_depth,
        )
    }

    fn push(&mut self, just: Justification) -> usize {
        self.proof.push(just).expect("generator builds valid steps")
    }

    fn leaf(&mut self) -> usize {
        let hyps = self.proof.theory.items.len();
        let choice = self.rng.gen_range(0..if hyps > 0 { 6 } else { 4 });
        let just = match choice {
            0 => Justification::E1(self.term()),
            1 => Justification::E2(self.term(), self.term()),
            2 => Justification::E3(self.term(), self.term(), self.term()),
            3 => {
                let sig = self.proof.theory.sig.clone();
                let d = sig.ops().choose(self.rng).expect("nonempty").clone();
                let lhs = (0..d.arity).map(|_| self.term()).collect();
                let rhs = (0..d.arity).map(|_| self.term()).collect();
                Justification::E4 {
                    op: d.name,
                    lhs,
                    rhs,
                }
            }
            _ => Justification::Hyp(self.rng.gen_range(0..hyps)),
        };
        self.push(just)
    }

    /// A line concluding `alpha`: an earlier line if one exists, otherwise
    /// a fresh symmetry, transitivity or reflexivity instance.
    fn prove(&mut self, alpha: &Identity, depth: usize) -> usize {
        let pool: Vec<usize> = (0..self.proof.len())
            .filter(|i| self.proof.lines[*i].stated.conclusion == *alpha)
            .collect();
        if !pool.is_empty() && self.rng.gen_bool(0.5) {
            return *pool.choose(self.rng).expect("nonempty");
        }
        let (p, q) = (alpha.lhs.clone(), alpha.rhs.clone());
        match self.rng.gen_range(0..3) {
            0 if p == q => self.push(Justification::E1(p)),
            0 | 1 => self.push(Justification::E2(q, p)),
            _ => {
                let r = if depth > 0 && self.rng.gen_bool(0.5) {
                    let line = self.node(depth - 1);
                    self.proof.lines[line].stated.conclusion.lhs.clone()
                } else {
                    self.term()
                };
                self.push(Justification::E3(p, r, q))
            }
        }
    }

    fn node(&mut self, depth: usize) -> usize {
        if depth == 0 || self.rng.gen_bool(0.2) {
            return self.leaf();
        }
        let hyper = !matches!(self.proof.logic, Logic::Q) && !self.elements.is_empty();
        match self.rng.gen_range(0..if hyper { 6 } else { 4 }) {
            0 => {
                let m = self.node(depth - 1);
                let vars = self.proof.lines[m].stated.vars();
                let mut bindings = Vec::new();
                for v in vars {
                    if self.rng.gen_bool(0.6) {
                        let t = random_term(self.rng, &self.proof.theory.sig, self.cfg.nvars, 1);
                        bindings.push((v, t));
                    }
                }
                self.push(Justification::Subst {
                    line: m,
                    delta: VarSubstitution::from_pairs(bindings),
                })
            }
            1 => {
                let m = self.node(depth - 1);
                let premise = Identity::new(self.term(), self.term());
                self.push(Justification::Ext { line: m, premise })
            }
            2 | 3 => {
                let major = self.node(depth - 1);
                let premises = self.proof.lines[major].stated.premises().to_vec();
                let Some(alpha) = premises.choose(self.rng).cloned() else {
                    return major;
                };
                let empty: Vec<usize> = (0..self.proof.len())
                    .filter(|i| {
                        let s = &self.proof.lines[*i].stated;
                        s.is_identity() && s.conclusion == alpha
                    })
                    .collect();
                if let Some(&minor) = empty.choose(self.rng) {
                    return self.push(Justification::Mp { minor, major });
                }
                let minor = self.prove(&alpha, depth - 1);
                self.push(Justification::Cut { minor, major })
            }
            _ => {
                let m = self.node(depth - 1);
                let sigma = self.elements.choose(self.rng).expect("nonempty").clone();
                self.push(Justification::HypSub {
                    line: m,
                    sigma,
                    name: None,
                })
            }
        }
    }
}

/// A valid proof from `theory` whose hypersubstitution steps use `elements`.
pub fn random_proof(
    theory: &TheorySet,
    logic: Logic,
    elements: &[Hypersubstitution],
    seed: u64,
    cfg: GenConfig,
) -> Proof {
    let mut r = rng(seed);
    let mut g = Gen {
        rng: &mut r,
        proof: Proof::new(theory.clone(), logic),
        elements,
        cfg,
    };
    g.node(cfg.max_depth);
    g.proof
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypersub::MonoidSpec;
    use crate::proof::check_proof;
    use crate::term::QuasiIdentity;

    #[test]
    fn generated_proofs_check_and_are_reproducible() {
        let sig = Signature::new("G", [("mul", 2)]).unwrap();
        let x = Term::var;
        let t = TheorySet::new(
            "T",
            sig.clone(),
            [QuasiIdentity::identity(
                Term::app("mul", vec![x(0), x(1)]),
                Term::app("mul", vec![x(1), x(0)]),
            )],
        )
        .unwrap();
        let dual =
            Hypersubstitution::new(&sig, [("mul", Term::app("mul", vec![x(1), x(0)]))]).unwrap();
        let elems = vec![Hypersubstitution::identity(&sig), dual];
        let logic = Logic::MHQ {
            monoid: "M".into(),
            spec: MonoidSpec::explicit(&sig, elems.clone()).unwrap(),
        };
        for seed in 0..50 {
            let p = random_proof(&t, logic.clone(), &elems, seed, GenConfig::default());
            assert_eq!(check_proof(&p), Ok(()), "seed {seed}");
            assert_eq!(
                p,
                random_proof(&t, logic.clone(), &elems, seed, GenConfig::default())
            );
        }
    }
}
