use std::collections::BTreeSet;

use super::{Justification, Logic, Proof, ProofErrorKind};
use crate::semantics::TheorySet;
use crate::term::{Identity, QuasiIdentity, Signature, Term};

/// `{t_i = s_i} => p(t..) = p(s..)`, where `p` may only use `x0..x_{n-1}`.
pub fn ge4_statement(
    sig: &Signature,
    p: &Term,
    lhs: &[Term],
    rhs: &[Term],
) -> Result<QuasiIdentity, ProofErrorKind> {
    if lhs.len() != rhs.len() {
        return Err(ProofErrorKind::IllFormed(format!(
            "ge4 needs equally many terms on each side, got {} and {}",
            lhs.len(),
            rhs.len()
        )));
    }
    if let Some(v) = p.vars().into_iter().find(|v| v.index() >= lhs.len()) {
        return Err(ProofErrorKind::IllFormed(format!(
            "ge4 pattern uses {v} but only {} terms were given",
            lhs.len()
        )));
    }
    for t in std::iter::once(p).chain(lhs).chain(rhs) {
        t.check(sig)
            .map_err(|e| ProofErrorKind::IllFormed(e.to_string()))?;
    }
    Ok(QuasiIdentity::new(
        lhs.iter()
            .zip(rhs)
            .map(|(t, s)| Identity::new(t.clone(), s.clone())),
        Identity::new(p.instantiate(lhs), p.instantiate(rhs)),
    ))
}

/// Upper bound on the length of [`expand_ge4`]'s output: one E4 line per
/// application node, one cut per non-root application node, three lines
/// for a variable pattern and one extension per premise.
pub fn ge4_line_bound(p: &Term, premises: usize) -> usize {
    let apps = p.subterms().iter().filter(|t| !t.is_var()).count();
    2 * apps + 3 + premises
}

/// A Q-derivation of the GE4 statement built by induction on `p`.
///
/// Each application node is an E4 instance; every argument that is itself
/// an application is cut in from its own derivation unless its equation
/// is already one of the target premises. The missing target premises are
/// added by extension at the end.
pub fn expand_ge4(
    p: &Term,
    lhs: &[Term],
    rhs: &[Term],
    theory: &TheorySet,
) -> Result<Proof, ProofErrorKind> {
    let target = ge4_statement(&theory.sig, p, lhs, rhs)?;
    let mut proof = Proof::new(theory.clone(), Logic::Q);
    let wanted: BTreeSet<Identity> = target.premises().iter().cloned().collect();
    let mut last = build(&mut proof, p, lhs, rhs, &wanted)?;
    for premise in target.premises() {
        if !proof.lines[last].stated.has_premise(premise) {
            last = proof.push(Justification::Ext {
                line: last,
                premise: premise.clone(),
            })?;
        }
    }
    debug_assert_eq!(proof.lines[last].stated, target);
    Ok(proof)
}

/// Returns a line proving `Q => p(t..) = p(s..)` with `Q ⊆ wanted`.
fn build(
    proof: &mut Proof,
    p: &Term,
    lhs: &[Term],
    rhs: &[Term],
    wanted: &BTreeSet<Identity>,
) -> Result<usize, ProofErrorKind> {
    match p {
        Term::Var(v) => {
            let (t, s) = (&lhs[v.index()], &rhs[v.index()]);
            if t == s {
                return proof.push(Justification::E1(t.clone()));
            }
            // {t = s} => s = t cut into {s = t} => t = s
            let flip = proof.push(Justification::E2(t.clone(), s.clone()))?;
            let back = proof.push(Justification::E2(s.clone(), t.clone()))?;
            proof.push(Justification::Cut {
                minor: flip,
                major: back,
            })
        }
        Term::App(op, args) => {
            let l: Vec<Term> = args.iter().map(|a| a.instantiate(lhs)).collect();
            let r: Vec<Term> = args.iter().map(|a| a.instantiate(rhs)).collect();
            let mut line = proof.push(Justification::E4 {
                op: op.clone(),
                lhs: l.clone(),
                rhs: r.clone(),
            })?;
            for (k, arg) in args.iter().enumerate() {
                if arg.is_var() {
                    continue;
                }
                let alpha = Identity::new(l[k].clone(), r[k].clone());
                if wanted.contains(&alpha) || !proof.lines[line].stated.has_premise(&alpha) {
                    continue;
                }
                let minor = build(proof, arg, lhs, rhs, wanted)?;
                line = proof.push(Justification::Cut { minor, major: line })?;
            }
            Ok(line)
        }
    }
}
