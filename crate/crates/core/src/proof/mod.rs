//! Derivations in the calculi Q, HQ and MHQ(M), and the operations on them:
//! checking, hyperclosure, GE4 expansion, hypersubstitution-first
//! normalization, line-wise σ-images and bounded saturation.
//!
//! Lines are stored 0-based; the text format numbers them from 1.

mod ge4;
pub mod gen;
mod normalize;
mod saturate;

use std::fmt;

use thiserror::Error;

use crate::hypersub::{HypersubError, Hypersubstitution, Membership, MonoidSpec};
use crate::semantics::TheorySet;
use crate::term::{Identity, QuasiIdentity, Signature, Symbol, Term, VarSubstitution};

pub use ge4::{expand_ge4, ge4_line_bound, ge4_statement};
pub use normalize::{
    hyperclose, hyperclose_with_origins, lift_from_closure, map_proof, normalize, strip_to_closure,
    Closure, NormalizeOptions,
};
pub use saturate::{saturate, Saturation, SaturationCaps};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Logic {
    /// Plain quasi-equational logic: no hypersubstitution steps.
    Q,
    /// Any hypersubstitution of the signature.
    HQ,
    /// Hypersubstitutions restricted to the named monoid.
    MHQ { monoid: String, spec: MonoidSpec },
}

impl fmt::Display for Logic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Logic::Q => f.write_str("Q"),
            Logic::HQ => f.write_str("HQ"),
            Logic::MHQ { monoid, .. } => write!(f, "MHQ({monoid})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Justification {
    /// `Σ[k]`.
    Hyp(usize),
    /// `{p = p} => p = p`.
    E1(Term),
    /// `{p = q} => q = p`.
    E2(Term, Term),
    /// `{p = q, q = r} => p = r`.
    E3(Term, Term, Term),
    /// `{t_i = s_i} => f(t..) = f(s..)`.
    E4 {
        op: Symbol,
        lhs: Vec<Term>,
        rhs: Vec<Term>,
    },
    Subst {
        line: usize,
        delta: VarSubstitution,
    },
    /// From `Δ => α` (minor) and `{α} ∪ Γ => β` (major) infer `Δ ∪ Γ => β`.
    Cut {
        minor: usize,
        major: usize,
    },
    Ext {
        line: usize,
        premise: Identity,
    },
    HypSub {
        line: usize,
        sigma: Hypersubstitution,
        name: Option<String>,
    },
    /// Cut whose minor line has no premises.
    Mp {
        minor: usize,
        major: usize,
    },
    /// `{t_i = s_i} => p(t..) = p(s..)`.
    Ge4 {
        p: Term,
        lhs: Vec<Term>,
        rhs: Vec<Term>,
    },
}

impl Justification {
    /// Earlier lines this step depends on.
    pub fn references(&self) -> Vec<usize> {
        match self {
            Justification::Subst { line, .. }
            | Justification::Ext { line, .. }
            | Justification::HypSub { line, .. } => vec![*line],
            Justification::Cut { minor, major } | Justification::Mp { minor, major } => {
                vec![*minor, *major]
            }
            _ => Vec::new(),
        }
    }

    pub fn rule_name(&self) -> &'static str {
        match self {
            Justification::Hyp(_) => "hyp",
            Justification::E1(_) => "E1",
            Justification::E2(..) => "E2",
            Justification::E3(..) => "E3",
            Justification::E4 { .. } => "E4",
            Justification::Subst { .. } => "subst",
            Justification::Cut { .. } => "cut",
            Justification::Ext { .. } => "ext",
            Justification::HypSub { .. } => "hypsub",
            Justification::Mp { .. } => "mp",
            Justification::Ge4 { .. } => "ge4",
        }
    }

    /// Same justification with line references remapped.
    pub fn relink(&self, map: impl Fn(usize) -> usize) -> Justification {
        let mut j = self.clone();
        match &mut j {
            Justification::Subst { line, .. }
            | Justification::Ext { line, .. }
            | Justification::HypSub { line, .. } => *line = map(*line),
            Justification::Cut { minor, major } | Justification::Mp { minor, major } => {
                *minor = map(*minor);
                *major = map(*major);
            }
            _ => {}
        }
        j
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProofLine {
    pub stated: QuasiIdentity,
    pub just: Justification,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Proof {
    pub name: Option<String>,
    pub theory: TheorySet,
    pub logic: Logic,
    pub lines: Vec<ProofLine>,
}

impl Proof {
    pub fn new(theory: TheorySet, logic: Logic) -> Self {
        Proof {
            name: None,
            theory,
            logic,
            lines: Vec::new(),
        }
    }

    pub fn signature(&self) -> &Signature {
        &self.theory.sig
    }

    pub fn len(&self) -> usize {
        self.lines.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lines.is_empty()
    }

    pub fn conclusion(&self) -> Option<&QuasiIdentity> {
        self.lines.last().map(|l| &l.stated)
    }

    /// Appends a line whose statement is computed from the justification.
    /// Monoid membership is not checked here; see [`check_proof`].
    pub fn push(&mut self, just: Justification) -> Result<usize, ProofErrorKind> {
        let stated = produce(&self.theory, &self.lines, &just)?;
        self.lines.push(ProofLine { stated, just });
        Ok(self.lines.len() - 1)
    }

    /// Appends a line verbatim.
    pub fn push_stated(&mut self, stated: QuasiIdentity, just: Justification) -> usize {
        self.lines.push(ProofLine { stated, just });
        self.lines.len() - 1
    }

    /// Lines the last line depends on, transitively, in original order.
    pub fn needed_lines(&self, target: usize) -> Vec<usize> {
        let mut keep = vec![false; self.lines.len()];
        let mut stack = vec![target];
        while let Some(i) = stack.pop() {
            if keep[i] {
                continue;
            }
            keep[i] = true;
            stack.extend(self.lines[i].just.references());
        }
        (0..self.lines.len()).filter(|i| keep[*i]).collect()
    }

    /// The sub-derivation ending at `target`, renumbered.
    pub fn extract(&self, target: usize) -> Proof {
        let needed = self.needed_lines(target);
        let mut map = vec![usize::MAX; self.lines.len()];
        let mut out = Proof {
            name: self.name.clone(),
            theory: self.theory.clone(),
            logic: self.logic.clone(),
            lines: Vec::with_capacity(needed.len()),
        };
        for (new, &old) in needed.iter().enumerate() {
            map[old] = new;
            let line = &self.lines[old];
            out.lines.push(ProofLine {
                stated: line.stated.clone(),
                just: line.just.relink(|r| map[r]),
            });
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProofErrorKind {
    #[error("proof has no lines")]
    Empty,
    #[error("reference to line {0}, which is not earlier")]
    ForwardReference(usize),
    #[error("hypothesis {index} out of range (theory has {len})")]
    HypothesisOutOfRange { index: usize, len: usize },
    #[error("ill-formed: {0}")]
    IllFormed(String),
    #[error("stated {stated} but the justification yields {expected}")]
    SchemaMismatch {
        stated: Box<QuasiIdentity>,
        expected: Box<QuasiIdentity>,
    },
    #[error("cut: {alpha} is not a premise of the major line")]
    CutMismatch { alpha: Identity },
    #[error("mp: the minor line has premises")]
    MpMinorHasPremises,
    #[error("hypersubstitution step not allowed in Q")]
    HypSubNotAllowed,
    #[error("{0} is not in the monoid")]
    NotInMonoid(String),
    #[error(transparent)]
    Monoid(#[from] HypersubError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {kind}")]
pub struct ProofError {
    /// 1-based; 0 for errors about the proof as a whole.
    pub line: usize,
    pub kind: ProofErrorKind,
}

fn ill<E: fmt::Display>(e: E) -> ProofErrorKind {
    ProofErrorKind::IllFormed(e.to_string())
}

fn check_term(t: &Term, sig: &Signature) -> Result<(), ProofErrorKind> {
    t.check(sig).map_err(ill)
}

fn pairs(lhs: &[Term], rhs: &[Term]) -> Vec<Identity> {
    lhs.iter()
        .zip(rhs)
        .map(|(t, s)| Identity::new(t.clone(), s.clone()))
        .collect()
}

fn earlier(lines: &[ProofLine], i: usize) -> Result<&QuasiIdentity, ProofErrorKind> {
    lines
        .get(i)
        .map(|l| &l.stated)
        .ok_or(ProofErrorKind::ForwardReference(i + 1))
}

fn cut(minor: &QuasiIdentity, major: &QuasiIdentity) -> Result<QuasiIdentity, ProofErrorKind> {
    let alpha = &minor.conclusion;
    if !major.has_premise(alpha) {
        return Err(ProofErrorKind::CutMismatch {
            alpha: alpha.clone(),
        });
    }
    let premises = minor
        .premises()
        .iter()
        .chain(major.premises().iter().filter(|p| *p != alpha))
        .cloned();
    Ok(QuasiIdentity::new(premises, major.conclusion.clone()))
}

/// The quasi-identity a justification yields, given the earlier lines.
pub fn produce(
    theory: &TheorySet,
    lines: &[ProofLine],
    just: &Justification,
) -> Result<QuasiIdentity, ProofErrorKind> {
    let sig = &theory.sig;
    Ok(match just {
        Justification::Hyp(k) => {
            theory
                .items
                .get(*k)
                .cloned()
                .ok_or(ProofErrorKind::HypothesisOutOfRange {
                    index: *k,
                    len: theory.items.len(),
                })?
        }
        Justification::E1(p) => {
            check_term(p, sig)?;
            let id = Identity::new(p.clone(), p.clone());
            QuasiIdentity::new([id.clone()], id)
        }
        Justification::E2(p, q) => {
            check_term(p, sig)?;
            check_term(q, sig)?;
            QuasiIdentity::new(
                [Identity::new(p.clone(), q.clone())],
                Identity::new(q.clone(), p.clone()),
            )
        }
        Justification::E3(p, q, r) => {
            for t in [p, q, r] {
                check_term(t, sig)?;
            }
            QuasiIdentity::new(
                [
                    Identity::new(p.clone(), q.clone()),
                    Identity::new(q.clone(), r.clone()),
                ],
                Identity::new(p.clone(), r.clone()),
            )
        }
        Justification::E4 { op, lhs, rhs } => {
            let arity = sig
                .arity(op)
                .ok_or_else(|| ProofErrorKind::IllFormed(format!("unknown symbol `{op}`")))?;
            if lhs.len() != arity || rhs.len() != arity {
                return Err(ProofErrorKind::IllFormed(format!(
                    "E4 for `{op}` needs {arity} terms on each side"
                )));
            }
            for t in lhs.iter().chain(rhs) {
                check_term(t, sig)?;
            }
            QuasiIdentity::new(
                pairs(lhs, rhs),
                Identity::new(
                    Term::App(op.clone(), lhs.clone()),
                    Term::App(op.clone(), rhs.clone()),
                ),
            )
        }
        Justification::Ge4 { p, lhs, rhs } => ge4_statement(sig, p, lhs, rhs)?,
        Justification::Subst { line, delta } => {
            delta.check(sig).map_err(ill)?;
            delta.apply_quasi(earlier(lines, *line)?)
        }
        Justification::Cut { minor, major } => {
            cut(earlier(lines, *minor)?, earlier(lines, *major)?)?
        }
        Justification::Mp { minor, major } => {
            let minor = earlier(lines, *minor)?;
            if !minor.is_identity() {
                return Err(ProofErrorKind::MpMinorHasPremises);
            }
            cut(minor, earlier(lines, *major)?)?
        }
        Justification::Ext { line, premise } => {
            premise.check(sig).map_err(ill)?;
            let e = earlier(lines, *line)?;
            QuasiIdentity::new(
                e.premises().iter().cloned().chain([premise.clone()]),
                e.conclusion.clone(),
            )
        }
        Justification::HypSub { line, sigma, .. } => {
            if !sigma.matches_signature(sig) {
                return Err(ProofErrorKind::IllFormed(format!(
                    "{sigma} is not over `{}`",
                    sig.name()
                )));
            }
            sigma.apply_quasi(earlier(lines, *line)?)?
        }
    })
}

/// Which hypersubstitutions a logic admits.
pub enum Admissible {
    None,
    Any,
    Monoid(Membership),
}

impl Admissible {
    pub fn for_logic(logic: &Logic, sig: &Signature) -> Result<Self, HypersubError> {
        Ok(match logic {
            Logic::Q => Admissible::None,
            Logic::HQ => Admissible::Any,
            Logic::MHQ { spec, .. } => Admissible::Monoid(spec.membership(sig)?),
        })
    }

    pub fn admits(&self, sigma: &Hypersubstitution) -> Result<(), ProofErrorKind> {
        match self {
            Admissible::None => Err(ProofErrorKind::HypSubNotAllowed),
            Admissible::Any => Ok(()),
            Admissible::Monoid(m) if m.contains(sigma) => Ok(()),
            Admissible::Monoid(_) => Err(ProofErrorKind::NotInMonoid(sigma.to_string())),
        }
    }
}

/// Single forward pass: every line must be exactly what its justification
/// yields from strictly earlier lines.
pub fn check_proof(proof: &Proof) -> Result<(), ProofError> {
    if proof.lines.is_empty() {
        return Err(ProofError {
            line: 0,
            kind: ProofErrorKind::Empty,
        });
    }
    let sig = proof.signature();
    let admissible = Admissible::for_logic(&proof.logic, sig).map_err(|e| ProofError {
        line: 0,
        kind: e.into(),
    })?;
    for (i, line) in proof.lines.iter().enumerate() {
        let at = |kind| ProofError { line: i + 1, kind };
        if let Some(r) = line.just.references().into_iter().find(|r| *r >= i) {
            return Err(at(ProofErrorKind::ForwardReference(r + 1)));
        }
        line.stated.check(sig).map_err(|e| at(ill(e)))?;
        if let Justification::HypSub { sigma, .. } = &line.just {
            admissible.admits(sigma).map_err(at)?;
        }
        let expected = produce(&proof.theory, &proof.lines[..i], &line.just).map_err(at)?;
        if expected != line.stated {
            return Err(at(ProofErrorKind::SchemaMismatch {
                stated: Box::new(line.stated.clone()),
                expected: Box::new(expected),
            }));
        }
    }
    Ok(())
}
