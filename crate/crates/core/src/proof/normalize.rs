use std::collections::HashMap;

use super::{
    check_proof, expand_ge4, Admissible, Justification, Logic, Proof, ProofError, ProofErrorKind,
};
use crate::hypersub::{monoid_elements, HypersubError, Hypersubstitution, MonoidSpec};
use crate::semantics::TheorySet;
use crate::term::{QuasiIdentity, VarSubstitution};

/// `{σ(e) : e ∈ Σ, σ ∈ M}` together with where each item came from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Closure {
    pub theory: TheorySet,
    /// `origins[j] = (k, σ)` means item `j` is `σ(Σ[k])`, first occurrence.
    pub origins: Vec<(usize, Hypersubstitution)>,
}

impl Closure {
    pub fn position(&self, e: &QuasiIdentity) -> Option<usize> {
        self.theory.items.iter().position(|i| i == e)
    }
}

/// Items in theory order, then monoid order; duplicates keep their first position.
pub fn hyperclose_with_origins(
    theory: &TheorySet,
    m: &MonoidSpec,
) -> Result<Closure, HypersubError> {
    let elements = monoid_elements(m, &theory.sig)?;
    let mut items: Vec<QuasiIdentity> = Vec::new();
    let mut origins = Vec::new();
    let mut seen: HashMap<QuasiIdentity, usize> = HashMap::new();
    for (k, e) in theory.items.iter().enumerate() {
        for sigma in &elements {
            let image = sigma.apply_quasi(e)?;
            if seen.contains_key(&image) {
                continue;
            }
            seen.insert(image.clone(), items.len());
            items.push(image);
            origins.push((k, sigma.clone()));
        }
    }
    Ok(Closure {
        theory: TheorySet {
            name: format!("{}_closure", theory.name),
            sig: theory.sig.clone(),
            items,
        },
        origins,
    })
}

pub fn hyperclose(theory: &TheorySet, m: &MonoidSpec) -> Result<TheorySet, HypersubError> {
    Ok(hyperclose_with_origins(theory, m)?.theory)
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct NormalizeOptions {
    /// Replace every GE4 step by its Q-derivation.
    pub expand_ge4: bool,
}

struct Pusher<'a> {
    src: &'a Proof,
    out: Proof,
    memo: HashMap<(usize, Hypersubstitution), usize>,
    admissible: Admissible,
    names: HashMap<Hypersubstitution, String>,
    identity: Hypersubstitution,
    expand: bool,
}

impl<'a> Pusher<'a> {
    fn new(src: &'a Proof, logic: Logic, expand: bool) -> Result<Self, ProofError> {
        let sig = src.signature();
        let admissible = Admissible::for_logic(&logic, sig).map_err(|e| ProofError {
            line: 0,
            kind: e.into(),
        })?;
        let names = src
            .lines
            .iter()
            .filter_map(|l| match &l.just {
                Justification::HypSub {
                    sigma,
                    name: Some(n),
                    ..
                } => Some((sigma.clone(), n.clone())),
                _ => None,
            })
            .collect();
        Ok(Pusher {
            src,
            out: Proof {
                name: src.name.clone(),
                theory: src.theory.clone(),
                logic,
                lines: Vec::new(),
            },
            memo: HashMap::new(),
            admissible,
            names,
            identity: Hypersubstitution::identity(sig),
            expand,
        })
    }

    fn emit(&mut self, just: Justification) -> Result<usize, ProofErrorKind> {
        match just {
            Justification::Ge4 { p, lhs, rhs } if self.expand => {
                let sub = expand_ge4(&p, &lhs, &rhs, &self.out.theory)?;
                let offset = self.out.lines.len();
                for line in sub.lines {
                    self.out.lines.push(super::ProofLine {
                        stated: line.stated,
                        just: line.just.relink(|r| r + offset),
                    });
                }
                Ok(self.out.lines.len() - 1)
            }
            just => self.out.push(just),
        }
    }

    fn hypsub(&mut self, line: usize, sigma: &Hypersubstitution) -> Result<usize, ProofErrorKind> {
        self.admissible.admits(sigma)?;
        let name = self.names.get(sigma).cloned();
        self.emit(Justification::HypSub {
            line,
            sigma: sigma.clone(),
            name,
        })
    }

    /// A line of the output proving `σ(line i of the source)`, with every
    /// hypersubstitution step sitting directly on a hypothesis.
    fn push(&mut self, i: usize, sigma: &Hypersubstitution) -> Result<usize, ProofError> {
        if let Some(&done) = self.memo.get(&(i, sigma.clone())) {
            return Ok(done);
        }
        let at = |kind| ProofError { line: i + 1, kind };
        let line = &self.src.lines[i];
        let target = sigma.apply_quasi(&line.stated).map_err(|e| at(e.into()))?;
        let is_id = *sigma == self.identity;
        let img = |t: &crate::term::Term| sigma.apply(t).map_err(|e| at(e.into()));
        let imgs = |ts: &[crate::term::Term]| {
            ts.iter()
                .map(|t| sigma.apply(t))
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| at(e.into()))
        };
        let mut out = match &line.just {
            Justification::Hyp(k) => {
                if is_id {
                    self.emit(Justification::Hyp(*k)).map_err(at)?
                } else {
                    let id = self.identity.clone();
                    let h = self.push(i, &id)?;
                    self.hypsub(h, sigma).map_err(at)?
                }
            }
            Justification::E1(p) => self.emit(Justification::E1(img(p)?)).map_err(at)?,
            Justification::E2(p, q) => {
                self.emit(Justification::E2(img(p)?, img(q)?)).map_err(at)?
            }
            Justification::E3(p, q, r) => self
                .emit(Justification::E3(img(p)?, img(q)?, img(r)?))
                .map_err(at)?,
            Justification::E4 { op, lhs, rhs } => {
                let image = sigma
                    .image(op)
                    .cloned()
                    .ok_or_else(|| at(ProofErrorKind::IllFormed(format!("no image for `{op}`"))))?;
                let generic = self.src.signature().generic_term(op);
                let just = if Some(&image) == generic.as_ref() {
                    Justification::E4 {
                        op: op.clone(),
                        lhs: imgs(lhs)?,
                        rhs: imgs(rhs)?,
                    }
                } else {
                    Justification::Ge4 {
                        p: image,
                        lhs: imgs(lhs)?,
                        rhs: imgs(rhs)?,
                    }
                };
                self.emit(just).map_err(at)?
            }
            Justification::Ge4 { p, lhs, rhs } => self
                .emit(Justification::Ge4 {
                    p: img(p)?,
                    lhs: imgs(lhs)?,
                    rhs: imgs(rhs)?,
                })
                .map_err(at)?,
            Justification::Subst { line: m, delta } => {
                let m = self.push(*m, sigma)?;
                // σ(δ(e)) = δ₁(σ(e)) with δ₁(x) = σ(δ(x))
                let delta = VarSubstitution::from_pairs(
                    delta
                        .bindings()
                        .iter()
                        .map(|(v, t)| Ok((*v, sigma.apply(t)?)))
                        .collect::<Result<Vec<_>, HypersubError>>()
                        .map_err(|e| at(e.into()))?,
                );
                self.emit(Justification::Subst { line: m, delta })
                    .map_err(at)?
            }
            Justification::Cut { minor, major } => {
                let (minor, major) = (self.push(*minor, sigma)?, self.push(*major, sigma)?);
                self.emit(Justification::Cut { minor, major }).map_err(at)?
            }
            Justification::Mp { minor, major } => {
                let (minor, major) = (self.push(*minor, sigma)?, self.push(*major, sigma)?);
                self.emit(Justification::Mp { minor, major }).map_err(at)?
            }
            Justification::Ext { line: m, premise } => {
                let m = self.push(*m, sigma)?;
                let premise = sigma.apply_identity(premise).map_err(|e| at(e.into()))?;
                self.emit(Justification::Ext { line: m, premise })
                    .map_err(at)?
            }
            Justification::HypSub {
                line: m,
                sigma: tau,
                ..
            } => {
                let composite = sigma.compose(tau).map_err(|e| at(e.into()))?;
                if !is_id {
                    self.admissible.admits(&composite).map_err(at)?;
                }
                self.push(*m, &composite)?
            }
        };
        // σ can identify premises that cut or extension kept apart
        for premise in target.premises() {
            if !self.out.lines[out].stated.has_premise(premise) {
                out = self
                    .emit(Justification::Ext {
                        line: out,
                        premise: premise.clone(),
                    })
                    .map_err(at)?;
            }
        }
        if self.out.lines[out].stated != target {
            return Err(at(ProofErrorKind::SchemaMismatch {
                stated: Box::new(self.out.lines[out].stated.clone()),
                expected: Box::new(target),
            }));
        }
        self.memo.insert((i, sigma.clone()), out);
        Ok(out)
    }
}

/// Pushes every hypersubstitution step down onto the hypotheses. The
/// result proves the same conclusion from the same theory and only
/// contains the lines the conclusion needs.
pub fn normalize(proof: &Proof, opts: NormalizeOptions) -> Result<Proof, ProofError> {
    check_proof(proof)?;
    let mut p = Pusher::new(proof, proof.logic.clone(), opts.expand_ge4)?;
    let id = p.identity.clone();
    let last = p.push(proof.lines.len() - 1, &id)?;
    Ok(p.out.extract(last))
}

/// The line-wise σ-image of a proof: every line `e_i` becomes a
/// re-justified derivation of `σ(e_i)`, so the result proves `σ(e)`.
/// A proof in Q is lifted to HQ.
pub fn map_proof(proof: &Proof, sigma: &Hypersubstitution) -> Result<Proof, ProofError> {
    check_proof(proof)?;
    let logic = match &proof.logic {
        Logic::Q => Logic::HQ,
        other => other.clone(),
    };
    let mut p = Pusher::new(proof, logic, false)?;
    if *sigma != p.identity {
        p.admissible
            .admits(sigma)
            .map_err(|kind| ProofError { line: 0, kind })?;
    }
    let mut last = 0;
    for i in 0..proof.lines.len() {
        last = p.push(i, sigma)?;
    }
    // The image of the last line may coincide with an earlier one.
    if last + 1 != p.out.len() {
        p.out
            .push(Justification::Subst {
                line: last,
                delta: VarSubstitution::identity(),
            })
            .map_err(|kind| ProofError { line: 0, kind })?;
    }
    Ok(p.out)
}

/// Turns a normalized proof into a Q-proof from the hyperclosure: every
/// `σ(Σ[k])` obtained by a hypersubstitution step on a hypothesis becomes a
/// hypothesis of the closure.
pub fn strip_to_closure(proof: &Proof, closure: &Closure) -> Result<Proof, ProofError> {
    let mut out = Proof {
        name: proof.name.clone(),
        theory: closure.theory.clone(),
        logic: Logic::Q,
        lines: Vec::with_capacity(proof.lines.len()),
    };
    for (i, line) in proof.lines.iter().enumerate() {
        let at = |kind| ProofError { line: i + 1, kind };
        let just = match &line.just {
            Justification::Hyp(_) | Justification::HypSub { .. } => {
                if let Justification::HypSub { line: m, .. } = &line.just {
                    if !matches!(proof.lines[*m].just, Justification::Hyp(_)) {
                        return Err(at(ProofErrorKind::IllFormed(
                            "hypersubstitution step not on a hypothesis; normalize first".into(),
                        )));
                    }
                }
                let j = closure.position(&line.stated).ok_or_else(|| {
                    at(ProofErrorKind::IllFormed(format!(
                        "{} is not in the closure",
                        line.stated
                    )))
                })?;
                Justification::Hyp(j)
            }
            other => other.clone(),
        };
        out.lines.push(super::ProofLine {
            stated: line.stated.clone(),
            just,
        });
    }
    Ok(out)
}

/// Inverse direction: a Q-proof from the closure becomes a proof from the
/// original theory in `logic` by prefixing each closure hypothesis with the
/// hypersubstitution step that produced it.
pub fn lift_from_closure(
    proof: &Proof,
    closure: &Closure,
    theory: &TheorySet,
    logic: Logic,
) -> Result<Proof, ProofError> {
    let mut out = Proof {
        name: proof.name.clone(),
        theory: theory.clone(),
        logic,
        lines: Vec::new(),
    };
    let identity = Hypersubstitution::identity(&theory.sig);
    let mut map = Vec::with_capacity(proof.lines.len());
    let mut hyps: HashMap<usize, usize> = HashMap::new();
    for (i, line) in proof.lines.iter().enumerate() {
        let at = |kind| ProofError { line: i + 1, kind };
        let new = match &line.just {
            Justification::Hyp(j) => {
                let (k, sigma) = closure.origins.get(*j).ok_or_else(|| {
                    at(ProofErrorKind::HypothesisOutOfRange {
                        index: *j,
                        len: closure.origins.len(),
                    })
                })?;
                let h = match hyps.get(k) {
                    Some(&h) => h,
                    None => {
                        let h = out.push(Justification::Hyp(*k)).map_err(at)?;
                        hyps.insert(*k, h);
                        h
                    }
                };
                if *sigma == identity {
                    h
                } else {
                    out.push(Justification::HypSub {
                        line: h,
                        sigma: sigma.clone(),
                        name: None,
                    })
                    .map_err(at)?
                }
            }
            other => {
                let just = other.relink(|r| map[r]);
                out.push_stated(line.stated.clone(), just)
            }
        };
        map.push(new);
    }
    Ok(out)
}
