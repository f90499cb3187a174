use std::collections::HashSet;

use super::{Justification, Logic, Proof, ProofError, ProofErrorKind};
use crate::hypersub::{monoid_elements, Hypersubstitution, MonoidSpec, Preset};
use crate::semantics::TheorySet;
use crate::term::{Identity, QuasiIdentity};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SaturationCaps {
    /// Maximum depth of any term in a kept item.
    pub term_depth: usize,
    /// Maximum number of premises of a kept item.
    pub premise_count: usize,
    /// Maximum number of rounds.
    pub iterations: usize,
    /// Stop once this many items are known.
    pub max_items: usize,
}

impl Default for SaturationCaps {
    fn default() -> Self {
        SaturationCaps {
            term_depth: 3,
            premise_count: 3,
            iterations: 3,
            max_items: 2000,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Saturation {
    /// One proof holding the derivations of all items.
    pub ledger: Proof,
    /// Each item with the ledger line that proves it.
    pub items: Vec<(QuasiIdentity, usize)>,
    pub rounds: usize,
    /// A round added nothing new.
    pub saturated: bool,
    /// `max_items` was reached.
    pub truncated: bool,
}

impl Saturation {
    pub fn proof_of(&self, item: usize) -> Proof {
        self.ledger.extract(self.items[item].1)
    }
}

struct State {
    ledger: Proof,
    items: Vec<(QuasiIdentity, usize)>,
    seen: HashSet<QuasiIdentity>,
    caps: SaturationCaps,
}

impl State {
    fn admissible(&self, e: &QuasiIdentity) -> bool {
        e.conclusion.lhs != e.conclusion.rhs
            && e.premises().len() <= self.caps.premise_count
            && e.depth() <= self.caps.term_depth
            && !self.seen.contains(e)
    }

    fn full(&self) -> bool {
        self.items.len() >= self.caps.max_items
    }

    /// Runs `steps` on the ledger if `expected` is new and within caps.
    fn offer(
        &mut self,
        expected: QuasiIdentity,
        steps: impl FnOnce(&mut Proof) -> Result<usize, ProofErrorKind>,
    ) -> Result<bool, ProofError> {
        if self.full() || !self.admissible(&expected) {
            return Ok(false);
        }
        let line = steps(&mut self.ledger).map_err(|kind| ProofError {
            line: self.ledger.len() + 1,
            kind,
        })?;
        debug_assert_eq!(self.ledger.lines[line].stated, expected);
        self.seen.insert(expected.clone());
        self.items.push((expected, line));
        Ok(true)
    }
}

/// Bounded forward chaining from `theory`. Starting from the theory and its
/// images under the monoid of `logic`, each round closes the known items
/// under symmetry, transitivity, cut and the admissible hypersubstitutions,
/// keeping only results within `caps`. Every item carries a checkable proof.
pub fn saturate(
    theory: &TheorySet,
    logic: Logic,
    caps: SaturationCaps,
) -> Result<Saturation, ProofError> {
    let sig = &theory.sig;
    let elements: Vec<Hypersubstitution> = match &logic {
        Logic::Q => Ok(Vec::new()),
        Logic::HQ => monoid_elements(&MonoidSpec::Preset(Preset::AllUpToDepth(1)), sig),
        Logic::MHQ { spec, .. } => monoid_elements(spec, sig),
    }
    .map_err(|e| ProofError {
        line: 0,
        kind: e.into(),
    })?
    .into_iter()
    .filter(|s| !s.is_identity())
    .collect();
    let mut st = State {
        ledger: Proof::new(theory.clone(), logic),
        items: Vec::new(),
        seen: HashSet::new(),
        caps,
    };
    for (k, e) in theory.items.iter().enumerate() {
        if !st.full() && !st.seen.contains(e) {
            let line = st
                .ledger
                .push(Justification::Hyp(k))
                .map_err(|kind| ProofError { line: 0, kind })?;
            st.seen.insert(e.clone());
            st.items.push((e.clone(), line));
        }
    }

    let mut rounds = 0;
    let mut saturated = false;
    while rounds < caps.iterations && !st.full() {
        rounds += 1;
        let snapshot = st.items.clone();
        let before = st.items.len();

        for (e, line) in &snapshot {
            for sigma in &elements {
                let image = sigma.apply_quasi(e).map_err(|err| ProofError {
                    line: 0,
                    kind: err.into(),
                })?;
                let (line, sigma) = (*line, sigma.clone());
                st.offer(image, |p| {
                    p.push(Justification::HypSub {
                        line,
                        sigma,
                        name: None,
                    })
                })?;
            }
        }

        for (e, line) in &snapshot {
            let Identity { lhs: p, rhs: q } = e.conclusion.clone();
            let flipped = QuasiIdentity::new(
                e.premises().iter().cloned(),
                Identity::new(q.clone(), p.clone()),
            );
            let line = *line;
            st.offer(flipped, |pr| {
                let sym = pr.push(Justification::E2(p, q))?;
                pr.push(Justification::Cut {
                    minor: line,
                    major: sym,
                })
            })?;
        }

        for (a, la) in &snapshot {
            for (b, lb) in &snapshot {
                let (p, q) = (&a.conclusion.lhs, &a.conclusion.rhs);
                if b.conclusion.lhs != *q || b.conclusion.rhs == *p {
                    continue;
                }
                let r = b.conclusion.rhs.clone();
                let qr = b.conclusion.clone();
                let premises = a
                    .premises()
                    .iter()
                    .filter(|g| **g != qr)
                    .chain(b.premises())
                    .cloned();
                let expected = QuasiIdentity::new(premises, Identity::new(p.clone(), r.clone()));
                let (p, q, la, lb) = (p.clone(), q.clone(), *la, *lb);
                st.offer(expected, |pr| {
                    let tr = pr.push(Justification::E3(p, q, r))?;
                    let half = pr.push(Justification::Cut {
                        minor: la,
                        major: tr,
                    })?;
                    pr.push(Justification::Cut {
                        minor: lb,
                        major: half,
                    })
                })?;
            }
        }

        for (minor, lm) in &snapshot {
            for (major, lj) in &snapshot {
                if !major.has_premise(&minor.conclusion) {
                    continue;
                }
                let premises = minor
                    .premises()
                    .iter()
                    .chain(major.premises().iter().filter(|g| **g != minor.conclusion))
                    .cloned();
                let expected = QuasiIdentity::new(premises, major.conclusion.clone());
                let (lm, lj) = (*lm, *lj);
                st.offer(expected, |pr| {
                    pr.push(Justification::Cut {
                        minor: lm,
                        major: lj,
                    })
                })?;
            }
        }

        if st.items.len() == before {
            saturated = true;
            break;
        }
    }
    let truncated = st.full();
    Ok(Saturation {
        ledger: st.ledger,
        items: st.items,
        rounds,
        saturated,
        truncated,
    })
}
