//! Hypersubstitutions and monoids of hypersubstitutions.
//!
//! A hypersubstitution sends every operation symbol `f` of arity `n` to a
//! term over `x0..x_{n-1}` and acts on arbitrary terms inductively, fixing
//! variables. Monoids are described by a [`MonoidSpec`]; infinite ones can
//! only be enumerated up to an explicit image-depth cap.

use std::collections::{BTreeSet, HashSet};
use std::fmt;

use thiserror::Error;

use crate::term::{
    cartesian, terms_up_to_depth, Identity, QuasiIdentity, Signature, Symbol, Term, TermError, Var,
};

/// Upper bound on the number of hypersubstitutions a preset may enumerate.
pub const ENUMERATION_LIMIT: usize = 5_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HypersubError {
    #[error(transparent)]
    Term(#[from] TermError),
    #[error("no image given for `{0}`")]
    MissingImage(String),
    #[error("`{0}` is given more than one image")]
    DuplicateImage(String),
    #[error("signature mismatch: `{0}` has no image")]
    SignatureMismatch(String),
    #[error("explicit monoid does not contain the identity hypersubstitution")]
    MissingIdentity,
    #[error("explicit monoid is not closed under composition: {0}")]
    NotClosed(String),
    #[error("closure under composition exceeds the cap of {cap} elements")]
    ClosureExceedsCap { cap: usize },
    #[error("preset needs `{name}` of arity {arity}, which the signature lacks")]
    MissingPresetSymbol { name: String, arity: usize },
    #[error("enumeration would produce {count} hypersubstitutions (limit {limit})")]
    EnumerationTooLarge { count: u128, limit: usize },
}

/// A hypersubstitution, stored as one image per symbol in signature order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Hypersubstitution {
    images: Vec<(Symbol, Term)>,
    arities: Vec<usize>,
}

impl Hypersubstitution {
    /// Builds a hypersubstitution from one image per symbol of `sig`.
    pub fn new<S: AsRef<str>>(
        sig: &Signature,
        images: impl IntoIterator<Item = (S, Term)>,
    ) -> Result<Self, HypersubError> {
        let mut slots: Vec<Option<Term>> = vec![None; sig.ops().len()];
        for (op, image) in images {
            let op = op.as_ref();
            let idx = sig
                .index_of(op)
                .ok_or_else(|| TermError::UnknownSymbol(op.to_string()))?;
            if slots[idx].is_some() {
                return Err(HypersubError::DuplicateImage(op.to_string()));
            }
            image.check(sig)?;
            let arity = sig.ops()[idx].arity;
            if let Some(v) = image.vars().into_iter().find(|v| v.index() >= arity) {
                return Err(TermError::VariableOutOfRange { var: v, arity }.into());
            }
            slots[idx] = Some(image);
        }
        let images = sig
            .ops()
            .iter()
            .zip(slots)
            .map(|(d, slot)| {
                slot.map(|t| (d.name.clone(), t))
                    .ok_or_else(|| HypersubError::MissingImage(d.name.to_string()))
            })
            .collect::<Result<_, _>>()?;
        Ok(Hypersubstitution {
            images,
            arities: sig.ops().iter().map(|d| d.arity).collect(),
        })
    }

    /// `σ_id`, which sends every `f` to `f(x0, ..., x_{n-1})`.
    pub fn identity(sig: &Signature) -> Self {
        Hypersubstitution {
            images: sig
                .ops()
                .iter()
                .map(|d| (d.name.clone(), sig.generic_term(&d.name).expect("declared")))
                .collect(),
            arities: sig.ops().iter().map(|d| d.arity).collect(),
        }
    }

    pub fn images(&self) -> &[(Symbol, Term)] {
        &self.images
    }

    pub fn image(&self, op: &str) -> Option<&Term> {
        self.images.iter().find(|(s, _)| &**s == op).map(|(_, t)| t)
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().all(|(op, t)| match t {
            Term::App(g, args) => {
                g == op
                    && args
                        .iter()
                        .enumerate()
                        .all(|(i, a)| a.as_var() == Some(Var(i as u32)))
            }
            Term::Var(_) => false,
        })
    }

    /// Deepest image.
    pub fn depth(&self) -> usize {
        self.images
            .iter()
            .map(|(_, t)| t.depth())
            .max()
            .unwrap_or(0)
    }

    pub fn matches_signature(&self, sig: &Signature) -> bool {
        self.images.len() == sig.ops().len()
            && self
                .images
                .iter()
                .zip(&self.arities)
                .zip(sig.ops())
                .all(|(((s, _), a), d)| *s == d.name && *a == d.arity)
    }

    /// The inductive action on terms: variables are fixed and
    /// `f(p0..p_{n-1})` becomes the image of `f` with each `x_i` replaced by
    /// the image of `p_i`.
    pub fn apply(&self, t: &Term) -> Result<Term, HypersubError> {
        match t {
            Term::Var(_) => Ok(t.clone()),
            Term::App(op, args) => {
                let image = self
                    .image(op)
                    .ok_or_else(|| HypersubError::SignatureMismatch(op.to_string()))?;
                let args = args
                    .iter()
                    .map(|a| self.apply(a))
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(image.instantiate(&args))
            }
        }
    }

    pub fn apply_identity(&self, id: &Identity) -> Result<Identity, HypersubError> {
        Ok(Identity::new(self.apply(&id.lhs)?, self.apply(&id.rhs)?))
    }

    pub fn apply_quasi(&self, e: &QuasiIdentity) -> Result<QuasiIdentity, HypersubError> {
        let premises = e
            .premises()
            .iter()
            .map(|p| self.apply_identity(p))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(QuasiIdentity::new(
            premises,
            self.apply_identity(&e.conclusion)?,
        ))
    }

    /// `self ∘ inner`: the image of `f` is `self` applied to `inner`'s image of `f`.
    pub fn compose(&self, inner: &Hypersubstitution) -> Result<Hypersubstitution, HypersubError> {
        let images = inner
            .images
            .iter()
            .map(|(op, t)| Ok((op.clone(), self.apply(t)?)))
            .collect::<Result<_, HypersubError>>()?;
        Ok(Hypersubstitution {
            images,
            arities: inner.arities.clone(),
        })
    }
}

impl fmt::Display for Hypersubstitution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for ((op, t), arity) in self.images.iter().zip(&self.arities) {
            let pattern = Term::App(op.clone(), (0..*arity as u32).map(Term::var).collect());
            write!(f, " {pattern} -> {t};")?;
        }
        write!(f, " }}")
    }
}

/// Free-function form of [`Hypersubstitution::apply`].
pub fn apply_hypersub(sigma: &Hypersubstitution, t: &Term) -> Result<Term, HypersubError> {
    sigma.apply(t)
}

pub fn apply_hypersub_quasi(
    sigma: &Hypersubstitution,
    e: &QuasiIdentity,
) -> Result<QuasiIdentity, HypersubError> {
    sigma.apply_quasi(e)
}

pub fn compose(
    outer: &Hypersubstitution,
    inner: &Hypersubstitution,
) -> Result<Hypersubstitution, HypersubError> {
    outer.compose(inner)
}

/// True iff every image is one operation symbol of the same arity applied
/// to variables only.
pub fn is_mf_member(sigma: &Hypersubstitution, sig: &Signature) -> bool {
    sigma
        .images()
        .iter()
        .all(|(op, t)| is_fundamental_image(sig, op, t))
}

fn is_fundamental_image(sig: &Signature, op: &str, t: &Term) -> bool {
    match t {
        Term::Var(_) => false,
        Term::App(g, args) => sig.arity(g) == sig.arity(op) && args.iter().all(Term::is_var),
    }
}

/// `g(x_{π(0)}, ..., x_{π(n-1)})` for a permutation π.
fn is_linear_fundamental_image(sig: &Signature, op: &str, t: &Term) -> bool {
    if !is_fundamental_image(sig, op, t) {
        return false;
    }
    let Term::App(_, args) = t else { return false };
    let distinct: BTreeSet<Var> = args.iter().filter_map(Term::as_var).collect();
    distinct.len() == args.len()
}

/// Non-variable and mentions every `x_i` below the arity of `op`.
fn is_regular_image(sig: &Signature, op: &str, t: &Term) -> bool {
    let arity = sig.arity(op).unwrap_or(0);
    !t.is_var() && (0..arity as u32).all(|i| t.contains_var(Var(i)))
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Preset {
    /// `{σ_id}`.
    Trivial,
    /// Fundamental-form images `g(v1, ..., vn)` with `g` of the same arity;
    /// repeated and permuted variables are allowed.
    MF,
    /// All of `H(τ)`, enumerated up to the given image depth.
    AllUpToDepth(usize),
    /// Fixes `zero` and `meet`; every other image is a non-variable term
    /// mentioning each of its argument variables. Enumerated up to `depth`.
    ZeroMeetPreserving {
        depth: usize,
        zero: String,
        meet: String,
    },
    /// Fixes `zero` and `meet`; every other image is `g(x_{π(0)}, ...)` for
    /// a same-arity symbol `g` and a permutation π.
    ZeroMeetFundamental { zero: String, meet: String },
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Preset::Trivial => write!(f, "Trivial"),
            Preset::MF => write!(f, "MF"),
            Preset::AllUpToDepth(d) => write!(f, "AllUpToDepth({d})"),
            Preset::ZeroMeetPreserving { depth, zero, meet } => {
                write!(f, "ZeroMeetPreserving({depth}, {zero}, {meet})")
            }
            Preset::ZeroMeetFundamental { zero, meet } => {
                write!(f, "ZeroMeetFundamental({zero}, {meet})")
            }
        }
    }
}

/// A description of a monoid `M ⊆ H(τ)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum MonoidSpec {
    Explicit(Vec<Hypersubstitution>),
    Generated {
        generators: Vec<Hypersubstitution>,
        cap: usize,
    },
    Preset(Preset),
}

impl MonoidSpec {
    /// Validated explicit monoid: must contain `σ_id` and be closed under
    /// composition. Elements are stored sorted.
    pub fn explicit(
        sig: &Signature,
        elements: impl IntoIterator<Item = Hypersubstitution>,
    ) -> Result<Self, HypersubError> {
        let set: BTreeSet<Hypersubstitution> = elements.into_iter().collect();
        check_explicit(sig, &set)?;
        Ok(MonoidSpec::Explicit(set.into_iter().collect()))
    }

    pub fn trivial() -> Self {
        MonoidSpec::Preset(Preset::Trivial)
    }

    /// Whether the monoid is infinite and only enumerated up to a cap.
    pub fn depth_bound(&self) -> Option<usize> {
        match self {
            MonoidSpec::Preset(Preset::AllUpToDepth(d)) => Some(*d),
            MonoidSpec::Preset(Preset::ZeroMeetPreserving { depth, .. }) => Some(*depth),
            _ => None,
        }
    }

    /// A membership oracle for the monoid this spec describes. For the
    /// unbounded presets membership is exact even though enumeration is capped.
    pub fn membership(&self, sig: &Signature) -> Result<Membership, HypersubError> {
        let kind = match self {
            MonoidSpec::Explicit(_) | MonoidSpec::Generated { .. } => {
                MembershipKind::Finite(monoid_elements(self, sig)?.into_iter().collect())
            }
            MonoidSpec::Preset(p) => {
                check_preset_symbols(p, sig)?;
                MembershipKind::Preset(p.clone())
            }
        };
        Ok(Membership {
            sig: sig.clone(),
            kind,
        })
    }
}

#[derive(Debug, Clone)]
pub struct Membership {
    sig: Signature,
    kind: MembershipKind,
}

#[derive(Debug, Clone)]
enum MembershipKind {
    Finite(HashSet<Hypersubstitution>),
    Preset(Preset),
}

impl Membership {
    pub fn contains(&self, sigma: &Hypersubstitution) -> bool {
        if !sigma.matches_signature(&self.sig) {
            return false;
        }
        match &self.kind {
            MembershipKind::Finite(set) => set.contains(sigma),
            MembershipKind::Preset(p) => preset_contains(p, &self.sig, sigma),
        }
    }
}

fn preset_contains(p: &Preset, sig: &Signature, sigma: &Hypersubstitution) -> bool {
    match p {
        Preset::Trivial => sigma.is_identity(),
        Preset::MF => is_mf_member(sigma, sig),
        Preset::AllUpToDepth(_) => true,
        Preset::ZeroMeetPreserving { zero, meet, .. } => {
            fixes_zero_meet(sigma, sig, zero, meet)
                && sigma
                    .images()
                    .iter()
                    .filter(|(op, _)| **op != **zero && **op != **meet)
                    .all(|(op, t)| is_regular_image(sig, op, t))
        }
        Preset::ZeroMeetFundamental { zero, meet } => {
            fixes_zero_meet(sigma, sig, zero, meet)
                && sigma
                    .images()
                    .iter()
                    .filter(|(op, _)| **op != **zero && **op != **meet)
                    .all(|(op, t)| is_linear_fundamental_image(sig, op, t))
        }
    }
}

fn fixes_zero_meet(sigma: &Hypersubstitution, sig: &Signature, zero: &str, meet: &str) -> bool {
    sigma.image(zero) == sig.generic_term(zero).as_ref()
        && sigma.image(meet) == sig.generic_term(meet).as_ref()
}

fn check_preset_symbols(p: &Preset, sig: &Signature) -> Result<(), HypersubError> {
    let (zero, meet) = match p {
        Preset::ZeroMeetPreserving { zero, meet, .. }
        | Preset::ZeroMeetFundamental { zero, meet } => (zero, meet),
        _ => return Ok(()),
    };
    for (name, arity) in [(zero, 0), (meet, 2)] {
        if sig.arity(name) != Some(arity) {
            return Err(HypersubError::MissingPresetSymbol {
                name: name.clone(),
                arity,
            });
        }
    }
    Ok(())
}

fn check_explicit(sig: &Signature, set: &BTreeSet<Hypersubstitution>) -> Result<(), HypersubError> {
    if !set.contains(&Hypersubstitution::identity(sig)) {
        return Err(HypersubError::MissingIdentity);
    }
    for a in set {
        for b in set {
            let ab = a.compose(b)?;
            if !set.contains(&ab) {
                return Err(HypersubError::NotClosed(format!("{a} ∘ {b} = {ab}")));
            }
        }
    }
    Ok(())
}

/// Enumerates the elements of `m`, sorted by the syntactic order on images.
///
/// Unbounded presets are enumerated up to their depth cap; `Generated`
/// closes the generators and `σ_id` under composition and fails once the
/// closure grows past its cap.
pub fn monoid_elements(
    m: &MonoidSpec,
    sig: &Signature,
) -> Result<Vec<Hypersubstitution>, HypersubError> {
    let mut out = match m {
        MonoidSpec::Explicit(elems) => {
            let set: BTreeSet<Hypersubstitution> = elems.iter().cloned().collect();
            check_explicit(sig, &set)?;
            set.into_iter().collect()
        }
        MonoidSpec::Generated { generators, cap } => generated_closure(sig, generators, *cap)?,
        MonoidSpec::Preset(p) => {
            check_preset_symbols(p, sig)?;
            preset_elements(p, sig)?
        }
    };
    out.sort();
    out.dedup();
    Ok(out)
}

fn generated_closure(
    sig: &Signature,
    generators: &[Hypersubstitution],
    cap: usize,
) -> Result<Vec<Hypersubstitution>, HypersubError> {
    let mut set: BTreeSet<Hypersubstitution> = BTreeSet::new();
    set.insert(Hypersubstitution::identity(sig));
    for g in generators {
        if !g.matches_signature(sig) {
            let missing = sig
                .ops()
                .iter()
                .find(|d| g.image(&d.name).is_none())
                .map(|d| d.name.to_string())
                .unwrap_or_default();
            return Err(HypersubError::SignatureMismatch(missing));
        }
        set.insert(g.clone());
    }
    if set.len() > cap {
        return Err(HypersubError::ClosureExceedsCap { cap });
    }
    let mut frontier: Vec<Hypersubstitution> = set.iter().cloned().collect();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for a in &frontier {
            for g in generators {
                for c in [a.compose(g)?, g.compose(a)?] {
                    if set.insert(c.clone()) {
                        if set.len() > cap {
                            return Err(HypersubError::ClosureExceedsCap { cap });
                        }
                        next.push(c);
                    }
                }
            }
        }
        frontier = next;
    }
    if set.len() > cap {
        return Err(HypersubError::ClosureExceedsCap { cap });
    }
    Ok(set.into_iter().collect())
}

fn preset_elements(p: &Preset, sig: &Signature) -> Result<Vec<Hypersubstitution>, HypersubError> {
    let candidates: Vec<Vec<Term>> = sig
        .ops()
        .iter()
        .map(|d| preset_candidates(p, sig, &d.name, d.arity))
        .collect();
    let count = candidates
        .iter()
        .fold(1u128, |acc, c| acc.saturating_mul(c.len() as u128));
    if count > ENUMERATION_LIMIT as u128 {
        return Err(HypersubError::EnumerationTooLarge {
            count,
            limit: ENUMERATION_LIMIT,
        });
    }
    let mut out = Vec::with_capacity(count as usize);
    let mut choice = vec![0usize; candidates.len()];
    if candidates.iter().any(Vec::is_empty) {
        return Ok(out);
    }
    loop {
        out.push(Hypersubstitution {
            images: sig
                .ops()
                .iter()
                .zip(&choice)
                .zip(&candidates)
                .map(|((d, &c), cands)| (d.name.clone(), cands[c].clone()))
                .collect(),
            arities: sig.ops().iter().map(|d| d.arity).collect(),
        });
        // odometer, last symbol fastest
        let mut k = choice.len();
        loop {
            if k == 0 {
                return Ok(out);
            }
            k -= 1;
            choice[k] += 1;
            if choice[k] < candidates[k].len() {
                break;
            }
            choice[k] = 0;
        }
    }
}

fn preset_candidates(p: &Preset, sig: &Signature, op: &str, arity: usize) -> Vec<Term> {
    let generic = sig.generic_term(op).expect("declared symbol");
    match p {
        Preset::Trivial => vec![generic],
        Preset::MF => fundamental_candidates(sig, arity, false),
        Preset::AllUpToDepth(d) => terms_up_to_depth(sig, arity, *d),
        Preset::ZeroMeetPreserving { depth, zero, meet } => {
            if op == zero || op == meet {
                vec![generic]
            } else {
                terms_up_to_depth(sig, arity, *depth)
                    .into_iter()
                    .filter(|t| is_regular_image(sig, op, t))
                    .collect()
            }
        }
        Preset::ZeroMeetFundamental { zero, meet } => {
            if op == zero || op == meet {
                vec![generic]
            } else {
                fundamental_candidates(sig, arity, true)
            }
        }
    }
}

/// `g(v1..vn)` for every `g` of arity `n`; `linear` restricts the variable
/// tuple to permutations of `x0..x_{n-1}`.
fn fundamental_candidates(sig: &Signature, arity: usize, linear: bool) -> Vec<Term> {
    let vars: Vec<Term> = (0..arity as u32).map(Term::var).collect();
    let tuples: Vec<Vec<Term>> = cartesian(&vars, arity)
        .into_iter()
        .filter(|tuple| !linear || tuple.iter().collect::<BTreeSet<_>>().len() == tuple.len())
        .collect();
    let mut out: Vec<Term> = sig
        .ops()
        .iter()
        .filter(|d| d.arity == arity)
        .flat_map(|d| {
            tuples
                .iter()
                .map(move |t| Term::App(d.name.clone(), t.clone()))
        })
        .collect();
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn groupoid() -> Signature {
        Signature::new("G", [("mul", 2)]).unwrap()
    }

    fn mul(a: Term, b: Term) -> Term {
        Term::app("mul", vec![a, b])
    }

    fn x(i: u32) -> Term {
        Term::var(i)
    }

    fn dual(sig: &Signature) -> Hypersubstitution {
        Hypersubstitution::new(sig, [("mul", mul(x(1), x(0)))]).unwrap()
    }

    fn projection(sig: &Signature, i: u32) -> Hypersubstitution {
        Hypersubstitution::new(sig, [("mul", x(i))]).unwrap()
    }

    #[test]
    fn construction_validates_images() {
        let g = groupoid();
        assert!(matches!(
            Hypersubstitution::new(&g, Vec::<(&str, Term)>::new()),
            Err(HypersubError::MissingImage(_))
        ));
        assert!(matches!(
            Hypersubstitution::new(&g, [("mul", x(2))]),
            Err(HypersubError::Term(TermError::VariableOutOfRange { .. }))
        ));
        assert!(matches!(
            Hypersubstitution::new(&g, [("div", x(0))]),
            Err(HypersubError::Term(TermError::UnknownSymbol(_)))
        ));
    }

    #[test]
    fn identity_acts_trivially() {
        let g = groupoid();
        let t = mul(x(0), mul(x(1), x(2)));
        assert_eq!(Hypersubstitution::identity(&g).apply(&t).unwrap(), t);
    }

    #[test]
    fn dual_reverses_products() {
        let g = groupoid();
        let t = mul(x(0), mul(x(1), x(2)));
        let expected = mul(mul(x(2), x(1)), x(0));
        assert_eq!(dual(&g).apply(&t).unwrap(), expected);
    }

    #[test]
    fn dual_maps_left_to_right_cancellation() {
        let g = groupoid();
        // x0 = x, x1 = y, x2 = z
        let left = QuasiIdentity::new(
            [Identity::new(mul(x(0), x(2)), mul(x(1), x(2)))],
            Identity::new(x(0), x(1)),
        );
        let right = QuasiIdentity::new(
            [Identity::new(mul(x(2), x(0)), mul(x(2), x(1)))],
            Identity::new(x(0), x(1)),
        );
        assert_eq!(dual(&g).apply_quasi(&left).unwrap(), right);
        let second = projection(&g, 1).apply_quasi(&left).unwrap();
        assert_eq!(
            second,
            QuasiIdentity::new([Identity::new(x(2), x(2))], Identity::new(x(0), x(1)))
        );
    }

    #[test]
    fn signature_mismatch_is_reported() {
        let g = groupoid();
        let t = Term::app("join", vec![x(0), x(1)]);
        assert!(matches!(
            dual(&g).apply(&t),
            Err(HypersubError::SignatureMismatch(_))
        ));
    }

    #[test]
    fn double_dual_is_identity() {
        let g = groupoid();
        let id = Hypersubstitution::identity(&g);
        assert_eq!(dual(&g).compose(&dual(&g)).unwrap(), id);
        assert_eq!(id.compose(&dual(&g)).unwrap(), dual(&g));
        assert_eq!(dual(&g).compose(&id).unwrap(), dual(&g));
    }

    #[test]
    fn trivial_preset() {
        let g = groupoid();
        let elems = monoid_elements(&MonoidSpec::trivial(), &g).unwrap();
        assert_eq!(elems, vec![Hypersubstitution::identity(&g)]);
    }

    #[test]
    fn mf_over_groupoid_has_four_elements() {
        let g = groupoid();
        let elems = monoid_elements(&MonoidSpec::Preset(Preset::MF), &g).unwrap();
        assert_eq!(elems.len(), 4);
        assert!(elems.iter().all(|s| is_mf_member(s, &g)));
    }

    #[test]
    fn generated_by_dual() {
        let g = groupoid();
        let m = MonoidSpec::Generated {
            generators: vec![dual(&g)],
            cap: 4,
        };
        let elems = monoid_elements(&m, &g).unwrap();
        let mut expected = vec![Hypersubstitution::identity(&g), dual(&g)];
        expected.sort();
        assert_eq!(elems, expected);
    }

    #[test]
    fn generated_closure_respects_cap() {
        let g = groupoid();
        let square = Hypersubstitution::new(&g, [("mul", mul(mul(x(0), x(1)), x(1)))]).unwrap();
        let m = MonoidSpec::Generated {
            generators: vec![square],
            cap: 6,
        };
        assert_eq!(
            monoid_elements(&m, &g),
            Err(HypersubError::ClosureExceedsCap { cap: 6 })
        );
    }

    #[test]
    fn projections_generate_three_elements() {
        let g = groupoid();
        let m = MonoidSpec::Generated {
            generators: vec![projection(&g, 0), projection(&g, 1)],
            cap: 8,
        };
        assert_eq!(monoid_elements(&m, &g).unwrap().len(), 3);
    }

    #[test]
    fn explicit_checks_monoid_axioms() {
        let g = groupoid();
        assert_eq!(
            MonoidSpec::explicit(&g, [dual(&g)]),
            Err(HypersubError::MissingIdentity)
        );
        let not_closed = MonoidSpec::explicit(
            &g,
            [Hypersubstitution::identity(&g), projection(&g, 0), dual(&g)],
        );
        assert!(matches!(not_closed, Err(HypersubError::NotClosed(_))));
        assert!(MonoidSpec::explicit(&g, [Hypersubstitution::identity(&g), dual(&g)]).is_ok());
    }

    #[test]
    fn mf_membership() {
        let l = Signature::new("L", [("meet", 2), ("join", 2)]).unwrap();
        assert!(is_mf_member(&Hypersubstitution::identity(&l), &l));
        let proj = Hypersubstitution::new(
            &l,
            [
                ("meet", x(0)),
                ("join", Term::app("join", vec![x(0), x(1)])),
            ],
        )
        .unwrap();
        assert!(!is_mf_member(&proj, &l));
        let nested = Hypersubstitution::new(
            &l,
            [
                (
                    "meet",
                    Term::app("meet", vec![Term::app("meet", vec![x(0), x(1)]), x(1)]),
                ),
                ("join", Term::app("join", vec![x(0), x(1)])),
            ],
        )
        .unwrap();
        assert!(!is_mf_member(&nested, &l));
    }

    #[test]
    fn zero_meet_presets() {
        let flat = Signature::new("F", [("meet", 2), ("f", 2), ("zero", 0)]).unwrap();
        let fund = MonoidSpec::Preset(Preset::ZeroMeetFundamental {
            zero: "zero".into(),
            meet: "meet".into(),
        });
        // f ↦ meet or f, each with the two permutations of (x0, x1)
        assert_eq!(monoid_elements(&fund, &flat).unwrap().len(), 4);

        let pres = MonoidSpec::Preset(Preset::ZeroMeetPreserving {
            depth: 1,
            zero: "zero".into(),
            meet: "meet".into(),
        });
        let elems = monoid_elements(&pres, &flat).unwrap();
        // depth-1 images over {x0, x1, zero} mentioning both variables
        assert_eq!(elems.len(), 4);

        let missing = MonoidSpec::Preset(Preset::ZeroMeetFundamental {
            zero: "bottom".into(),
            meet: "meet".into(),
        });
        assert!(matches!(
            monoid_elements(&missing, &flat),
            Err(HypersubError::MissingPresetSymbol { .. })
        ));
    }

    #[test]
    fn unbounded_membership_is_exact() {
        let g = groupoid();
        let all = MonoidSpec::Preset(Preset::AllUpToDepth(1))
            .membership(&g)
            .unwrap();
        let deep = Hypersubstitution::new(&g, [("mul", mul(mul(x(0), x(1)), x(1)))]).unwrap();
        assert!(all.contains(&deep));
        let mf = MonoidSpec::Preset(Preset::MF).membership(&g).unwrap();
        assert!(!mf.contains(&deep));
        assert!(mf.contains(&dual(&g)));
    }

    #[test]
    fn enumeration_is_sorted() {
        let g = groupoid();
        let elems = monoid_elements(&MonoidSpec::Preset(Preset::AllUpToDepth(2)), &g).unwrap();
        assert_eq!(elems.len(), 38);
        assert!(elems.windows(2).all(|w| w[0] < w[1]));
    }
}
