//! Signatures, terms, identities, quasi-identities and variable substitutions.
//!
//! Terms are plain immutable values compared syntactically. Variables are
//! positional (`x0`, `x1`, ...); the text front end maps user-chosen names
//! onto indices before a term is ever built.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use thiserror::Error;

/// Name of an operation symbol.
pub type Symbol = Arc<str>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TermError {
    #[error("signature `{0}` declares no operation symbols")]
    EmptySignature(String),
    #[error("operation `{0}` is declared twice")]
    DuplicateOp(String),
    #[error("`{0}` cannot name an operation (reserved for variables)")]
    ReservedName(String),
    #[error("unknown operation symbol `{0}`")]
    UnknownSymbol(String),
    #[error("`{op}` expects {expected} argument(s), found {found}")]
    ArityMismatch {
        op: String,
        expected: usize,
        found: usize,
    },
    #[error("variable {var} is out of range for an image of arity {arity}")]
    VariableOutOfRange { var: Var, arity: usize },
}

/// A variable, identified by its index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var(pub u32);

impl Var {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x{}", self.0)
    }
}

/// Returns the index if `name` has the shape `x<digits>`.
pub fn parse_var_name(name: &str) -> Option<u32> {
    let digits = name.strip_prefix('x')?;
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    digits.parse().ok()
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OpDecl {
    pub name: Symbol,
    pub arity: usize,
}

/// A finite type: an ordered list of operation symbols with arities.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Signature {
    name: String,
    ops: Vec<OpDecl>,
}

impl Signature {
    pub fn new<S: AsRef<str>>(
        name: impl Into<String>,
        ops: impl IntoIterator<Item = (S, usize)>,
    ) -> Result<Self, TermError> {
        let name = name.into();
        let mut decls: Vec<OpDecl> = Vec::new();
        for (op, arity) in ops {
            let op = op.as_ref();
            if parse_var_name(op).is_some() {
                return Err(TermError::ReservedName(op.to_string()));
            }
            if decls.iter().any(|d| &*d.name == op) {
                return Err(TermError::DuplicateOp(op.to_string()));
            }
            decls.push(OpDecl {
                name: Symbol::from(op),
                arity,
            });
        }
        if decls.is_empty() {
            return Err(TermError::EmptySignature(name));
        }
        Ok(Signature { name, ops: decls })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn ops(&self) -> &[OpDecl] {
        &self.ops
    }

    pub fn index_of(&self, op: &str) -> Option<usize> {
        self.ops.iter().position(|d| &*d.name == op)
    }

    pub fn arity(&self, op: &str) -> Option<usize> {
        self.ops.iter().find(|d| &*d.name == op).map(|d| d.arity)
    }

    /// The shared symbol for `op`, so terms built from it reuse one allocation.
    pub fn symbol(&self, op: &str) -> Option<&Symbol> {
        self.ops.iter().find(|d| &*d.name == op).map(|d| &d.name)
    }

    pub fn max_arity(&self) -> usize {
        self.ops.iter().map(|d| d.arity).max().unwrap_or(0)
    }

    /// Two signatures are interchangeable when they declare the same symbols
    /// with the same arities in the same order.
    pub fn same_type(&self, other: &Signature) -> bool {
        self.ops == other.ops
    }

    /// `op(x0, ..., x_{n-1})` for the declared arity of `op`.
    pub fn generic_term(&self, op: &str) -> Option<Term> {
        let decl = self.ops.iter().find(|d| &*d.name == op)?;
        Some(Term::App(
            decl.name.clone(),
            (0..decl.arity as u32).map(Term::var).collect(),
        ))
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "signature {} {{", self.name)?;
        for d in &self.ops {
            write!(f, " {}/{};", d.name, d.arity)?;
        }
        write!(f, " }}")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Var(Var),
    App(Symbol, Vec<Term>),
}

impl Term {
    pub fn var(index: u32) -> Term {
        Term::Var(Var(index))
    }

    pub fn app(op: impl Into<Symbol>, args: Vec<Term>) -> Term {
        Term::App(op.into(), args)
    }

    pub fn constant(op: impl Into<Symbol>) -> Term {
        Term::App(op.into(), Vec::new())
    }

    pub fn is_var(&self) -> bool {
        matches!(self, Term::Var(_))
    }

    pub fn as_var(&self) -> Option<Var> {
        match self {
            Term::Var(v) => Some(*v),
            Term::App(..) => None,
        }
    }

    /// Variables and constants have depth 0; `f(t1..tn)` with `n > 0` has
    /// depth one more than its deepest argument.
    pub fn depth(&self) -> usize {
        match self {
            Term::Var(_) => 0,
            Term::App(_, args) => args.iter().map(|a| a.depth() + 1).max().unwrap_or(0),
        }
    }

    /// Number of nodes.
    pub fn size(&self) -> usize {
        match self {
            Term::Var(_) => 1,
            Term::App(_, args) => 1 + args.iter().map(Term::size).sum::<usize>(),
        }
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    pub fn collect_vars(&self, out: &mut BTreeSet<Var>) {
        match self {
            Term::Var(v) => {
                out.insert(*v);
            }
            Term::App(_, args) => args.iter().for_each(|a| a.collect_vars(out)),
        }
    }

    pub fn contains_var(&self, v: Var) -> bool {
        match self {
            Term::Var(w) => *w == v,
            Term::App(_, args) => args.iter().any(|a| a.contains_var(v)),
        }
    }

    /// Checks symbols and arities against `sig`.
    pub fn check(&self, sig: &Signature) -> Result<(), TermError> {
        match self {
            Term::Var(_) => Ok(()),
            Term::App(op, args) => {
                let arity = sig
                    .arity(op)
                    .ok_or_else(|| TermError::UnknownSymbol(op.to_string()))?;
                if arity != args.len() {
                    return Err(TermError::ArityMismatch {
                        op: op.to_string(),
                        expected: arity,
                        found: args.len(),
                    });
                }
                args.iter().try_for_each(|a| a.check(sig))
            }
        }
    }

    /// All subterms in preorder, including `self`.
    pub fn subterms(&self) -> Vec<&Term> {
        let mut out = Vec::new();
        let mut stack = vec![self];
        while let Some(t) = stack.pop() {
            out.push(t);
            if let Term::App(_, args) = t {
                stack.extend(args.iter().rev());
            }
        }
        out
    }

    /// Simultaneous replacement of every variable by `f(var)`.
    pub fn map_vars(&self, f: &impl Fn(Var) -> Term) -> Term {
        match self {
            Term::Var(v) => f(*v),
            Term::App(op, args) => {
                Term::App(op.clone(), args.iter().map(|a| a.map_vars(f)).collect())
            }
        }
    }

    /// Instantiates `x_i` with `args[i]`; variables beyond `args` stay put.
    pub fn instantiate(&self, args: &[Term]) -> Term {
        self.map_vars(&|v| args.get(v.index()).cloned().unwrap_or(Term::Var(v)))
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => write!(f, "{v}"),
            Term::App(op, args) if args.is_empty() => write!(f, "{op}"),
            Term::App(op, args) => {
                write!(f, "{op}(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{a}")?;
                }
                write!(f, ")")
            }
        }
    }
}

pub fn print_term(t: &Term) -> String {
    t.to_string()
}

/// `p ≈ q`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Identity {
    pub lhs: Term,
    pub rhs: Term,
}

impl Identity {
    pub fn new(lhs: Term, rhs: Term) -> Self {
        Identity { lhs, rhs }
    }

    pub fn map_terms(&self, f: impl Fn(&Term) -> Term) -> Identity {
        Identity::new(f(&self.lhs), f(&self.rhs))
    }

    pub fn check(&self, sig: &Signature) -> Result<(), TermError> {
        self.lhs.check(sig)?;
        self.rhs.check(sig)
    }

    pub fn collect_vars(&self, out: &mut BTreeSet<Var>) {
        self.lhs.collect_vars(out);
        self.rhs.collect_vars(out);
    }

    pub fn depth(&self) -> usize {
        self.lhs.depth().max(self.rhs.depth())
    }
}

impl fmt::Display for Identity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {}", self.lhs, self.rhs)
    }
}

/// `Δ → α`. Premises behave as a set: duplicates are dropped on
/// construction and equality ignores their order, while printing keeps
/// first-occurrence order.
#[derive(Debug, Clone)]
pub struct QuasiIdentity {
    premises: Vec<Identity>,
    pub conclusion: Identity,
}

impl QuasiIdentity {
    pub fn new(premises: impl IntoIterator<Item = Identity>, conclusion: Identity) -> Self {
        let mut out: Vec<Identity> = Vec::new();
        for p in premises {
            if !out.contains(&p) {
                out.push(p);
            }
        }
        QuasiIdentity {
            premises: out,
            conclusion,
        }
    }

    /// `∅ → p ≈ q`.
    pub fn identity(lhs: Term, rhs: Term) -> Self {
        QuasiIdentity {
            premises: Vec::new(),
            conclusion: Identity::new(lhs, rhs),
        }
    }

    pub fn premises(&self) -> &[Identity] {
        &self.premises
    }

    pub fn has_premise(&self, id: &Identity) -> bool {
        self.premises.contains(id)
    }

    pub fn is_identity(&self) -> bool {
        self.premises.is_empty()
    }

    pub fn map_terms(&self, f: impl Fn(&Term) -> Term) -> QuasiIdentity {
        QuasiIdentity::new(
            self.premises.iter().map(|p| p.map_terms(&f)),
            self.conclusion.map_terms(&f),
        )
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        for p in &self.premises {
            p.collect_vars(&mut out);
        }
        self.conclusion.collect_vars(&mut out);
        out
    }

    pub fn check(&self, sig: &Signature) -> Result<(), TermError> {
        self.premises.iter().try_for_each(|p| p.check(sig))?;
        self.conclusion.check(sig)
    }

    /// Deepest term anywhere in the implication.
    pub fn depth(&self) -> usize {
        self.premises
            .iter()
            .map(Identity::depth)
            .chain(std::iter::once(self.conclusion.depth()))
            .max()
            .unwrap_or(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = &Term> {
        self.premises
            .iter()
            .chain(std::iter::once(&self.conclusion))
            .flat_map(|i| [&i.lhs, &i.rhs])
    }

    fn sorted_premises(&self) -> Vec<&Identity> {
        let mut v: Vec<&Identity> = self.premises.iter().collect();
        v.sort();
        v
    }

    /// Exact syntactic equality including premise order.
    pub fn same_layout(&self, other: &QuasiIdentity) -> bool {
        self.premises == other.premises && self.conclusion == other.conclusion
    }
}

impl PartialEq for QuasiIdentity {
    fn eq(&self, other: &Self) -> bool {
        self.conclusion == other.conclusion
            && self.premises.len() == other.premises.len()
            && self.premises.iter().all(|p| other.premises.contains(p))
    }
}

impl Eq for QuasiIdentity {}

impl Hash for QuasiIdentity {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.conclusion.hash(state);
        self.sorted_premises().hash(state);
    }
}

impl From<Identity> for QuasiIdentity {
    fn from(id: Identity) -> Self {
        QuasiIdentity {
            premises: Vec::new(),
            conclusion: id,
        }
    }
}

impl fmt::Display for QuasiIdentity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, p) in self.premises.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{p}")?;
        }
        if !self.premises.is_empty() {
            write!(f, " ")?;
        }
        write!(f, "=> {}", self.conclusion)
    }
}

/// A substitution of terms for variables; unbound variables map to themselves.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VarSubstitution {
    bindings: BTreeMap<Var, Term>,
}

impl VarSubstitution {
    pub fn identity() -> Self {
        VarSubstitution::default()
    }

    /// Trivial bindings `x ↦ x` are dropped.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (Var, Term)>) -> Self {
        let bindings = pairs
            .into_iter()
            .filter(|(v, t)| t.as_var() != Some(*v))
            .collect();
        VarSubstitution { bindings }
    }

    pub fn bindings(&self) -> &BTreeMap<Var, Term> {
        &self.bindings
    }

    pub fn is_identity(&self) -> bool {
        self.bindings.is_empty()
    }

    pub fn get(&self, v: Var) -> Term {
        self.bindings.get(&v).cloned().unwrap_or(Term::Var(v))
    }

    pub fn apply(&self, t: &Term) -> Term {
        if self.bindings.is_empty() {
            return t.clone();
        }
        t.map_vars(&|v| self.get(v))
    }

    pub fn apply_identity(&self, id: &Identity) -> Identity {
        id.map_terms(|t| self.apply(t))
    }

    pub fn apply_quasi(&self, e: &QuasiIdentity) -> QuasiIdentity {
        e.map_terms(|t| self.apply(t))
    }

    /// `self ∘ inner`: applying the result equals applying `inner`, then `self`.
    pub fn compose(&self, inner: &VarSubstitution) -> VarSubstitution {
        let mut pairs: Vec<(Var, Term)> = inner
            .bindings
            .iter()
            .map(|(v, t)| (*v, self.apply(t)))
            .collect();
        for (v, t) in &self.bindings {
            if !inner.bindings.contains_key(v) {
                pairs.push((*v, t.clone()));
            }
        }
        VarSubstitution::from_pairs(pairs)
    }

    pub fn check(&self, sig: &Signature) -> Result<(), TermError> {
        self.bindings.values().try_for_each(|t| t.check(sig))
    }
}

impl fmt::Display for VarSubstitution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, (v, t)) in self.bindings.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{v} -> {t}")?;
        }
        write!(f, "}}")
    }
}

/// Applies `delta` to a term after checking it against `sig`.
pub fn apply_var_subst(
    delta: &VarSubstitution,
    t: &Term,
    sig: &Signature,
) -> Result<Term, TermError> {
    t.check(sig)?;
    delta.check(sig)?;
    Ok(delta.apply(t))
}

pub fn compose_var_subst(outer: &VarSubstitution, inner: &VarSubstitution) -> VarSubstitution {
    outer.compose(inner)
}

/// All terms over `x0..x_{nvars-1}` of depth at most `depth`, sorted.
pub fn terms_up_to_depth(sig: &Signature, nvars: usize, depth: usize) -> Vec<Term> {
    let mut level: Vec<Term> = (0..nvars as u32).map(Term::var).collect();
    level.extend(
        sig.ops()
            .iter()
            .filter(|d| d.arity == 0)
            .map(|d| Term::App(d.name.clone(), Vec::new())),
    );
    for _ in 0..depth {
        let mut next: BTreeSet<Term> = level.iter().cloned().collect();
        for d in sig.ops().iter().filter(|d| d.arity > 0) {
            for args in cartesian(&level, d.arity) {
                next.insert(Term::App(d.name.clone(), args));
            }
        }
        level = next.into_iter().collect();
    }
    level.sort();
    level
}

/// Every `n`-tuple over `items`, in lexicographic order.
pub fn cartesian<T: Clone>(items: &[T], n: usize) -> Vec<Vec<T>> {
    let mut out = vec![Vec::with_capacity(n)];
    for _ in 0..n {
        let mut next = Vec::with_capacity(out.len() * items.len());
        for prefix in &out {
            for it in items {
                let mut p = prefix.clone();
                p.push(it.clone());
                next.push(p);
            }
        }
        out = next;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lattice() -> Signature {
        Signature::new("L", [("meet", 2), ("join", 2)]).unwrap()
    }

    fn meet(a: Term, b: Term) -> Term {
        Term::app("meet", vec![a, b])
    }

    fn join(a: Term, b: Term) -> Term {
        Term::app("join", vec![a, b])
    }

    #[test]
    fn signature_rejects_bad_declarations() {
        assert!(matches!(
            Signature::new("S", Vec::<(&str, usize)>::new()),
            Err(TermError::EmptySignature(_))
        ));
        assert!(matches!(
            Signature::new("S", [("f", 2), ("f", 1)]),
            Err(TermError::DuplicateOp(_))
        ));
        assert!(matches!(
            Signature::new("S", [("x3", 2)]),
            Err(TermError::ReservedName(_))
        ));
    }

    #[test]
    fn identity_substitution_is_noop() {
        let t = meet(Term::var(0), Term::var(1));
        let d = VarSubstitution::identity();
        assert_eq!(apply_var_subst(&d, &t, &lattice()).unwrap(), t);
    }

    #[test]
    fn swap_is_simultaneous() {
        let swap = VarSubstitution::from_pairs([(Var(0), Term::var(1)), (Var(1), Term::var(0))]);
        let t = meet(Term::var(0), join(Term::var(0), Term::var(1)));
        let expected = meet(Term::var(1), join(Term::var(1), Term::var(0)));
        assert_eq!(swap.apply(&t), expected);
        assert_eq!(swap.apply(&swap.apply(&t)), t);
    }

    #[test]
    fn single_variable_case() {
        let d = VarSubstitution::from_pairs([(Var(0), meet(Term::var(0), Term::var(0)))]);
        assert_eq!(d.apply(&Term::var(0)), meet(Term::var(0), Term::var(0)));
    }

    #[test]
    fn ill_formed_term_is_rejected() {
        let bad = Term::app("meet", vec![Term::var(0)]);
        let err = apply_var_subst(&VarSubstitution::identity(), &bad, &lattice()).unwrap_err();
        assert!(matches!(
            err,
            TermError::ArityMismatch {
                expected: 2,
                found: 1,
                ..
            }
        ));
    }

    #[test]
    fn composition_examples() {
        let d2 = VarSubstitution::from_pairs([(Var(0), meet(Term::var(1), Term::var(2)))]);
        assert_eq!(VarSubstitution::identity().compose(&d2), d2);

        let d2 = VarSubstitution::from_pairs([(Var(0), Term::var(1))]);
        let d1 = VarSubstitution::from_pairs([(Var(1), Term::var(2))]);
        assert_eq!(d1.compose(&d2).get(Var(0)), Term::var(2));

        let swap = VarSubstitution::from_pairs([(Var(0), Term::var(1)), (Var(1), Term::var(0))]);
        assert!(swap.compose(&swap).is_identity());
    }

    #[test]
    fn depth_conventions() {
        assert_eq!(Term::var(3).depth(), 0);
        assert_eq!(Term::constant("zero").depth(), 0);
        assert_eq!(meet(Term::var(0), Term::constant("zero")).depth(), 1);
        assert_eq!(
            meet(Term::var(0), join(Term::var(1), Term::var(0))).depth(),
            2
        );
    }

    #[test]
    fn premises_are_a_set() {
        let a = Identity::new(Term::var(0), Term::var(1));
        let b = Identity::new(Term::var(1), Term::var(2));
        let c = Identity::new(Term::var(0), Term::var(2));
        let e1 = QuasiIdentity::new([a.clone(), b.clone(), a.clone()], c.clone());
        let e2 = QuasiIdentity::new([b, a], c);
        assert_eq!(e1.premises().len(), 2);
        assert_eq!(e1, e2);
        assert!(!e1.same_layout(&e2));
        let hash = |e: &QuasiIdentity| {
            use std::collections::hash_map::DefaultHasher;
            let mut h = DefaultHasher::new();
            e.hash(&mut h);
            h.finish()
        };
        assert_eq!(hash(&e1), hash(&e2));
    }

    #[test]
    fn term_enumeration_counts() {
        let g = Signature::new("G", [("mul", 2)]).unwrap();
        assert_eq!(terms_up_to_depth(&g, 2, 0).len(), 2);
        assert_eq!(terms_up_to_depth(&g, 2, 1).len(), 6);
        assert_eq!(terms_up_to_depth(&g, 2, 2).len(), 38);
        assert_eq!(terms_up_to_depth(&g, 2, 3).len(), 2 + 38 * 38);
    }

    #[test]
    fn display_is_canonical() {
        let t = Term::app("f", vec![Term::var(0), Term::constant("c")]);
        assert_eq!(print_term(&t), "f(x0, c)");
        let e = QuasiIdentity::new(
            [Identity::new(Term::var(0), Term::var(1))],
            Identity::new(Term::var(1), Term::var(0)),
        );
        assert_eq!(e.to_string(), "x0 = x1 => x1 = x0");
        assert_eq!(
            QuasiIdentity::identity(Term::var(0), Term::var(0)).to_string(),
            "=> x0 = x0"
        );
    }
}
