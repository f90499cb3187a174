//! Satisfaction of quasi-identities in finite algebras: classical, under a
//! monoid of hypersubstitutions, and the solidity check built on derived
//! algebras. Also hosts the 0-semilattice / flat-algebra checks.
//!
//! Every check is exhaustive. Assignments are enumerated lexicographically
//! over the sorted variables of the formula (the smallest variable is the
//! most significant digit) and monoid elements in their sorted order, so
//! the first counterexample found is canonical.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::algebra::{derived_algebra, AlgebraError, Assignment, FiniteAlgebra};
use crate::hypersub::{
    is_mf_member, monoid_elements, HypersubError, Hypersubstitution, MonoidSpec,
};
use crate::term::{terms_up_to_depth, Identity, QuasiIdentity, Signature, Term, TermError, Var};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SemanticsError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Hypersub(#[from] HypersubError),
    #[error(transparent)]
    Term(#[from] TermError),
    #[error("signature mismatch: algebra is over `{algebra}`, formula over `{formula}`")]
    SignatureMismatch { algebra: String, formula: String },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("fresh-variable pool exhausted: needed {needed}, have {available}")]
    PoolExhausted { needed: usize, available: usize },
    #[error("fresh-variable pool must be duplicate-free and avoid {0}")]
    InvalidPool(Var),
}

/// A set of quasi-identities over one signature.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TheorySet {
    pub name: String,
    pub sig: Signature,
    pub items: Vec<QuasiIdentity>,
}

impl TheorySet {
    pub fn new(
        name: impl Into<String>,
        sig: Signature,
        items: impl IntoIterator<Item = QuasiIdentity>,
    ) -> Result<Self, TermError> {
        let items: Vec<QuasiIdentity> = items.into_iter().collect();
        for e in &items {
            e.check(&sig)?;
        }
        Ok(TheorySet {
            name: name.into(),
            sig,
            items,
        })
    }

    pub fn empty(name: impl Into<String>, sig: Signature) -> Self {
        TheorySet {
            name: name.into(),
            sig,
            items: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }
}

/// A failing instance: under `assignment`, every premise of the (possibly
/// hypersubstituted) formula holds but `failed` does not.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CounterExample {
    pub sigma: Option<Hypersubstitution>,
    /// Index of the failing item when a whole theory was checked.
    pub item: Option<usize>,
    pub assignment: Assignment,
    pub failed: Identity,
    pub lhs_value: usize,
    pub rhs_value: usize,
}

impl CounterExample {
    /// Re-evaluates the witness against `e` in `a`; true iff it still refutes `e`.
    pub fn replay(&self, a: &FiniteAlgebra, e: &QuasiIdentity) -> Result<bool, SemanticsError> {
        let e = match &self.sigma {
            Some(s) => s.apply_quasi(e)?,
            None => e.clone(),
        };
        for p in e.premises() {
            if a.eval(&p.lhs, &self.assignment)? != a.eval(&p.rhs, &self.assignment)? {
                return Ok(false);
            }
        }
        let l = a.eval(&e.conclusion.lhs, &self.assignment)?;
        let r = a.eval(&e.conclusion.rhs, &self.assignment)?;
        Ok(l != r && l == self.lhs_value && r == self.rhs_value && e.conclusion == self.failed)
    }

    /// JSON form with element labels from `a`.
    pub fn to_json(&self, a: &FiniteAlgebra) -> WitnessJson {
        WitnessJson {
            sigma: self.sigma.as_ref().map(|s| s.to_string()),
            item: self.item,
            assignment: self
                .assignment
                .iter()
                .map(|(v, e)| (v.to_string(), a.label(e).to_string()))
                .collect(),
            failed: self.failed.to_string(),
            lhs_value: a.label(self.lhs_value).to_string(),
            rhs_value: a.label(self.rhs_value).to_string(),
        }
    }

    pub fn describe(&self, a: &FiniteAlgebra) -> String {
        let mut s = String::new();
        if let Some(sigma) = &self.sigma {
            s.push_str(&format!("under σ = {sigma}: "));
        }
        let vals: Vec<String> = self
            .assignment
            .iter()
            .map(|(v, e)| format!("{v} ↦ {}", a.label(e)))
            .collect();
        s.push_str(&format!(
            "[{}] gives {} but {} ≠ {}",
            vals.join(", "),
            self.failed,
            a.label(self.lhs_value),
            a.label(self.rhs_value)
        ));
        s
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WitnessJson {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sigma: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub item: Option<usize>,
    pub assignment: Vec<(String, String)>,
    pub failed: String,
    pub lhs_value: String,
    pub rhs_value: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Holds,
    Fails(Box<CounterExample>),
}

impl Verdict {
    pub fn holds(&self) -> bool {
        matches!(self, Verdict::Holds)
    }

    pub fn counterexample(&self) -> Option<&CounterExample> {
        match self {
            Verdict::Holds => None,
            Verdict::Fails(c) => Some(c),
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(if self.holds() { "HOLDS" } else { "FAILS" })
    }
}

fn check_sig(a: &FiniteAlgebra, sig: &Signature) -> Result<(), SemanticsError> {
    if a.signature().same_type(sig) {
        Ok(())
    } else {
        Err(SemanticsError::SignatureMismatch {
            algebra: a.signature().name().to_string(),
            formula: sig.name().to_string(),
        })
    }
}

/// Odometer over all maps `vars → 0..size`.
struct Assignments {
    vars: Vec<Var>,
    size: usize,
    digits: Vec<usize>,
    done: bool,
}

impl Assignments {
    fn new(vars: Vec<Var>, size: usize) -> Self {
        let digits = vec![0; vars.len()];
        Assignments {
            vars,
            size,
            digits,
            done: size == 0,
        }
    }

    /// Writes the current assignment into a positional buffer.
    fn fill(&self, env: &mut [usize]) {
        for (v, d) in self.vars.iter().zip(&self.digits) {
            env[v.index()] = *d;
        }
    }

    fn advance(&mut self) {
        for k in (0..self.digits.len()).rev() {
            self.digits[k] += 1;
            if self.digits[k] < self.size {
                return;
            }
            self.digits[k] = 0;
        }
        self.done = true;
    }

    fn current(&self) -> Assignment {
        Assignment::from_pairs(self.vars.iter().copied().zip(self.digits.iter().copied()))
    }
}

fn first_failure(
    a: &FiniteAlgebra,
    e: &QuasiIdentity,
) -> Result<Option<CounterExample>, SemanticsError> {
    let vars: Vec<Var> = e.vars().into_iter().collect();
    let width = vars.last().map(|v| v.index() + 1).unwrap_or(0);
    let mut env = vec![0usize; width];
    let mut it = Assignments::new(vars, a.size());
    while !it.done {
        it.fill(&mut env);
        let mut premises_hold = true;
        for p in e.premises() {
            if a.eval(&p.lhs, env.as_slice())? != a.eval(&p.rhs, env.as_slice())? {
                premises_hold = false;
                break;
            }
        }
        if premises_hold {
            let l = a.eval(&e.conclusion.lhs, env.as_slice())?;
            let r = a.eval(&e.conclusion.rhs, env.as_slice())?;
            if l != r {
                return Ok(Some(CounterExample {
                    sigma: None,
                    item: None,
                    assignment: it.current(),
                    failed: e.conclusion.clone(),
                    lhs_value: l,
                    rhs_value: r,
                }));
            }
        }
        it.advance();
    }
    Ok(None)
}

/// `A ⊨ e`: every assignment satisfying the premises satisfies the conclusion.
pub fn satisfies_quasi(a: &FiniteAlgebra, e: &QuasiIdentity) -> Result<Verdict, SemanticsError> {
    e.check(a.signature())?;
    Ok(match first_failure(a, e)? {
        None => Verdict::Holds,
        Some(c) => Verdict::Fails(Box::new(c)),
    })
}

pub fn satisfies_theory(a: &FiniteAlgebra, theory: &TheorySet) -> Result<Verdict, SemanticsError> {
    check_sig(a, &theory.sig)?;
    for (i, e) in theory.items.iter().enumerate() {
        if let Some(mut c) = first_failure(a, e)? {
            c.item = Some(i);
            return Ok(Verdict::Fails(Box::new(c)));
        }
    }
    Ok(Verdict::Holds)
}

fn hyper_check_elements(
    a: &FiniteAlgebra,
    e: &QuasiIdentity,
    elements: &[Hypersubstitution],
) -> Result<Option<CounterExample>, SemanticsError> {
    for sigma in elements {
        let image = sigma.apply_quasi(e)?;
        if let Some(mut c) = first_failure(a, &image)? {
            c.sigma = Some(sigma.clone());
            return Ok(Some(c));
        }
    }
    Ok(None)
}

/// `A ⊨_H^M e`: `A ⊨ σ(e)` for every enumerated `σ ∈ M`.
pub fn hyper_satisfies(
    a: &FiniteAlgebra,
    e: &QuasiIdentity,
    m: &MonoidSpec,
) -> Result<Verdict, SemanticsError> {
    e.check(a.signature())?;
    let elements = monoid_elements(m, a.signature())?;
    Ok(match hyper_check_elements(a, e, &elements)? {
        None => Verdict::Holds,
        Some(c) => Verdict::Fails(Box::new(c)),
    })
}

/// Same as [`hyper_satisfies`] with the monoid already enumerated.
pub fn hyper_satisfies_with(
    a: &FiniteAlgebra,
    e: &QuasiIdentity,
    elements: &[Hypersubstitution],
) -> Result<Verdict, SemanticsError> {
    Ok(match hyper_check_elements(a, e, elements)? {
        None => Verdict::Holds,
        Some(c) => Verdict::Fails(Box::new(c)),
    })
}

/// Conjunction over the items of `theory`; the first failing item wins.
pub fn hyper_satisfies_theory(
    a: &FiniteAlgebra,
    theory: &TheorySet,
    m: &MonoidSpec,
) -> Result<Verdict, SemanticsError> {
    check_sig(a, &theory.sig)?;
    let elements = monoid_elements(m, a.signature())?;
    hyper_satisfies_theory_with(a, theory, &elements)
}

pub fn hyper_satisfies_theory_with(
    a: &FiniteAlgebra,
    theory: &TheorySet,
    elements: &[Hypersubstitution],
) -> Result<Verdict, SemanticsError> {
    for (i, e) in theory.items.iter().enumerate() {
        if let Some(mut c) = hyper_check_elements(a, e, elements)? {
            c.item = Some(i);
            return Ok(Verdict::Fails(Box::new(c)));
        }
    }
    Ok(Verdict::Holds)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolidityFailure {
    pub algebra: String,
    pub sigma: Hypersubstitution,
    pub counterexample: CounterExample,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolidityReport {
    pub witnesses: usize,
    pub monoid_size: usize,
    /// Set when the monoid is infinite and was enumerated up to this image depth.
    pub depth_bound: Option<usize>,
    pub failures: Vec<SolidityFailure>,
}

impl SolidityReport {
    pub fn holds(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Finite-witness approximation of `D_M(QV) ⊆ QV`: every derived algebra
/// `A^σ` of every witness must again satisfy `bases`.
pub fn is_m_solid(
    bases: &TheorySet,
    witnesses: &[FiniteAlgebra],
    m: &MonoidSpec,
) -> Result<SolidityReport, SemanticsError> {
    for a in witnesses {
        check_sig(a, &bases.sig)?;
        if let Verdict::Fails(c) = satisfies_theory(a, bases)? {
            return Err(SemanticsError::Precondition(format!(
                "witness `{}` does not satisfy the bases: {}",
                a.name(),
                c.describe(a)
            )));
        }
    }
    let elements = monoid_elements(m, &bases.sig)?;
    let mut failures = Vec::new();
    for a in witnesses {
        for sigma in &elements {
            let derived = derived_algebra(a, sigma)?;
            if let Verdict::Fails(c) = satisfies_theory(&derived, bases)? {
                failures.push(SolidityFailure {
                    algebra: a.name().to_string(),
                    sigma: sigma.clone(),
                    counterexample: *c,
                });
            }
        }
    }
    Ok(SolidityReport {
        witnesses: witnesses.len(),
        monoid_size: elements.len(),
        depth_bound: m.depth_bound(),
        failures,
    })
}

fn require_symbol(sig: &Signature, name: &str, arity: usize) -> Result<(), SemanticsError> {
    match sig.arity(name) {
        Some(a) if a == arity => Ok(()),
        Some(a) => Err(TermError::ArityMismatch {
            op: name.to_string(),
            expected: arity,
            found: a,
        }
        .into()),
        None => Err(TermError::UnknownSymbol(name.to_string()).into()),
    }
}

fn meet_term(meet: &str, a: Term, b: Term) -> Term {
    Term::app(meet, vec![a, b])
}

/// Associativity, commutativity and idempotence of `meet`, and absorption
/// `f(.., zero, ..) = zero` for every symbol `f` of positive arity and every
/// argument position.
pub fn zero_semilattice_base(
    sig: &Signature,
    meet: &str,
    zero: &str,
) -> Result<TheorySet, SemanticsError> {
    require_symbol(sig, meet, 2)?;
    require_symbol(sig, zero, 0)?;
    let x = Term::var(0);
    let y = Term::var(1);
    let z = Term::var(2);
    let mut items = vec![
        QuasiIdentity::identity(
            meet_term(meet, x.clone(), meet_term(meet, y.clone(), z.clone())),
            meet_term(meet, meet_term(meet, x.clone(), y.clone()), z),
        ),
        QuasiIdentity::identity(
            meet_term(meet, x.clone(), y.clone()),
            meet_term(meet, y, x.clone()),
        ),
        QuasiIdentity::identity(meet_term(meet, x.clone(), x.clone()), x),
    ];
    for d in sig.ops().iter().filter(|d| d.arity > 0) {
        for i in 0..d.arity {
            let args = (0..d.arity)
                .map(|j| {
                    if j == i {
                        Term::constant(zero)
                    } else {
                        Term::var(j as u32)
                    }
                })
                .collect();
            items.push(QuasiIdentity::identity(
                Term::App(d.name.clone(), args),
                Term::constant(zero),
            ));
        }
    }
    Ok(TheorySet::new("ZeroSemilattice", sig.clone(), items)?)
}

/// `f(.., x ∧ y, ..) = f(.., x, ..) ∧ f(.., y, ..)` for every `f` of
/// positive arity and every argument position.
pub fn compatibility_laws(
    sig: &Signature,
    meet: &str,
) -> Result<Vec<QuasiIdentity>, SemanticsError> {
    require_symbol(sig, meet, 2)?;
    let mut out = Vec::new();
    for d in sig.ops().iter().filter(|d| d.arity > 0) {
        for i in 0..d.arity {
            let with = |t: Term| -> Term {
                let args = (0..d.arity)
                    .map(|j| {
                        if j == i {
                            t.clone()
                        } else {
                            Term::var(2 + j as u32)
                        }
                    })
                    .collect();
                Term::App(d.name.clone(), args)
            };
            out.push(QuasiIdentity::identity(
                with(meet_term(meet, Term::var(0), Term::var(1))),
                meet_term(meet, with(Term::var(0)), with(Term::var(1))),
            ));
        }
    }
    Ok(out)
}

pub fn is_zero_semilattice(
    a: &FiniteAlgebra,
    meet: &str,
    zero: &str,
) -> Result<Verdict, SemanticsError> {
    let base = zero_semilattice_base(a.signature(), meet, zero)?;
    satisfies_theory(a, &base)
}

/// 0-semilattice algebra whose meet sends every pair of distinct elements to zero.
pub fn is_flat(a: &FiniteAlgebra, meet: &str, zero: &str) -> Result<bool, SemanticsError> {
    if !is_zero_semilattice(a, meet, zero)?.holds() {
        return Ok(false);
    }
    let z = a.eval(&Term::constant(zero), &Assignment::new())?;
    for x in 0..a.size() {
        for y in 0..a.size() {
            if x != y && a.apply_op(meet, &[x, y]) != Some(z) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// 0-semilattice algebra whose operations distribute over meet in each argument.
pub fn is_compatible(a: &FiniteAlgebra, meet: &str, zero: &str) -> Result<bool, SemanticsError> {
    if !is_zero_semilattice(a, meet, zero)?.holds() {
        return Ok(false);
    }
    for law in compatibility_laws(a.signature(), meet)? {
        if !satisfies_quasi(a, &law)?.holds() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Placeholder for side variables before canonical renaming.
const SIDE: Var = Var(u32::MAX);

/// Basic `x`-terms of exactly `depth`: `x` at depth 0, and at depth `n` every
/// `f(y.., t, ..y)` with `t` basic of depth `n - 1` and the remaining
/// arguments fresh variables. Fresh variables are taken from `pool` in
/// left-to-right order of occurrence.
pub fn basic_x_terms(
    sig: &Signature,
    x: Var,
    depth: usize,
    pool: &[Var],
) -> Result<Vec<Term>, SemanticsError> {
    for (i, v) in pool.iter().enumerate() {
        if *v == x || pool[..i].contains(v) || *v == SIDE {
            return Err(SemanticsError::InvalidPool(x));
        }
    }
    let mut level = vec![Term::Var(x)];
    for _ in 0..depth {
        let mut next = Vec::new();
        for d in sig.ops().iter().filter(|d| d.arity > 0) {
            for pos in 0..d.arity {
                for inner in &level {
                    let args = (0..d.arity)
                        .map(|j| {
                            if j == pos {
                                inner.clone()
                            } else {
                                Term::Var(SIDE)
                            }
                        })
                        .collect();
                    next.push(Term::App(d.name.clone(), args));
                }
            }
        }
        level = next;
    }
    level
        .into_iter()
        .map(|t| {
            let mut counter = 0usize;
            let t = name_side_vars(&t, pool, &mut counter);
            if counter > pool.len() {
                Err(SemanticsError::PoolExhausted {
                    needed: counter,
                    available: pool.len(),
                })
            } else {
                Ok(t)
            }
        })
        .collect()
}

fn name_side_vars(t: &Term, pool: &[Var], counter: &mut usize) -> Term {
    match t {
        Term::Var(v) if *v == SIDE => {
            let out = pool
                .get(*counter)
                .map(|v| Term::Var(*v))
                .unwrap_or(Term::Var(SIDE));
            *counter += 1;
            out
        }
        Term::Var(_) => t.clone(),
        Term::App(op, args) => Term::App(
            op.clone(),
            args.iter()
                .map(|a| name_side_vars(a, pool, counter))
                .collect(),
        ),
    }
}

/// `x1, x2, ...` skipping `x`.
pub fn default_pool(x: Var, len: usize) -> Vec<Var> {
    (0u32..).map(Var).filter(|v| *v != x).take(len).collect()
}

/// Recognizes basic `x`-terms and returns their depth. Side variables must
/// be pairwise distinct across all levels.
pub fn basic_depth(t: &Term, x: Var) -> Option<usize> {
    let mut side = Vec::new();
    basic_depth_in(t, x, &mut side)
}

fn basic_depth_in(t: &Term, x: Var, side: &mut Vec<Var>) -> Option<usize> {
    match t {
        Term::Var(v) if *v == x => Some(0),
        Term::Var(_) => None,
        Term::App(_, args) => {
            let mut found: Option<&Term> = None;
            for a in args {
                match a.as_var() {
                    Some(v) if v != x => {
                        if side.contains(&v) {
                            return None;
                        }
                        side.push(v);
                    }
                    _ => {
                        if found.is_some() {
                            return None;
                        }
                        found = Some(a);
                    }
                }
            }
            Some(basic_depth_in(found?, x, side)? + 1)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PreservationReport {
    pub checked: usize,
    /// First basic term whose image is not basic of the same depth, with that image.
    pub violation: Option<(Term, Term)>,
}

impl PreservationReport {
    pub fn holds(&self) -> bool {
        self.violation.is_none()
    }
}

/// Checks that `σ` maps every basic `x0`-term of depth `≤ depth_max` to a
/// basic `x0`-term of the same depth. `σ` must have fundamental-form images.
pub fn check_basic_term_preservation(
    sigma: &Hypersubstitution,
    sig: &Signature,
    depth_max: usize,
) -> Result<PreservationReport, SemanticsError> {
    if !is_mf_member(sigma, sig) {
        return Err(SemanticsError::Precondition(format!(
            "{sigma} has an image that is not one symbol applied to variables"
        )));
    }
    let x = Var(0);
    let pool = default_pool(x, depth_max * sig.max_arity().saturating_sub(1));
    let mut checked = 0;
    for depth in 0..=depth_max {
        for t in basic_x_terms(sig, x, depth, &pool)? {
            checked += 1;
            let image = sigma.apply(&t)?;
            if basic_depth(&image, x) != Some(depth) {
                return Ok(PreservationReport {
                    checked,
                    violation: Some((t, image)),
                });
            }
        }
    }
    Ok(PreservationReport {
        checked,
        violation: None,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AbsorptionViolation {
    pub term: Term,
    pub position: Var,
    pub assignment: Assignment,
    pub value: usize,
}

/// For every non-variable term `p` of depth `≤ depth_max` over
/// `x0..x_{nvars-1}` and every variable `x` occurring in `p`, checks that
/// `p` evaluates to zero whenever `x` is zero. Terms are visited by
/// increasing depth and size, so a reported violation is minimal.
pub fn check_absorption_star(
    a: &FiniteAlgebra,
    meet: &str,
    zero: &str,
    depth_max: usize,
    nvars: usize,
) -> Result<Option<AbsorptionViolation>, SemanticsError> {
    if let Verdict::Fails(c) = is_zero_semilattice(a, meet, zero)? {
        return Err(SemanticsError::Precondition(format!(
            "`{}` is not a 0-semilattice algebra: {}",
            a.name(),
            c.describe(a)
        )));
    }
    let z = a.eval(&Term::constant(zero), &Assignment::new())?;
    let mut terms: Vec<Term> = terms_up_to_depth(a.signature(), nvars, depth_max)
        .into_iter()
        .filter(|t| !t.is_var())
        .collect();
    terms.sort_by(|p, q| (p.depth(), p.size(), p).cmp(&(q.depth(), q.size(), q)));
    for p in terms {
        let vars: Vec<Var> = p.vars().into_iter().collect();
        for &pos in &vars {
            let rest: Vec<Var> = vars.iter().copied().filter(|v| *v != pos).collect();
            let mut env = vec![0usize; nvars.max(1)];
            let mut it = Assignments::new(rest, a.size());
            while !it.done {
                it.fill(&mut env);
                env[pos.index()] = z;
                let value = a.eval(&p, env.as_slice())?;
                if value != z {
                    let mut assignment = it.current();
                    assignment.set(pos, z);
                    return Ok(Some(AbsorptionViolation {
                        term: p,
                        position: pos,
                        assignment,
                        value,
                    }));
                }
                it.advance();
            }
        }
    }
    Ok(None)
}
