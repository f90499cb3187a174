//! Finite algebras, term evaluation and derived algebras.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};

use thiserror::Error;

use crate::hypersub::Hypersubstitution;
use crate::term::{cartesian, Signature, Term, TermError, Var};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error(transparent)]
    Term(#[from] TermError),
    #[error("algebra `{0}` has an empty universe")]
    EmptyUniverse(String),
    #[error("element label `{0}` is declared twice")]
    DuplicateElement(String),
    #[error("no table given for `{0}`")]
    MissingOp(String),
    #[error("`{0}` is given more than one table")]
    DuplicateTable(String),
    #[error("table for `{op}` has {found} entries, expected {expected}")]
    TableShape {
        op: String,
        expected: usize,
        found: usize,
    },
    #[error("table for `{op}` has entry {value} at position {index}, outside the universe of size {size}")]
    EntryOutOfRange {
        op: String,
        index: usize,
        value: usize,
        size: usize,
    },
    #[error("variable {0} is not assigned")]
    UnassignedVariable(Var),
    #[error("algebra is over `{found}`, expected `{expected}`")]
    SignatureMismatch { expected: String, found: String },
}

/// A map from variables to universe indices.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Assignment(pub BTreeMap<Var, usize>);

impl Assignment {
    pub fn new() -> Self {
        Assignment::default()
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (Var, usize)>) -> Self {
        Assignment(pairs.into_iter().collect())
    }

    pub fn get(&self, v: Var) -> Option<usize> {
        self.0.get(&v).copied()
    }

    pub fn set(&mut self, v: Var, value: usize) {
        self.0.insert(v, value);
    }

    pub fn iter(&self) -> impl Iterator<Item = (Var, usize)> + '_ {
        self.0.iter().map(|(v, a)| (*v, *a))
    }
}

/// Anything that can look up variable values during evaluation.
pub trait Env {
    fn lookup(&self, v: Var) -> Option<usize>;
}

impl Env for Assignment {
    fn lookup(&self, v: Var) -> Option<usize> {
        self.get(v)
    }
}

/// Positional environment: `x_i` ↦ `self[i]`.
impl Env for [usize] {
    fn lookup(&self, v: Var) -> Option<usize> {
        self.get(v.index()).copied()
    }
}

/// A finite algebra. Elements are referred to by index; labels are only for
/// presentation. Tables are stored row-major, flattened, following the
/// signature's symbol order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FiniteAlgebra {
    name: String,
    sig: Signature,
    universe: Vec<String>,
    tables: Vec<Vec<usize>>,
}

impl FiniteAlgebra {
    pub fn new<S: AsRef<str>>(
        name: impl Into<String>,
        sig: Signature,
        universe: Vec<String>,
        tables: impl IntoIterator<Item = (S, Vec<usize>)>,
    ) -> Result<Self, AlgebraError> {
        let name = name.into();
        if universe.is_empty() {
            return Err(AlgebraError::EmptyUniverse(name));
        }
        for (i, label) in universe.iter().enumerate() {
            if universe[..i].contains(label) {
                return Err(AlgebraError::DuplicateElement(label.clone()));
            }
        }
        let n = universe.len();
        let mut slots: Vec<Option<Vec<usize>>> = vec![None; sig.ops().len()];
        for (op, table) in tables {
            let op = op.as_ref();
            let idx = sig
                .index_of(op)
                .ok_or_else(|| TermError::UnknownSymbol(op.to_string()))?;
            if slots[idx].is_some() {
                return Err(AlgebraError::DuplicateTable(op.to_string()));
            }
            let expected = n.pow(sig.ops()[idx].arity as u32);
            if table.len() != expected {
                return Err(AlgebraError::TableShape {
                    op: op.to_string(),
                    expected,
                    found: table.len(),
                });
            }
            if let Some((index, &value)) = table.iter().enumerate().find(|(_, &v)| v >= n) {
                return Err(AlgebraError::EntryOutOfRange {
                    op: op.to_string(),
                    index,
                    value,
                    size: n,
                });
            }
            slots[idx] = Some(table);
        }
        let tables = sig
            .ops()
            .iter()
            .zip(slots)
            .map(|(d, t)| t.ok_or_else(|| AlgebraError::MissingOp(d.name.to_string())))
            .collect::<Result<_, _>>()?;
        Ok(FiniteAlgebra {
            name,
            sig,
            universe,
            tables,
        })
    }

    /// Builds an algebra with elements labelled `0..size` from a function per symbol.
    pub fn from_fn(
        name: impl Into<String>,
        sig: Signature,
        size: usize,
        mut op: impl FnMut(&str, &[usize]) -> usize,
    ) -> Result<Self, AlgebraError> {
        let elems: Vec<usize> = (0..size).collect();
        let tables: Vec<(String, Vec<usize>)> = sig
            .ops()
            .iter()
            .map(|d| {
                let table = cartesian(&elems, d.arity)
                    .iter()
                    .map(|args| op(&d.name, args))
                    .collect();
                (d.name.to_string(), table)
            })
            .collect();
        let universe = (0..size).map(|i| i.to_string()).collect();
        FiniteAlgebra::new(name, sig, universe, tables)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn signature(&self) -> &Signature {
        &self.sig
    }

    pub fn size(&self) -> usize {
        self.universe.len()
    }

    pub fn universe(&self) -> &[String] {
        &self.universe
    }

    pub fn label(&self, element: usize) -> &str {
        &self.universe[element]
    }

    pub fn element(&self, label: &str) -> Option<usize> {
        self.universe.iter().position(|l| l == label)
    }

    /// The flattened table of the `i`-th symbol.
    pub fn table(&self, op_index: usize) -> &[usize] {
        &self.tables[op_index]
    }

    pub fn table_of(&self, op: &str) -> Option<&[usize]> {
        self.sig.index_of(op).map(|i| self.tables[i].as_slice())
    }

    /// Applies the operation named `op` to `args`.
    pub fn apply_op(&self, op: &str, args: &[usize]) -> Option<usize> {
        let i = self.sig.index_of(op)?;
        Some(self.apply_index(i, args))
    }

    fn apply_index(&self, op_index: usize, args: &[usize]) -> usize {
        let n = self.universe.len();
        let offset = args.iter().fold(0, |acc, &a| acc * n + a);
        self.tables[op_index][offset]
    }

    pub fn eval(&self, t: &Term, env: &(impl Env + ?Sized)) -> Result<usize, AlgebraError> {
        match t {
            Term::Var(v) => env.lookup(*v).ok_or(AlgebraError::UnassignedVariable(*v)),
            Term::App(op, args) => {
                let i = self
                    .sig
                    .index_of(op)
                    .ok_or_else(|| TermError::UnknownSymbol(op.to_string()))?;
                let n = self.universe.len();
                let mut offset = 0;
                for a in args {
                    offset = offset * n + self.eval(a, env)?;
                }
                Ok(self.tables[i][offset])
            }
        }
    }
}

/// Evaluates `t` in `a` under `v`.
pub fn eval(t: &Term, a: &FiniteAlgebra, v: &Assignment) -> Result<usize, AlgebraError> {
    a.eval(t, v)
}

/// The derived algebra `A^σ`: same universe, each operation replaced by the
/// term operation of its image under `σ`.
pub fn derived_algebra(
    a: &FiniteAlgebra,
    sigma: &Hypersubstitution,
) -> Result<FiniteAlgebra, AlgebraError> {
    let elems: Vec<usize> = (0..a.size()).collect();
    let mut tables = Vec::with_capacity(a.sig.ops().len());
    for d in a.sig.ops() {
        let image = sigma
            .image(&d.name)
            .ok_or_else(|| TermError::UnknownSymbol(d.name.to_string()))?;
        let table = cartesian(&elems, d.arity)
            .iter()
            .map(|args| a.eval(image, args.as_slice()))
            .collect::<Result<Vec<_>, _>>()?;
        tables.push((d.name.to_string(), table));
    }
    FiniteAlgebra::new(a.name.clone(), a.sig.clone(), a.universe.clone(), tables)
}

/// Every algebra over `sig` with universe `0..size`, in lexicographic
/// order of concatenated tables. Intended for tiny `sig`/`size` only.
pub fn all_algebras(sig: &Signature, size: usize) -> impl Iterator<Item = FiniteAlgebra> + '_ {
    let lens: Vec<usize> = sig.ops().iter().map(|d| size.pow(d.arity as u32)).collect();
    let total: usize = lens.iter().sum();
    let count = (size as u128).pow(total as u32);
    let universe: Vec<String> = (0..size).map(|i| i.to_string()).collect();
    (0..count).map(move |mut code| {
        let mut flat = vec![0usize; total];
        for slot in flat.iter_mut().rev() {
            *slot = (code % size as u128) as usize;
            code /= size as u128;
        }
        let mut tables = Vec::with_capacity(lens.len());
        let mut start = 0;
        for len in &lens {
            tables.push(flat[start..start + len].to_vec());
            start += len;
        }
        FiniteAlgebra {
            name: format!("A{size}"),
            sig: sig.clone(),
            universe: universe.clone(),
            tables,
        }
    })
}

fn write_table(out: &mut String, a: &FiniteAlgebra, table: &[usize], arity: usize) {
    if arity == 0 {
        out.push_str(a.label(table[0]));
        return;
    }
    let n = a.size();
    let chunk = n.pow(arity as u32 - 1);
    out.push('[');
    for i in 0..n {
        if i > 0 {
            out.push_str(", ");
        }
        write_table(out, a, &table[i * chunk..(i + 1) * chunk], arity - 1);
    }
    out.push(']');
}

/// Canonical DSL text for `a` (the algebra block only).
pub fn dump_algebra(a: &FiniteAlgebra) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "algebra {} over {} {{", a.name, a.sig.name());
    let _ = writeln!(out, "  elements {};", a.universe.join(" "));
    for (d, table) in a.sig.ops().iter().zip(&a.tables) {
        let _ = write!(out, "  {} = ", d.name);
        write_table(&mut out, a, table, d.arity);
        out.push_str(";\n");
    }
    out.push_str("}\n");
    out
}

impl fmt::Display for FiniteAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&dump_algebra(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lattice_sig() -> Signature {
        Signature::new("L", [("meet", 2), ("join", 2)]).unwrap()
    }

    fn l2() -> FiniteAlgebra {
        FiniteAlgebra::from_fn("L2", lattice_sig(), 2, |op, a| match op {
            "meet" => a[0].min(a[1]),
            _ => a[0].max(a[1]),
        })
        .unwrap()
    }

    fn x(i: u32) -> Term {
        Term::var(i)
    }

    #[test]
    fn variable_lookup() {
        let v = Assignment::from_pairs([(Var(0), 1)]);
        assert_eq!(eval(&x(0), &l2(), &v).unwrap(), 1);
        assert_eq!(
            eval(&x(1), &l2(), &v),
            Err(AlgebraError::UnassignedVariable(Var(1)))
        );
    }

    #[test]
    fn absorption_in_two_element_lattice() {
        let t = Term::app("meet", vec![x(0), Term::app("join", vec![x(0), x(1)])]);
        let v = Assignment::from_pairs([(Var(0), 0), (Var(1), 1)]);
        assert_eq!(eval(&t, &l2(), &v).unwrap(), 0);
    }

    #[test]
    fn negation_of_zero() {
        let sig = Signature::new(
            "B",
            [
                ("meet", 2),
                ("join", 2),
                ("not", 1),
                ("zero", 0),
                ("one", 0),
            ],
        )
        .unwrap();
        let b2 = FiniteAlgebra::from_fn("B2", sig, 2, |op, a| match op {
            "meet" => a[0] & a[1],
            "join" => a[0] | a[1],
            "not" => 1 - a[0],
            "zero" => 0,
            _ => 1,
        })
        .unwrap();
        let t = Term::app("not", vec![Term::constant("zero")]);
        assert_eq!(eval(&t, &b2, &Assignment::new()).unwrap(), 1);
    }

    #[test]
    fn identity_derivation_is_table_identical() {
        let a = l2();
        let d = derived_algebra(&a, &Hypersubstitution::identity(a.signature())).unwrap();
        assert_eq!(d, a);
    }

    #[test]
    fn swapping_meet_and_join_gives_the_dual() {
        let a = l2();
        let sig = a.signature().clone();
        let swap = Hypersubstitution::new(
            &sig,
            [
                ("meet", Term::app("join", vec![x(0), x(1)])),
                ("join", Term::app("meet", vec![x(0), x(1)])),
            ],
        )
        .unwrap();
        let d = derived_algebra(&a, &swap).unwrap();
        assert_eq!(d.table_of("meet").unwrap(), &[0, 1, 1, 1]);
        assert_eq!(d.table_of("join").unwrap(), &[0, 0, 0, 1]);
    }

    #[test]
    fn constructor_errors() {
        let sig = lattice_sig();
        let u = vec!["0".to_string(), "1".to_string()];
        assert!(matches!(
            FiniteAlgebra::new("A", sig.clone(), u.clone(), [("meet", vec![0, 0, 0, 1])]),
            Err(AlgebraError::MissingOp(_))
        ));
        assert!(matches!(
            FiniteAlgebra::new(
                "A",
                sig.clone(),
                u.clone(),
                [("meet", vec![0, 0, 1]), ("join", vec![0, 1, 1, 1])]
            ),
            Err(AlgebraError::TableShape { .. })
        ));
        let err = FiniteAlgebra::new(
            "A",
            sig.clone(),
            u.clone(),
            [("meet", vec![0, 0, 0, 2]), ("join", vec![0, 1, 1, 1])],
        )
        .unwrap_err();
        assert_eq!(
            err,
            AlgebraError::EntryOutOfRange {
                op: "meet".into(),
                index: 3,
                value: 2,
                size: 2
            }
        );
        assert!(matches!(
            FiniteAlgebra::new("A", sig, vec![], Vec::<(&str, Vec<usize>)>::new()),
            Err(AlgebraError::EmptyUniverse(_))
        ));
    }

    #[test]
    fn enumeration_counts() {
        let g = Signature::new("G", [("mul", 2)]).unwrap();
        assert_eq!(all_algebras(&g, 1).count(), 1);
        assert_eq!(all_algebras(&g, 2).count(), 16);
        let u = Signature::new("U", [("g", 1), ("c", 0)]).unwrap();
        assert_eq!(all_algebras(&u, 3).count(), 81);
    }

    #[test]
    fn dump_layout() {
        let text = dump_algebra(&l2());
        assert_eq!(
            text,
            "algebra L2 over L {\n  elements 0 1;\n  meet = [[0, 0], [0, 1]];\n  join = [[0, 1], [1, 1]];\n}\n"
        );
    }
}
