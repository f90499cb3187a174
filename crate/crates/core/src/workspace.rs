//! A registry of named definitions loaded from one or more text files.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use thiserror::Error;

use crate::algebra::{dump_algebra, FiniteAlgebra};
use crate::hypersub::{Hypersubstitution, MonoidSpec, Preset};
use crate::proof::{Logic, Proof};
use crate::semantics::TheorySet;
use crate::syntax::{
    self, dump_hypersub, dump_monoid, dump_proof, dump_signature, dump_theory, dump_theory_vars,
    ParseError,
};
use crate::term::Signature;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NamedHypersub {
    pub name: String,
    pub sig: String,
    pub sigma: Hypersubstitution,
}

/// How a monoid was written, kept for printing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MonoidSource {
    Elements(Vec<String>),
    Generators(Vec<String>, usize),
    Preset(Preset),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonoidDef {
    pub name: String,
    pub sig: String,
    pub spec: MonoidSpec,
    pub source: MonoidSource,
}

#[derive(Debug, Error)]
pub enum WorkspaceError {
    #[error("{origin}:{error}")]
    Parse { origin: String, error: ParseError },
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    #[error("unknown {kind} `{name}`")]
    Unresolved { kind: &'static str, name: String },
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Workspace {
    pub signatures: BTreeMap<String, Signature>,
    pub algebras: BTreeMap<String, FiniteAlgebra>,
    pub hypersubs: BTreeMap<String, NamedHypersub>,
    pub monoids: BTreeMap<String, MonoidDef>,
    pub theories: BTreeMap<String, TheorySet>,
    pub proofs: BTreeMap<String, Proof>,
    /// Variable names declared by `vars` in a theory block; proofs from
    /// that theory inherit them.
    pub theory_vars: BTreeMap<String, Vec<String>>,
}

fn unresolved(kind: &'static str, name: &str) -> WorkspaceError {
    WorkspaceError::Unresolved {
        kind,
        name: name.to_string(),
    }
}

impl Workspace {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds the definitions of `text`; `origin` names it in error messages.
    /// Later blocks may refer to anything already loaded.
    pub fn load_str(&mut self, text: &str, origin: &str) -> Result<(), WorkspaceError> {
        syntax::parse_into(self, text).map_err(|error| WorkspaceError::Parse {
            origin: origin.to_string(),
            error,
        })
    }

    pub fn load_file(&mut self, path: impl AsRef<Path>) -> Result<(), WorkspaceError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| WorkspaceError::Io {
            path: path.display().to_string(),
            message: e.to_string(),
        })?;
        self.load_str(&text, &path.display().to_string())
    }

    /// Loads files in order.
    pub fn from_files<P: AsRef<Path>>(
        paths: impl IntoIterator<Item = P>,
    ) -> Result<Self, WorkspaceError> {
        let mut ws = Workspace::new();
        for p in paths {
            ws.load_file(p)?;
        }
        Ok(ws)
    }

    pub fn parse(text: &str) -> Result<Self, WorkspaceError> {
        let mut ws = Workspace::new();
        ws.load_str(text, "<input>")?;
        Ok(ws)
    }

    pub fn signature(&self, name: &str) -> Result<&Signature, WorkspaceError> {
        self.signatures
            .get(name)
            .ok_or_else(|| unresolved("signature", name))
    }

    pub fn algebra(&self, name: &str) -> Result<&FiniteAlgebra, WorkspaceError> {
        self.algebras
            .get(name)
            .ok_or_else(|| unresolved("algebra", name))
    }

    pub fn hypersub(&self, name: &str) -> Result<&NamedHypersub, WorkspaceError> {
        self.hypersubs
            .get(name)
            .ok_or_else(|| unresolved("hypersub", name))
    }

    pub fn monoid(&self, name: &str) -> Result<&MonoidDef, WorkspaceError> {
        self.monoids
            .get(name)
            .ok_or_else(|| unresolved("monoid", name))
    }

    pub fn theory(&self, name: &str) -> Result<&TheorySet, WorkspaceError> {
        self.theories
            .get(name)
            .ok_or_else(|| unresolved("theory", name))
    }

    pub fn proof(&self, name: &str) -> Result<&Proof, WorkspaceError> {
        self.proofs
            .get(name)
            .ok_or_else(|| unresolved("proof", name))
    }

    /// The name of a registered hypersubstitution equal to `sigma`.
    pub fn name_of(&self, sig: &Signature, sigma: &Hypersubstitution) -> Option<&str> {
        self.hypersubs
            .values()
            .find(|h| h.sig == sig.name() && h.sigma == *sigma)
            .map(|h| h.name.as_str())
    }

    fn hypersubs_over(&self, sig: &Signature) -> String {
        let mut out = String::new();
        for h in self.hypersubs.values().filter(|h| h.sig == sig.name()) {
            out.push_str(&dump_hypersub(&h.name, sig, &h.sigma));
        }
        out
    }

    fn dump_theory(&self, t: &TheorySet) -> String {
        match self.theory_vars.get(&t.name) {
            Some(vars) if self.theories.get(&t.name) == Some(t) => dump_theory_vars(t, vars),
            _ => dump_theory(t),
        }
    }

    /// A self-contained file holding `a` and its signature.
    pub fn render_algebra(a: &FiniteAlgebra) -> String {
        format!("{}{}", dump_signature(a.signature()), dump_algebra(a))
    }

    pub fn render_theory(t: &TheorySet) -> String {
        format!("{}{}", dump_signature(&t.sig), dump_theory(t))
    }

    /// Signature, the registered hypersubstitutions over it, the monoid of
    /// the proof's logic, its theory and the proof itself.
    pub fn render_proof(&self, proof: &Proof) -> String {
        let sig = proof.signature();
        let mut out = dump_signature(sig);
        out.push_str(&self.hypersubs_over(sig));
        if let Logic::MHQ { monoid, spec } = &proof.logic {
            match self.monoids.get(monoid) {
                Some(def) => out.push_str(&dump_monoid(def)),
                None => {
                    let _ = writeln!(out, "# monoid {monoid} is not registered: {spec:?}");
                }
            }
        }
        if proof.theory.name != "none" || !proof.theory.items.is_empty() {
            out.push_str(&self.dump_theory(&proof.theory));
        }
        out.push_str(&dump_proof(proof));
        out
    }

    /// Everything in the workspace, in dependency order.
    pub fn render_all(&self) -> String {
        let mut out = String::new();
        for sig in self.signatures.values() {
            out.push_str(&dump_signature(sig));
        }
        for a in self.algebras.values() {
            out.push_str(&dump_algebra(a));
        }
        for h in self.hypersubs.values() {
            if let Some(sig) = self.signatures.get(&h.sig) {
                out.push_str(&dump_hypersub(&h.name, sig, &h.sigma));
            }
        }
        for m in self.monoids.values() {
            out.push_str(&dump_monoid(m));
        }
        for t in self.theories.values() {
            out.push_str(&self.dump_theory(t));
        }
        for p in self.proofs.values() {
            out.push_str(&dump_proof(p));
        }
        out
    }
}
