//! Quasi-identities, hypersubstitutions and M-hyperquasi-equational logic
//! over finite algebras.

pub mod algebra;
pub mod cli;
pub mod hypersub;
pub mod proof;
pub mod semantics;
pub mod syntax;
pub mod term;
pub mod workspace;
