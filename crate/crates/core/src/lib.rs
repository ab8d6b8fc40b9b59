//! Engines for analyzing first-order sentences over finite linear orders
//! with unary predicates: formula syntax, brute-force semantics, the
//! prefix/suffix splitting decomposition, witness types and the finite
//! companion theory, an automaton-based finite-model decision procedure,
//! interval-removal model shrinking, finite models of a tiny set theory,
//! and parameterized interpretation checking.

pub mod corpus;
pub mod interp;
pub mod relational;
pub mod semantics;
pub mod shrink;
pub mod split;
pub mod structure;
pub mod syntax;
pub mod tis;
pub mod witness;
pub mod automata;

pub use semantics::{eval, eval_sentence, find_finite_model, Assignment, Letter, WordModel};
pub use syntax::{parse, Formula, Signature, VarPartition};
