//! Syntax for a call-by-value probabilistic language with real numbers,
//! `sample` and `score`, kept in A-normal form.
//!
//! This crate owns the AST, the primitive registry, parsing and printing,
//! capture avoiding substitution, and evaluation context decomposition.
//! Type checking and the two evaluators live in sibling crates.

pub mod ast;
pub mod decompose;
pub mod parser;
pub mod printer;
pub mod prims;
pub mod subst;

pub use ast::{PrimId, Span, Term, TermKind, Type, Value, ValueKind};
pub use decompose::{decompose, Decomposition, EvalContext};
pub use parser::{parse_program, parse_program_with, ParseError};
pub use printer::{print_term, print_value};
pub use prims::{PrimDef, PrimRegistry};
pub use subst::{substitute, substitute_value};
