//! An algebra of token-passing machines.
//!
//! Programs compile to networks of small transducers that exchange
//! tokens over typed interfaces. This crate provides the machine type
//! itself plus the structural pieces networks are assembled from:
//! sequential and parallel composition, duality links, replication with
//! its index bookkeeping, stateless rewiring, and the feedback
//! construction that interprets recursion.

pub mod cantor;
pub mod combinators;
pub mod dagger;
pub mod dot;
pub mod exponential;
pub mod machine;
pub mod shape;
pub mod token;
pub mod wires;

pub use combinators::{compose, counit_link, identity, symmetry, tensor, unit_link};
pub use dagger::{dagger, iterant};
pub use dot::NetGraph;
pub use exponential::{bang, contraction, dereliction, digging, weakening};
pub use machine::{
    probe, probe_equiv, set_validation, validation_enabled, Machine, Moving, Port, ProbeEntry,
    ProbeResponse, State, Step, DEFAULT_FUEL,
};
pub use shape::{Polarity, Shape};
pub use token::{Nat, Token};
pub use wires::{
    assoc, assoc_inv, bang_merge, bang_split, interchange, lunitor, lunitor_inv, pad, retag_dom,
    runitor, runitor_inv,
};
