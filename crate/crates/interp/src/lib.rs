//! From programs to token machines.
//!
//! This crate turns a type checked program into a [`goi_core::Machine`]
//! that computes it by message passing. Running a program means holding
//! a dialogue with the compiled machine: push a weighted store through
//! its left port, collect the transformed store, then ask for the result
//! on the right port. Here live the compiler itself and the interface
//! assignment; driving the dialogue is the caller's business.

mod compile;
mod shapes;

pub use compile::{
    compile_program, interp_term, interp_value, Compiled, CompileOptions, SampleMode,
};
pub use shapes::{ctx_shape, type_shape};
