//! The primitive machines of the probabilistic calculus: real
//! constants, strict arithmetic, branching, scoring, sampling, and the
//! store monoid, plus the real-sequence codec that lets branching
//! thread arbitrary questions through a guard network.

pub mod arith;
pub mod branch;
pub mod codec;
pub mod effect;

pub use arith::{fn_machine, real_const, reals_pow};
pub use branch::cond;
pub use codec::{decode, decode_exact, encode, encode_into, DecodeError};
pub use effect::{
    sample_machine, sample_machine_rng, score_machine, shared_stream, state_mult, state_shape,
    state_unit, uniform_from,
};
