//! Effectful machines: scoring, sampling, and the store monoid.
//!
//! The store interface `S` pairs a store with its dual, so a store
//! question is a positive store token arriving on the dual summand and
//! a store answer is a positive store token leaving on the first.

use goi_core::{
    assoc, assoc_inv, compose, counit_link, identity, lunitor, tensor, unit_link, Machine,
    Moving, Port, Shape, State, Step, Token,
};
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use std::sync::{Arc, Mutex};

/// The store interface `S`.
pub fn state_shape() -> Shape {
    Shape::state()
}

/// Scoring `R -> S`: multiplies the weight by the absolute value of
/// the scored real. The incoming weight rides through the value
/// network at the head of the question, in front of the trace.
pub fn score_machine() -> Machine {
    Machine::stateless(Shape::Reals, state_shape(), |mov| {
        match (mov.port, &mov.token) {
            (Port::Cod, Token::InL(s)) => {
                let Token::Store(w, trace) = &**s else { return None };
                let mut q = Vec::with_capacity(trace.len() + 1);
                q.push(*w);
                q.extend_from_slice(trace);
                Some(Moving::dom(Token::Seq(q)))
            }
            (Port::Dom, Token::Seq(u)) => {
                let [v, w, trace @ ..] = u.as_slice() else { return None };
                if !trace.iter().all(|e| (0.0..=1.0).contains(e)) {
                    return None;
                }
                Some(Moving::cod(Token::inl(Token::Store(
                    (v * w).abs(),
                    trace.to_vec(),
                ))))
            }
            _ => None,
        }
    })
}

/// Sampling `1 -> S (x) !R`: pops the head of the trace on the store
/// pass and thereafter serves the popped value to every replicated
/// consumer. The store transition happens exactly once.
pub fn sample_machine() -> Machine {
    sample_with(SampleSource::Trace)
}

/// Sampling that draws from a shared deterministic stream instead of
/// consuming the trace (which passes through untouched).
///
/// The handle is shared: replicated copies of this machine all pull
/// from the same stream, so each copy memoizes its own independent
/// draw. Keeping the generator in per-copy state would hand every
/// copy the same initial generator and thus the same value.
pub fn sample_machine_rng(rng: Arc<Mutex<ChaCha8Rng>>) -> Machine {
    sample_with(SampleSource::Stream(rng))
}

/// Creates a fresh shared stream for [`sample_machine_rng`].
pub fn shared_stream(seed: u64, stream: u64) -> Arc<Mutex<ChaCha8Rng>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    Arc::new(Mutex::new(rng))
}

/// One uniform draw in [0, 1) with 53 random bits.
pub fn uniform_from(rng: &mut ChaCha8Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

enum SampleSource {
    Trace,
    Stream(Arc<Mutex<ChaCha8Rng>>),
}

fn sample_with(source: SampleSource) -> Machine {
    let cod = Shape::tensor(state_shape(), Shape::bang(Shape::Reals));
    Machine::new(
        Shape::One,
        cod,
        State::Real(None),
        move |mov, state| {
            let State::Real(memo) = state else { return Step::Undefined };
            match (mov.port, &mov.token, memo) {
                // The store pass: take the sample, let the rest of the
                // trace through.
                (Port::Cod, Token::InR(s), None) => {
                    let Token::InL(store) = &**s else { return Step::Undefined };
                    let Token::Store(w, trace) = &**store else {
                        return Step::Undefined;
                    };
                    let (b, rest) = match &source {
                        SampleSource::Trace => {
                            let Some((head, rest)) = trace.split_first() else {
                                return Step::Undefined;
                            };
                            (*head, rest.to_vec())
                        }
                        SampleSource::Stream(rng) => {
                            let mut rng = rng.lock().expect("sample stream poisoned");
                            (uniform_from(&mut rng), trace.clone())
                        }
                    };
                    Step::Out(
                        Moving::cod(Token::inl(Token::inl(Token::Store(*w, rest)))),
                        State::Real(Some(b)),
                    )
                }
                // Replicated reads of the memoized value.
                (Port::Cod, Token::InL(s), Some(b)) => {
                    let Token::Idx(n, q) = &**s else { return Step::Undefined };
                    let Token::Seq(u) = &**q else { return Step::Undefined };
                    let mut v = Vec::with_capacity(u.len() + 1);
                    v.push(*b);
                    v.extend_from_slice(u);
                    Step::Out(
                        Moving::cod(Token::inr(Token::idx(n.clone(), Token::Seq(v)))),
                        state.clone(),
                    )
                }
                _ => Step::Undefined,
            }
        },
    )
}

/// The empty store `1 -> S`: answers every store question with the
/// store untouched.
pub fn state_unit() -> Machine {
    unit_link(Shape::Store)
}

/// Store multiplication `S (x) S -> S`: runs the second store action
/// first, threading its result into the first.
pub fn state_mult(fuel: u64) -> Machine {
    let w = Shape::Store;
    let dw = Shape::dual(w.clone());
    let s = state_shape();
    let chain = [
        tensor(
            &identity(w.clone()),
            &assoc_inv(dw.clone(), w.clone(), dw.clone()),
        ),
        tensor(
            &identity(w.clone()),
            &tensor(&counit_link(w.clone()), &identity(dw.clone())),
        ),
        tensor(&identity(w.clone()), &lunitor(dw.clone())),
    ];
    chain.iter().fold(
        assoc(w.clone(), dw, s),
        |acc, step| compose(&acc, step, fuel),
    )
}
