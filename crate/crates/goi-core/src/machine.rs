//! The machine interface: stateful token transducers over a pair of
//! typed ports.
//!
//! A machine accepts positive tokens on its domain port and negative
//! tokens on its codomain port, and (when defined) emits a token on one
//! of the two ports together with a successor state. Execution threads
//! state values explicitly, so machines themselves are immutable and
//! freely shareable.

use crate::shape::{Polarity, Shape};
use crate::token::{Nat, Token};
use std::collections::BTreeMap;
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;

/// Default budget of internal bounces a composite machine spends on one
/// external input before giving up.
pub const DEFAULT_FUEL: u64 = 100_000;

static VALIDATE: AtomicBool = AtomicBool::new(true);

/// Globally enable or disable per-step token validation.
///
/// Validation checks every input and output token against the port
/// shapes. It is on by default; hot loops (the Monte Carlo estimator)
/// switch it off once the network has been exercised under validation.
pub fn set_validation(on: bool) {
    VALIDATE.store(on, Ordering::Relaxed);
}

pub fn validation_enabled() -> bool {
    VALIDATE.load(Ordering::Relaxed)
}

/// One of a machine's two ports.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Port {
    Dom,
    Cod,
}

/// A token at a port. Fed to a machine it is an input (positive on the
/// domain, negative on the codomain); emitted by a machine it is an
/// output (positive on the codomain, negative on the domain).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Moving {
    pub port: Port,
    pub token: Token,
}

impl Moving {
    pub fn dom(token: Token) -> Moving {
        Moving { port: Port::Dom, token }
    }

    pub fn cod(token: Token) -> Moving {
        Moving { port: Port::Cod, token }
    }
}

/// Machine state. A single universal type keeps composite states
/// printable and cloneable without boxing trait objects.
#[derive(Debug, Clone)]
pub enum State {
    /// The one-point state of a stateless machine.
    Unit,
    /// An optional memoized real (sampling machines).
    Real(Option<f64>),
    /// States of the two halves of a composite.
    Pair(Box<State>, Box<State>),
    /// Per-copy states of a replicated machine; absent index = initial.
    Copies(BTreeMap<Nat, State>),
}

impl State {
    pub fn pair(a: State, b: State) -> State {
        State::Pair(Box::new(a), Box::new(b))
    }
}

/// Result of feeding one input to a machine.
#[derive(Debug, Clone)]
pub enum Step {
    /// An output token and the successor state.
    Out(Moving, State),
    /// The transition is undefined on this input/state.
    Undefined,
    /// A composite exhausted its internal bounce budget; semantically
    /// this is undefinedness discovered by truncation.
    OutOfFuel,
}

type TranFn = dyn Fn(&Moving, &State) -> Step + Send + Sync;

/// A token machine: two typed ports, an initial state, and a partial
/// transition function.
#[derive(Clone)]
pub struct Machine {
    pub dom: Shape,
    pub cod: Shape,
    pub init: State,
    tran: Arc<TranFn>,
}

impl std::fmt::Debug for Machine {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Machine")
            .field("dom", &self.dom.to_string())
            .field("cod", &self.cod.to_string())
            .finish_non_exhaustive()
    }
}

impl Machine {
    pub fn new(
        dom: Shape,
        cod: Shape,
        init: State,
        tran: impl Fn(&Moving, &State) -> Step + Send + Sync + 'static,
    ) -> Machine {
        Machine { dom, cod, init, tran: Arc::new(tran) }
    }

    /// A machine with the one-point state whose transition is a pure
    /// partial token map.
    pub fn stateless(
        dom: Shape,
        cod: Shape,
        f: impl Fn(&Moving) -> Option<Moving> + Send + Sync + 'static,
    ) -> Machine {
        Machine::new(dom, cod, State::Unit, move |input, _| match f(input) {
            Some(out) => Step::Out(out, State::Unit),
            None => Step::Undefined,
        })
    }

    /// The everywhere-undefined machine.
    pub fn undefined(dom: Shape, cod: Shape) -> Machine {
        Machine::stateless(dom, cod, |_| None)
    }

    /// Feed one input token in the given state.
    ///
    /// With validation enabled, ill-shaped inputs are simply outside the
    /// transition's domain (undefined), while an ill-shaped *output*
    /// panics: a defined transition emitting a token its interface
    /// cannot carry is a bug in the machine, not in the caller.
    pub fn step(&self, input: &Moving, state: &State) -> Step {
        if validation_enabled() {
            if !self.accepts(input, true) {
                return Step::Undefined;
            }
            let out = (self.tran)(input, state);
            if let Step::Out(mov, _) = &out {
                assert!(
                    self.accepts(mov, false),
                    "machine {} -> {} emitted ill-shaped token {} at {:?}",
                    self.dom,
                    self.cod,
                    mov.token,
                    mov.port,
                );
            }
            out
        } else {
            (self.tran)(input, state)
        }
    }

    fn accepts(&self, mov: &Moving, as_input: bool) -> bool {
        let (shape, pol) = match (mov.port, as_input) {
            (Port::Dom, true) | (Port::Dom, false) => {
                (&self.dom, if as_input { Polarity::Pos } else { Polarity::Neg })
            }
            (Port::Cod, true) | (Port::Cod, false) => {
                (&self.cod, if as_input { Polarity::Neg } else { Polarity::Pos })
            }
        };
        shape.accepts(pol, &mov.token)
    }
}

/// One entry of a replayed dialogue.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ProbeEntry {
    Out(Moving),
    /// No output: either a genuinely undefined transition or a
    /// truncated one. Both count as undefined behaviour.
    Undefined,
}

/// The outputs obtained by replaying a fixed input sequence from the
/// initial state. Deterministic given the machine and the inputs.
pub type ProbeResponse = Vec<ProbeEntry>;

/// Replay `inputs` from the initial state. An undefined transition
/// leaves the state unchanged and is recorded as such.
pub fn probe(m: &Machine, inputs: &[Moving]) -> ProbeResponse {
    let mut state = m.init.clone();
    inputs
        .iter()
        .map(|input| match m.step(input, &state) {
            Step::Out(mov, next) => {
                state = next;
                ProbeEntry::Out(mov)
            }
            Step::Undefined | Step::OutOfFuel => ProbeEntry::Undefined,
        })
        .collect()
}

/// Pointwise comparison of replayed responses over a set of probe
/// sequences: outputs must match exactly and undefined entries must
/// line up with undefined entries.
pub fn probe_equiv(m: &Machine, n: &Machine, probes: &[Vec<Moving>]) -> bool {
    probes.iter().all(|p| probe(m, p) == probe(n, p))
}
