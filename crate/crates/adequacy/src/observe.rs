//! The two-phase observation dialogue with a compiled program.

use goi_core::{Machine, Moving, Nat, Port, Step, Token};

/// The outcome of a completed dialogue: final weight and result value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Observation {
    pub weight: f64,
    pub value: f64,
}

/// Why a dialogue failed to complete.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ObserveCause {
    /// The store question got no answer, or a malformed one.
    Phase1Failed,
    /// The store came back with an unconsumed trace.
    Phase1TraceNotEmpty,
    /// The result read got no answer, or a malformed one.
    Phase2Failed,
    /// An internal composition ran out of bounce budget.
    FuelExhausted,
}

impl std::fmt::Display for ObserveCause {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let msg = match self {
            ObserveCause::Phase1Failed => "store phase failed",
            ObserveCause::Phase1TraceNotEmpty => "store returned with trace left over",
            ObserveCause::Phase2Failed => "result read failed",
            ObserveCause::FuelExhausted => "dialogue ran out of fuel",
        };
        f.write_str(msg)
    }
}

fn store_question(weight: f64, trace: &[f64]) -> Moving {
    Moving::cod(Token::inr(Token::inl(Token::Store(weight, trace.to_vec()))))
}

fn read_question() -> Moving {
    Moving::cod(Token::inl(Token::idx(Nat::from(0u32), Token::seq(&[]))))
}

/// Hold the full dialogue with a compiled program (a machine from the
/// empty interface to `S (x) !Real`): push the weighted store `(weight,
/// trace)` through the store port, demand it returns with an empty
/// trace, then read copy 0 of the result. Any deviation is reported
/// with its cause.
pub fn observe(m: &Machine, weight: f64, trace: &[f64]) -> Result<Observation, ObserveCause> {
    let (weight, state) = match m.step(&store_question(weight, trace), &m.init) {
        Step::Out(mov, state) if mov.port == Port::Cod => match store_answer(mov.token) {
            Some((w, rest)) if rest.is_empty() => (w, state),
            Some(_) => return Err(ObserveCause::Phase1TraceNotEmpty),
            None => return Err(ObserveCause::Phase1Failed),
        },
        Step::Out(..) | Step::Undefined => return Err(ObserveCause::Phase1Failed),
        Step::OutOfFuel => return Err(ObserveCause::FuelExhausted),
    };
    let value = match m.step(&read_question(), &state) {
        Step::Out(mov, _) if mov.port == Port::Cod => match read_answer(mov.token) {
            Some(b) => b,
            None => return Err(ObserveCause::Phase2Failed),
        },
        Step::Out(..) | Step::Undefined => return Err(ObserveCause::Phase2Failed),
        Step::OutOfFuel => return Err(ObserveCause::FuelExhausted),
    };
    Ok(Observation { weight, value })
}

/// The totalized observation: the pair of measurable maps that send a
/// failed dialogue at initial weight 1 to weight 0 and value 0.
pub fn o0_o1(m: &Machine, trace: &[f64]) -> (f64, f64) {
    match observe(m, 1.0, trace) {
        Ok(o) => (o.weight, o.value),
        Err(_) => (0.0, 0.0),
    }
}

fn store_answer(t: Token) -> Option<(f64, Vec<f64>)> {
    match t {
        Token::InL(inner) => match *inner {
            Token::InL(store) => match *store {
                Token::Store(w, rest) => Some((w, rest)),
                _ => None,
            },
            _ => None,
        },
        _ => None,
    }
}

fn read_answer(t: Token) -> Option<f64> {
    match t {
        Token::InR(inner) => match *inner {
            Token::Idx(n, seq) if n == Nat::from(0u32) => match *seq {
                Token::Seq(xs) if xs.len() == 1 => Some(xs[0]),
                _ => None,
            },
            _ => None,
        },
        _ => None,
    }
}
