//! The exponential machines: replication and its structural maps
//! (dereliction, digging, contraction, weakening).
//!
//! Copy indices are arbitrary-precision naturals: digging composes
//! indices with a pairing function whose output roughly doubles in bit
//! width at each nesting level, so fixed-width indices would silently
//! wrap on deeply iterated recursion.

use crate::cantor::{pair, unpair};
use crate::machine::{Machine, Moving, Port, State, Step};
use crate::shape::Shape;
use crate::token::{Nat, Token};
use std::collections::BTreeMap;

/// Replication `!f : !x -> !y`: an unbounded family of independent
/// copies of `f`, one per index. Tokens `Idx(n, t)` are routed to copy
/// `n`, whose answer is wrapped back under the same index. Copy states
/// are stored sparsely; a missing entry means the copy is still in
/// `f`'s initial state.
pub fn bang(f: &Machine) -> Machine {
    let f = f.clone();
    let dom = Shape::bang(f.dom.clone());
    let cod = Shape::bang(f.cod.clone());
    Machine::new(dom, cod, State::Copies(BTreeMap::new()), move |input, state| {
        let State::Copies(copies) = state else {
            return Step::Undefined;
        };
        let Token::Idx(n, t) = &input.token else {
            return Step::Undefined;
        };
        let inner = Moving { port: input.port, token: (**t).clone() };
        let copy_state = copies.get(n).cloned().unwrap_or_else(|| f.init.clone());
        match f.step(&inner, &copy_state) {
            Step::Out(out, next) => {
                let mut copies = copies.clone();
                copies.insert(n.clone(), next);
                let token = Token::idx(n.clone(), out.token);
                Step::Out(Moving { port: out.port, token }, State::Copies(copies))
            }
            other => other,
        }
    })
}

/// Dereliction `!x -> x`: presents copy 0 of the domain as the
/// codomain, but accepts an answer from any copy.
pub fn dereliction(x: Shape) -> Machine {
    Machine::stateless(Shape::bang(x.clone()), x, |mov| match (mov.port, &mov.token) {
        (Port::Cod, t) => Some(Moving::dom(Token::idx(Nat::from(0u32), t.clone()))),
        (Port::Dom, Token::Idx(_, t)) => Some(Moving::cod((**t).clone())),
        _ => None,
    })
}

/// Digging `!x -> !!x`: flattens two layers of indices into one with a
/// pairing bijection, and splits them back apart on the way out.
pub fn digging(x: Shape) -> Machine {
    let dom = Shape::bang(x.clone());
    let cod = Shape::bang(Shape::bang(x));
    Machine::stateless(dom, cod, |mov| match (mov.port, &mov.token) {
        (Port::Cod, Token::Idx(n, rest)) => {
            let Token::Idx(m, t) = &**rest else { return None };
            let k = pair(n, m);
            Some(Moving::dom(Token::idx(k, (**t).clone())))
        }
        (Port::Dom, Token::Idx(k, t)) => {
            let (n, m) = unpair(k);
            Some(Moving::cod(Token::idx(n, Token::idx(m, (**t).clone()))))
        }
        _ => None,
    })
}

/// Contraction `!x -> !x (x) !x`: shares one replicated resource
/// between two consumers by interleaving indices, evens to the first
/// codomain summand and odds to the second.
pub fn contraction(x: Shape) -> Machine {
    let bx = Shape::bang(x);
    let dom = bx.clone();
    let cod = Shape::tensor(bx.clone(), bx);
    let two = Nat::from(2u32);
    Machine::stateless(dom, cod, move |mov| match (mov.port, &mov.token) {
        // Questions from the consumers: remember which side asked by
        // the parity of the domain index. Negative InL addresses the
        // second summand.
        (Port::Cod, Token::InL(t)) => {
            let Token::Idx(n, inner) = &**t else { return None };
            let k = n * &two + 1u32;
            Some(Moving::dom(Token::idx(k, (**inner).clone())))
        }
        (Port::Cod, Token::InR(t)) => {
            let Token::Idx(n, inner) = &**t else { return None };
            let k = n * &two;
            Some(Moving::dom(Token::idx(k, (**inner).clone())))
        }
        // Answers from the resource: route by parity.
        (Port::Dom, Token::Idx(k, inner)) => {
            let q = k / &two;
            let odd = k % &two == Nat::from(1u32);
            let t = Token::idx(q, (**inner).clone());
            Some(Moving::cod(if odd { Token::inr(t) } else { Token::inl(t) }))
        }
        _ => None,
    })
}

/// Weakening `!x -> 1`: discards a replicated resource. Both alphabets
/// it could react to are empty in practice (nothing ever asks), so the
/// transition is everywhere undefined.
pub fn weakening(x: Shape) -> Machine {
    Machine::undefined(Shape::bang(x), Shape::One)
}
