//! Structural combinators: sequential composition, parallel tensor,
//! identity and symmetry, and the loop-forming unit/counit links.

use crate::machine::{Machine, Moving, Port, State, Step};
use crate::shape::Shape;
use crate::token::Token;

/// Sequential composition `f ; g` (domain of the result is `f.dom`,
/// codomain is `g.cod`). Tokens bounce across the shared interface
/// until one machine emits on an outer port; `fuel` bounds the number
/// of internal bounces spent per external input.
///
/// Undefinedness and fuel exhaustion of the parts propagate
/// immediately, so even with nested budgets a composite answers (or
/// gives up) in finite time.
pub fn compose(f: &Machine, g: &Machine, fuel: u64) -> Machine {
    assert_eq!(
        f.cod, g.dom,
        "compose: interface mismatch: {} vs {}",
        f.cod, g.dom
    );
    let f = f.clone();
    let g = g.clone();
    let dom = f.dom.clone();
    let cod = g.cod.clone();
    let init = State::pair(f.init.clone(), g.init.clone());
    Machine::new(dom, cod, init, move |input, state| {
        let State::Pair(fs0, gs0) = state else {
            return Step::Undefined;
        };
        let mut fs = (**fs0).clone();
        let mut gs = (**gs0).clone();
        // Who holds the token: the outer input goes straight to the
        // corresponding half.
        let (mut at_f, mut mov) = match input.port {
            Port::Dom => (true, input.clone()),
            Port::Cod => (false, input.clone()),
        };
        let mut budget = fuel;
        loop {
            let step = if at_f { f.step(&mov, &fs) } else { g.step(&mov, &gs) };
            let (out, next) = match step {
                Step::Out(out, next) => (out, next),
                Step::Undefined => return Step::Undefined,
                Step::OutOfFuel => return Step::OutOfFuel,
            };
            if at_f {
                fs = next;
            } else {
                gs = next;
            }
            match (at_f, out.port) {
                // f speaks on the shared interface: hand to g's domain.
                (true, Port::Cod) => {
                    at_f = false;
                    mov = Moving::dom(out.token);
                }
                // g queries the shared interface: hand to f's codomain.
                (false, Port::Dom) => {
                    at_f = true;
                    mov = Moving::cod(out.token);
                }
                // Outer outputs leave the composite.
                (true, Port::Dom) | (false, Port::Cod) => {
                    return Step::Out(out, State::pair(fs, gs));
                }
            }
            if budget == 0 {
                return Step::OutOfFuel;
            }
            budget -= 1;
        }
    })
}

/// Parallel composition `f (x) g`. Tokens are routed by their top-level
/// tag; the component answers on the matching side. Note the covariant
/// tags on the domain and the swapped tags on the codomain's negative
/// alphabet.
pub fn tensor(f: &Machine, g: &Machine) -> Machine {
    let f = f.clone();
    let g = g.clone();
    let dom = Shape::tensor(f.dom.clone(), g.dom.clone());
    let cod = Shape::tensor(f.cod.clone(), g.cod.clone());
    let init = State::pair(f.init.clone(), g.init.clone());
    Machine::new(dom, cod, init, move |input, state| {
        let State::Pair(fs, gs) = state else {
            return Step::Undefined;
        };
        // (which half, inner token)
        let (to_f, inner) = match (input.port, &input.token) {
            (Port::Dom, Token::InL(t)) => (true, (**t).clone()),
            (Port::Dom, Token::InR(t)) => (false, (**t).clone()),
            // Negative codomain tags are swapped: InL addresses g.
            (Port::Cod, Token::InL(t)) => (false, (**t).clone()),
            (Port::Cod, Token::InR(t)) => (true, (**t).clone()),
            _ => return Step::Undefined,
        };
        let mov = Moving { port: input.port, token: inner };
        if to_f {
            match f.step(&mov, fs) {
                Step::Out(out, next) => {
                    let token = match out.port {
                        Port::Cod => Token::inl(out.token),
                        Port::Dom => Token::inr(out.token),
                    };
                    Step::Out(
                        Moving { port: out.port, token },
                        State::pair(next, (**gs).clone()),
                    )
                }
                other => other,
            }
        } else {
            match g.step(&mov, gs) {
                Step::Out(out, next) => {
                    let token = match out.port {
                        Port::Cod => Token::inr(out.token),
                        Port::Dom => Token::inl(out.token),
                    };
                    Step::Out(
                        Moving { port: out.port, token },
                        State::pair((**fs).clone(), next),
                    )
                }
                other => other,
            }
        }
    })
}

/// The identity machine on `x`: forwards tokens straight through in
/// both directions.
pub fn identity(x: Shape) -> Machine {
    Machine::stateless(x.clone(), x, |mov| match mov.port {
        Port::Dom => Some(Moving::cod(mov.token.clone())),
        Port::Cod => Some(Moving::dom(mov.token.clone())),
    })
}

/// The braiding `x (x) y -> y (x) x`: swaps the top-level tag on every
/// token, in both directions.
pub fn symmetry(x: Shape, y: Shape) -> Machine {
    let dom = Shape::tensor(x.clone(), y.clone());
    let cod = Shape::tensor(y, x);
    Machine::stateless(dom, cod, |mov| {
        let token = match &mov.token {
            Token::InL(t) => Token::inr((**t).clone()),
            Token::InR(t) => Token::inl((**t).clone()),
            _ => return None,
        };
        let port = match mov.port {
            Port::Dom => Port::Cod,
            Port::Cod => Port::Dom,
        };
        Some(Moving { port, token })
    })
}

/// The unit link `1 -> x (x) x'`: a question arriving on either summand
/// of the codomain is reflected back on the codomain with the same tag
/// (the positive alphabet of `x (x) x'` at tag InL is exactly the
/// negative alphabet of the same tensor at tag InL, and dually).
pub fn unit_link(x: Shape) -> Machine {
    let cod = Shape::tensor(x.clone(), Shape::dual(x));
    Machine::stateless(Shape::One, cod, |mov| match mov.port {
        Port::Cod => Some(Moving::cod(mov.token.clone())),
        Port::Dom => None,
    })
}

/// The counit link `x' (x) x -> 1`: mirrors the unit on the domain
/// side, reflecting domain inputs back out the domain with the same
/// tag.
pub fn counit_link(x: Shape) -> Machine {
    let dom = Shape::tensor(Shape::dual(x.clone()), x);
    Machine::stateless(dom, Shape::One, |mov| match mov.port {
        Port::Dom => Some(Moving::dom(mov.token.clone())),
        Port::Cod => None,
    })
}
