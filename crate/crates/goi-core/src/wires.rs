//! Stateless rewiring machines: associators, unitors, the middle-four
//! interchange, distribution of replication over tensors, and padding.
//!
//! Thanks to the polarity swap on tensor codomains, each of these
//! admits a single token rewrite rule that is valid in both directions
//! (domain-positive forward, codomain-negative backward).

use crate::machine::{Machine, Moving, Port, Step};
use crate::shape::{Polarity, Shape};
use crate::token::Token;

/// Builds a stateless machine from one tag rewrite applied forward
/// (domain to codomain) and its counterpart backward (codomain to
/// domain).
fn rewire(
    dom: Shape,
    cod: Shape,
    fwd: impl Fn(&Token) -> Option<Token> + Send + Sync + 'static,
    bwd: impl Fn(&Token) -> Option<Token> + Send + Sync + 'static,
) -> Machine {
    Machine::stateless(dom, cod, move |mov| match mov.port {
        Port::Dom => fwd(&mov.token).map(Moving::cod),
        Port::Cod => bwd(&mov.token).map(Moving::dom),
    })
}

fn unl(t: &Token) -> Option<&Token> {
    match t {
        Token::InL(s) => Some(s),
        _ => None,
    }
}

fn unr(t: &Token) -> Option<&Token> {
    match t {
        Token::InR(s) => Some(s),
        _ => None,
    }
}

/// `(x (x) y) (x) z -> x (x) (y (x) z)`.
pub fn assoc(x: Shape, y: Shape, z: Shape) -> Machine {
    let dom = Shape::tensor(Shape::tensor(x.clone(), y.clone()), z.clone());
    let cod = Shape::tensor(x, Shape::tensor(y, z));
    let rule = |t: &Token| -> Option<Token> {
        Some(match t {
            Token::InL(s) => match &**s {
                Token::InL(t) => Token::inl((**t).clone()),
                Token::InR(t) => Token::inr(Token::inl((**t).clone())),
                _ => return None,
            },
            Token::InR(s) => Token::inr(Token::inr((**s).clone())),
            _ => return None,
        })
    };
    rewire(dom, cod, rule, rule)
}

/// `x (x) (y (x) z) -> (x (x) y) (x) z`.
pub fn assoc_inv(x: Shape, y: Shape, z: Shape) -> Machine {
    let dom = Shape::tensor(x.clone(), Shape::tensor(y.clone(), z.clone()));
    let cod = Shape::tensor(Shape::tensor(x, y), z);
    let rule = |t: &Token| -> Option<Token> {
        Some(match t {
            Token::InL(s) => Token::inl(Token::inl((**s).clone())),
            Token::InR(s) => match &**s {
                Token::InL(t) => Token::inl(Token::inr((**t).clone())),
                Token::InR(t) => Token::inr((**t).clone()),
                _ => return None,
            },
            _ => return None,
        })
    };
    rewire(dom, cod, rule, rule)
}

/// `(a (x) b) (x) (c (x) d) -> (a (x) c) (x) (b (x) d)`: swaps the two
/// middle factors. Self-inverse.
pub fn interchange(a: Shape, b: Shape, c: Shape, d: Shape) -> Machine {
    let dom = Shape::tensor(Shape::tensor(a.clone(), b.clone()), Shape::tensor(c.clone(), d.clone()));
    let cod = Shape::tensor(Shape::tensor(a, c), Shape::tensor(b, d));
    let rule = |t: &Token| -> Option<Token> {
        Some(match t {
            Token::InL(s) => match &**s {
                Token::InL(t) => Token::inl(Token::inl((**t).clone())),
                Token::InR(t) => Token::inr(Token::inl((**t).clone())),
                _ => return None,
            },
            Token::InR(s) => match &**s {
                Token::InL(t) => Token::inl(Token::inr((**t).clone())),
                Token::InR(t) => Token::inr(Token::inr((**t).clone())),
                _ => return None,
            },
            _ => return None,
        })
    };
    rewire(dom, cod, rule, rule)
}

/// `1 (x) x -> x`.
pub fn lunitor(x: Shape) -> Machine {
    let dom = Shape::tensor(Shape::One, x.clone());
    rewire(
        dom,
        x,
        |t| unr(t).cloned(),
        |t| Some(Token::inl(t.clone())),
    )
}

/// `x -> 1 (x) x`.
pub fn lunitor_inv(x: Shape) -> Machine {
    let cod = Shape::tensor(Shape::One, x.clone());
    rewire(
        x,
        cod,
        |t| Some(Token::inr(t.clone())),
        |t| unl(t).cloned(),
    )
}

/// `x (x) 1 -> x`.
pub fn runitor(x: Shape) -> Machine {
    let dom = Shape::tensor(x.clone(), Shape::One);
    rewire(
        dom,
        x,
        |t| unl(t).cloned(),
        |t| Some(Token::inr(t.clone())),
    )
}

/// `x -> x (x) 1`.
pub fn runitor_inv(x: Shape) -> Machine {
    let cod = Shape::tensor(x.clone(), Shape::One);
    rewire(
        x,
        cod,
        |t| Some(Token::inl(t.clone())),
        |t| unr(t).cloned(),
    )
}

/// `x -> x (x) !1`: pads with an inert replicated unit, used to give
/// effect-free values the same interface as effectful computations.
pub fn pad(x: Shape) -> Machine {
    let cod = Shape::tensor(x.clone(), Shape::bang(Shape::One));
    rewire(
        x,
        cod,
        |t| Some(Token::inl(t.clone())),
        |t| unr(t).cloned(),
    )
}

/// `!(x (x) y) -> !x (x) !y`: moves the copy index inside the pairing
/// tag. The tag is preserved in both directions.
pub fn bang_split(x: Shape, y: Shape) -> Machine {
    let dom = Shape::bang(Shape::tensor(x.clone(), y.clone()));
    let cod = Shape::tensor(Shape::bang(x), Shape::bang(y));
    rewire(
        dom,
        cod,
        |t| {
            let Token::Idx(n, s) = t else { return None };
            Some(match &**s {
                Token::InL(u) => Token::inl(Token::idx(n.clone(), (**u).clone())),
                Token::InR(u) => Token::inr(Token::idx(n.clone(), (**u).clone())),
                _ => return None,
            })
        },
        |t| {
            let (mk, s): (fn(Token) -> Token, &Token) = match t {
                Token::InL(s) => (Token::inl, s),
                Token::InR(s) => (Token::inr, s),
                _ => return None,
            };
            let Token::Idx(n, u) = s else { return None };
            Some(Token::idx(n.clone(), mk((**u).clone())))
        },
    )
}

/// `!x (x) !y -> !(x (x) y)`: inverse of [`bang_split`].
pub fn bang_merge(x: Shape, y: Shape) -> Machine {
    let dom = Shape::tensor(Shape::bang(x.clone()), Shape::bang(y.clone()));
    let cod = Shape::bang(Shape::tensor(x, y));
    rewire(
        dom,
        cod,
        |t| {
            let (mk, s): (fn(Token) -> Token, &Token) = match t {
                Token::InL(s) => (Token::inl, s),
                Token::InR(s) => (Token::inr, s),
                _ => return None,
            };
            let Token::Idx(n, u) = s else { return None };
            Some(Token::idx(n.clone(), mk((**u).clone())))
        },
        |t| {
            let Token::Idx(n, s) = t else { return None };
            Some(match &**s {
                Token::InL(u) => Token::inl(Token::idx(n.clone(), (**u).clone())),
                Token::InR(u) => Token::inr(Token::idx(n.clone(), (**u).clone())),
                _ => return None,
            })
        },
    )
}

/// Relabels a machine whose domain carries no tokens at all (such as
/// `!1`) as a machine from `1`, reusing its state and codomain
/// behaviour unchanged.
pub fn retag_dom(m: &Machine) -> Machine {
    assert!(
        m.dom.uninhabited(Polarity::Pos) && m.dom.uninhabited(Polarity::Neg),
        "retag_dom: domain {} carries tokens",
        m.dom
    );
    let inner = m.clone();
    Machine::new(Shape::One, m.cod.clone(), m.init.clone(), move |mov, state| {
        match mov.port {
            Port::Dom => Step::Undefined,
            Port::Cod => inner.step(mov, state),
        }
    })
}
