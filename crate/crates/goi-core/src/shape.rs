//! Interfaces of token machines.
//!
//! Every edge of a machine network carries two alphabets of tokens:
//! positive tokens travel with the flow of computation, negative tokens
//! travel against it (questions go one way, answers the other). A
//! [`Shape`] is the syntactic description of such an interface; the two
//! alphabets are computed structurally by [`Shape::accepts`].

use crate::token::Token;
use std::fmt;

/// Which of an interface's two token alphabets is meant.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Polarity {
    /// Tokens travelling in the direction of computation.
    Pos,
    /// Tokens travelling against it.
    Neg,
}

impl Polarity {
    pub fn flip(self) -> Self {
        match self {
            Polarity::Pos => Polarity::Neg,
            Polarity::Neg => Polarity::Pos,
        }
    }
}

/// The interface of a machine port.
///
/// * [`One`](Shape::One) carries no tokens in either direction,
/// * [`Reals`](Shape::Reals) carries real-number stacks both ways,
/// * [`Store`](Shape::Store) carries a weight/trace pair forward and
///   nothing backward,
/// * [`Tensor`](Shape::Tensor) juxtaposes two interfaces,
/// * [`Bang`](Shape::Bang) indexes an interface by a copy number,
/// * [`Dual`](Shape::Dual) exchanges the two directions.
///
/// Build composite shapes through the constructors [`Shape::tensor`],
/// [`Shape::bang`] and [`Shape::dual`]; the latter collapses double
/// duals so that shape equality is plain structural equality.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Shape {
    One,
    Reals,
    Store,
    Tensor(Box<Shape>, Box<Shape>),
    Bang(Box<Shape>),
    Dual(Box<Shape>),
}

impl Shape {
    pub fn tensor(a: Shape, b: Shape) -> Shape {
        Shape::Tensor(Box::new(a), Box::new(b))
    }

    pub fn bang(x: Shape) -> Shape {
        Shape::Bang(Box::new(x))
    }

    /// The dual interface. `dual(dual(x))` is `x` itself.
    pub fn dual(x: Shape) -> Shape {
        match x {
            Shape::Dual(inner) => *inner,
            other => Shape::Dual(Box::new(other)),
        }
    }

    /// The state interface threading weight/trace pairs through a
    /// network: a store edge paired with its dual.
    pub fn state() -> Shape {
        Shape::tensor(Shape::Store, Shape::dual(Shape::Store))
    }

    /// Does `t` belong to this interface's `pol` alphabet?
    ///
    /// The positive alphabet of a tensor lists the left factor first;
    /// the negative alphabet lists the factors in *swapped* order, so a
    /// backward `InL` addresses the second factor. Every token-routing
    /// decision in this crate rests on that convention.
    pub fn accepts(&self, pol: Polarity, t: &Token) -> bool {
        match self {
            Shape::One => false,
            Shape::Reals => matches!(t, Token::Seq(_)),
            Shape::Store => match (pol, t) {
                // Weight may be NaN in flight (scoring propagates it);
                // only definitely negative weights are malformed.
                (Polarity::Pos, Token::Store(w, u)) => {
                    !(*w < 0.0) && u.iter().all(|e| (0.0..=1.0).contains(e))
                }
                _ => false,
            },
            Shape::Tensor(x, y) => match (pol, t) {
                (Polarity::Pos, Token::InL(s)) => x.accepts(Polarity::Pos, s),
                (Polarity::Pos, Token::InR(s)) => y.accepts(Polarity::Pos, s),
                (Polarity::Neg, Token::InL(s)) => y.accepts(Polarity::Neg, s),
                (Polarity::Neg, Token::InR(s)) => x.accepts(Polarity::Neg, s),
                _ => false,
            },
            Shape::Bang(x) => match t {
                Token::Idx(_, s) => x.accepts(pol, s),
                _ => false,
            },
            Shape::Dual(x) => x.accepts(pol.flip(), t),
        }
    }

    /// Is the `pol` alphabet of this interface empty?
    pub fn uninhabited(&self, pol: Polarity) -> bool {
        match self {
            Shape::One => true,
            Shape::Reals => false,
            Shape::Store => pol == Polarity::Neg,
            Shape::Tensor(x, y) => x.uninhabited(pol) && y.uninhabited(pol),
            Shape::Bang(x) => x.uninhabited(pol),
            Shape::Dual(x) => x.uninhabited(pol.flip()),
        }
    }
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if *self == Shape::state() {
            return write!(f, "S");
        }
        match self {
            Shape::One => write!(f, "1"),
            Shape::Reals => write!(f, "R"),
            Shape::Store => write!(f, "W"),
            Shape::Tensor(a, b) => write!(f, "({a} * {b})"),
            Shape::Bang(x) => write!(f, "!{x}"),
            Shape::Dual(x) => match **x {
                Shape::Tensor(..) => write!(f, "{x}'"),
                _ => write!(f, "{x}'"),
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::token::{Nat, Token};

    #[test]
    fn double_dual_collapses() {
        let r = Shape::Reals;
        assert_eq!(Shape::dual(Shape::dual(r.clone())), r);
    }

    #[test]
    fn tensor_negative_side_swaps_factors() {
        let sh = Shape::tensor(Shape::Reals, Shape::Store);
        let seq = Token::seq(&[1.0]);
        let store = Token::Store(1.0, vec![]);
        // Forward: left injection is the left factor.
        assert!(sh.accepts(Polarity::Pos, &Token::inl(seq.clone())));
        assert!(sh.accepts(Polarity::Pos, &Token::inr(store.clone())));
        // Backward: the store leaf has no negative tokens, so only the
        // right injection (addressing the *left* factor) is inhabited.
        assert!(sh.accepts(Polarity::Neg, &Token::inr(seq.clone())));
        assert!(!sh.accepts(Polarity::Neg, &Token::inl(seq)));
    }

    #[test]
    fn bang_wraps_an_index() {
        let sh = Shape::bang(Shape::Reals);
        let t = Token::idx(Nat::from(7u32), Token::seq(&[]));
        assert!(sh.accepts(Polarity::Pos, &t));
        assert!(sh.accepts(Polarity::Neg, &t));
        assert!(!sh.accepts(Polarity::Pos, &Token::seq(&[])));
    }

    #[test]
    fn state_interface_alphabets() {
        let s = Shape::state();
        // Forward: a store pair on the left leg, or a store answer on the
        // dualized right leg.
        let fwd = Token::inl(Token::Store(2.0, vec![0.5]));
        assert!(s.accepts(Polarity::Pos, &fwd));
        // Backward: the dual leg asks with a store pair, tagged InL
        // because negative alphabets swap.
        let bwd = Token::inl(Token::Store(1.0, vec![]));
        assert!(s.accepts(Polarity::Neg, &bwd));
        assert!(!s.accepts(Polarity::Neg, &Token::inr(Token::Store(1.0, vec![]))));
    }

    #[test]
    fn negative_weights_are_malformed() {
        assert!(!Shape::Store.accepts(Polarity::Pos, &Token::Store(-1.0, vec![])));
        assert!(Shape::Store.accepts(Polarity::Pos, &Token::Store(f64::NAN, vec![])));
        assert!(!Shape::Store.accepts(Polarity::Pos, &Token::Store(1.0, vec![1.5])));
    }

    #[test]
    fn one_is_uninhabited() {
        assert!(Shape::One.uninhabited(Polarity::Pos));
        assert!(Shape::One.uninhabited(Polarity::Neg));
        assert!(Shape::bang(Shape::One).uninhabited(Polarity::Pos));
        assert!(!Shape::state().uninhabited(Polarity::Pos));
        assert!(Shape::tensor(Shape::Store, Shape::One).uninhabited(Polarity::Neg));
    }
}
