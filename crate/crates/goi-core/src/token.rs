//! Tokens: the data travelling along the edges of a machine network.

use num_bigint::BigUint;
use std::fmt;

/// Copy indices. Feedback through the exponential composes Cantor
/// pairings, and the resulting indices roughly double in bit width per
/// recursion level, so a fixed-width integer would overflow on quite
/// shallow recursions.
pub type Nat = BigUint;

/// A single datum on a network edge.
///
/// Which trees are meaningful on which edge is determined by the edge's
/// [`Shape`](crate::Shape): `Seq` lives on real edges, `Store` on store
/// edges, `Idx` under a `Bang`, and the injections under a `Tensor`.
#[derive(Debug, Clone)]
pub enum Token {
    /// Inhabitant of a one-point alphabet. No interface in this crate
    /// carries it; it exists so the wire codec can name every tree.
    Star,
    /// A stack of reals; queries and answers on real edges.
    Seq(Vec<f64>),
    /// A weight/trace pair travelling through the state interface.
    Store(f64, Vec<f64>),
    /// A copy index wrapped around a token of the underlying interface.
    Idx(Nat, Box<Token>),
    /// Left injection into a tensor alphabet.
    InL(Box<Token>),
    /// Right injection into a tensor alphabet.
    InR(Box<Token>),
}

impl Token {
    pub fn seq(xs: &[f64]) -> Token {
        Token::Seq(xs.to_vec())
    }

    pub fn idx(n: Nat, t: Token) -> Token {
        Token::Idx(n, Box::new(t))
    }

    pub fn inl(t: Token) -> Token {
        Token::InL(Box::new(t))
    }

    pub fn inr(t: Token) -> Token {
        Token::InR(Box::new(t))
    }
}

/// Bit-level equality on the real payloads, so comparisons stay
/// reflexive even when NaN weights travel through a network.
impl PartialEq for Token {
    fn eq(&self, other: &Self) -> bool {
        use Token::*;
        match (self, other) {
            (Star, Star) => true,
            (Seq(a), Seq(b)) => bits(a).eq(bits(b)),
            (Store(v, a), Store(w, b)) => v.to_bits() == w.to_bits() && bits(a).eq(bits(b)),
            (Idx(n, s), Idx(m, t)) => n == m && s == t,
            (InL(s), InL(t)) | (InR(s), InR(t)) => s == t,
            _ => false,
        }
    }
}

impl Eq for Token {}

fn bits(xs: &[f64]) -> impl Iterator<Item = u64> + '_ {
    xs.iter().map(|x| x.to_bits())
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Token::Star => write!(f, "*"),
            Token::Seq(xs) => {
                write!(f, "[")?;
                for (i, x) in xs.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{x}")?;
                }
                write!(f, "]")
            }
            Token::Store(w, u) => {
                write!(f, "{{{w}; ")?;
                for (i, x) in u.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{x}")?;
                }
                write!(f, "}}")
            }
            Token::Idx(n, t) => write!(f, "{n}.{t}"),
            Token::InL(t) => write!(f, "l {t}"),
            Token::InR(t) => write!(f, "r {t}"),
        }
    }
}
