//! A prefix-free encoding of tokens as real sequences.
//!
//! The branching machine routes its pending question through the guard
//! network, which only transports sequences of reals, so questions
//! must survive a round trip through this codec exactly.
//!
//! Layout (one tag real, then the payload):
//!
//! | tag | token        | payload                          |
//! |-----|--------------|----------------------------------|
//! | 0   | sequence     | length, then the elements        |
//! | 1   | indexed      | index, then the nested encoding  |
//! | 2   | left tag     | nested encoding                  |
//! | 3   | right tag    | nested encoding                  |
//! | 4   | star         | (empty)                          |
//! | 5   | store        | weight, length, then the trace   |
//!
//! Indices below 2^53 are one exactly-representable real. Larger ones
//! (deep recursion composes indices superexponentially) are written as
//! a negative limb count followed by base-2^53 little-endian limbs.

use goi_core::{Nat, Token};

/// Base for multi-limb indices: the largest power of two whose
/// predecessors are all exactly representable in an f64.
const LIMB_BASE: u64 = 1 << 53;

/// Why a real sequence failed to decode back into a token.
#[derive(Debug, Clone, PartialEq)]
pub enum DecodeError {
    /// The sequence ended inside an encoding.
    Truncated,
    /// The leading real is not a known tag.
    UnknownTag(f64),
    /// A length field is not a representable nonnegative count.
    BadLength(f64),
    /// An index field is not a representable natural or limb.
    BadIndex(f64),
}

impl std::fmt::Display for DecodeError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            DecodeError::Truncated => write!(f, "encoding ends unexpectedly"),
            DecodeError::UnknownTag(t) => write!(f, "unknown token tag {t}"),
            DecodeError::BadLength(l) => write!(f, "malformed length field {l}"),
            DecodeError::BadIndex(i) => write!(f, "malformed index field {i}"),
        }
    }
}

impl std::error::Error for DecodeError {}

/// Appends the encoding of `t` to `out`.
pub fn encode_into(t: &Token, out: &mut Vec<f64>) {
    match t {
        Token::Seq(u) => {
            out.push(0.0);
            out.push(u.len() as f64);
            out.extend_from_slice(u);
        }
        Token::Idx(n, inner) => {
            out.push(1.0);
            push_index(n, out);
            encode_into(inner, out);
        }
        Token::InL(inner) => {
            out.push(2.0);
            encode_into(inner, out);
        }
        Token::InR(inner) => {
            out.push(3.0);
            encode_into(inner, out);
        }
        Token::Star => out.push(4.0),
        Token::Store(w, u) => {
            out.push(5.0);
            out.push(*w);
            out.push(u.len() as f64);
            out.extend_from_slice(u);
        }
    }
}

pub fn encode(t: &Token) -> Vec<f64> {
    let mut out = Vec::new();
    encode_into(t, &mut out);
    out
}

fn push_index(n: &Nat, out: &mut Vec<f64>) {
    let limbs = n.to_u64_digits();
    // to_u64_digits yields base-2^64 limbs; repack only when the value
    // does not fit a single exact real.
    if limbs.len() <= 1 && limbs.first().copied().unwrap_or(0) < LIMB_BASE {
        out.push(limbs.first().copied().unwrap_or(0) as f64);
        return;
    }
    let mut rest = n.clone();
    let base = Nat::from(LIMB_BASE);
    let mut packed: Vec<f64> = Vec::new();
    while rest > Nat::from(0u32) {
        let limb = &rest % &base;
        packed.push(limb.to_u64_digits().first().copied().unwrap_or(0) as f64);
        rest /= &base;
    }
    out.push(-(packed.len() as f64));
    out.extend_from_slice(&packed);
}

/// Decodes one token from the front of `input`, returning it together
/// with the unconsumed remainder.
pub fn decode(input: &[f64]) -> Result<(Token, &[f64]), DecodeError> {
    let (&tag, rest) = input.split_first().ok_or(DecodeError::Truncated)?;
    match tag {
        t if t == 0.0 => {
            let (len, rest) = take_len(rest)?;
            if rest.len() < len {
                return Err(DecodeError::Truncated);
            }
            let (payload, rest) = rest.split_at(len);
            Ok((Token::Seq(payload.to_vec()), rest))
        }
        t if t == 1.0 => {
            let (n, rest) = take_index(rest)?;
            let (inner, rest) = decode(rest)?;
            Ok((Token::idx(n, inner), rest))
        }
        t if t == 2.0 => {
            let (inner, rest) = decode(rest)?;
            Ok((Token::inl(inner), rest))
        }
        t if t == 3.0 => {
            let (inner, rest) = decode(rest)?;
            Ok((Token::inr(inner), rest))
        }
        t if t == 4.0 => Ok((Token::Star, rest)),
        t if t == 5.0 => {
            let (&w, rest) = rest.split_first().ok_or(DecodeError::Truncated)?;
            let (len, rest) = take_len(rest)?;
            if rest.len() < len {
                return Err(DecodeError::Truncated);
            }
            let (payload, rest) = rest.split_at(len);
            Ok((Token::Store(w, payload.to_vec()), rest))
        }
        t => Err(DecodeError::UnknownTag(t)),
    }
}

/// Decodes a token that must consume the input exactly.
pub fn decode_exact(input: &[f64]) -> Result<Token, DecodeError> {
    let (t, rest) = decode(input)?;
    if rest.is_empty() {
        Ok(t)
    } else {
        Err(DecodeError::Truncated)
    }
}

fn take_len(input: &[f64]) -> Result<(usize, &[f64]), DecodeError> {
    let (&l, rest) = input.split_first().ok_or(DecodeError::Truncated)?;
    if l >= 0.0 && l.fract() == 0.0 && l < LIMB_BASE as f64 {
        Ok((l as usize, rest))
    } else {
        Err(DecodeError::BadLength(l))
    }
}

fn take_index(input: &[f64]) -> Result<(Nat, &[f64]), DecodeError> {
    let (&head, mut rest) = input.split_first().ok_or(DecodeError::Truncated)?;
    if head.fract() != 0.0 || !head.is_finite() {
        return Err(DecodeError::BadIndex(head));
    }
    if head >= 0.0 {
        if head >= LIMB_BASE as f64 {
            return Err(DecodeError::BadIndex(head));
        }
        return Ok((Nat::from(head as u64), rest));
    }
    let count = -head;
    if count >= LIMB_BASE as f64 {
        return Err(DecodeError::BadIndex(head));
    }
    let count = count as usize;
    let base = Nat::from(LIMB_BASE);
    let mut n = Nat::from(0u32);
    let mut scale = Nat::from(1u32);
    for _ in 0..count {
        let (&limb, r) = rest.split_first().ok_or(DecodeError::Truncated)?;
        if !(0.0..LIMB_BASE as f64).contains(&limb) || limb.fract() != 0.0 {
            return Err(DecodeError::BadIndex(limb));
        }
        n += Nat::from(limb as u64) * &scale;
        scale *= &base;
        rest = r;
    }
    Ok((n, rest))
}
