//! Machines for real constants and strict n-ary real functions.
//!
//! A real-valued network answers a question `u` (a sequence of reals)
//! by prepending its value: `u -> v :: u`. Everything else about the
//! question is preserved, which is what lets callers thread arbitrary
//! payloads (encoded questions, previously collected arguments)
//! through a value network unchanged.

use goi_core::{Machine, Moving, Port, Shape, Token};

/// The constant `a` as a network `1 -> R`.
pub fn real_const(a: f64) -> Machine {
    Machine::stateless(Shape::One, Shape::Reals, move |mov| {
        match (mov.port, &mov.token) {
            (Port::Cod, Token::Seq(u)) => {
                let mut v = Vec::with_capacity(u.len() + 1);
                v.push(a);
                v.extend_from_slice(u);
                Some(Moving::cod(Token::Seq(v)))
            }
            _ => None,
        }
    })
}

/// The left-nested product `R (x) ... (x) R` with `n` factors.
pub fn reals_pow(n: usize) -> Shape {
    assert!(n >= 1);
    let mut s = Shape::Reals;
    for _ in 1..n {
        s = Shape::tensor(s, Shape::Reals);
    }
    s
}

/// Positive-polarity address of argument `k` (1-based) among `n`
/// left-nested factors.
fn pos_addr(n: usize, k: usize, t: Token) -> Token {
    debug_assert!(1 <= k && k <= n);
    if n == 1 {
        t
    } else if k == n {
        Token::inr(t)
    } else {
        Token::inl(pos_addr(n - 1, k, t))
    }
}

/// Negative-polarity address: the mirror image of [`pos_addr`] with
/// the tags swapped.
fn neg_addr(n: usize, k: usize, t: Token) -> Token {
    mirror(&pos_addr(n, k, t))
}

fn mirror(t: &Token) -> Token {
    match t {
        Token::InL(s) => Token::inr(mirror(s)),
        Token::InR(s) => Token::inl(mirror(s)),
        other => other.clone(),
    }
}

/// Identifies which argument a positive domain token addresses,
/// returning the argument number and the payload.
fn which_pos_arg(n: usize, t: &Token) -> Option<(usize, &Token)> {
    if n == 1 {
        return Some((1, t));
    }
    match t {
        Token::InR(s) => Some((n, s)),
        Token::InL(s) => {
            let (k, payload) = which_pos_arg(n - 1, s)?;
            Some((k, payload))
        }
        _ => None,
    }
}

/// A strict `n`-ary real function as a network `R^n -> R`.
///
/// The protocol is stateless: a question on the codomain is forwarded
/// to the first argument; each argument's answer (its value prepended
/// to the sequence) is forwarded verbatim as the question to the next;
/// the last answer carries all `n` values on its head (latest first),
/// which are popped, applied, and replaced by the result.
pub fn fn_machine(
    n: usize,
    f: impl Fn(&[f64]) -> f64 + Send + Sync + 'static,
) -> Machine {
    assert!(n >= 1, "functions take at least one argument");
    Machine::stateless(reals_pow(n), Shape::Reals, move |mov| {
        match (mov.port, &mov.token) {
            (Port::Cod, Token::Seq(_)) => {
                Some(Moving::dom(neg_addr(n, 1, mov.token.clone())))
            }
            (Port::Dom, t) => {
                let (k, payload) = which_pos_arg(n, t)?;
                let Token::Seq(s) = payload else { return None };
                if k < n {
                    return Some(Moving::dom(neg_addr(n, k + 1, payload.clone())));
                }
                if s.len() < n {
                    return None;
                }
                // Answers arrive newest-first: s = v_n .. v_1 ++ rest.
                let (heads, rest) = s.split_at(n);
                let args: Vec<f64> = heads.iter().rev().copied().collect();
                let mut v = Vec::with_capacity(rest.len() + 1);
                v.push(f(&args));
                v.extend_from_slice(rest);
                Some(Moving::cod(Token::Seq(v)))
            }
            _ => None,
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use goi_core::{compose, identity, probe, tensor, ProbeEntry, DEFAULT_FUEL};

    fn answer(m: &Machine, question: &[f64]) -> Option<Vec<f64>> {
        match probe(m, &[Moving::cod(Token::seq(question))]).remove(0) {
            ProbeEntry::Out(Moving { port: Port::Cod, token: Token::Seq(v) }) => Some(v),
            _ => None,
        }
    }

    #[test]
    fn constants_prepend_their_value() {
        let r = real_const(-2.0);
        assert_eq!(answer(&r, &[]), Some(vec![-2.0]));
        assert_eq!(answer(&r, &[1.0, 0.5]), Some(vec![-2.0, 1.0, 0.5]));
    }

    #[test]
    fn addressing_is_mirrored_between_polarities() {
        let t = Token::seq(&[]);
        assert_eq!(pos_addr(1, 1, t.clone()), t);
        assert_eq!(pos_addr(2, 1, t.clone()), Token::inl(t.clone()));
        assert_eq!(pos_addr(2, 2, t.clone()), Token::inr(t.clone()));
        assert_eq!(pos_addr(3, 1, t.clone()), Token::inl(Token::inl(t.clone())));
        assert_eq!(
            pos_addr(3, 2, t.clone()),
            Token::inl(Token::inr(t.clone()))
        );
        assert_eq!(pos_addr(3, 3, t.clone()), Token::inr(t.clone()));
        assert_eq!(neg_addr(2, 1, t.clone()), Token::inr(t.clone()));
        assert_eq!(neg_addr(3, 1, t.clone()), Token::inr(Token::inr(t.clone())));
        assert_eq!(
            neg_addr(3, 2, t.clone()),
            Token::inr(Token::inl(t.clone()))
        );
        assert_eq!(neg_addr(3, 3, t.clone()), Token::inl(t.clone()));
        for n in 1..=4 {
            for k in 1..=n {
                let addr = pos_addr(n, k, Token::seq(&[1.0]));
                assert_eq!(
                    which_pos_arg(n, &addr),
                    Some((k, &Token::seq(&[1.0]))),
                    "n={n} k={k}"
                );
            }
        }
    }

    #[test]
    fn unary_negation_through_a_constant() {
        let net = compose(
            &real_const(5.0),
            &fn_machine(1, |a| -a[0]),
            DEFAULT_FUEL,
        );
        assert_eq!(answer(&net, &[]), Some(vec![-5.0]));
        assert_eq!(answer(&net, &[0.25]), Some(vec![-5.0, 0.25]));
    }

    #[test]
    fn binary_addition_through_two_constants() {
        let args = tensor(&real_const(2.0), &real_const(3.0));
        let net = compose(&args, &fn_machine(2, |a| a[0] + a[1]), DEFAULT_FUEL);
        assert_eq!(answer(&net, &[]), Some(vec![5.0]));
    }

    #[test]
    fn argument_order_is_preserved() {
        let args = tensor(
            &tensor(&real_const(8.0), &real_const(2.0)),
            &real_const(1.0),
        );
        // (8 - 2) - 1, not some permutation.
        let net = compose(
            &args,
            &fn_machine(3, |a| a[0] - a[1] - a[2]),
            DEFAULT_FUEL,
        );
        assert_eq!(answer(&net, &[]), Some(vec![5.0]));
    }

    #[test]
    fn tails_pass_through_identity_wrapping() {
        let id = identity(Shape::Reals);
        let net = compose(&id, &fn_machine(1, |a| a[0] * 2.0), DEFAULT_FUEL);
        let resp = probe(&net, &[Moving::cod(Token::seq(&[7.0]))]);
        // The question goes out the domain unanswered.
        assert_eq!(
            resp,
            vec![ProbeEntry::Out(Moving::dom(Token::seq(&[7.0])))]
        );
    }
}
