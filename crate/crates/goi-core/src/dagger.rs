//! Recursion by feedback: ties a machine's replicated domain back to
//! its own codomain, and the finite iterants that approximate the
//! resulting behaviour.

use crate::combinators::{compose, counit_link, identity, symmetry, tensor, unit_link};
use crate::exponential::{bang, contraction, digging};
use crate::machine::Machine;
use crate::shape::Shape;
use crate::wires::{assoc, retag_dom, runitor};

/// Closes the feedback loop on `m : !x -> x`, yielding `1 -> x`.
///
/// The domain is split in two by contraction: one branch feeds a final
/// copy of `m` whose codomain is the result, the other is re-replicated
/// (digging under a replicated `m`) and routed back into the loop, so
/// every recursive question spawns a fresh copy at a fresh index.
pub fn dagger(m: &Machine, fuel: u64) -> Machine {
    let x = m.cod.clone();
    let bx = Shape::bang(x.clone());
    assert_eq!(
        m.dom, bx,
        "dagger: expected a machine !x -> x, got {} -> {}",
        m.dom, m.cod
    );
    let dbx = Shape::dual(bx.clone());

    // !x -> !x (x) !x: replicated self-application followed by sharing.
    let core = compose(
        &compose(&digging(x.clone()), &bang(m), fuel),
        &contraction(x.clone()),
        fuel,
    );

    let chain = [
        tensor(&core, &identity(dbx.clone())),
        assoc(bx.clone(), bx.clone(), dbx.clone()),
        tensor(&identity(bx.clone()), &symmetry(bx.clone(), dbx)),
        tensor(m, &counit_link(bx.clone())),
        runitor(x),
    ];
    chain
        .iter()
        .fold(unit_link(bx), |acc, step| compose(&acc, step, fuel))
}

/// The `k`-th finite approximant of [`dagger`]: `k` unrollings of `m`
/// over the everywhere-undefined machine. Approximants are monotone in
/// `k`: whenever the `k`-th answers, every later one answers
/// identically, and their limit is the feedback machine itself.
pub fn iterant(m: &Machine, k: usize, fuel: u64) -> Machine {
    let x = m.cod.clone();
    assert_eq!(
        m.dom,
        Shape::bang(x.clone()),
        "iterant: expected a machine !x -> x, got {} -> {}",
        m.dom,
        m.cod
    );
    let mut it = Machine::undefined(Shape::One, x);
    for _ in 0..k {
        it = retag_dom(&compose(&bang(&it), m, fuel));
    }
    it
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::machine::{probe, Moving, Port, ProbeEntry, DEFAULT_FUEL};
    use crate::token::{Nat, Token};

    /// `f(a) = if a <= 0 then 0 else f(a - 1) + 1`, as a stateless
    /// machine over sequences whose head is the countdown argument.
    fn countdown() -> Machine {
        Machine::stateless(
            Shape::bang(Shape::Reals),
            Shape::Reals,
            |mov| match (mov.port, &mov.token) {
                (Port::Cod, Token::Seq(u)) => {
                    let (a, rest) = u.split_first()?;
                    if *a <= 0.0 {
                        let mut v = vec![0.0];
                        v.extend_from_slice(rest);
                        Some(Moving::cod(Token::Seq(v)))
                    } else {
                        let mut v = vec![a - 1.0];
                        v.extend_from_slice(rest);
                        Some(Moving::dom(Token::idx(Nat::from(0u32), Token::Seq(v))))
                    }
                }
                (Port::Dom, Token::Idx(_, t)) => {
                    let Token::Seq(u) = &**t else { return None };
                    let (b, rest) = u.split_first()?;
                    let mut v = vec![b + 1.0];
                    v.extend_from_slice(rest);
                    Some(Moving::cod(Token::Seq(v)))
                }
                _ => None,
            },
        )
    }

    fn ask(m: &Machine, u: &[f64]) -> ProbeEntry {
        probe(m, &[Moving::cod(Token::seq(u))]).remove(0)
    }

    #[test]
    fn feedback_computes_the_fixpoint() {
        let d = dagger(&countdown(), DEFAULT_FUEL);
        assert_eq!(d.dom, Shape::One);
        assert_eq!(d.cod, Shape::Reals);
        for a in 0..6 {
            let got = ask(&d, &[a as f64]);
            assert_eq!(
                got,
                ProbeEntry::Out(Moving::cod(Token::seq(&[a as f64]))),
                "countdown({a})"
            );
        }
        // The tail of the sequence is threaded through untouched.
        assert_eq!(
            ask(&d, &[2.0, 7.5]),
            ProbeEntry::Out(Moving::cod(Token::seq(&[2.0, 7.5])))
        );
    }

    #[test]
    fn iterants_are_monotone_approximants() {
        let m = countdown();
        let expect = |a: f64| ProbeEntry::Out(Moving::cod(Token::seq(&[a])));
        for k in 0..6 {
            let it = iterant(&m, k, DEFAULT_FUEL);
            for a in 0..6usize {
                let got = ask(&it, &[a as f64]);
                if a + 1 <= k {
                    assert_eq!(got, expect(a as f64), "iterant {k} at {a}");
                } else {
                    assert_eq!(got, ProbeEntry::Undefined, "iterant {k} at {a}");
                }
            }
        }
        // Where defined, the approximants agree with the feedback
        // machine.
        let d = dagger(&m, DEFAULT_FUEL);
        let it = iterant(&m, 4, DEFAULT_FUEL);
        for a in 0..4 {
            assert_eq!(ask(&it, &[a as f64]), ask(&d, &[a as f64]));
        }
    }

    #[test]
    fn divergent_feedback_exhausts_fuel() {
        // A machine that always defers to its recursive argument with
        // the same question never produces an answer. The budget must
        // be small here: every recursion level roughly squares the
        // copy index, so letting the loop spin for long is not an
        // option, it is a guarantee of enormous indices.
        let loopy = Machine::stateless(
            Shape::bang(Shape::Reals),
            Shape::Reals,
            |mov| match (mov.port, &mov.token) {
                (Port::Cod, t @ Token::Seq(_)) => {
                    Some(Moving::dom(Token::idx(Nat::from(0u32), t.clone())))
                }
                (Port::Dom, Token::Idx(_, t)) => Some(Moving::cod((**t).clone())),
                _ => None,
            },
        );
        let d = dagger(&loopy, 24);
        assert_eq!(ask(&d, &[1.0]), ProbeEntry::Undefined);
    }

    #[test]
    fn constant_body_ignores_the_loop() {
        let konst = Machine::stateless(
            Shape::bang(Shape::Reals),
            Shape::Reals,
            |mov| match (mov.port, &mov.token) {
                (Port::Cod, Token::Seq(u)) => {
                    let mut v = vec![5.0];
                    v.extend_from_slice(u);
                    Some(Moving::cod(Token::Seq(v)))
                }
                _ => None,
            },
        );
        let d = dagger(&konst, DEFAULT_FUEL);
        assert_eq!(
            ask(&d, &[]),
            ProbeEntry::Out(Moving::cod(Token::seq(&[5.0])))
        );
        // The very first approximant already agrees.
        let it = iterant(&konst, 1, DEFAULT_FUEL);
        assert_eq!(
            ask(&it, &[]),
            ProbeEntry::Out(Moving::cod(Token::seq(&[5.0])))
        );
    }
}
