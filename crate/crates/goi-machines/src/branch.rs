//! The branching machine: routes questions to one of two
//! sub-networks depending on a real guard.
//!
//! Branching is stateless. The pending question is encoded as a real
//! sequence and carried through the guard network, whose answer comes
//! back with the guard value prepended and the encoding intact; the
//! question is then decoded and forwarded to the chosen branch.

use crate::codec::{decode_exact, encode};
use goi_core::{Machine, Moving, Port, Shape, Token};

/// `R (x) (x (x) x) -> x`: the first branch is taken when the guard is
/// exactly zero, the second otherwise (a NaN guard is not zero and so
/// takes the second).
pub fn cond(x: Shape) -> Machine {
    let dom = Shape::tensor(
        Shape::Reals,
        Shape::tensor(x.clone(), x.clone()),
    );
    Machine::stateless(dom, x, move |mov| match (mov.port, &mov.token) {
        // A question for the result: wrap it up and ask the guard.
        (Port::Cod, question) => {
            let enc = encode(question);
            Some(Moving::dom(Token::inr(Token::Seq(enc))))
        }
        (Port::Dom, Token::InL(s)) => {
            // The guard answered: its value heads the sequence, the
            // rest must decode back to the original question.
            let Token::Seq(u) = &**s else { return None };
            let (guard, enc) = u.split_first()?;
            let question = decode_exact(enc).ok()?;
            let addressed = if *guard == 0.0 {
                Token::inl(Token::inr(question))
            } else {
                Token::inl(Token::inl(question))
            };
            Some(Moving::dom(addressed))
        }
        // A branch answered: pass it through as the result.
        (Port::Dom, Token::InR(s)) => match &**s {
            Token::InL(t) | Token::InR(t) => Some(Moving::cod((**t).clone())),
            _ => None,
        },
        _ => None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::real_const;
    use goi_core::{compose, probe, tensor, unit_link, ProbeEntry, DEFAULT_FUEL};

    /// `if g = 0 then 10 else 20` with all leaves constant.
    fn branch_net(guard: f64) -> Machine {
        let leaves = tensor(&real_const(10.0), &real_const(20.0));
        let args = tensor(&real_const(guard), &leaves);
        compose(&args, &cond(Shape::Reals), DEFAULT_FUEL)
    }

    fn answer(m: &Machine, q: &[f64]) -> Option<Vec<f64>> {
        match probe(m, &[Moving::cod(Token::seq(q))]).remove(0) {
            ProbeEntry::Out(Moving { port: Port::Cod, token: Token::Seq(v) }) => Some(v),
            _ => None,
        }
    }

    #[test]
    fn zero_takes_the_first_branch() {
        assert_eq!(answer(&branch_net(0.0), &[]), Some(vec![10.0]));
        assert_eq!(answer(&branch_net(1.0), &[]), Some(vec![20.0]));
        assert_eq!(answer(&branch_net(-0.5), &[]), Some(vec![20.0]));
        assert_eq!(answer(&branch_net(f64::NAN), &[]), Some(vec![20.0]));
    }

    #[test]
    fn question_payload_survives_the_round_trip() {
        assert_eq!(
            answer(&branch_net(0.0), &[0.75, 3.0]),
            Some(vec![10.0, 0.75, 3.0])
        );
    }

    #[test]
    fn branches_over_composite_interfaces() {
        // Branch result shape S: selects between two empty stores.
        let s = Shape::state();
        let leaves = tensor(&unit_link(Shape::Store), &unit_link(Shape::Store));
        let args = tensor(&real_const(0.0), &leaves);
        let net = compose(&args, &cond(s), DEFAULT_FUEL);
        let q = Token::inl(Token::Store(1.0, vec![0.5]));
        let resp = probe(&net, &[Moving::cod(q.clone())]);
        // The passthrough store answers a question with itself.
        assert_eq!(resp, vec![ProbeEntry::Out(Moving::cod(q))]);
    }
}
