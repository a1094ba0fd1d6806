// Unique decomposition of a term into an evaluation context and a redex.
//
// Contexts are stacks of let frames: E ::= [] | let x = E in M. Every
// non-value term splits uniquely as E[R] where R is one of: an application,
// a let whose bound term is a value, a conditional, a primitive call,
// sample, or score.

use crate::ast::{Term, TermKind, Value};

/// A stack of `let` frames, outermost first.
#[derive(Debug, Clone, Default)]
pub struct EvalContext {
    frames: Vec<(String, Term)>,
}

impl EvalContext {
    pub fn empty() -> Self {
        EvalContext { frames: Vec::new() }
    }

    pub fn depth(&self) -> usize {
        self.frames.len()
    }

    /// Wrap `t` back in the context: `plug(E, R)` is `E[R]`.
    pub fn plug(&self, t: Term) -> Term {
        let mut cur = t;
        for (var, body) in self.frames.iter().rev() {
            cur = Term::let_(var.clone(), cur, body.clone());
        }
        cur
    }
}

#[derive(Debug, Clone)]
pub enum Decomposition {
    /// The term is already a value.
    Value(Value),
    /// `term = ctx.plug(redex)`.
    Redex { ctx: EvalContext, redex: Term },
}

pub fn decompose(t: &Term) -> Decomposition {
    let mut frames = Vec::new();
    let mut cur = t;
    loop {
        match &cur.node {
            TermKind::Let { var, bound, body } if !bound.is_value() => {
                frames.push((var.clone(), (**body).clone()));
                cur = bound;
            }
            TermKind::Val(v) => {
                debug_assert!(
                    frames.is_empty(),
                    "descended into a value bound term; let-value is a redex"
                );
                return Decomposition::Value(v.clone());
            }
            _ => {
                return Decomposition::Redex {
                    ctx: EvalContext { frames },
                    redex: cur.clone(),
                }
            }
        }
    }
}
