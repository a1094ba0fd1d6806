//! Exact evaluation on the sample-free fragment, where the result
//! distribution collapses to a single weighted point mass.

use lang_ast::{PrimRegistry, Term, TermKind, Value, ValueKind};
use opsem::{eval_sampling, RunOutcome};
use typer::{check_closed_real, TypeError};

/// The distribution of a sample-free program.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExactMeasure {
    /// A point mass `weight` at `value`.
    Dirac { weight: f64, value: f64 },
    /// No termination within the step budget; the measure is bounded by
    /// zero at this fuel but not resolved.
    Unresolved { steps: u64 },
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ExactError {
    #[error("the program samples; its distribution is not a point mass")]
    ContainsSample,
    #[error(transparent)]
    Type(#[from] TypeError),
}

/// Evaluate a closed, sample-free `Real` program exactly.
pub fn exact_samplefree_measure(
    reg: &PrimRegistry,
    t: &Term,
    fuel: u64,
) -> Result<ExactMeasure, ExactError> {
    check_closed_real(reg, t)?;
    if term_samples(t) {
        return Err(ExactError::ContainsSample);
    }
    match eval_sampling(reg, t, 1.0, &[], fuel) {
        RunOutcome::Terminated { value, weight, .. } => {
            let b = match value.node {
                ValueKind::RealConst(b) => b,
                _ => unreachable!("a closed value of type Real is a constant"),
            };
            Ok(ExactMeasure::Dirac { weight, value: b })
        }
        RunOutcome::FuelExhausted { steps } => Ok(ExactMeasure::Unresolved { steps }),
        RunOutcome::Blocked { .. } => {
            unreachable!("well typed sample-free programs cannot block")
        }
    }
}

fn term_samples(t: &Term) -> bool {
    match &t.node {
        TermKind::Sample => true,
        TermKind::Val(v) => value_samples(v),
        TermKind::App(f, a) => value_samples(f) || value_samples(a),
        TermKind::Let { bound, body, .. } => term_samples(bound) || term_samples(body),
        TermKind::If {
            guard,
            then_t,
            else_t,
        } => value_samples(guard) || term_samples(then_t) || term_samples(else_t),
        TermKind::Prim(_, args) => args.iter().any(value_samples),
        TermKind::Score(v) => value_samples(v),
    }
}

fn value_samples(v: &Value) -> bool {
    match &v.node {
        ValueKind::Lam { body, .. } | ValueKind::Fix { body, .. } => term_samples(body),
        ValueKind::Skip | ValueKind::Var(_) | ValueKind::RealConst(_) => false,
    }
}
