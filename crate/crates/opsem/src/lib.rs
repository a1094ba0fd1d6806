//! Small step sampling semantics.
//!
//! A configuration is a term together with a nonnegative weight and a
//! finite trace of uniform draws. Deterministic redexes rewrite the term
//! and leave weight and trace alone; `sample` pops the head of the trace;
//! `score(r)` multiplies the weight by `|r|` and returns `skip`.

use lang_ast::{
    decompose, substitute, Decomposition, PrimRegistry, Term, TermKind, Value, ValueKind,
};

#[derive(Debug, Clone)]
pub struct Config {
    pub term: Term,
    pub weight: f64,
    pub trace: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DetError {
    /// `sample`, `score` and values are not deterministic redexes.
    #[error("not a deterministic redex")]
    NotARedex,
    /// An ill typed redex such as applying a constant. Unreachable for
    /// programs that pass the type checker.
    #[error("stuck term: {0}")]
    Stuck(String),
}

/// One deterministic rewrite at the root of `redex`.
pub fn det_reduce(reg: &PrimRegistry, redex: &Term) -> Result<Term, DetError> {
    match &redex.node {
        TermKind::App(f, a) => match &f.node {
            ValueKind::Lam { var, body, .. } => Ok(substitute(body, var, a)),
            ValueKind::Fix { f: fname, x, body, .. } => {
                let unfolded = substitute(body, fname, f);
                Ok(substitute(&unfolded, x, a))
            }
            _ => Err(DetError::Stuck("application of a non-function".into())),
        },
        TermKind::Let { var, bound, body } => match &bound.node {
            TermKind::Val(v) => Ok(substitute(body, var, v)),
            _ => Err(DetError::NotARedex),
        },
        TermKind::If { guard, then_t, else_t } => match guard.node {
            // The guard is zero-tested exactly; NaN compares unequal and
            // takes the else branch.
            ValueKind::RealConst(a) => Ok(if a == 0.0 {
                (**then_t).clone()
            } else {
                (**else_t).clone()
            }),
            _ => Err(DetError::Stuck("conditional guard is not a constant".into())),
        },
        TermKind::Prim(id, args) => {
            let mut vals = Vec::with_capacity(args.len());
            for a in args {
                match a.node {
                    ValueKind::RealConst(x) => vals.push(x),
                    _ => return Err(DetError::Stuck("primitive argument is not a constant".into())),
                }
            }
            let def = reg.def(*id);
            if vals.len() != def.arity {
                return Err(DetError::Stuck(format!(
                    "{} applied to {} arguments",
                    def.name,
                    vals.len()
                )));
            }
            Ok(Term::val(Value::real(reg.apply(*id, &vals))))
        }
        TermKind::Val(_) | TermKind::Sample | TermKind::Score(_) => Err(DetError::NotARedex),
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum StepError {
    #[error("the term is a value")]
    ValueReached,
    #[error("sample reached with an empty trace")]
    TraceUnderflow,
    #[error("stuck term: {0}")]
    Stuck(String),
}

/// One step of the sampling semantics.
pub fn step_config(reg: &PrimRegistry, cfg: &Config) -> Result<Config, StepError> {
    match decompose(&cfg.term) {
        Decomposition::Value(_) => Err(StepError::ValueReached),
        Decomposition::Redex { ctx, redex } => match &redex.node {
            TermKind::Sample => {
                if cfg.trace.is_empty() {
                    return Err(StepError::TraceUnderflow);
                }
                let b = cfg.trace[0];
                Ok(Config {
                    term: ctx.plug(Term::val(Value::real(b))),
                    weight: cfg.weight,
                    trace: cfg.trace[1..].to_vec(),
                })
            }
            TermKind::Score(v) => match v.node {
                ValueKind::RealConst(a) => Ok(Config {
                    term: ctx.plug(Term::val(Value::skip())),
                    weight: cfg.weight * a.abs(),
                    trace: cfg.trace.clone(),
                }),
                _ => Err(StepError::Stuck("score argument is not a constant".into())),
            },
            _ => match det_reduce(reg, &redex) {
                Ok(t) => Ok(Config {
                    term: ctx.plug(t),
                    weight: cfg.weight,
                    trace: cfg.trace.clone(),
                }),
                Err(DetError::NotARedex) => {
                    Err(StepError::Stuck("decomposition returned a non-redex".into()))
                }
                Err(DetError::Stuck(msg)) => Err(StepError::Stuck(msg)),
            },
        },
    }
}

#[derive(Debug, Clone)]
pub enum RunOutcome {
    Terminated {
        value: Value,
        weight: f64,
        leftover: Vec<f64>,
        steps: u64,
    },
    Blocked {
        reason: StepError,
        steps: u64,
    },
    FuelExhausted {
        steps: u64,
    },
}

/// Iterate the sampling semantics from `(t, weight0, trace)` for at most
/// `fuel` steps.
pub fn eval_sampling(
    reg: &PrimRegistry,
    t: &Term,
    weight0: f64,
    trace: &[f64],
    fuel: u64,
) -> RunOutcome {
    let mut cfg = Config {
        term: t.clone(),
        weight: weight0,
        trace: trace.to_vec(),
    };
    for steps in 0..fuel {
        match step_config(reg, &cfg) {
            Ok(next) => cfg = next,
            Err(StepError::ValueReached) => {
                let value = match decompose(&cfg.term) {
                    Decomposition::Value(v) => v,
                    Decomposition::Redex { .. } => unreachable!("step said value"),
                };
                return RunOutcome::Terminated {
                    value,
                    weight: cfg.weight,
                    leftover: cfg.trace,
                    steps,
                };
            }
            Err(reason) => return RunOutcome::Blocked { reason, steps },
        }
    }
    RunOutcome::FuelExhausted { steps: fuel }
}

/// Like [`eval_sampling`] but draws from an inexhaustible source and
/// records what it consumed. Used by the Monte Carlo estimator and to
/// manufacture traces that terminate exactly.
pub struct StreamRun {
    pub value: Option<Value>,
    pub weight: f64,
    pub consumed: Vec<f64>,
    pub steps: u64,
    pub exhausted: bool,
}

pub fn eval_sampling_stream(
    reg: &PrimRegistry,
    t: &Term,
    weight0: f64,
    next: &mut dyn FnMut() -> f64,
    fuel: u64,
) -> StreamRun {
    let mut term = t.clone();
    let mut weight = weight0;
    let mut consumed = Vec::new();
    for steps in 0..fuel {
        match decompose(&term) {
            Decomposition::Value(v) => {
                return StreamRun {
                    value: Some(v),
                    weight,
                    consumed,
                    steps,
                    exhausted: false,
                }
            }
            Decomposition::Redex { ctx, redex } => match &redex.node {
                TermKind::Sample => {
                    let b = next();
                    consumed.push(b);
                    term = ctx.plug(Term::val(Value::real(b)));
                }
                TermKind::Score(v) => match v.node {
                    ValueKind::RealConst(a) => {
                        weight *= a.abs();
                        term = ctx.plug(Term::val(Value::skip()));
                    }
                    _ => {
                        return StreamRun {
                            value: None,
                            weight,
                            consumed,
                            steps,
                            exhausted: false,
                        }
                    }
                },
                _ => match det_reduce(reg, &redex) {
                    Ok(t2) => term = ctx.plug(t2),
                    Err(_) => {
                        return StreamRun {
                            value: None,
                            weight,
                            consumed,
                            steps,
                            exhausted: false,
                        }
                    }
                },
            },
        }
    }
    StreamRun {
        value: None,
        weight,
        consumed,
        steps: fuel,
        exhausted: true,
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum WeightValError {
    #[error("run did not terminate within fuel")]
    FuelExhausted,
    #[error("trace too short: sample reached with an empty trace")]
    TraceUnderflow,
    #[error("trace too long: {0} entries left over at termination")]
    TraceLeftover(usize),
    #[error("stuck term: {0}")]
    Stuck(String),
}

/// The weight and value of `t` on exactly the trace `u`, starting from
/// weight `weight0`. Termination must consume the whole trace.
pub fn weight_val_from(
    reg: &PrimRegistry,
    t: &Term,
    weight0: f64,
    trace: &[f64],
    fuel: u64,
) -> Result<(f64, Value), WeightValError> {
    match eval_sampling(reg, t, weight0, trace, fuel) {
        RunOutcome::Terminated { value, weight, leftover, .. } => {
            if leftover.is_empty() {
                Ok((weight, value))
            } else {
                Err(WeightValError::TraceLeftover(leftover.len()))
            }
        }
        RunOutcome::Blocked { reason: StepError::TraceUnderflow, .. } => {
            Err(WeightValError::TraceUnderflow)
        }
        RunOutcome::Blocked { reason: StepError::Stuck(msg), .. } => {
            Err(WeightValError::Stuck(msg))
        }
        RunOutcome::Blocked { reason: StepError::ValueReached, .. } => {
            unreachable!("eval_sampling returns Terminated for values")
        }
        RunOutcome::FuelExhausted { .. } => Err(WeightValError::FuelExhausted),
    }
}

pub fn weight_val(
    reg: &PrimRegistry,
    t: &Term,
    trace: &[f64],
    fuel: u64,
) -> Result<(f64, Value), WeightValError> {
    weight_val_from(reg, t, 1.0, trace, fuel)
}
