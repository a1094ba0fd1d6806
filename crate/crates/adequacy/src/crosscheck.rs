//! Running both semantics on the same inputs and comparing.

use interp::{compile_program, CompileOptions, SampleMode};
use lang_ast::{PrimRegistry, Term, ValueKind};
use opsem::{weight_val_from, WeightValError};
use typer::TypeError;

use crate::observe::{observe, Observation, ObserveCause};

/// Relative tolerance for weight and value comparison. The dialogue may
/// reassociate floating point work relative to the direct interpreter.
pub const REL_TOL: f64 = 1e-9;

/// Equal up to [`REL_TOL`], with NaN matching NaN.
pub fn rel_eq(a: f64, b: f64) -> bool {
    if a == b || (a.is_nan() && b.is_nan()) {
        return true;
    }
    (a - b).abs() <= REL_TOL * a.abs().max(b.abs())
}

/// The verdict of running both backends on one (weight, trace) input.
#[derive(Debug, Clone, PartialEq)]
pub enum Crosscheck {
    /// Both terminated with matching weight and value.
    Agree { weight: f64, value: f64 },
    DisagreeValue { direct: Observation, dialogue: Observation },
    DisagreeWeight { direct: Observation, dialogue: Observation },
    /// Both failed; the causes are reported but need not correspond.
    BothUndefined {
        direct: WeightValError,
        dialogue: ObserveCause,
    },
    /// Only the direct interpreter terminated.
    DirectOnly {
        direct: Observation,
        dialogue: ObserveCause,
    },
    /// Only the machine dialogue terminated.
    DialogueOnly {
        dialogue: Observation,
        direct: WeightValError,
    },
}

impl Crosscheck {
    /// Agreement in the sense of the adequacy theorem: the two backends
    /// are defined on exactly the same inputs, with equal results.
    pub fn is_agreement(&self) -> bool {
        matches!(
            self,
            Crosscheck::Agree { .. } | Crosscheck::BothUndefined { .. }
        )
    }
}

impl std::fmt::Display for Crosscheck {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Crosscheck::Agree { weight, value } => {
                write!(f, "agree: weight {weight}, value {value}")
            }
            Crosscheck::DisagreeValue { direct, dialogue } => write!(
                f,
                "values disagree: direct {} vs dialogue {}",
                direct.value, dialogue.value
            ),
            Crosscheck::DisagreeWeight { direct, dialogue } => write!(
                f,
                "weights disagree: direct {} vs dialogue {}",
                direct.weight, dialogue.weight
            ),
            Crosscheck::BothUndefined { direct, dialogue } => {
                write!(f, "both undefined: direct: {direct}; dialogue: {dialogue}")
            }
            Crosscheck::DirectOnly { direct, dialogue } => write!(
                f,
                "only the direct interpreter terminated (weight {}, value {}); dialogue: {}",
                direct.weight, direct.value, dialogue
            ),
            Crosscheck::DialogueOnly { dialogue, direct } => write!(
                f,
                "only the dialogue terminated (weight {}, value {}); direct: {}",
                dialogue.weight, dialogue.value, direct
            ),
        }
    }
}

/// Fuel for the two backends; steps for the interpreter, bounce budget
/// per composition node for the dialogue.
#[derive(Debug, Clone, Copy)]
pub struct CrosscheckConfig {
    pub step_fuel: u64,
    pub bounce_fuel: u64,
}

impl Default for CrosscheckConfig {
    fn default() -> Self {
        CrosscheckConfig {
            step_fuel: 1_000_000,
            bounce_fuel: goi_core::DEFAULT_FUEL,
        }
    }
}

/// Run the direct interpreter and the compiled dialogue on `(weight,
/// trace)` and compare outcomes.
pub fn crosscheck_trace(
    reg: &PrimRegistry,
    t: &Term,
    weight: f64,
    trace: &[f64],
    cfg: &CrosscheckConfig,
) -> Result<Crosscheck, TypeError> {
    let opt = CompileOptions {
        fuel: cfg.bounce_fuel,
        mode: SampleMode::Trace,
        iterants: None,
    };
    let compiled = compile_program(reg, t, &opt)?;

    let direct = weight_val_from(reg, t, weight, trace, cfg.step_fuel).map(|(w, v)| {
        let value = match v.node {
            ValueKind::RealConst(b) => b,
            _ => unreachable!("a closed value of type Real is a constant"),
        };
        Observation { weight: w, value }
    });
    let dialogue = observe(&compiled.machine, weight, trace);

    Ok(match (direct, dialogue) {
        (Ok(d), Ok(g)) => {
            if !rel_eq(d.value, g.value) {
                Crosscheck::DisagreeValue {
                    direct: d,
                    dialogue: g,
                }
            } else if !rel_eq(d.weight, g.weight) {
                Crosscheck::DisagreeWeight {
                    direct: d,
                    dialogue: g,
                }
            } else {
                Crosscheck::Agree {
                    weight: d.weight,
                    value: d.value,
                }
            }
        }
        (Ok(d), Err(g)) => Crosscheck::DirectOnly {
            direct: d,
            dialogue: g,
        },
        (Err(d), Ok(g)) => Crosscheck::DialogueOnly {
            dialogue: g,
            direct: d,
        },
        (Err(d), Err(g)) => Crosscheck::BothUndefined {
            direct: d,
            dialogue: g,
        },
    })
}
