// Stepping preserves types, and closed well typed programs never get stuck:
// every intermediate configuration either steps, blocks on an empty trace,
// or is a value.

use lang_ast::{parse_program, PrimRegistry, Type};
use opsem::{step_config, Config, StepError};
use typer::{check_closed_real, infer_type, Context};

const PROGRAMS: &[&str] = &[
    "5.0",
    "let x = sample in x",
    "let x = sample in let w = score(x) in x",
    "(lam x: Real. add(x, x)) 3.0",
    "let g = lam x: Real. mul(x, 2.0) in let a = g 1.5 in g a",
    "if 0.0 then 1.0 else 2.0",
    "let c = lt(0.3, 0.6) in if c then sample else 9.0",
    "let f = fix f x: Real -> Real. let c = lt(x, 0.5) in \
       if c then 42.0 else let y = sub(x, 1.0) in f y in f 4.0",
    "let x = sample in let y = sample in let m = mul(x, y) in let w = score(m) in max(x, y)",
    "let h = lam g: Real -> Real. g 1.0 in h (lam z: Real. neg(z))",
    "let x = log(0.5) in let e = exp(x) in let w = score(e) in abs(x)",
    "let u = sample in let v = if u then 1.0 else sample in add(u, v)",
];

#[test]
fn types_are_preserved_along_every_run() {
    let reg = PrimRegistry::builtin();
    let traces: &[&[f64]] = &[&[], &[0.25], &[0.9, 0.1], &[0.0, 0.5, 1.0], &[0.7, 0.7, 0.7, 0.7]];
    for src in PROGRAMS {
        let t = parse_program(src).unwrap();
        check_closed_real(&reg, &t).unwrap_or_else(|e| panic!("{src}: {e}"));
        for trace in traces {
            let mut cfg = Config {
                term: t.clone(),
                weight: 1.0,
                trace: trace.to_vec(),
            };
            for _ in 0..10_000u32 {
                let ty = infer_type(&reg, &Context::empty(), &cfg.term)
                    .unwrap_or_else(|e| panic!("{src}: intermediate term ill typed: {e}"));
                assert_eq!(ty, Type::Real, "{src}: type changed mid run");
                match step_config(&reg, &cfg) {
                    Ok(next) => {
                        assert!(
                            next.weight >= 0.0 || next.weight.is_nan(),
                            "{src}: negative weight"
                        );
                        cfg = next;
                    }
                    Err(StepError::ValueReached) | Err(StepError::TraceUnderflow) => break,
                    Err(StepError::Stuck(msg)) => {
                        panic!("{src}: stuck on a well typed term: {msg}")
                    }
                }
            }
        }
    }
}

#[test]
fn weight_only_moves_at_score() {
    let reg = PrimRegistry::builtin();
    let t = parse_program(
        "let x = sample in let w = score(x) in let y = sample in let v = score(2.0) in y",
    )
    .unwrap();
    let mut cfg = Config {
        term: t,
        weight: 1.0,
        trace: vec![0.5, 0.25],
    };
    let mut weights = vec![cfg.weight];
    while let Ok(next) = step_config(&reg, &cfg) {
        if next.weight != cfg.weight {
            weights.push(next.weight);
        }
        cfg = next;
    }
    assert_eq!(weights, vec![1.0, 0.5, 1.0]);
}
