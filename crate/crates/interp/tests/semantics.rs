//! End to end dialogues with compiled programs, and properties tying the
//! network semantics to substitution and deterministic reduction.

use goi_core::{compose, bang, digging, probe_equiv, Machine, Moving, Nat, Port, Shape, Step, Token};
use goi_machines::{shared_stream, uniform_from};
use interp::{compile_program, interp_term, interp_value, CompileOptions, SampleMode};
use lang_ast::{substitute, PrimId, PrimRegistry, Term, Type, Value};
use proptest::prelude::*;
use typer::Context;

fn reg() -> PrimRegistry {
    PrimRegistry::builtin()
}

fn prim(reg: &PrimRegistry, name: &str) -> PrimId {
    reg.lookup(name).expect("builtin primitive")
}

fn compile(t: &Term) -> Machine {
    compile_program(&reg(), t, &CompileOptions::default())
        .expect("well typed program")
        .machine
}

/// The store question on a compiled program's interface.
fn store_q(w: f64, trace: &[f64]) -> Token {
    Token::inr(Token::inl(Token::Store(w, trace.to_vec())))
}

/// A read of result copy `k`.
fn read_q(k: u64) -> Token {
    Token::inl(Token::idx(Nat::from(k), Token::seq(&[])))
}

/// Push a weighted store through the program, then read copy 0 of the
/// result. Returns the transformed store and the value if both phases
/// answered.
fn observe(m: &Machine, w: f64, trace: &[f64]) -> Option<(f64, Vec<f64>, Option<f64>)> {
    let (w2, rest, st) = match m.step(&Moving::cod(store_q(w, trace)), &m.init) {
        Step::Out(mov, st) if mov.port == Port::Cod => match mov.token {
            Token::InL(t) => match *t {
                Token::InL(u) => match *u {
                    Token::Store(w2, rest) => (w2, rest, st),
                    _ => return None,
                },
                _ => return None,
            },
            _ => return None,
        },
        _ => return None,
    };
    let value = match m.step(&Moving::cod(read_q(0)), &st) {
        Step::Out(mov, _) if mov.port == Port::Cod => match mov.token {
            Token::InR(t) => match *t {
                Token::Idx(_, u) => match *u {
                    Token::Seq(xs) => xs.first().copied(),
                    _ => None,
                },
                _ => None,
            },
            _ => None,
        },
        _ => None,
    };
    Some((w2, rest, value))
}

fn expect_value(t: &Term, w: f64, trace: &[f64]) -> (f64, Vec<f64>, f64) {
    let m = compile(t);
    let (w2, rest, v) = observe(&m, w, trace).expect("store phase answered");
    (w2, rest, v.expect("value phase answered"))
}

#[test]
fn constant_program_reports_its_value() {
    let (w, rest, v) = expect_value(&Term::val(Value::real(5.0)), 1.0, &[]);
    assert_eq!((w, rest, v), (1.0, vec![], 5.0));
}

#[test]
fn every_result_copy_answers_the_same() {
    let m = compile(&Term::val(Value::real(2.5)));
    let (_, _, st) = match m.step(&Moving::cod(store_q(1.0, &[])), &m.init) {
        Step::Out(mov, st) => (mov, 0, st),
        _ => panic!("store phase"),
    };
    for k in [0u64, 1, 7] {
        match m.step(&Moving::cod(read_q(k)), &st) {
            Step::Out(mov, _) => assert_eq!(
                mov.token,
                Token::inr(Token::idx(Nat::from(k), Token::seq(&[2.5]))),
            ),
            _ => panic!("read of copy {k}"),
        }
    }
}

#[test]
fn sample_pops_the_trace_head() {
    let (w, rest, v) = expect_value(&Term::sample(), 1.0, &[0.25, 0.75]);
    assert_eq!((w, rest, v), (1.0, vec![0.75], 0.25));
}

#[test]
fn sample_blocks_on_an_empty_trace() {
    let m = compile(&Term::sample());
    assert!(observe(&m, 1.0, &[]).is_none());
}

#[test]
fn scoring_scales_the_weight_by_the_sampled_value() {
    // let x = sample in let u = score(x) in x
    let t = Term::let_(
        "x",
        Term::sample(),
        Term::let_(
            "u",
            Term::score(Value::var("x")),
            Term::val(Value::var("x")),
        ),
    );
    let (w, rest, v) = expect_value(&t, 2.0, &[0.5, 0.9]);
    assert_eq!((w, rest, v), (1.0, vec![0.9], 0.5));
}

#[test]
fn scoring_a_negative_constant_takes_its_magnitude() {
    let r = reg();
    let t = Term::let_(
        "u",
        Term::score(Value::real(-3.0)),
        Term::val(Value::real(7.0)),
    );
    let m = compile_program(&r, &t, &CompileOptions::default())
        .unwrap()
        .machine;
    let (w, rest, v) = observe(&m, 1.0, &[]).unwrap();
    assert_eq!((w, rest, v), (3.0, vec![], Some(7.0)));
}

#[test]
fn beta_redex_computes_the_body() {
    // (\x:Real. x) 9
    let t = Term::app(
        Value::lam("x", Type::Real, Term::val(Value::var("x"))),
        Value::real(9.0),
    );
    assert_eq!(expect_value(&t, 1.0, &[]), (1.0, vec![], 9.0));
}

#[test]
fn conditional_zero_tests_the_guard() {
    let branches = |g: f64| {
        Term::if_(
            Value::real(g),
            Term::val(Value::real(1.0)),
            Term::val(Value::real(2.0)),
        )
    };
    assert_eq!(expect_value(&branches(0.0), 1.0, &[]).2, 1.0);
    assert_eq!(expect_value(&branches(3.0), 1.0, &[]).2, 2.0);
    assert_eq!(expect_value(&branches(-0.0), 1.0, &[]).2, 1.0);
    assert_eq!(expect_value(&branches(f64::NAN), 1.0, &[]).2, 2.0);
}

#[test]
fn primitives_apply_to_let_bound_variables() {
    let r = reg();
    let add = prim(&r, "add");
    // let x = 2 in let y = 3 in add(x, y)
    let t = Term::let_(
        "x",
        Term::val(Value::real(2.0)),
        Term::let_(
            "y",
            Term::val(Value::real(3.0)),
            Term::prim(add, vec![Value::var("x"), Value::var("y")]),
        ),
    );
    let m = compile_program(&r, &t, &CompileOptions::default())
        .unwrap()
        .machine;
    assert_eq!(observe(&m, 1.0, &[]).unwrap().2, Some(5.0));
}

#[test]
fn argument_order_survives_compilation() {
    let r = reg();
    let sub = prim(&r, "sub");
    let t = Term::prim(sub, vec![Value::real(8.0), Value::real(2.0)]);
    let m = compile_program(&r, &t, &CompileOptions::default())
        .unwrap()
        .machine;
    assert_eq!(observe(&m, 1.0, &[]).unwrap().2, Some(6.0));
}

#[test]
fn lambdas_capture_their_environment() {
    let r = reg();
    let add = prim(&r, "add");
    // let a = 4 in (\x:Real. add(x, a)) 2
    let t = Term::let_(
        "a",
        Term::val(Value::real(4.0)),
        Term::app(
            Value::lam(
                "x",
                Type::Real,
                Term::prim(add, vec![Value::var("x"), Value::var("a")]),
            ),
            Value::real(2.0),
        ),
    );
    let m = compile_program(&r, &t, &CompileOptions::default())
        .unwrap()
        .machine;
    assert_eq!(observe(&m, 1.0, &[]).unwrap().2, Some(6.0));
}

#[test]
fn inner_bindings_shadow_outer_ones() {
    let t = Term::let_(
        "x",
        Term::val(Value::real(1.0)),
        Term::let_(
            "x",
            Term::val(Value::real(2.0)),
            Term::val(Value::var("x")),
        ),
    );
    assert_eq!(expect_value(&t, 1.0, &[]).2, 2.0);
}

/// fix f x. if x then 0 else x + f(x - 1), summing a countdown.
fn summing_fix(r: &PrimRegistry) -> Value {
    let add = prim(r, "add");
    let sub = prim(r, "sub");
    Value::fix(
        "f",
        "x",
        Type::Real,
        Type::Real,
        Term::if_(
            Value::var("x"),
            Term::val(Value::real(0.0)),
            Term::let_(
                "p",
                Term::prim(sub, vec![Value::var("x"), Value::real(1.0)]),
                Term::let_(
                    "s",
                    Term::app(Value::var("f"), Value::var("p")),
                    Term::prim(add, vec![Value::var("x"), Value::var("s")]),
                ),
            ),
        ),
    )
}

#[test]
fn recursion_unwinds_through_the_feedback_loop() {
    let r = reg();
    let t = Term::app(summing_fix(&r), Value::real(3.0));
    let m = compile_program(&r, &t, &CompileOptions::default())
        .unwrap()
        .machine;
    assert_eq!(observe(&m, 1.0, &[]).unwrap(), (1.0, vec![], Some(6.0)));
}

#[test]
fn iterants_approximate_the_feedback_loop_from_below() {
    let r = reg();
    let t = Term::app(summing_fix(&r), Value::real(3.0));
    let at = |k: u32| {
        let opt = CompileOptions {
            iterants: Some(k),
            ..CompileOptions::default()
        };
        let m = compile_program(&r, &t, &opt).unwrap().machine;
        observe(&m, 1.0, &[])
    };
    // Evaluation calls f at 3, 2, 1 and 0, so four unrollings are needed.
    assert!(at(0).is_none());
    assert!(at(3).is_none());
    assert_eq!(at(4).unwrap(), (1.0, vec![], Some(6.0)));
    assert_eq!(at(7).unwrap(), (1.0, vec![], Some(6.0)));
}

/// fix f x. let b = sample in let c = b < 0.5 in if c then x else f(x+1):
/// the number of draws above a half before the first below it.
fn geometric_fix(r: &PrimRegistry) -> Value {
    let add = prim(r, "add");
    let lt = prim(r, "lt");
    Value::fix(
        "f",
        "x",
        Type::Real,
        Type::Real,
        Term::let_(
            "b",
            Term::sample(),
            Term::let_(
                "c",
                Term::prim(lt, vec![Value::var("b"), Value::real(0.5)]),
                Term::if_(
                    Value::var("c"),
                    Term::val(Value::var("x")),
                    Term::let_(
                        "n",
                        Term::prim(add, vec![Value::var("x"), Value::real(1.0)]),
                        Term::app(Value::var("f"), Value::var("n")),
                    ),
                ),
            ),
        ),
    )
}

#[test]
fn sampling_inside_recursion_consumes_the_trace_in_order() {
    let r = reg();
    let t = Term::app(geometric_fix(&r), Value::real(0.0));
    let m = compile_program(&r, &t, &CompileOptions::default())
        .unwrap()
        .machine;
    assert_eq!(
        observe(&m, 1.0, &[0.7, 0.9, 0.2, 0.6]).unwrap(),
        (1.0, vec![0.6], Some(2.0)),
    );
    assert_eq!(observe(&m, 1.0, &[0.1]).unwrap().2, Some(0.0));
    // Trace exhausted mid way: the dialogue blocks.
    assert!(observe(&m, 1.0, &[0.7, 0.8]).is_none());
}

#[test]
fn stream_mode_draws_from_the_generator_and_keeps_the_trace() {
    let opt = CompileOptions {
        mode: SampleMode::Stream(shared_stream(7, 0)),
        ..CompileOptions::default()
    };
    let m = compile_program(&reg(), &Term::sample(), &opt)
        .unwrap()
        .machine;
    let (w, rest, v) = observe(&m, 1.0, &[0.33]).unwrap();
    let expect = uniform_from(&mut shared_stream(7, 0).lock().unwrap());
    assert_eq!((w, rest, v), (1.0, vec![0.33], Some(expect)));
}

#[test]
fn only_closed_real_programs_compile() {
    let r = reg();
    let fun = Term::val(Value::lam("x", Type::Real, Term::val(Value::var("x"))));
    assert!(compile_program(&r, &fun, &CompileOptions::default()).is_err());
    let open = Term::val(Value::var("x"));
    assert!(compile_program(&r, &open, &CompileOptions::default()).is_err());
}

#[test]
fn compilation_records_the_network_diagram() {
    let t = Term::let_(
        "x",
        Term::sample(),
        Term::let_(
            "u",
            Term::score(Value::var("x")),
            Term::val(Value::var("x")),
        ),
    );
    let g = compile_program(&reg(), &t, &CompileOptions::default())
        .unwrap()
        .graph;
    assert!(!g.is_empty());
    let dot = g.to_dot("net");
    assert!(dot.contains("sa"));
    assert!(dot.contains("sc"));
    assert!(dot.contains("digraph"));
}

/// Terms of type Real with one free Real variable.
fn open_term(var: &'static str) -> impl Strategy<Value = Term> {
    let r = reg();
    let add = prim(&r, "add");
    let mul = prim(&r, "mul");
    let leaf = prop_oneof![
        Just(Term::val(Value::var(var))),
        (-2.0..2.0f64).prop_map(|a| Term::val(Value::real(a))),
        Just(Term::sample()),
        Just(Term::score(Value::var(var)))
            .prop_map(move |s| Term::let_("u", s, Term::val(Value::var(var)))),
    ];
    leaf.prop_recursive(3, 12, 2, move |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(move |(a, b)| Term::let_(
                "y",
                a,
                Term::let_(
                    "z",
                    b,
                    Term::prim(add, vec![Value::var("y"), Value::var("z")]),
                ),
            )),
            (inner.clone(), inner.clone())
                .prop_map(move |(a, b)| Term::if_(Value::var(var), a, b)),
            inner.clone().prop_map(move |a| Term::let_(
                "y",
                a,
                Term::prim(mul, vec![Value::var("y"), Value::var(var)]),
            )),
            inner
                .clone()
                .prop_map(move |a| Term::app(Value::lam("w", Type::Real, a), Value::var(var))),
        ]
    })
}

fn probe_set() -> Vec<Vec<Moving>> {
    let traces: [&[f64]; 4] = [&[], &[0.3], &[0.8, 0.1], &[0.4, 0.6, 0.9]];
    let mut probes = Vec::new();
    for w in [1.0, 0.5] {
        for trace in traces {
            probes.push(vec![
                Moving::cod(store_q(w, trace)),
                Moving::cod(read_q(0)),
                Moving::cod(read_q(1)),
            ]);
        }
    }
    probes.push(vec![Moving::cod(read_q(0))]);
    probes
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    /// Substituting a closed value into a term is the same as wiring the
    /// value's network into the term's free port.
    #[test]
    fn substitution_commutes_with_compilation(m in open_term("x"), a in -2.0..2.0f64) {
        let r = reg();
        let opt = CompileOptions::default();
        let v = Value::real(a);

        let substituted = substitute(&m, "x", &v);
        let (direct, _) = interp_term(&r, &Context::empty(), &substituted, &opt)
            .expect("substituted term is closed and well typed");

        let ctx = Context::empty().extend("x", Type::Real);
        let (open, _) = interp_term(&r, &ctx, &m, &opt).expect("open term is well typed");
        let (psi, _) = interp_value(&r, &Context::empty(), &v, &opt).unwrap();
        let feed = compose(&digging(Shape::One), &bang(&psi), opt.fuel);
        let wired = compose(&feed, &open, opt.fuel);

        prop_assert!(probe_equiv(&direct, &wired, &probe_set()));
    }

    /// A deterministic reduction step at the root does not change the
    /// compiled network's dialogue.
    #[test]
    fn root_reduction_preserves_the_dialogue(
        body in open_term("y"),
        a in -2.0..2.0f64,
        shape in 0..3usize,
    ) {
        let r = reg();
        let opt = CompileOptions::default();
        let redex = match shape {
            0 => Term::app(Value::lam("y", Type::Real, body), Value::real(a)),
            1 => Term::let_("y", Term::val(Value::real(a)), body),
            _ => {
                let closed = substitute(&body, "y", &Value::real(a));
                Term::if_(Value::real(a), closed.clone(), closed)
            }
        };
        let reduced = opsem::det_reduce(&r, &redex).expect("a deterministic redex");

        let (before, _) = interp_term(&r, &Context::empty(), &redex, &opt).unwrap();
        let (after, _) = interp_term(&r, &Context::empty(), &reduced, &opt).unwrap();
        prop_assert!(probe_equiv(&before, &after, &probe_set()));
    }
}
