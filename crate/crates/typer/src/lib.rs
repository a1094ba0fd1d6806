//! Syntax directed type checker.
//!
//! Judgments are standard simple types over `Unit`, `Real` and arrows.
//! Contexts bind each name at most once; rebinding a name that is already
//! in scope is reported rather than shadowed, which keeps contexts in
//! bijection with the interpretation of environments downstream.

use lang_ast::{printer, PrimRegistry, Span, Term, TermKind, Type, Value, ValueKind};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum TypeError {
    #[error("{span}: unbound variable `{name}`")]
    UnboundVariable { name: String, span: Span },
    #[error("{span}: expected `{expected}`, found `{found}` in `{subterm}`")]
    TypeMismatch {
        expected: Type,
        found: Type,
        subterm: String,
        span: Span,
    },
    #[error("{span}: `{name}` expects {expected} arguments, got {found}")]
    ArityMismatch {
        name: String,
        expected: usize,
        found: usize,
        span: Span,
    },
    #[error("{span}: expected a function, found `{found}` in `{subterm}`")]
    NotAFunction {
        found: Type,
        subterm: String,
        span: Span,
    },
    #[error("1:1: program must be a closed term of type `Real`, found `{found}`")]
    NotGroundReal { found: Type },
}

/// An ordered typing context. Later entries shadow earlier ones, which
/// matters for reducts: unfolding a fixpoint places its body under binders
/// that may reuse names bound inside it.
#[derive(Debug, Clone, Default)]
pub struct Context {
    entries: Vec<(String, Type)>,
}

impl Context {
    pub fn empty() -> Self {
        Context { entries: Vec::new() }
    }

    pub fn entries(&self) -> &[(String, Type)] {
        &self.entries
    }

    /// The innermost binding of `name`.
    pub fn lookup(&self, name: &str) -> Option<&Type> {
        self.entries
            .iter()
            .rev()
            .find(|(n, _)| n == name)
            .map(|(_, t)| t)
    }

    pub fn extend(&self, name: &str, ty: Type) -> Context {
        let mut entries = self.entries.clone();
        entries.push((name.to_string(), ty));
        Context { entries }
    }
}

pub fn infer_type(reg: &PrimRegistry, ctx: &Context, t: &Term) -> Result<Type, TypeError> {
    match &t.node {
        TermKind::Val(v) => infer_value(reg, ctx, v),
        TermKind::App(f, a) => {
            let tf = infer_value(reg, ctx, f)?;
            let ta = infer_value(reg, ctx, a)?;
            match tf {
                Type::Arrow(dom, cod) => {
                    if *dom == ta {
                        Ok(*cod)
                    } else {
                        Err(TypeError::TypeMismatch {
                            expected: *dom,
                            found: ta,
                            subterm: printer::print_value(reg, a),
                            span: a.span,
                        })
                    }
                }
                other => Err(TypeError::NotAFunction {
                    found: other,
                    subterm: printer::print_value(reg, f),
                    span: f.span,
                }),
            }
        }
        TermKind::Let { var, bound, body } => {
            let tb = infer_type(reg, ctx, bound)?;
            let inner = ctx.extend(var, tb);
            infer_type(reg, &inner, body)
        }
        TermKind::If { guard, then_t, else_t } => {
            expect_value(reg, ctx, guard, &Type::Real)?;
            let tt = infer_type(reg, ctx, then_t)?;
            let te = infer_type(reg, ctx, else_t)?;
            if tt == te {
                Ok(tt)
            } else {
                Err(TypeError::TypeMismatch {
                    expected: tt,
                    found: te,
                    subterm: lang_ast::print_term(reg, else_t),
                    span: else_t.span,
                })
            }
        }
        TermKind::Prim(id, args) => {
            let def = reg.def(*id);
            if args.len() != def.arity {
                return Err(TypeError::ArityMismatch {
                    name: def.name.clone(),
                    expected: def.arity,
                    found: args.len(),
                    span: t.span,
                });
            }
            for a in args {
                expect_value(reg, ctx, a, &Type::Real)?;
            }
            Ok(Type::Real)
        }
        TermKind::Sample => Ok(Type::Real),
        TermKind::Score(v) => {
            expect_value(reg, ctx, v, &Type::Real)?;
            Ok(Type::Unit)
        }
    }
}

pub fn infer_value(reg: &PrimRegistry, ctx: &Context, v: &Value) -> Result<Type, TypeError> {
    match &v.node {
        ValueKind::Skip => Ok(Type::Unit),
        ValueKind::RealConst(_) => Ok(Type::Real),
        ValueKind::Var(name) => ctx.lookup(name).cloned().ok_or(TypeError::UnboundVariable {
            name: name.clone(),
            span: v.span,
        }),
        ValueKind::Lam { var, ann, body } => {
            let inner = ctx.extend(var, ann.clone());
            let tb = infer_type(reg, &inner, body)?;
            Ok(Type::arrow(ann.clone(), tb))
        }
        ValueKind::Fix { f, x, dom, cod, body } => {
            let fun_ty = Type::arrow(dom.clone(), cod.clone());
            let inner = ctx.extend(f, fun_ty.clone()).extend(x, dom.clone());
            let tb = infer_type(reg, &inner, body)?;
            if tb == *cod {
                Ok(fun_ty)
            } else {
                Err(TypeError::TypeMismatch {
                    expected: cod.clone(),
                    found: tb,
                    subterm: lang_ast::print_term(reg, body),
                    span: body.span,
                })
            }
        }
    }
}

fn expect_value(
    reg: &PrimRegistry,
    ctx: &Context,
    v: &Value,
    want: &Type,
) -> Result<(), TypeError> {
    let found = infer_value(reg, ctx, v)?;
    if found == *want {
        Ok(())
    } else {
        Err(TypeError::TypeMismatch {
            expected: want.clone(),
            found,
            subterm: printer::print_value(reg, v),
            span: v.span,
        })
    }
}

/// Accept exactly the programs the runners take: closed terms of type Real.
pub fn check_closed_real(reg: &PrimRegistry, t: &Term) -> Result<(), TypeError> {
    let ty = infer_type(reg, &Context::empty(), t)?;
    if ty == Type::Real {
        Ok(())
    } else {
        Err(TypeError::NotGroundReal { found: ty })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use lang_ast::parse_program;

    fn infer(src: &str) -> Result<Type, TypeError> {
        let reg = PrimRegistry::builtin();
        let t = parse_program(src).unwrap();
        infer_type(&reg, &Context::empty(), &t)
    }

    #[test]
    fn samples_are_real() {
        assert_eq!(infer("sample").unwrap(), Type::Real);
    }

    #[test]
    fn score_is_unit() {
        assert_eq!(infer("score(0.5)").unwrap(), Type::Unit);
    }

    #[test]
    fn lambda_and_application() {
        assert_eq!(infer("(lam x: Real. x) 5.0").unwrap(), Type::Real);
        assert_eq!(
            infer("lam x: Real. score(x)").unwrap(),
            Type::arrow(Type::Real, Type::Unit)
        );
    }

    #[test]
    fn fix_checks_against_its_annotation() {
        assert_eq!(
            infer("fix f x: Real -> Real. f x").unwrap(),
            Type::arrow(Type::Real, Type::Real)
        );
        let err = infer("fix f x: Real -> Real. skip").unwrap_err();
        assert!(matches!(err, TypeError::TypeMismatch { .. }));
    }

    #[test]
    fn unbound_variable_reports_position() {
        let err = infer("let x = 1.0 in add(x, q)").unwrap_err();
        match err {
            TypeError::UnboundVariable { name, span } => {
                assert_eq!(name, "q");
                assert_eq!((span.line, span.col), (1, 23));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn branches_must_agree() {
        let err = infer("if 0.0 then 1.0 else skip").unwrap_err();
        assert!(matches!(err, TypeError::TypeMismatch { .. }));
    }

    #[test]
    fn guard_must_be_real() {
        let err = infer("if skip then 1.0 else 2.0").unwrap_err();
        assert!(matches!(err, TypeError::TypeMismatch { .. }));
    }

    #[test]
    fn arity_is_checked() {
        let err = infer("add(1.0)").unwrap_err();
        match err {
            TypeError::ArityMismatch { name, expected, found, .. } => {
                assert_eq!(name, "add");
                assert_eq!((expected, found), (2, 1));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn rebinding_shadows_with_innermost_wins() {
        assert_eq!(
            infer("let x = 1.0 in let x = skip in x").unwrap(),
            Type::Unit
        );
    }

    #[test]
    fn ground_real_gate() {
        let reg = PrimRegistry::builtin();
        let ok = parse_program("let x = sample in x").unwrap();
        assert!(check_closed_real(&reg, &ok).is_ok());
        let unit = parse_program("score(1.0)").unwrap();
        assert!(matches!(
            check_closed_real(&reg, &unit),
            Err(TypeError::NotGroundReal { .. })
        ));
        let open = parse_program("x").unwrap();
        assert!(matches!(
            check_closed_real(&reg, &open),
            Err(TypeError::UnboundVariable { .. })
        ));
    }

    #[test]
    fn application_mismatch_names_the_argument() {
        let err = infer("(lam x: Real. x) skip").unwrap_err();
        match err {
            TypeError::TypeMismatch { expected, found, subterm, .. } => {
                assert_eq!(expected, Type::Real);
                assert_eq!(found, Type::Unit);
                assert_eq!(subterm, "skip");
            }
            other => panic!("unexpected {other:?}"),
        }
    }
}
