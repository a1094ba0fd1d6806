// Pretty printer. Output parses back to the same tree (up to spans);
// see the round trip property test.

use crate::ast::{Term, TermKind, Value, ValueKind};
use crate::prims::PrimRegistry;

pub fn print_term(reg: &PrimRegistry, t: &Term) -> String {
    let mut out = String::new();
    term(reg, t, &mut out);
    out
}

pub fn print_value(reg: &PrimRegistry, v: &Value) -> String {
    let mut out = String::new();
    value(reg, v, &mut out);
    out
}

fn term(reg: &PrimRegistry, t: &Term, out: &mut String) {
    match &t.node {
        TermKind::Val(v) => value(reg, v, out),
        TermKind::App(f, a) => {
            atom(reg, f, out);
            out.push(' ');
            atom(reg, a, out);
        }
        TermKind::Let { var, bound, body } => {
            out.push_str("let ");
            out.push_str(var);
            out.push_str(" = ");
            term(reg, bound, out);
            out.push_str(" in ");
            term(reg, body, out);
        }
        TermKind::If { guard, then_t, else_t } => {
            out.push_str("if ");
            atom(reg, guard, out);
            out.push_str(" then ");
            term(reg, then_t, out);
            out.push_str(" else ");
            term(reg, else_t, out);
        }
        TermKind::Prim(id, args) => {
            out.push_str(&reg.def(*id).name);
            out.push('(');
            for (i, a) in args.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                value(reg, a, out);
            }
            out.push(')');
        }
        TermKind::Sample => out.push_str("sample"),
        TermKind::Score(v) => {
            out.push_str("score(");
            value(reg, v, out);
            out.push(')');
        }
    }
}

// Binder bodies extend as far right as possible, so lambdas and fixpoints
// get parentheses wherever something follows them.
fn atom(reg: &PrimRegistry, v: &Value, out: &mut String) {
    match v.node {
        ValueKind::Lam { .. } | ValueKind::Fix { .. } => {
            out.push('(');
            value(reg, v, out);
            out.push(')');
        }
        _ => value(reg, v, out),
    }
}

fn value(reg: &PrimRegistry, v: &Value, out: &mut String) {
    match &v.node {
        ValueKind::Skip => out.push_str("skip"),
        ValueKind::Var(x) => out.push_str(x),
        ValueKind::RealConst(a) => out.push_str(&format!("{a:?}")),
        ValueKind::Lam { var, ann, body } => {
            out.push_str("lam ");
            out.push_str(var);
            out.push_str(": ");
            out.push_str(&ann.to_string());
            out.push_str(". ");
            term(reg, body, out);
        }
        ValueKind::Fix { f, x, dom, cod, body } => {
            out.push_str("fix ");
            out.push_str(f);
            out.push(' ');
            out.push_str(x);
            out.push_str(": ");
            out.push_str(&crate::ast::Type::arrow(dom.clone(), cod.clone()).to_string());
            out.push_str(". ");
            term(reg, body, out);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ast::{Type, Value};
    use crate::parser::parse_program;

    #[test]
    fn prints_if_with_plain_guard() {
        let reg = PrimRegistry::builtin();
        let t = Term::if_(
            Value::var("x"),
            Term::val(Value::real(1.0)),
            Term::val(Value::real(2.0)),
        );
        assert_eq!(print_term(&reg, &t), "if x then 1.0 else 2.0");
    }

    #[test]
    fn parenthesizes_lambda_in_function_position() {
        let reg = PrimRegistry::builtin();
        let t = Term::app(
            Value::lam("x", Type::Real, Term::val(Value::var("x"))),
            Value::real(5.0),
        );
        assert_eq!(print_term(&reg, &t), "(lam x: Real. x) 5.0");
    }

    #[test]
    fn round_trips_a_sampler(){
        let reg = PrimRegistry::builtin();
        let src = "let x = sample in let w = score(x) in x";
        let t = parse_program(src).unwrap();
        assert_eq!(print_term(&reg, &t), src);
    }

    #[test]
    fn arrow_types_print_right_associated() {
        let t = Type::arrow(Type::arrow(Type::Real, Type::Unit), Type::Real);
        assert_eq!(t.to_string(), "(Real -> Unit) -> Real");
        let u = Type::arrow(Type::Real, Type::arrow(Type::Unit, Type::Real));
        assert_eq!(u.to_string(), "Real -> Unit -> Real");
    }
}
