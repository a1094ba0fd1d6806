// Capture avoiding substitution.
//
// Evaluation only ever substitutes closed values, but the implementation
// freshens binders whenever the replacement has free variables, so it is
// correct for open values too.

use std::collections::HashSet;

use crate::ast::{Term, TermKind, Value, ValueKind};

/// `substitute(t, x, v)` is `t` with every free occurrence of `x` replaced
/// by `v`.
pub fn substitute(t: &Term, x: &str, v: &Value) -> Term {
    let fv = v.free_vars();
    subst_term(t, x, v, &fv)
}

/// Substitution inside a value, same contract as [`substitute`].
pub fn substitute_value(w: &Value, x: &str, v: &Value) -> Value {
    let fv = v.free_vars();
    subst_value(w, x, v, &fv)
}

fn subst_term(t: &Term, x: &str, v: &Value, fv: &HashSet<String>) -> Term {
    let node = match &t.node {
        TermKind::Val(w) => TermKind::Val(subst_value(w, x, v, fv)),
        TermKind::App(f, a) => TermKind::App(subst_value(f, x, v, fv), subst_value(a, x, v, fv)),
        TermKind::Let { var, bound, body } => {
            let bound = Box::new(subst_term(bound, x, v, fv));
            if var == x {
                TermKind::Let {
                    var: var.clone(),
                    bound,
                    body: body.clone(),
                }
            } else if fv.contains(var) {
                let fresh = fresh_name(var, &avoid(&[body], fv, x));
                let renamed = subst_term(body, var, &Value::var(fresh.clone()), &HashSet::new());
                TermKind::Let {
                    var: fresh,
                    bound,
                    body: Box::new(subst_term(&renamed, x, v, fv)),
                }
            } else {
                TermKind::Let {
                    var: var.clone(),
                    bound,
                    body: Box::new(subst_term(body, x, v, fv)),
                }
            }
        }
        TermKind::If { guard, then_t, else_t } => TermKind::If {
            guard: subst_value(guard, x, v, fv),
            then_t: Box::new(subst_term(then_t, x, v, fv)),
            else_t: Box::new(subst_term(else_t, x, v, fv)),
        },
        TermKind::Prim(id, args) => {
            TermKind::Prim(*id, args.iter().map(|a| subst_value(a, x, v, fv)).collect())
        }
        TermKind::Sample => TermKind::Sample,
        TermKind::Score(w) => TermKind::Score(subst_value(w, x, v, fv)),
    };
    Term { node, span: t.span }
}

fn subst_value(w: &Value, x: &str, v: &Value, fv: &HashSet<String>) -> Value {
    let node = match &w.node {
        ValueKind::Skip => ValueKind::Skip,
        ValueKind::RealConst(a) => ValueKind::RealConst(*a),
        ValueKind::Var(y) => {
            if y == x {
                return v.clone();
            }
            ValueKind::Var(y.clone())
        }
        ValueKind::Lam { var, ann, body } => {
            if var == x {
                ValueKind::Lam {
                    var: var.clone(),
                    ann: ann.clone(),
                    body: body.clone(),
                }
            } else if fv.contains(var) {
                let fresh = fresh_name(var, &avoid(&[body], fv, x));
                let renamed = subst_term(body, var, &Value::var(fresh.clone()), &HashSet::new());
                ValueKind::Lam {
                    var: fresh,
                    ann: ann.clone(),
                    body: Box::new(subst_term(&renamed, x, v, fv)),
                }
            } else {
                ValueKind::Lam {
                    var: var.clone(),
                    ann: ann.clone(),
                    body: Box::new(subst_term(body, x, v, fv)),
                }
            }
        }
        ValueKind::Fix { f, x: p, dom, cod, body } => {
            if f == x || p == x {
                ValueKind::Fix {
                    f: f.clone(),
                    x: p.clone(),
                    dom: dom.clone(),
                    cod: cod.clone(),
                    body: body.clone(),
                }
            } else if fv.contains(f) || fv.contains(p) {
                let av = avoid(&[body], fv, x);
                let f2 = if fv.contains(f) { fresh_name(f, &av) } else { f.clone() };
                let mut av2 = av;
                av2.insert(f2.clone());
                let p2 = if fv.contains(p) { fresh_name(p, &av2) } else { p.clone() };
                let mut renamed = (**body).clone();
                if f2 != *f {
                    renamed = subst_term(&renamed, f, &Value::var(f2.clone()), &HashSet::new());
                }
                if p2 != *p {
                    renamed = subst_term(&renamed, p, &Value::var(p2.clone()), &HashSet::new());
                }
                ValueKind::Fix {
                    f: f2,
                    x: p2,
                    dom: dom.clone(),
                    cod: cod.clone(),
                    body: Box::new(subst_term(&renamed, x, v, fv)),
                }
            } else {
                ValueKind::Fix {
                    f: f.clone(),
                    x: p.clone(),
                    dom: dom.clone(),
                    cod: cod.clone(),
                    body: Box::new(subst_term(body, x, v, fv)),
                }
            }
        }
    };
    Value { node, span: w.span }
}

// Names the freshened binder must not collide with: the replacement's free
// variables, the substituted variable, and everything free in the bodies.
fn avoid(bodies: &[&Term], fv: &HashSet<String>, x: &str) -> HashSet<String> {
    let mut out: HashSet<String> = fv.clone();
    out.insert(x.to_string());
    for b in bodies {
        out.extend(b.free_vars());
    }
    out
}

fn fresh_name(base: &str, avoid: &HashSet<String>) -> String {
    let stem: String = base.trim_end_matches(|c: char| c.is_ascii_digit()).to_string();
    let stem = if stem.is_empty() { "x".to_string() } else { stem };
    for i in 1.. {
        let cand = format!("{stem}{i}");
        if !avoid.contains(&cand) {
            return cand;
        }
    }
    unreachable!()
}
