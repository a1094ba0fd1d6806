// Core syntax: types, values and terms in A-normal form.
//
// The term grammar keeps function arguments, conditional guards and
// primitive arguments in value position; sequencing goes through `let`.
// Parsing rejects anything else, so downstream passes can rely on the
// discipline instead of re-normalizing.

use std::collections::HashSet;
use std::fmt;

/// Source position, 1-based. Nodes built programmatically get `Span::dummy()`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Span {
    pub line: u32,
    pub col: u32,
}

impl Span {
    pub fn new(line: u32, col: u32) -> Self {
        Span { line, col }
    }

    pub fn dummy() -> Self {
        Span { line: 0, col: 0 }
    }
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Type {
    Unit,
    Real,
    Arrow(Box<Type>, Box<Type>),
}

impl Type {
    pub fn arrow(dom: Type, cod: Type) -> Self {
        Type::Arrow(Box::new(dom), Box::new(cod))
    }
}

impl fmt::Display for Type {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Type::Unit => write!(f, "Unit"),
            Type::Real => write!(f, "Real"),
            Type::Arrow(a, b) => {
                // The arrow is right associative, so only the left side
                // ever needs parentheses.
                match **a {
                    Type::Arrow(_, _) => write!(f, "({}) -> {}", a, b),
                    _ => write!(f, "{} -> {}", a, b),
                }
            }
        }
    }
}

/// Identifier for a registered primitive; an index into the `PrimRegistry`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimId(pub usize);

#[derive(Debug, Clone)]
pub struct Value {
    pub node: ValueKind,
    pub span: Span,
}

#[derive(Debug, Clone)]
pub enum ValueKind {
    /// The unit value.
    Skip,
    Var(String),
    RealConst(f64),
    Lam {
        var: String,
        ann: Type,
        body: Box<Term>,
    },
    /// `fix f x: A -> B. body`: `f` is bound at `A -> B`, `x` at `A`.
    Fix {
        f: String,
        x: String,
        dom: Type,
        cod: Type,
        body: Box<Term>,
    },
}

#[derive(Debug, Clone)]
pub struct Term {
    pub node: TermKind,
    pub span: Span,
}

#[derive(Debug, Clone)]
pub enum TermKind {
    Val(Value),
    App(Value, Value),
    Let {
        var: String,
        bound: Box<Term>,
        body: Box<Term>,
    },
    If {
        guard: Value,
        then_t: Box<Term>,
        else_t: Box<Term>,
    },
    Prim(PrimId, Vec<Value>),
    Sample,
    Score(Value),
}

impl Value {
    pub fn new(node: ValueKind, span: Span) -> Self {
        Value { node, span }
    }

    pub fn skip() -> Self {
        Value::new(ValueKind::Skip, Span::dummy())
    }

    pub fn var(name: impl Into<String>) -> Self {
        Value::new(ValueKind::Var(name.into()), Span::dummy())
    }

    pub fn real(a: f64) -> Self {
        Value::new(ValueKind::RealConst(a), Span::dummy())
    }

    pub fn lam(var: impl Into<String>, ann: Type, body: Term) -> Self {
        Value::new(
            ValueKind::Lam {
                var: var.into(),
                ann,
                body: Box::new(body),
            },
            Span::dummy(),
        )
    }

    pub fn fix(
        f: impl Into<String>,
        x: impl Into<String>,
        dom: Type,
        cod: Type,
        body: Term,
    ) -> Self {
        Value::new(
            ValueKind::Fix {
                f: f.into(),
                x: x.into(),
                dom,
                cod,
                body: Box::new(body),
            },
            Span::dummy(),
        )
    }

    /// Structural equality ignoring spans. Reals compare by bit pattern so
    /// NaN constants stay equal to themselves.
    pub fn eq_shape(&self, other: &Value) -> bool {
        match (&self.node, &other.node) {
            (ValueKind::Skip, ValueKind::Skip) => true,
            (ValueKind::Var(a), ValueKind::Var(b)) => a == b,
            (ValueKind::RealConst(a), ValueKind::RealConst(b)) => a.to_bits() == b.to_bits(),
            (
                ValueKind::Lam { var: v1, ann: t1, body: b1 },
                ValueKind::Lam { var: v2, ann: t2, body: b2 },
            ) => v1 == v2 && t1 == t2 && b1.eq_shape(b2),
            (
                ValueKind::Fix { f: f1, x: x1, dom: d1, cod: c1, body: b1 },
                ValueKind::Fix { f: f2, x: x2, dom: d2, cod: c2, body: b2 },
            ) => f1 == f2 && x1 == x2 && d1 == d2 && c1 == c2 && b1.eq_shape(b2),
            _ => false,
        }
    }

    pub fn free_vars(&self) -> HashSet<String> {
        let mut out = HashSet::new();
        self.collect_free(&mut out, &mut Vec::new());
        out
    }

    fn collect_free(&self, out: &mut HashSet<String>, bound: &mut Vec<String>) {
        match &self.node {
            ValueKind::Skip | ValueKind::RealConst(_) => {}
            ValueKind::Var(x) => {
                if !bound.iter().any(|b| b == x) {
                    out.insert(x.clone());
                }
            }
            ValueKind::Lam { var, body, .. } => {
                bound.push(var.clone());
                body.collect_free(out, bound);
                bound.pop();
            }
            ValueKind::Fix { f, x, body, .. } => {
                bound.push(f.clone());
                bound.push(x.clone());
                body.collect_free(out, bound);
                bound.pop();
                bound.pop();
            }
        }
    }
}

impl Term {
    pub fn new(node: TermKind, span: Span) -> Self {
        Term { node, span }
    }

    pub fn val(v: Value) -> Self {
        let span = v.span;
        Term::new(TermKind::Val(v), span)
    }

    pub fn app(fun: Value, arg: Value) -> Self {
        Term::new(TermKind::App(fun, arg), Span::dummy())
    }

    pub fn let_(var: impl Into<String>, bound: Term, body: Term) -> Self {
        Term::new(
            TermKind::Let {
                var: var.into(),
                bound: Box::new(bound),
                body: Box::new(body),
            },
            Span::dummy(),
        )
    }

    pub fn if_(guard: Value, then_t: Term, else_t: Term) -> Self {
        Term::new(
            TermKind::If {
                guard,
                then_t: Box::new(then_t),
                else_t: Box::new(else_t),
            },
            Span::dummy(),
        )
    }

    pub fn prim(id: PrimId, args: Vec<Value>) -> Self {
        Term::new(TermKind::Prim(id, args), Span::dummy())
    }

    pub fn sample() -> Self {
        Term::new(TermKind::Sample, Span::dummy())
    }

    pub fn score(v: Value) -> Self {
        Term::new(TermKind::Score(v), Span::dummy())
    }

    pub fn is_value(&self) -> bool {
        matches!(self.node, TermKind::Val(_))
    }

    /// Structural equality ignoring spans.
    pub fn eq_shape(&self, other: &Term) -> bool {
        match (&self.node, &other.node) {
            (TermKind::Val(a), TermKind::Val(b)) => a.eq_shape(b),
            (TermKind::App(f1, a1), TermKind::App(f2, a2)) => f1.eq_shape(f2) && a1.eq_shape(a2),
            (
                TermKind::Let { var: v1, bound: m1, body: n1 },
                TermKind::Let { var: v2, bound: m2, body: n2 },
            ) => v1 == v2 && m1.eq_shape(m2) && n1.eq_shape(n2),
            (
                TermKind::If { guard: g1, then_t: t1, else_t: e1 },
                TermKind::If { guard: g2, then_t: t2, else_t: e2 },
            ) => g1.eq_shape(g2) && t1.eq_shape(t2) && e1.eq_shape(e2),
            (TermKind::Prim(id1, args1), TermKind::Prim(id2, args2)) => {
                id1 == id2
                    && args1.len() == args2.len()
                    && args1.iter().zip(args2).all(|(a, b)| a.eq_shape(b))
            }
            (TermKind::Sample, TermKind::Sample) => true,
            (TermKind::Score(a), TermKind::Score(b)) => a.eq_shape(b),
            _ => false,
        }
    }

    pub fn free_vars(&self) -> HashSet<String> {
        let mut out = HashSet::new();
        self.collect_free(&mut out, &mut Vec::new());
        out
    }

    pub(crate) fn collect_free(&self, out: &mut HashSet<String>, bound: &mut Vec<String>) {
        match &self.node {
            TermKind::Val(v) => v.collect_free(out, bound),
            TermKind::App(f, a) => {
                f.collect_free(out, bound);
                a.collect_free(out, bound);
            }
            TermKind::Let { var, bound: m, body } => {
                m.collect_free(out, bound);
                bound.push(var.clone());
                body.collect_free(out, bound);
                bound.pop();
            }
            TermKind::If { guard, then_t, else_t } => {
                guard.collect_free(out, bound);
                then_t.collect_free(out, bound);
                else_t.collect_free(out, bound);
            }
            TermKind::Prim(_, args) => {
                for a in args {
                    a.collect_free(out, bound);
                }
            }
            TermKind::Sample => {}
            TermKind::Score(v) => v.collect_free(out, bound),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn free_vars_of_open_lambda() {
        // lam x: Real. add-ish use of x and y
        let body = Term::app(Value::var("y"), Value::var("x"));
        let v = Value::lam("x", Type::Real, body);
        let fv = v.free_vars();
        assert!(fv.contains("y"));
        assert!(!fv.contains("x"));
    }

    #[test]
    fn fix_binds_both_names() {
        let body = Term::app(Value::var("f"), Value::var("x"));
        let v = Value::fix("f", "x", Type::Real, Type::Real, body);
        assert!(v.free_vars().is_empty());
    }

    #[test]
    fn eq_shape_ignores_spans() {
        let a = Term::new(TermKind::Sample, Span::new(3, 7));
        let b = Term::sample();
        assert!(a.eq_shape(&b));
    }

    #[test]
    fn nan_constants_compare_equal_by_shape() {
        let a = Value::real(f64::NAN);
        let b = Value::real(f64::NAN);
        assert!(a.eq_shape(&b));
    }
}
