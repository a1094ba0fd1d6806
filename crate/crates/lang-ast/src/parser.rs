// Parser for the surface syntax. Hand rolled so diagnostics can point at
// exact positions and so non-ANF input gets a targeted hint instead of a
// generic syntax error.

use crate::ast::{Span, Term, Type, Value};
use crate::prims::PrimRegistry;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("{span}: {message}")]
pub struct ParseError {
    pub span: Span,
    pub message: String,
}

impl ParseError {
    fn new(span: Span, message: impl Into<String>) -> Self {
        ParseError {
            span,
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Real(f64),
    Lam,
    Let,
    In,
    If,
    Then,
    Else,
    Sample,
    Score,
    Skip,
    Fix,
    LParen,
    RParen,
    Comma,
    Colon,
    Dot,
    Eq,
    Arrow,
    Eof,
}

impl std::fmt::Display for Tok {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "identifier `{s}`"),
            Tok::Real(a) => write!(f, "number `{a:?}`"),
            Tok::Lam => write!(f, "`lam`"),
            Tok::Let => write!(f, "`let`"),
            Tok::In => write!(f, "`in`"),
            Tok::If => write!(f, "`if`"),
            Tok::Then => write!(f, "`then`"),
            Tok::Else => write!(f, "`else`"),
            Tok::Sample => write!(f, "`sample`"),
            Tok::Score => write!(f, "`score`"),
            Tok::Skip => write!(f, "`skip`"),
            Tok::Fix => write!(f, "`fix`"),
            Tok::LParen => write!(f, "`(`"),
            Tok::RParen => write!(f, "`)`"),
            Tok::Comma => write!(f, "`,`"),
            Tok::Colon => write!(f, "`:`"),
            Tok::Dot => write!(f, "`.`"),
            Tok::Eq => write!(f, "`=`"),
            Tok::Arrow => write!(f, "`->`"),
            Tok::Eof => write!(f, "end of input"),
        }
    }
}

fn lex(src: &str) -> Result<Vec<(Tok, Span)>, ParseError> {
    let mut out = Vec::new();
    let chars: Vec<char> = src.chars().collect();
    let mut i = 0;
    let mut line: u32 = 1;
    let mut col: u32 = 1;

    let bump = |i: &mut usize, line: &mut u32, col: &mut u32, chars: &[char]| {
        if chars[*i] == '\n' {
            *line += 1;
            *col = 1;
        } else {
            *col += 1;
        }
        *i += 1;
    };

    while i < chars.len() {
        let c = chars[i];
        let span = Span::new(line, col);
        if c.is_whitespace() {
            bump(&mut i, &mut line, &mut col, &chars);
            continue;
        }
        if c == '#' {
            while i < chars.len() && chars[i] != '\n' {
                bump(&mut i, &mut line, &mut col, &chars);
            }
            continue;
        }
        if c.is_ascii_digit() || (c == '-' && i + 1 < chars.len() && chars[i + 1].is_ascii_digit())
        {
            let start = i;
            if c == '-' {
                bump(&mut i, &mut line, &mut col, &chars);
            }
            while i < chars.len() && chars[i].is_ascii_digit() {
                bump(&mut i, &mut line, &mut col, &chars);
            }
            if i < chars.len() && chars[i] == '.' && i + 1 < chars.len() && chars[i + 1].is_ascii_digit() {
                bump(&mut i, &mut line, &mut col, &chars);
                while i < chars.len() && chars[i].is_ascii_digit() {
                    bump(&mut i, &mut line, &mut col, &chars);
                }
            }
            if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                let mut j = i + 1;
                if j < chars.len() && (chars[j] == '+' || chars[j] == '-') {
                    j += 1;
                }
                if j < chars.len() && chars[j].is_ascii_digit() {
                    while i < j {
                        bump(&mut i, &mut line, &mut col, &chars);
                    }
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        bump(&mut i, &mut line, &mut col, &chars);
                    }
                }
            }
            let text: String = chars[start..i].iter().collect();
            let a: f64 = text
                .parse()
                .map_err(|_| ParseError::new(span, format!("invalid number `{text}`")))?;
            out.push((Tok::Real(a), span));
            continue;
        }
        if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                bump(&mut i, &mut line, &mut col, &chars);
            }
            let text: String = chars[start..i].iter().collect();
            let tok = match text.as_str() {
                "lam" => Tok::Lam,
                "let" => Tok::Let,
                "in" => Tok::In,
                "if" => Tok::If,
                "then" => Tok::Then,
                "else" => Tok::Else,
                "sample" => Tok::Sample,
                "score" => Tok::Score,
                "skip" => Tok::Skip,
                "fix" => Tok::Fix,
                _ => Tok::Ident(text),
            };
            out.push((tok, span));
            continue;
        }
        match c {
            '(' => out.push((Tok::LParen, span)),
            ')' => out.push((Tok::RParen, span)),
            ',' => out.push((Tok::Comma, span)),
            ':' => out.push((Tok::Colon, span)),
            '.' => out.push((Tok::Dot, span)),
            '=' => out.push((Tok::Eq, span)),
            '-' => {
                if i + 1 < chars.len() && chars[i + 1] == '>' {
                    bump(&mut i, &mut line, &mut col, &chars);
                    out.push((Tok::Arrow, span));
                } else {
                    return Err(ParseError::new(span, "stray `-`; negative literals attach the sign to the digits".to_string()));
                }
            }
            _ => return Err(ParseError::new(span, format!("unexpected character `{c}`"))),
        }
        bump(&mut i, &mut line, &mut col, &chars);
    }
    out.push((Tok::Eof, Span::new(line, col)));
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(Tok, Span)>,
    pos: usize,
    reg: &'a PrimRegistry,
}

/// Parse a program against the builtin primitive registry.
pub fn parse_program(source: &str) -> Result<Term, ParseError> {
    parse_program_with(source, &PrimRegistry::builtin())
}

/// Parse against a caller-supplied registry (for embedders that add
/// primitives).
pub fn parse_program_with(source: &str, reg: &PrimRegistry) -> Result<Term, ParseError> {
    let toks = lex(source)?;
    let mut p = Parser { toks, pos: 0, reg };
    let t = p.term()?;
    p.expect_eof()?;
    Ok(t)
}

impl<'a> Parser<'a> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn peek2(&self) -> &Tok {
        let i = (self.pos + 1).min(self.toks.len() - 1);
        &self.toks[i].0
    }

    fn span(&self) -> Span {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> (Tok, Span) {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, want: &Tok) -> Result<Span, ParseError> {
        if self.peek() == want {
            Ok(self.bump().1)
        } else {
            Err(ParseError::new(
                self.span(),
                format!("expected {}, found {}", want, self.peek()),
            ))
        }
    }

    fn expect_eof(&mut self) -> Result<(), ParseError> {
        if *self.peek() == Tok::Eof {
            Ok(())
        } else {
            Err(ParseError::new(
                self.span(),
                format!("expected end of input, found {}", self.peek()),
            ))
        }
    }

    fn ident(&mut self, what: &str) -> Result<(String, Span), ParseError> {
        match self.peek().clone() {
            Tok::Ident(name) => {
                let span = self.bump().1;
                Ok((name, span))
            }
            other => Err(ParseError::new(
                self.span(),
                format!("expected {what}, found {other}"),
            )),
        }
    }

    fn binder(&mut self, what: &str) -> Result<String, ParseError> {
        let (name, span) = self.ident(what)?;
        if self.reg.lookup(&name).is_some() {
            return Err(ParseError::new(
                span,
                format!("`{name}` names a primitive and cannot be rebound"),
            ));
        }
        Ok(name)
    }

    fn starts_value(tok: &Tok) -> bool {
        matches!(
            tok,
            Tok::Ident(_) | Tok::Real(_) | Tok::Skip | Tok::Lam | Tok::Fix | Tok::LParen
        )
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        let span = self.span();
        match self.peek().clone() {
            Tok::Let => {
                self.bump();
                let var = self.binder("a variable to bind")?;
                self.expect(&Tok::Eq)?;
                let bound = self.term()?;
                self.expect(&Tok::In)?;
                let body = self.term()?;
                Ok(Term {
                    node: crate::ast::TermKind::Let {
                        var,
                        bound: Box::new(bound),
                        body: Box::new(body),
                    },
                    span,
                })
            }
            Tok::If => {
                self.bump();
                let guard = self.value()?;
                self.expect(&Tok::Then)?;
                let then_t = self.term()?;
                self.expect(&Tok::Else)?;
                let else_t = self.term()?;
                Ok(Term {
                    node: crate::ast::TermKind::If {
                        guard,
                        then_t: Box::new(then_t),
                        else_t: Box::new(else_t),
                    },
                    span,
                })
            }
            Tok::Sample => {
                self.bump();
                Ok(Term {
                    node: crate::ast::TermKind::Sample,
                    span,
                })
            }
            Tok::Score => {
                self.bump();
                self.expect(&Tok::LParen)?;
                let v = self.value()?;
                self.expect(&Tok::RParen)?;
                Ok(Term {
                    node: crate::ast::TermKind::Score(v),
                    span,
                })
            }
            Tok::Ident(name)
                if *self.peek2() == Tok::LParen && self.reg.lookup(&name).is_some() =>
            {
                self.bump();
                self.bump();
                let id = self.reg.lookup(&name).expect("checked above");
                let mut args = Vec::new();
                if *self.peek() != Tok::RParen {
                    loop {
                        args.push(self.value()?);
                        if *self.peek() == Tok::Comma {
                            self.bump();
                        } else {
                            break;
                        }
                    }
                }
                self.expect(&Tok::RParen)?;
                Ok(Term {
                    node: crate::ast::TermKind::Prim(id, args),
                    span,
                })
            }
            _ => {
                let v = self.value()?;
                if Self::starts_value(self.peek()) {
                    let w = self.value()?;
                    if Self::starts_value(self.peek()) {
                        return Err(ParseError::new(
                            self.span(),
                            "application of an application is not in A-normal form; \
                             bind the intermediate result with `let`",
                        ));
                    }
                    Ok(Term {
                        node: crate::ast::TermKind::App(v, w),
                        span,
                    })
                } else {
                    Ok(Term {
                        node: crate::ast::TermKind::Val(v),
                        span,
                    })
                }
            }
        }
    }

    fn value(&mut self) -> Result<Value, ParseError> {
        let span = self.span();
        match self.peek().clone() {
            Tok::Skip => {
                self.bump();
                Ok(Value {
                    node: crate::ast::ValueKind::Skip,
                    span,
                })
            }
            Tok::Ident(name) => {
                self.bump();
                Ok(Value {
                    node: crate::ast::ValueKind::Var(name),
                    span,
                })
            }
            Tok::Real(a) => {
                self.bump();
                Ok(Value {
                    node: crate::ast::ValueKind::RealConst(a),
                    span,
                })
            }
            Tok::Lam => {
                self.bump();
                let var = self.binder("a parameter name")?;
                self.expect(&Tok::Colon)?;
                let ann = self.ty()?;
                self.expect(&Tok::Dot)?;
                let body = self.term()?;
                Ok(Value {
                    node: crate::ast::ValueKind::Lam {
                        var,
                        ann,
                        body: Box::new(body),
                    },
                    span,
                })
            }
            Tok::Fix => {
                self.bump();
                let f = self.binder("the recursive function name")?;
                let x = self.binder("a parameter name")?;
                self.expect(&Tok::Colon)?;
                let ann_span = self.span();
                let ann = self.ty()?;
                let (dom, cod) = match ann {
                    Type::Arrow(a, b) => (*a, *b),
                    other => {
                        return Err(ParseError::new(
                            ann_span,
                            format!("fix annotation must be a function type, found `{other}`"),
                        ))
                    }
                };
                self.expect(&Tok::Dot)?;
                let body = self.term()?;
                Ok(Value {
                    node: crate::ast::ValueKind::Fix {
                        f,
                        x,
                        dom,
                        cod,
                        body: Box::new(body),
                    },
                    span,
                })
            }
            Tok::LParen => {
                self.bump();
                let v = self.value()?;
                if *self.peek() != Tok::RParen && Self::starts_value(self.peek()) {
                    return Err(ParseError::new(
                        self.span(),
                        "an application is not a value; bind it with `let` before using it here",
                    ));
                }
                self.expect(&Tok::RParen)?;
                Ok(v)
            }
            other => Err(ParseError::new(
                span,
                format!("expected a value, found {other}"),
            )),
        }
    }

    fn ty(&mut self) -> Result<Type, ParseError> {
        let a = self.atomic_ty()?;
        if *self.peek() == Tok::Arrow {
            self.bump();
            let b = self.ty()?;
            Ok(Type::arrow(a, b))
        } else {
            Ok(a)
        }
    }

    fn atomic_ty(&mut self) -> Result<Type, ParseError> {
        match self.peek().clone() {
            Tok::Ident(name) if name == "Unit" => {
                self.bump();
                Ok(Type::Unit)
            }
            Tok::Ident(name) if name == "Real" => {
                self.bump();
                Ok(Type::Real)
            }
            Tok::LParen => {
                self.bump();
                let t = self.ty()?;
                self.expect(&Tok::RParen)?;
                Ok(t)
            }
            other => Err(ParseError::new(
                self.span(),
                format!("expected a type, found {other}"),
            )),
        }
    }
}
