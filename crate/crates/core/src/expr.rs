//! Closed-form scalar expressions: recursive-descent parser, printer, and
//! evaluation over jet arithmetic.
//!
//! Grammar (whitespace insignificant):
//!
//! ```text
//! expr   := term (('+'|'-') term)*
//! term   := factor (('*'|'/') factor)*
//! factor := ('-')? atom ('^' factor)?
//! atom   := number | ident | ident '(' expr (',' expr)* ')' | '(' expr ')'
//! ```
//!
//! Known functions: `sin cos tan exp log sqrt atan2`. Identifiers resolve
//! against the declared variable list, then the declared parameter set; an
//! undeclared name is a parse error.

use crate::error::{Error, Result};
use crate::jet::Jet3;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Func {
    Sin,
    Cos,
    Tan,
    Exp,
    Log,
    Sqrt,
    Atan2,
}

impl Func {
    fn by_name(name: &str) -> Option<(Func, usize)> {
        Some(match name {
            "sin" => (Func::Sin, 1),
            "cos" => (Func::Cos, 1),
            "tan" => (Func::Tan, 1),
            "exp" => (Func::Exp, 1),
            "log" => (Func::Log, 1),
            "sqrt" => (Func::Sqrt, 1),
            "atan2" => (Func::Atan2, 2),
            _ => return None,
        })
    }

    fn name(&self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Tan => "tan",
            Func::Exp => "exp",
            Func::Log => "log",
            Func::Sqrt => "sqrt",
            Func::Atan2 => "atan2",
        }
    }
}

#[derive(Clone, Debug)]
enum NodeKind {
    Const(f64),
    Var(usize),
    Param(usize),
    Add(Box<Node>, Box<Node>),
    Sub(Box<Node>, Box<Node>),
    Mul(Box<Node>, Box<Node>),
    Div(Box<Node>, Box<Node>),
    Neg(Box<Node>),
    Pow(Box<Node>, Box<Node>),
    Call(Func, Vec<Node>),
}

#[derive(Clone, Debug)]
struct Node {
    kind: NodeKind,
    span: (u32, u32),
}

/// A parsed scalar expression over named variables and parameters.
#[derive(Clone, Debug)]
pub struct Expr {
    root: Node,
    source: String,
    vars: Vec<String>,
    params: Vec<String>,
}

// ---------------------------------------------------------------- lexer

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Comma,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Num(v) => format!("number `{v}`"),
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Plus => "`+`".into(),
            Tok::Minus => "`-`".into(),
            Tok::Star => "`*`".into(),
            Tok::Slash => "`/`".into(),
            Tok::Caret => "`^`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Comma => "`,`".into(),
            Tok::End => "end of input".into(),
        }
    }
}

fn lex(src: &str) -> Result<Vec<(Tok, usize)>> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        match c {
            ' ' | '\t' | '\n' | '\r' => i += 1,
            '+' => {
                out.push((Tok::Plus, i));
                i += 1;
            }
            '-' => {
                out.push((Tok::Minus, i));
                i += 1;
            }
            '*' => {
                out.push((Tok::Star, i));
                i += 1;
            }
            '/' => {
                out.push((Tok::Slash, i));
                i += 1;
            }
            '^' => {
                out.push((Tok::Caret, i));
                i += 1;
            }
            '(' => {
                out.push((Tok::LParen, i));
                i += 1;
            }
            ')' => {
                out.push((Tok::RParen, i));
                i += 1;
            }
            ',' => {
                out.push((Tok::Comma, i));
                i += 1;
            }
            '0'..='9' | '.' => {
                let start = i;
                while i < bytes.len() && matches!(bytes[i] as char, '0'..='9' | '.') {
                    i += 1;
                }
                // optional exponent
                if i < bytes.len() && matches!(bytes[i] as char, 'e' | 'E') {
                    let mut k = i + 1;
                    if k < bytes.len() && matches!(bytes[k] as char, '+' | '-') {
                        k += 1;
                    }
                    if k < bytes.len() && (bytes[k] as char).is_ascii_digit() {
                        i = k;
                        while i < bytes.len() && (bytes[i] as char).is_ascii_digit() {
                            i += 1;
                        }
                    }
                }
                let text = &src[start..i];
                let v: f64 = text.parse().map_err(|_| Error::Parse {
                    pos: start,
                    expected: "a number".into(),
                    found: format!("`{text}`"),
                })?;
                if !v.is_finite() {
                    return Err(Error::Parse {
                        pos: start,
                        expected: "a finite number".into(),
                        found: format!("`{text}`"),
                    });
                }
                out.push((Tok::Num(v), start));
            }
            'a'..='z' | 'A'..='Z' | '_' => {
                let start = i;
                while i < bytes.len()
                    && matches!(bytes[i] as char, 'a'..='z' | 'A'..='Z' | '0'..='9' | '_')
                {
                    i += 1;
                }
                out.push((Tok::Ident(src[start..i].to_string()), start));
            }
            _ => {
                return Err(Error::Parse {
                    pos: i,
                    expected: "a token".into(),
                    found: format!("`{c}`"),
                });
            }
        }
    }
    out.push((Tok::End, src.len()));
    Ok(out)
}

// ---------------------------------------------------------------- parser

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    src: &'a str,
    vars: &'a [&'a str],
    params: &'a [&'a str],
}

impl<'a> Parser<'a> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn peek_pos(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> (Tok, usize) {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<usize> {
        if *self.peek() == want {
            Ok(self.bump().1)
        } else {
            Err(Error::Parse {
                pos: self.peek_pos(),
                expected: what.into(),
                found: self.peek().describe(),
            })
        }
    }

    fn expr(&mut self) -> Result<Node> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek() {
                Tok::Plus => true,
                Tok::Minus => false,
                _ => break,
            };
            self.bump();
            let rhs = self.term()?;
            let span = (lhs.span.0, rhs.span.1);
            let kind = if op {
                NodeKind::Add(Box::new(lhs), Box::new(rhs))
            } else {
                NodeKind::Sub(Box::new(lhs), Box::new(rhs))
            };
            lhs = Node { kind, span };
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Node> {
        let mut lhs = self.factor()?;
        loop {
            let mul = match self.peek() {
                Tok::Star => true,
                Tok::Slash => false,
                _ => break,
            };
            self.bump();
            let rhs = self.factor()?;
            let span = (lhs.span.0, rhs.span.1);
            let kind = if mul {
                NodeKind::Mul(Box::new(lhs), Box::new(rhs))
            } else {
                NodeKind::Div(Box::new(lhs), Box::new(rhs))
            };
            lhs = Node { kind, span };
        }
        Ok(lhs)
    }

    fn factor(&mut self) -> Result<Node> {
        if *self.peek() == Tok::Minus {
            let start = self.bump().1;
            let inner = self.factor_tail()?;
            let span = (start as u32, inner.span.1);
            return Ok(Node {
                kind: NodeKind::Neg(Box::new(inner)),
                span,
            });
        }
        self.factor_tail()
    }

    /// atom with an optional right-associative exponent
    fn factor_tail(&mut self) -> Result<Node> {
        let base = self.atom()?;
        if *self.peek() == Tok::Caret {
            self.bump();
            let exp = self.factor()?;
            let span = (base.span.0, exp.span.1);
            return Ok(Node {
                kind: NodeKind::Pow(Box::new(base), Box::new(exp)),
                span,
            });
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Node> {
        let pos = self.peek_pos();
        match self.bump().0 {
            Tok::Num(v) => Ok(Node {
                kind: NodeKind::Const(v),
                span: (pos as u32, (pos + format!("{v}").len()) as u32),
            }),
            Tok::Ident(name) => {
                if *self.peek() == Tok::LParen {
                    self.bump();
                    let mut args = vec![self.expr()?];
                    while *self.peek() == Tok::Comma {
                        self.bump();
                        args.push(self.expr()?);
                    }
                    let end = self.expect(Tok::RParen, "`)` or `,`")?;
                    let (func, arity) =
                        Func::by_name(&name).ok_or_else(|| Error::UnknownIdent {
                            name: name.clone(),
                            pos,
                        })?;
                    if args.len() != arity {
                        return Err(Error::Arity {
                            name,
                            expected: arity,
                            got: args.len(),
                            pos,
                        });
                    }
                    Ok(Node {
                        kind: NodeKind::Call(func, args),
                        span: (pos as u32, (end + 1) as u32),
                    })
                } else {
                    let span = (pos as u32, (pos + name.len()) as u32);
                    if let Some(i) = self.vars.iter().position(|v| *v == name) {
                        Ok(Node {
                            kind: NodeKind::Var(i),
                            span,
                        })
                    } else if let Some(i) = self.params.iter().position(|p| *p == name) {
                        Ok(Node {
                            kind: NodeKind::Param(i),
                            span,
                        })
                    } else {
                        Err(Error::UnknownIdent { name, pos })
                    }
                }
            }
            Tok::LParen => {
                let inner = self.expr()?;
                let end = self.expect(Tok::RParen, "`)`")?;
                Ok(Node {
                    kind: inner.kind,
                    span: (pos as u32, (end + 1) as u32),
                })
            }
            other => Err(Error::Parse {
                pos,
                expected: "a number, identifier, or `(`".into(),
                found: other.describe(),
            }),
        }
    }
}

/// Parse `source` against ordered variable names and a parameter name set.
pub fn parse(source: &str, vars: &[&str], params: &[&str]) -> Result<Expr> {
    let toks = lex(source)?;
    let mut p = Parser {
        toks,
        pos: 0,
        src: source,
        vars,
        params,
    };
    let root = p.expr()?;
    if *p.peek() != Tok::End {
        return Err(Error::Parse {
            pos: p.peek_pos(),
            expected: "end of input or an operator".into(),
            found: p.peek().describe(),
        });
    }
    let _ = p.src;
    Ok(Expr {
        root,
        source: source.to_string(),
        vars: vars.iter().map(|s| s.to_string()).collect(),
        params: params.iter().map(|s| s.to_string()).collect(),
    })
}

impl Expr {
    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn var_names(&self) -> &[String] {
        &self.vars
    }

    pub fn param_names(&self) -> &[String] {
        &self.params
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    fn subtree_text(&self, span: (u32, u32)) -> String {
        self.source
            .get(span.0 as usize..span.1 as usize)
            .unwrap_or(&self.source)
            .to_string()
    }

    /// Evaluate with each variable bound to the given jet. Parameter values
    /// follow the declared parameter order.
    pub fn eval_on_jets(&self, args: &[Jet3], params: &[f64]) -> Result<Jet3> {
        assert_eq!(args.len(), self.vars.len(), "argument count mismatch");
        assert_eq!(params.len(), self.params.len(), "parameter count mismatch");
        self.eval_node(&self.root, args, params)
    }

    /// Jet of the expression at `point`, seeding every variable.
    pub fn eval_jet(&self, point: &[f64], order: usize, params: &[f64]) -> Result<Jet3> {
        let n = self.vars.len();
        let args: Vec<Jet3> = (0..n)
            .map(|i| Jet3::variable(point[i], i, n, order))
            .collect();
        self.eval_on_jets(&args, params)
    }

    /// Plain scalar evaluation.
    pub fn eval_f64(&self, point: &[f64], params: &[f64]) -> Result<f64> {
        Ok(self.eval_jet(point, 0, params)?.value())
    }

    fn eval_node(&self, node: &Node, args: &[Jet3], params: &[f64]) -> Result<Jet3> {
        let nv = args.first().map(|j| j.nvars()).unwrap_or(1);
        let tag = |e: Error, span: (u32, u32)| -> Error {
            match e {
                Error::Domain { what, .. } => Error::Domain {
                    what,
                    subtree: self.subtree_text(span),
                },
                other => other,
            }
        };
        match &node.kind {
            NodeKind::Const(v) => Ok(Jet3::constant(*v, nv)),
            NodeKind::Var(i) => Ok(args[*i]),
            NodeKind::Param(i) => Ok(Jet3::constant(params[*i], nv)),
            NodeKind::Add(a, b) => {
                Ok(self.eval_node(a, args, params)? + self.eval_node(b, args, params)?)
            }
            NodeKind::Sub(a, b) => {
                Ok(self.eval_node(a, args, params)? - self.eval_node(b, args, params)?)
            }
            NodeKind::Mul(a, b) => {
                Ok(self.eval_node(a, args, params)? * self.eval_node(b, args, params)?)
            }
            NodeKind::Div(a, b) => {
                let num = self.eval_node(a, args, params)?;
                let den = self.eval_node(b, args, params)?;
                num.div(&den).map_err(|e| tag(e, node.span))
            }
            NodeKind::Neg(a) => Ok(-self.eval_node(a, args, params)?),
            NodeKind::Pow(b, e) => {
                let base = self.eval_node(b, args, params)?;
                let exp = self.eval_node(e, args, params)?;
                let exp_constant = exp.coeffs().iter().skip(1).all(|c| c.abs() < 1e-300);
                if exp_constant {
                    base.powf(exp.value()).map_err(|err| tag(err, node.span))
                } else {
                    // variable exponent: b^e = exp(e log b)
                    let lb = base.ln().map_err(|err| tag(err, node.span))?;
                    Ok((exp * lb).exp())
                }
            }
            NodeKind::Call(f, call_args) => {
                let a0 = self.eval_node(&call_args[0], args, params)?;
                let r = match f {
                    Func::Sin => Ok(a0.sin()),
                    Func::Cos => Ok(a0.cos()),
                    Func::Tan => Ok(a0.tan()),
                    Func::Exp => Ok(a0.exp()),
                    Func::Log => a0.ln(),
                    Func::Sqrt => a0.sqrt(),
                    Func::Atan2 => {
                        let a1 = self.eval_node(&call_args[1], args, params)?;
                        Jet3::atan2(&a0, &a1)
                    }
                };
                r.map_err(|e| tag(e, node.span))
            }
        }
    }

    fn fmt_node(&self, node: &Node, out: &mut String) {
        match &node.kind {
            NodeKind::Const(v) => out.push_str(&format!("{v}")),
            NodeKind::Var(i) => out.push_str(&self.vars[*i]),
            NodeKind::Param(i) => out.push_str(&self.params[*i]),
            NodeKind::Add(a, b) => {
                out.push('(');
                self.fmt_node(a, out);
                out.push_str(" + ");
                self.fmt_node(b, out);
                out.push(')');
            }
            NodeKind::Sub(a, b) => {
                out.push('(');
                self.fmt_node(a, out);
                out.push_str(" - ");
                self.fmt_node(b, out);
                out.push(')');
            }
            NodeKind::Mul(a, b) => {
                out.push('(');
                self.fmt_node(a, out);
                out.push('*');
                self.fmt_node(b, out);
                out.push(')');
            }
            NodeKind::Div(a, b) => {
                out.push('(');
                self.fmt_node(a, out);
                out.push('/');
                self.fmt_node(b, out);
                out.push(')');
            }
            NodeKind::Neg(a) => {
                out.push_str("(-");
                self.fmt_node(a, out);
                out.push(')');
            }
            NodeKind::Pow(a, b) => {
                out.push('(');
                self.fmt_node(a, out);
                out.push('^');
                self.fmt_node(b, out);
                out.push(')');
            }
            NodeKind::Call(f, call_args) => {
                out.push_str(f.name());
                out.push('(');
                for (i, a) in call_args.iter().enumerate() {
                    if i > 0 {
                        out.push_str(", ");
                    }
                    self.fmt_node(a, out);
                }
                out.push(')');
            }
        }
    }
}

impl std::fmt::Display for Expr {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut s = String::new();
        self.fmt_node(&self.root, &mut s);
        f.write_str(&s)
    }
}

/// A jet-evaluable map between coordinate domains: one expression per output
/// component, shared ordered variables and parameter bindings.
#[derive(Clone, Debug)]
pub struct SmoothMap {
    comps: Vec<Expr>,
    param_values: Vec<f64>,
    domain_dim: usize,
}

impl SmoothMap {
    pub fn parse(sources: &[&str], vars: &[&str], params: &[(&str, f64)]) -> Result<SmoothMap> {
        let names: Vec<&str> = params.iter().map(|(n, _)| *n).collect();
        let comps = sources
            .iter()
            .map(|s| parse(s, vars, &names))
            .collect::<Result<Vec<_>>>()?;
        Ok(SmoothMap {
            comps,
            param_values: params.iter().map(|(_, v)| *v).collect(),
            domain_dim: vars.len(),
        })
    }

    pub fn domain_dim(&self) -> usize {
        self.domain_dim
    }

    pub fn codomain_dim(&self) -> usize {
        self.comps.len()
    }

    pub fn components(&self) -> &[Expr] {
        &self.comps
    }

    pub fn set_param(&mut self, name: &str, value: f64) -> Result<()> {
        let names = self.comps[0].param_names();
        let i = names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| Error::InvalidParam(format!("no parameter `{name}`")))?;
        self.param_values[i] = value;
        Ok(())
    }

    pub fn eval(&self, point: &[f64]) -> Result<Vec<f64>> {
        self.comps
            .iter()
            .map(|c| c.eval_f64(point, &self.param_values))
            .collect()
    }

    pub fn eval_jet(&self, point: &[f64], order: usize) -> Result<Vec<Jet3>> {
        self.comps
            .iter()
            .map(|c| c.eval_jet(point, order, &self.param_values))
            .collect()
    }

    pub fn eval_on_jets(&self, args: &[Jet3]) -> Result<Vec<Jet3>> {
        self.comps
            .iter()
            .map(|c| c.eval_on_jets(args, &self.param_values))
            .collect()
    }
}
