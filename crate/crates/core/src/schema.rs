//! Symbolic words with parametric exponents.
//!
//! Grammar:
//!
//! ```text
//! word   := item*
//! item   := letter ('^' exp)? | '(' word ')' '^' exp
//! exp    := digits | ident | '{' expr '}'
//! expr   := term (('+' | '-') term)*
//! term   := factor ('*' factor)*
//! factor := digits | ident | '(' expr ')'
//! ```
//!
//! Exponents evaluating to zero make their item vanish; negative exponents
//! are an instantiation error.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::word::{Letter, Word};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SchemaError {
    #[error("schema syntax error at byte {pos} in {text:?}")]
    Syntax { text: String, pos: usize },
    #[error("unbound parameter {0:?}")]
    Unbound(String),
    #[error("exponent {expr} evaluates to {value} < 0")]
    NegativeExponent { expr: String, value: i64 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Num(i64),
    Var(String),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
}

impl Expr {
    pub fn eval(&self, env: &Env) -> Result<i64, SchemaError> {
        Ok(match self {
            Expr::Num(n) => *n,
            Expr::Var(v) => *env.get(v.as_str()).ok_or_else(|| SchemaError::Unbound(v.clone()))?,
            Expr::Add(a, b) => a.eval(env)? + b.eval(env)?,
            Expr::Sub(a, b) => a.eval(env)? - b.eval(env)?,
            Expr::Mul(a, b) => a.eval(env)? * b.eval(env)?,
        })
    }

    pub fn variables(&self, out: &mut Vec<String>) {
        match self {
            Expr::Num(_) => {}
            Expr::Var(v) => out.push(v.clone()),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) => {
                a.variables(out);
                b.variables(out);
            }
        }
    }
}

impl std::fmt::Display for Expr {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Expr::Num(n) => write!(f, "{n}"),
            Expr::Var(v) => write!(f, "{v}"),
            Expr::Add(a, b) => write!(f, "({a}+{b})"),
            Expr::Sub(a, b) => write!(f, "({a}-{b})"),
            Expr::Mul(a, b) => write!(f, "{a}*{b}"),
        }
    }
}

pub type Env = BTreeMap<&'static str, i64>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Item {
    Power(Letter, Expr),
    Group(Vec<Item>, Expr),
}

/// A parsed symbolic word.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymbolicWord {
    pub source: String,
    pub items: Vec<Item>,
}

impl SymbolicWord {
    pub fn parse(text: &str) -> Result<Self, SchemaError> {
        let mut p = Parser { text, bytes: text.as_bytes(), pos: 0 };
        let items = p.items()?;
        p.skip_ws();
        if p.pos != p.bytes.len() {
            return Err(p.error());
        }
        Ok(SymbolicWord { source: text.to_string(), items })
    }

    pub fn instantiate(&self, env: &Env) -> Result<Word, SchemaError> {
        let mut out = Word::empty();
        expand_items(&self.items, env, &mut out)?;
        Ok(out)
    }

    pub fn letters(&self) -> Vec<Letter> {
        fn walk(items: &[Item], out: &mut Vec<Letter>) {
            for it in items {
                match it {
                    Item::Power(l, _) => out.push(*l),
                    Item::Group(inner, _) => walk(inner, out),
                }
            }
        }
        let mut out = Vec::new();
        walk(&self.items, &mut out);
        out
    }

    pub fn variables(&self) -> Vec<String> {
        fn walk(items: &[Item], out: &mut Vec<String>) {
            for it in items {
                match it {
                    Item::Power(_, e) => e.variables(out),
                    Item::Group(inner, e) => {
                        e.variables(out);
                        walk(inner, out);
                    }
                }
            }
        }
        let mut out = Vec::new();
        walk(&self.items, &mut out);
        out.sort();
        out.dedup();
        out
    }
}

fn exponent(e: &Expr, env: &Env) -> Result<usize, SchemaError> {
    let value = e.eval(env)?;
    usize::try_from(value).map_err(|_| SchemaError::NegativeExponent { expr: e.to_string(), value })
}

fn expand_items(items: &[Item], env: &Env, out: &mut Word) -> Result<(), SchemaError> {
    for it in items {
        match it {
            Item::Power(l, e) => out.push_power(*l, exponent(e, env)?),
            Item::Group(inner, e) => {
                let n = exponent(e, env)?;
                let mut once = Word::empty();
                expand_items(inner, env, &mut once)?;
                for _ in 0..n {
                    out.extend_from(&once);
                }
            }
        }
    }
    Ok(())
}

pub fn parse_expr(text: &str) -> Result<Expr, SchemaError> {
    let mut p = Parser { text, bytes: text.as_bytes(), pos: 0 };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos != p.bytes.len() {
        return Err(p.error());
    }
    Ok(e)
}

struct Parser<'a> {
    text: &'a str,
    bytes: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn error(&self) -> SchemaError {
        SchemaError::Syntax { text: self.text.to_string(), pos: self.pos }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> Result<(), SchemaError> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error())
        }
    }

    fn items(&mut self) -> Result<Vec<Item>, SchemaError> {
        let mut out = Vec::new();
        loop {
            match self.peek() {
                Some(b'(') => {
                    self.pos += 1;
                    let inner = self.items()?;
                    self.eat(b')')?;
                    self.eat(b'^')?;
                    let e = self.exponent()?;
                    out.push(Item::Group(inner, e));
                }
                Some(c) if Letter::from_char(c as char).is_some() => {
                    self.pos += 1;
                    let l = Letter::from_char(c as char).expect("checked");
                    let e = if self.bytes.get(self.pos) == Some(&b'^') {
                        self.pos += 1;
                        self.exponent()?
                    } else {
                        Expr::Num(1)
                    };
                    out.push(Item::Power(l, e));
                }
                _ => return Ok(out),
            }
        }
    }

    fn exponent(&mut self) -> Result<Expr, SchemaError> {
        if self.peek() == Some(b'{') {
            self.pos += 1;
            let e = self.expr()?;
            self.eat(b'}')?;
            Ok(e)
        } else {
            self.atom()
        }
    }

    fn expr(&mut self) -> Result<Expr, SchemaError> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Some(b'-') => {
                    self.pos += 1;
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr, SchemaError> {
        let mut lhs = self.factor()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            lhs = Expr::Mul(Box::new(lhs), Box::new(self.factor()?));
        }
        Ok(lhs)
    }

    fn factor(&mut self) -> Result<Expr, SchemaError> {
        if self.peek() == Some(b'(') {
            self.pos += 1;
            let e = self.expr()?;
            self.eat(b')')?;
            return Ok(e);
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<Expr, SchemaError> {
        self.skip_ws();
        let start = self.pos;
        match self.bytes.get(self.pos) {
            Some(c) if c.is_ascii_digit() => {
                while self.bytes.get(self.pos).is_some_and(u8::is_ascii_digit) {
                    self.pos += 1;
                }
                Ok(Expr::Num(self.text[start..self.pos].parse().map_err(|_| self.error())?))
            }
            Some(c) if c.is_ascii_alphabetic() => {
                while self.bytes.get(self.pos).is_some_and(u8::is_ascii_alphabetic) {
                    self.pos += 1;
                }
                Ok(Expr::Var(self.text[start..self.pos].to_string()))
            }
            _ => Err(self.error()),
        }
    }
}
