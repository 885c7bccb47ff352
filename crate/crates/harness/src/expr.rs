//! Arithmetic expressions in one variable `x`:
//!
//! ```text
//! expr  := term (("+" | "-") term)*
//! term  := unary (("*" | "/") unary)*
//! unary := "-" unary | power
//! power := atom ("^" unary)?
//! atom  := number | "x" | "pi" | func "(" expr ")" | "(" expr ")"
//! func  := exp | sin | cos | sqrt
//! ```
//!
//! `^` binds tighter than unary minus and is right-associative, so
//! `-x^2` is `-(x^2)` and `2^3^2` is `2^9`.

use std::fmt;

/// Nesting limit for parentheses, calls and unary/power chains.
pub const MAX_DEPTH: usize = 64;
/// Longest accepted source text.
pub const MAX_LEN: usize = 4096;

#[derive(Debug, Clone, PartialEq)]
pub struct ExprError {
    pub pos: usize,
    pub msg: String,
}

impl fmt::Display for ExprError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "at column {}: {}", self.pos + 1, self.msg)
    }
}

impl std::error::Error for ExprError {}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Exp,
    Sin,
    Cos,
    Sqrt,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(f64),
    X,
    Neg(Box<Expr>),
    Bin(BinOp, Box<Expr>, Box<Expr>),
    Call(Func, Box<Expr>),
}

impl Expr {
    pub fn eval(&self, x: f64) -> f64 {
        match self {
            Expr::Num(v) => *v,
            Expr::X => x,
            Expr::Neg(e) => -e.eval(x),
            Expr::Bin(op, a, b) => {
                let (a, b) = (a.eval(x), b.eval(x));
                match op {
                    BinOp::Add => a + b,
                    BinOp::Sub => a - b,
                    BinOp::Mul => a * b,
                    BinOp::Div => a / b,
                    BinOp::Pow => a.powf(b),
                }
            }
            Expr::Call(f, e) => {
                let v = e.eval(x);
                match f {
                    Func::Exp => v.exp(),
                    Func::Sin => v.sin(),
                    Func::Cos => v.cos(),
                    Func::Sqrt => v.sqrt(),
                }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Op(char),
    LParen,
    RParen,
}

fn lex(src: &str) -> Result<Vec<(usize, Tok)>, ExprError> {
    let b = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < b.len() {
        let c = b[i];
        if c.is_ascii_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || c == b'.' {
            let start = i;
            while i < b.len() && (b[i].is_ascii_digit() || b[i] == b'.') {
                i += 1;
            }
            if i < b.len() && (b[i] == b'e' || b[i] == b'E') {
                let mut j = i + 1;
                if j < b.len() && (b[j] == b'+' || b[j] == b'-') {
                    j += 1;
                }
                if j < b.len() && b[j].is_ascii_digit() {
                    while j < b.len() && b[j].is_ascii_digit() {
                        j += 1;
                    }
                    i = j;
                }
            }
            let text = &src[start..i];
            let v: f64 = text.parse().map_err(|_| ExprError {
                pos: start,
                msg: format!("bad number '{text}'"),
            })?;
            out.push((start, Tok::Num(v)));
        } else if c.is_ascii_alphabetic() {
            let start = i;
            while i < b.len() && (b[i].is_ascii_alphanumeric() || b[i] == b'_') {
                i += 1;
            }
            out.push((start, Tok::Ident(src[start..i].to_string())));
        } else {
            let tok = match c {
                b'+' | b'-' | b'*' | b'/' | b'^' => Tok::Op(c as char),
                b'(' => Tok::LParen,
                b')' => Tok::RParen,
                _ => {
                    let ch = src[i..].chars().next().unwrap_or('?');
                    return Err(ExprError {
                        pos: i,
                        msg: format!("unexpected character '{ch}'"),
                    });
                }
            };
            out.push((i, tok));
            i += 1;
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    at: usize,
    end: usize,
    depth: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|t| &t.1)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map_or(self.end, |t| t.0)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, ExprError> {
        Err(ExprError {
            pos: self.pos(),
            msg: msg.into(),
        })
    }

    fn enter(&mut self) -> Result<(), ExprError> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            return self.err(format!("nesting deeper than {MAX_DEPTH}"));
        }
        Ok(())
    }

    fn expr(&mut self) -> Result<Expr, ExprError> {
        self.enter()?;
        let mut lhs = self.term()?;
        while let Some(Tok::Op(c @ ('+' | '-'))) = self.peek() {
            let op = if *c == '+' { BinOp::Add } else { BinOp::Sub };
            self.at += 1;
            let rhs = self.term()?;
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(rhs));
        }
        self.depth -= 1;
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Expr, ExprError> {
        let mut lhs = self.unary()?;
        while let Some(Tok::Op(c @ ('*' | '/'))) = self.peek() {
            let op = if *c == '*' { BinOp::Mul } else { BinOp::Div };
            self.at += 1;
            let rhs = self.unary()?;
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr, ExprError> {
        self.enter()?;
        let out = if let Some(Tok::Op('-')) = self.peek() {
            self.at += 1;
            Expr::Neg(Box::new(self.unary()?))
        } else {
            self.power()?
        };
        self.depth -= 1;
        Ok(out)
    }

    fn power(&mut self) -> Result<Expr, ExprError> {
        let base = self.atom()?;
        if let Some(Tok::Op('^')) = self.peek() {
            self.at += 1;
            let exp = self.unary()?;
            return Ok(Expr::Bin(BinOp::Pow, Box::new(base), Box::new(exp)));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr, ExprError> {
        match self.peek().cloned() {
            Some(Tok::Num(v)) => {
                self.at += 1;
                Ok(Expr::Num(v))
            }
            Some(Tok::LParen) => {
                self.at += 1;
                let e = self.expr()?;
                self.expect_rparen()?;
                Ok(e)
            }
            Some(Tok::Ident(name)) => {
                let func = match name.as_str() {
                    "x" => {
                        self.at += 1;
                        return Ok(Expr::X);
                    }
                    "pi" => {
                        self.at += 1;
                        return Ok(Expr::Num(std::f64::consts::PI));
                    }
                    "exp" => Func::Exp,
                    "sin" => Func::Sin,
                    "cos" => Func::Cos,
                    "sqrt" => Func::Sqrt,
                    _ => return self.err(format!("unknown name '{name}'")),
                };
                self.at += 1;
                if self.peek() != Some(&Tok::LParen) {
                    return self.err(format!("expected '(' after '{name}'"));
                }
                self.at += 1;
                let arg = self.expr()?;
                self.expect_rparen()?;
                Ok(Expr::Call(func, Box::new(arg)))
            }
            Some(Tok::Op(c)) => self.err(format!("unexpected operator '{c}'")),
            Some(Tok::RParen) => self.err("unexpected ')'"),
            None => self.err("unexpected end of expression"),
        }
    }

    fn expect_rparen(&mut self) -> Result<(), ExprError> {
        if self.peek() == Some(&Tok::RParen) {
            self.at += 1;
            Ok(())
        } else {
            self.err("expected ')'")
        }
    }
}

pub fn parse_expr(src: &str) -> Result<Expr, ExprError> {
    if src.len() > MAX_LEN {
        return Err(ExprError {
            pos: MAX_LEN,
            msg: format!("expression longer than {MAX_LEN} bytes"),
        });
    }
    let toks = lex(src)?;
    let mut p = Parser {
        toks,
        at: 0,
        end: src.len(),
        depth: 0,
    };
    let e = p.expr()?;
    if p.at != p.toks.len() {
        return p.err("trailing input");
    }
    Ok(e)
}
