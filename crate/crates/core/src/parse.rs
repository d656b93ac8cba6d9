//! Expressions for elements of `Z_p[ζ]`.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor (('*' | '/') factor)*
//! factor := atom ('^' uint)?
//! atom   := uint | 'zeta' | 'pi' | 'varpi' | 'p' | '(' expr ')' | '-' atom
//! ```
//!
//! `pi` is `1 - ζ`, `varpi` the canonical uniformiser with `varpi^(p-1) = -p`,
//! and `/` divides by a unit. Integer literals may be arbitrarily long and
//! are reduced modulo `p^k`. Since `-` binds to an atom, `-2^2` is `4`.

use std::sync::Arc;

use num_bigint::BigInt;

use crate::cyclotomic::{CycloElem, RingContext};
use crate::error::{Error, Result};
use crate::scalar::Residue;

/// Inputs longer than this are rejected outright.
pub const MAX_INPUT_BYTES: usize = 64 * 1024;

/// Nesting depth of parentheses and unary minus.
const MAX_DEPTH: usize = 256;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Int(BigInt),
    Zeta,
    Pi,
    Varpi,
    P,
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u128),
}

impl Expr {
    pub fn eval<T: Residue>(&self, ctx: &Arc<RingContext<T>>) -> Result<CycloElem<T>> {
        Ok(match self {
            Expr::Int(v) => ctx.from_residue(ctx.modulus().reduce_big(v)),
            Expr::Zeta => ctx.zeta(),
            Expr::Pi => ctx.pi(),
            Expr::Varpi => ctx.canonical_varpi()?,
            Expr::P => ctx.from_int(ctx.p() as i64),
            Expr::Neg(a) => -a.eval(ctx)?,
            Expr::Add(a, b) => &a.eval(ctx)? + &b.eval(ctx)?,
            Expr::Sub(a, b) => &a.eval(ctx)? - &b.eval(ctx)?,
            Expr::Mul(a, b) => &a.eval(ctx)? * &b.eval(ctx)?,
            Expr::Div(a, b) => a.eval(ctx)?.try_div(&b.eval(ctx)?)?,
            Expr::Pow(a, e) => a.eval(ctx)?.pow(*e),
        })
    }
}

pub fn parse_expr(text: &str) -> Result<Expr> {
    if text.len() > MAX_INPUT_BYTES {
        return Err(parse_error(
            MAX_INPUT_BYTES,
            format!("input exceeds {MAX_INPUT_BYTES} bytes"),
        ));
    }
    let mut parser = Parser {
        src: text.as_bytes(),
        pos: 0,
        depth: 0,
    };
    let e = parser.expr()?;
    parser.skip_ws();
    if parser.pos < parser.src.len() {
        return Err(parser.error("unexpected trailing input"));
    }
    Ok(e)
}

/// Parse and evaluate in `ctx`.
pub fn parse_element<T: Residue>(text: &str, ctx: &Arc<RingContext<T>>) -> Result<CycloElem<T>> {
    parse_expr(text)?.eval(ctx)
}

fn parse_error(offset: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        offset,
        message: message.into(),
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    depth: usize,
}

impl Parser<'_> {
    fn error(&self, message: &str) -> Error {
        parse_error(self.pos, message)
    }

    fn skip_ws(&mut self) {
        while self
            .src
            .get(self.pos)
            .is_some_and(|c| c.is_ascii_whitespace())
        {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        while let Some(op @ (b'+' | b'-')) = self.peek() {
            self.pos += 1;
            let rhs = self.term()?;
            lhs = if op == b'+' {
                Expr::Add(Box::new(lhs), Box::new(rhs))
            } else {
                Expr::Sub(Box::new(lhs), Box::new(rhs))
            };
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.factor()?;
        while let Some(op @ (b'*' | b'/')) = self.peek() {
            self.pos += 1;
            let rhs = self.factor()?;
            lhs = if op == b'*' {
                Expr::Mul(Box::new(lhs), Box::new(rhs))
            } else {
                Expr::Div(Box::new(lhs), Box::new(rhs))
            };
        }
        Ok(lhs)
    }

    fn factor(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let start = self.pos;
            let digits = self.digits();
            if digits.is_empty() {
                return Err(self.error("expected a nonnegative integer exponent"));
            }
            let e = digits
                .parse::<u128>()
                .map_err(|_| parse_error(start, "exponent too large"))?;
            return Ok(Expr::Pow(Box::new(base), e));
        }
        Ok(base)
    }

    fn digits(&mut self) -> &str {
        let start = self.pos;
        while self.src.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        std::str::from_utf8(&self.src[start..self.pos]).expect("ASCII digits")
    }

    fn nested<F: FnOnce(&mut Self) -> Result<Expr>>(&mut self, f: F) -> Result<Expr> {
        if self.depth >= MAX_DEPTH {
            return Err(self.error("expression nested too deeply"));
        }
        self.depth += 1;
        let r = f(self);
        self.depth -= 1;
        r
    }

    fn atom(&mut self) -> Result<Expr> {
        match self.peek() {
            Some(b'0'..=b'9') => {
                let digits = self.digits();
                Ok(Expr::Int(digits.parse().expect("decimal digits")))
            }
            Some(b'(') => {
                self.pos += 1;
                let e = self.nested(|s| s.expr())?;
                if self.peek() != Some(b')') {
                    return Err(self.error("expected ')'"));
                }
                self.pos += 1;
                Ok(e)
            }
            Some(b'-') => {
                self.pos += 1;
                self.nested(|s| Ok(Expr::Neg(Box::new(s.atom()?))))
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self
                    .src
                    .get(self.pos)
                    .is_some_and(u8::is_ascii_alphanumeric)
                {
                    self.pos += 1;
                }
                match &self.src[start..self.pos] {
                    b"zeta" => Ok(Expr::Zeta),
                    b"pi" => Ok(Expr::Pi),
                    b"varpi" => Ok(Expr::Varpi),
                    b"p" => Ok(Expr::P),
                    _ => Err(parse_error(start, "unknown symbol")),
                }
            }
            Some(_) => Err(self.error("unexpected character")),
            None => Err(self.error("unexpected end of input")),
        }
    }
}
