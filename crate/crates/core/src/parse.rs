//! Text form of polynomials: `C3 + C1^2 - N*C2`, `-1/4 N^2 p_1`, `K2 - K1^2`.
//!
//! The grammar is the obvious one — `+`/`-` separate terms, `*` or plain
//! juxtaposition multiplies, `/` divides by a (constant, nonzero) factor,
//! `^` raises to a nonnegative integer power, parentheses group. Errors
//! carry the byte offset of the offending token.

use num::{BigInt, Zero};

use crate::error::{Error, Result};
use crate::poly::{Generator, Polynomial, Rat};

#[derive(Clone, PartialEq, Debug)]
enum Token {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn lex(input: &str) -> Result<Vec<(usize, Token)>> {
    let bytes = input.as_bytes();
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        match c {
            ' ' | '\t' | '\n' | '\r' => i += 1,
            '+' => {
                tokens.push((i, Token::Plus));
                i += 1;
            }
            '-' => {
                tokens.push((i, Token::Minus));
                i += 1;
            }
            '*' => {
                tokens.push((i, Token::Star));
                i += 1;
            }
            '/' => {
                tokens.push((i, Token::Slash));
                i += 1;
            }
            '^' => {
                tokens.push((i, Token::Caret));
                i += 1;
            }
            '(' => {
                tokens.push((i, Token::LParen));
                i += 1;
            }
            ')' => {
                tokens.push((i, Token::RParen));
                i += 1;
            }
            '0'..='9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let digits = &input[start..i];
                let n: BigInt = digits
                    .parse()
                    .map_err(|_| Error::parse(start, format!("bad integer {digits:?}")))?;
                tokens.push((start, Token::Int(n)));
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let start = i;
                while i < bytes.len()
                    && ((bytes[i] as char).is_ascii_alphanumeric() || bytes[i] == b'_')
                {
                    i += 1;
                }
                tokens.push((start, Token::Ident(input[start..i].to_string())));
            }
            other => return Err(Error::parse(i, format!("unexpected character {other:?}"))),
        }
    }
    Ok(tokens)
}

struct Parser {
    tokens: Vec<(usize, Token)>,
    pos: usize,
    input_len: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|(_, t)| t)
    }

    fn here(&self) -> usize {
        self.tokens
            .get(self.pos)
            .map_or(self.input_len, |(o, _)| *o)
    }

    fn bump(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).map(|(_, t)| t.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expr(&mut self) -> Result<Polynomial> {
        let mut negate = false;
        match self.peek() {
            Some(Token::Plus) => {
                self.bump();
            }
            Some(Token::Minus) => {
                self.bump();
                negate = true;
            }
            _ => {}
        }
        let mut acc = self.term()?;
        if negate {
            acc = -&acc;
        }
        loop {
            match self.peek() {
                Some(Token::Plus) => {
                    self.bump();
                    let t = self.term()?;
                    acc.add_assign(&t);
                }
                Some(Token::Minus) => {
                    self.bump();
                    let t = self.term()?;
                    acc.sub_assign(&t);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Polynomial> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(Token::Star) => {
                    self.bump();
                    let f = self.factor()?;
                    acc = &acc * &f;
                }
                Some(Token::Slash) => {
                    let at = self.here();
                    self.bump();
                    let f = self.factor()?;
                    let c = constant_of(&f)
                        .ok_or_else(|| Error::parse(at, "division by a non-constant"))?;
                    if c.is_zero() {
                        return Err(Error::parse(at, "division by zero"));
                    }
                    acc = acc.scale(&(Rat::from_integer(1.into()) / c));
                }
                // Juxtaposition: a following atom multiplies in place.
                Some(Token::Int(_)) | Some(Token::Ident(_)) | Some(Token::LParen) => {
                    let f = self.factor()?;
                    acc = &acc * &f;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<Polynomial> {
        let base = self.atom()?;
        if self.peek() == Some(&Token::Caret) {
            self.bump();
            let at = self.here();
            match self.bump() {
                Some(Token::Int(n)) => {
                    let e = u32::try_from(&n)
                        .map_err(|_| Error::parse(at, format!("exponent {n} out of range")))?;
                    Ok(base.pow(e))
                }
                _ => Err(Error::parse(at, "expected an integer exponent after '^'")),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<Polynomial> {
        let at = self.here();
        match self.bump() {
            Some(Token::Int(n)) => Ok(Polynomial::constant(Rat::from_integer(n))),
            Some(Token::Ident(name)) => Generator::parse_name(&name)
                .map(Polynomial::generator)
                .ok_or_else(|| Error::parse(at, format!("unknown symbol {name:?}"))),
            Some(Token::LParen) => {
                let inner = self.expr()?;
                let at = self.here();
                match self.bump() {
                    Some(Token::RParen) => Ok(inner),
                    _ => Err(Error::parse(at, "expected ')'")),
                }
            }
            Some(tok) => Err(Error::parse(at, format!("unexpected token {tok:?}"))),
            None => Err(Error::parse(at, "unexpected end of input")),
        }
    }
}

fn constant_of(p: &Polynomial) -> Option<Rat> {
    if p.is_zero() {
        return Some(Rat::zero());
    }
    if p.num_terms() == 1 {
        let (m, c) = p.iter().next().unwrap();
        if m.is_unit() {
            return Some(c.clone());
        }
    }
    None
}

/// Parses a polynomial expression in the symbols `N`, `C_k`, `p_k`, `K_k`.
pub fn parse_polynomial(input: &str) -> Result<Polynomial> {
    let tokens = lex(input)?;
    if tokens.is_empty() {
        return Err(Error::parse(0, "empty expression"));
    }
    let mut parser = Parser {
        tokens,
        pos: 0,
        input_len: input.len(),
    };
    let value = parser.expr()?;
    if parser.peek().is_some() {
        return Err(Error::parse(parser.here(), "trailing input after expression"));
    }
    Ok(value)
}
