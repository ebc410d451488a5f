//! Text form of operators.
//!
//! Printing emits normal form terms `c * z1^a z2^b T1^p T2^q`. Parsing accepts
//! that and more: sums, products (`*` or juxtaposition, order preserved),
//! parentheses, integer powers, rational literals `5/6`, and `T1`/`theta1`.

use std::fmt;

use num_traits::{One, Zero};

use super::ShiftOp;
use crate::error::{Error, Result};
use crate::rat::{parse_rat, Rat};

impl fmt::Display for ShiftOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        // highest theta order first, then increasing z-degree
        let mut terms: Vec<_> = self.terms().collect();
        terms.sort_by(|((a1, b1), _), ((a2, b2), _)| {
            let o1: u32 = b1.iter().sum();
            let o2: u32 = b2.iter().sum();
            (a1.iter().sum::<u32>(), a1, std::cmp::Reverse(o1), std::cmp::Reverse(b1))
                .cmp(&(a2.iter().sum::<u32>(), a2, std::cmp::Reverse(o2), std::cmp::Reverse(b2)))
        });
        for (n, ((a, b), c)) in terms.into_iter().enumerate() {
            let mut vars = Vec::new();
            for (i, e) in a.iter().enumerate() {
                match e {
                    0 => {}
                    1 => vars.push(format!("z{}", i + 1)),
                    _ => vars.push(format!("z{}^{e}", i + 1)),
                }
            }
            for (i, e) in b.iter().enumerate() {
                match e {
                    0 => {}
                    1 => vars.push(format!("T{}", i + 1)),
                    _ => vars.push(format!("T{}^{e}", i + 1)),
                }
            }
            let neg = c < &Rat::zero();
            let mag = if neg { -c.clone() } else { c.clone() };
            if n == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            if vars.is_empty() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{}", vars.join(" "))?;
            } else {
                write!(f, "{mag} * {}", vars.join(" "))?;
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(String),
    Z(usize),
    T(usize),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
}

fn lex(s: &str) -> Result<Vec<Tok>> {
    let cs: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    let err = |m: String| Error::Parse(m);
    while i < cs.len() {
        let ch = cs[i];
        match ch {
            ' ' | '\t' | '\n' => i += 1,
            '+' => {
                out.push(Tok::Plus);
                i += 1
            }
            '-' => {
                out.push(Tok::Minus);
                i += 1
            }
            '*' => {
                out.push(Tok::Star);
                i += 1
            }
            '^' => {
                out.push(Tok::Caret);
                i += 1
            }
            '(' => {
                out.push(Tok::LParen);
                i += 1
            }
            ')' => {
                out.push(Tok::RParen);
                i += 1
            }
            '0'..='9' => {
                let st = i;
                while i < cs.len() && cs[i].is_ascii_digit() {
                    i += 1;
                }
                if i < cs.len() && cs[i] == '/' {
                    i += 1;
                    while i < cs.len() && cs[i].is_ascii_digit() {
                        i += 1;
                    }
                }
                out.push(Tok::Num(cs[st..i].iter().collect()));
            }
            'z' | 'T' | 't' | 'θ' => {
                let st = i;
                i += 1;
                while i < cs.len() && cs[i].is_ascii_alphabetic() {
                    i += 1;
                }
                let name: String = cs[st..i].iter().collect();
                let ds = i;
                while i < cs.len() && cs[i].is_ascii_digit() {
                    i += 1;
                }
                let idx: usize = cs[ds..i].iter().collect::<String>().parse().map_err(|_| err(format!("missing index after `{name}`")))?;
                if idx == 0 {
                    return Err(err("variable indices start at 1".into()));
                }
                match name.as_str() {
                    "z" => out.push(Tok::Z(idx - 1)),
                    "T" | "theta" | "θ" | "t" => out.push(Tok::T(idx - 1)),
                    _ => return Err(err(format!("unknown symbol `{name}`"))),
                }
            }
            _ => return Err(err(format!("unexpected character `{ch}`"))),
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
    h: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn expr(&mut self) -> Result<ShiftOp> {
        let mut acc = match self.peek() {
            Some(Tok::Minus) => {
                self.next();
                self.term()?.scale(&-Rat::one())
            }
            Some(Tok::Plus) => {
                self.next();
                self.term()?
            }
            _ => self.term()?,
        };
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.next();
                    acc = acc.add(&self.term()?);
                }
                Some(Tok::Minus) => {
                    self.next();
                    acc = acc.sub(&self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<ShiftOp> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.next();
                    acc = acc.mul(&self.factor()?)?;
                }
                Some(Tok::Num(_)) | Some(Tok::Z(_)) | Some(Tok::T(_)) | Some(Tok::LParen) => {
                    acc = acc.mul(&self.factor()?)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<ShiftOp> {
        let base = self.atom()?;
        if self.peek() == Some(&Tok::Caret) {
            self.next();
            match self.next() {
                Some(Tok::Num(n)) => {
                    let e: u32 = n.parse().map_err(|_| Error::Parse(format!("bad exponent `{n}`")))?;
                    return Ok(base.pow(e));
                }
                t => return Err(Error::Parse(format!("expected exponent, got {t:?}"))),
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<ShiftOp> {
        let h = self.h;
        let check = |i: usize| {
            if i >= h {
                Err(Error::Parse(format!("variable index {} exceeds {h}", i + 1)))
            } else {
                Ok(())
            }
        };
        match self.next() {
            Some(Tok::Num(n)) => Ok(ShiftOp::constant(h, parse_rat(&n)?)),
            Some(Tok::Z(i)) => {
                check(i)?;
                Ok(ShiftOp::z(h, i))
            }
            Some(Tok::T(i)) => {
                check(i)?;
                Ok(ShiftOp::theta(h, i))
            }
            Some(Tok::LParen) => {
                let e = self.expr()?;
                match self.next() {
                    Some(Tok::RParen) => Ok(e),
                    t => Err(Error::Parse(format!("expected `)`, got {t:?}"))),
                }
            }
            Some(Tok::Minus) => Ok(self.factor()?.scale(&-Rat::one())),
            t => Err(Error::Parse(format!("unexpected token {t:?}"))),
        }
    }
}

impl ShiftOp {
    /// Parses an operator in `h` variables.
    pub fn parse(h: usize, s: &str) -> Result<Self> {
        let mut p = Parser { toks: lex(s)?, pos: 0, h };
        let e = p.expr()?;
        if p.pos != p.toks.len() {
            return Err(Error::Parse(format!("trailing input in `{s}`")));
        }
        Ok(e)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::ri;

    #[test]
    fn print_parse_roundtrip() {
        let a = ShiftOp::parse(2, "T1^2 - 4 T1 T2 - 432 z1 (T1 + 5/6)(T1 + 1/6)").unwrap();
        let s = a.to_string();
        assert_eq!(ShiftOp::parse(2, &s).unwrap(), a);
    }

    #[test]
    fn juxtaposition_keeps_order() {
        let tz = ShiftOp::parse(1, "T1 z1").unwrap();
        let want = ShiftOp::parse(1, "z1 T1 + z1").unwrap();
        assert_eq!(tz, want);
    }

    #[test]
    fn parse_errors() {
        assert!(ShiftOp::parse(1, "z2").is_err());
        assert!(ShiftOp::parse(1, "(T1").is_err());
        assert!(ShiftOp::parse(1, "T1 ?").is_err());
    }

    #[test]
    fn printed_form() {
        let a = ShiftOp::parse(1, "T1^2 - 2 z1 T1").unwrap();
        assert_eq!(a.to_string(), "T1^2 - 2 * z1 T1");
        assert_eq!(ShiftOp::constant(1, ri(-3)).to_string(), "-3");
    }
}
