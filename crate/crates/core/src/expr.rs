//! Expression parsing for elements of the presented algebra.
//!
//! Grammar (whitespace insensitive):
//!   expr   := term (('+' | '-') term)*
//!   term   := ['-'] factor ('*' factor)*
//!   factor := atom ['^' int]
//!   atom   := integer | 'w' | ident '[' state ']' | '(' expr ')'
//! with state one of pp, pm, mp, mm. Products are left associative, the
//! left factor topmost. `parse` of a canonical `NcPoly::render` is the
//! identity.

use num_bigint::BigInt;
use thiserror::Error;

use crate::presentation::Presentation;
use crate::rewrite::{letter, NcPoly, STATE_NAMES};
use crate::ring::Laurent;

#[derive(Debug, Error, PartialEq)]
#[error("parse error at byte {pos}: {msg}")]
pub struct ParseError {
    pub pos: usize,
    pub msg: String,
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    p: &'a Presentation,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError {
            pos: self.pos,
            msg: msg.into(),
        })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<(), ParseError> {
        if self.eat(c) {
            Ok(())
        } else {
            self.err(format!("expected '{}'", c as char))
        }
    }

    fn integer(&mut self) -> Result<i64, ParseError> {
        self.skip_ws();
        let neg = self.eat(b'-');
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == start {
            return self.err("expected an integer");
        }
        let digits = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        let v: i64 = digits
            .parse()
            .map_err(|_| ParseError {
                pos: start,
                msg: "integer out of range".to_string(),
            })?;
        Ok(if neg { -v } else { v })
    }

    fn ident(&mut self) -> Result<String, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len()
            && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
        {
            self.pos += 1;
        }
        if self.pos == start {
            return self.err("expected an identifier");
        }
        Ok(std::str::from_utf8(&self.src[start..self.pos])
            .unwrap()
            .to_string())
    }

    fn atom(&mut self) -> Result<NcPoly<Laurent>, ParseError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(b')')?;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                let digits = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                let v: BigInt = digits.parse().unwrap();
                Ok(NcPoly::scalar(Laurent::monomial(v, 0)))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                let id = self.ident()?;
                if self.peek() == Some(b'[') {
                    self.pos += 1;
                    let state_id = self.ident()?;
                    let state = STATE_NAMES
                        .iter()
                        .position(|&s| s == state_id)
                        .ok_or(ParseError {
                            pos: self.pos,
                            msg: format!("unknown state '{}', expected pp/pm/mp/mm", state_id),
                        })?;
                    self.expect(b']')?;
                    let rank = self.p.rank_of(&id).ok_or(ParseError {
                        pos: start,
                        msg: format!("unknown generator '{}'", id),
                    })?;
                    Ok(NcPoly::from_letter(letter(rank, state as u8)))
                } else if id == "w" {
                    Ok(NcPoly::scalar(Laurent::omega(1)))
                } else {
                    Err(ParseError {
                        pos: start,
                        msg: format!("unknown symbol '{}'", id),
                    })
                }
            }
            _ => self.err("expected an atom"),
        }
    }

    fn factor(&mut self) -> Result<NcPoly<Laurent>, ParseError> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let at = self.pos;
            let e = self.integer()?;
            if e >= 0 {
                let mut acc = NcPoly::one();
                for _ in 0..e {
                    acc = acc.mul_free(&base);
                }
                Ok(acc)
            } else {
                // negative powers only of unit monomials such as w or -w^3
                let unit = base.num_terms() == 1
                    && base.terms().next().map_or(false, |(word, c)| {
                        word.is_empty() && c.num_terms() == 1
                    });
                if !unit {
                    return Err(ParseError {
                        pos: at,
                        msg: "negative power of a non-invertible expression".to_string(),
                    });
                }
                let (_, c) = base.terms().next().unwrap();
                let (k, coef) = c.terms().next().unwrap();
                if coef.magnitude().to_string() != "1" {
                    return Err(ParseError {
                        pos: at,
                        msg: "negative power of a non-unit coefficient".to_string(),
                    });
                }
                use num_traits::Signed;
                let mut acc = Laurent::one();
                let single = Laurent::monomial(
                    if coef.is_negative() {
                        BigInt::from(-1)
                    } else {
                        BigInt::from(1)
                    },
                    -k,
                );
                for _ in 0..(-e) {
                    acc = &acc * &single;
                }
                Ok(NcPoly::scalar(acc))
            }
        } else {
            Ok(base)
        }
    }

    fn term(&mut self) -> Result<NcPoly<Laurent>, ParseError> {
        let neg = self.eat(b'-');
        let mut acc = self.factor()?;
        while self.eat(b'*') {
            let f = self.factor()?;
            acc = acc.mul_free(&f);
        }
        if neg {
            acc = acc.neg();
        }
        Ok(acc)
    }

    fn expr(&mut self) -> Result<NcPoly<Laurent>, ParseError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?);
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = acc.sub(&self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }
}

/// Parse an expression over the presentation's stated generators.
pub fn parse_expression(p: &Presentation, text: &str) -> Result<NcPoly<Laurent>, ParseError> {
    let mut parser = Parser {
        src: text.as_bytes(),
        pos: 0,
        p,
    };
    let e = parser.expr()?;
    parser.skip_ws();
    if parser.pos != parser.src.len() {
        return parser.err("trailing input");
    }
    Ok(e)
}

/// Rendering name for a letter: `id[state]`.
pub fn letter_name(p: &Presentation) -> impl Fn(u16) -> String + '_ {
    move |l| {
        let arc = crate::rewrite::letter_arc(l);
        let s = crate::rewrite::letter_state(l) as usize;
        format!("{}[{}]", p.generators[arc].id, STATE_NAMES[s])
    }
}
