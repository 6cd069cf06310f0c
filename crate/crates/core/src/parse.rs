//! Recursive-descent parser for formulas and conditional assertions.
//!
//! Grammar, lowest precedence first:
//!
//! ```text
//! formula := iff
//! iff     := imp ("<->" imp)*
//! imp     := or ("->" imp)?
//! or      := and ("|" and)*
//! and     := not ("&" not)*
//! not     := "!" not | atom
//! atom    := ident | "true" | "false" | "(" formula ")"
//! ```
//!
//! An assertion is `formula "|~" formula`. Whitespace is insignificant and
//! `#` starts a comment running to the end of the line.

use std::fmt;

use thiserror::Error;

use crate::formula::Formula;
use crate::kb::ConditionalAssertion;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Tok<'a> {
    Ident(&'a str),
    True,
    False,
    LParen,
    RParen,
    Not,
    And,
    Or,
    Implies,
    Iff,
    Twiddle,
    Eof,
}

impl fmt::Display for Tok<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "identifier `{s}`"),
            Tok::True => f.write_str("`true`"),
            Tok::False => f.write_str("`false`"),
            Tok::LParen => f.write_str("`(`"),
            Tok::RParen => f.write_str("`)`"),
            Tok::Not => f.write_str("`!`"),
            Tok::And => f.write_str("`&`"),
            Tok::Or => f.write_str("`|`"),
            Tok::Implies => f.write_str("`->`"),
            Tok::Iff => f.write_str("`<->`"),
            Tok::Twiddle => f.write_str("`|~`"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("syntax error at byte {offset}: expected {}, found {found}", .expected.join(" or "))]
pub struct ParseError {
    pub offset: usize,
    pub expected: Vec<String>,
    pub found: String,
}

const ATOM_START: &[&str] = &["identifier", "`true`", "`false`", "`(`", "`!`"];

fn lex(text: &str) -> Result<Vec<(Tok<'_>, usize)>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let tok = match c {
            b' ' | b'\t' | b'\r' | b'\n' => {
                i += 1;
                continue;
            }
            b'#' => {
                while i < bytes.len() && bytes[i] != b'\n' {
                    i += 1;
                }
                continue;
            }
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b'!' => Tok::Not,
            b'&' => Tok::And,
            b'|' if bytes.get(i + 1) == Some(&b'~') => {
                i += 1;
                Tok::Twiddle
            }
            b'|' => Tok::Or,
            b'-' if bytes.get(i + 1) == Some(&b'>') => {
                i += 1;
                Tok::Implies
            }
            b'<' if bytes.get(i + 1) == Some(&b'-') && bytes.get(i + 2) == Some(&b'>') => {
                i += 2;
                Tok::Iff
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                while i + 1 < bytes.len()
                    && (bytes[i + 1].is_ascii_alphanumeric() || bytes[i + 1] == b'_')
                {
                    i += 1;
                }
                match &text[start..=i] {
                    "true" => Tok::True,
                    "false" => Tok::False,
                    s => Tok::Ident(s),
                }
            }
            _ => {
                let ch = text[start..].chars().next().unwrap_or('?');
                return Err(ParseError {
                    offset: start,
                    expected: vec!["a token".into()],
                    found: format!("character `{ch}`"),
                });
            }
        };
        i += 1;
        out.push((tok, start));
    }
    out.push((Tok::Eof, text.len()));
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(Tok<'a>, usize)>,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str) -> Result<Self, ParseError> {
        Ok(Parser {
            toks: lex(text)?,
            pos: 0,
        })
    }

    fn peek(&self) -> Tok<'a> {
        self.toks[self.pos].0
    }

    fn bump(&mut self) -> Tok<'a> {
        let t = self.peek();
        if t != Tok::Eof {
            self.pos += 1;
        }
        t
    }

    fn error(&self, expected: &[&str]) -> ParseError {
        let (tok, offset) = self.toks[self.pos];
        ParseError {
            offset,
            expected: expected.iter().map(|s| s.to_string()).collect(),
            found: tok.to_string(),
        }
    }

    fn expect(&mut self, want: Tok<'a>, name: &str) -> Result<(), ParseError> {
        if self.peek() == want {
            self.bump();
            Ok(())
        } else {
            Err(self.error(&[name]))
        }
    }

    fn formula(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.imp()?;
        while self.peek() == Tok::Iff {
            self.bump();
            lhs = Formula::iff(lhs, self.imp()?);
        }
        Ok(lhs)
    }

    fn imp(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.or()?;
        if self.peek() == Tok::Implies {
            self.bump();
            return Ok(Formula::implies(lhs, self.imp()?));
        }
        Ok(lhs)
    }

    fn or(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.and()?;
        while self.peek() == Tok::Or {
            self.bump();
            lhs = Formula::or(lhs, self.and()?);
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.not()?;
        while self.peek() == Tok::And {
            self.bump();
            lhs = Formula::and(lhs, self.not()?);
        }
        Ok(lhs)
    }

    fn not(&mut self) -> Result<Formula, ParseError> {
        if self.peek() == Tok::Not {
            self.bump();
            return Ok(Formula::not(self.not()?));
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<Formula, ParseError> {
        match self.peek() {
            Tok::Ident(name) => {
                self.bump();
                Ok(Formula::var(name))
            }
            Tok::True => {
                self.bump();
                Ok(Formula::True)
            }
            Tok::False => {
                self.bump();
                Ok(Formula::False)
            }
            Tok::LParen => {
                self.bump();
                let f = self.formula()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(f)
            }
            _ => Err(self.error(ATOM_START)),
        }
    }

    /// Operators that could legally continue a complete formula.
    fn finish(&self, extra: &[&str]) -> Result<(), ParseError> {
        if self.peek() == Tok::Eof {
            return Ok(());
        }
        let mut expected = vec!["`&`", "`|`", "`->`", "`<->`"];
        expected.extend_from_slice(extra);
        Err(self.error(&expected))
    }
}

pub fn parse_formula(text: &str) -> Result<Formula, ParseError> {
    let mut p = Parser::new(text)?;
    let f = p.formula()?;
    p.finish(&["end of input"])?;
    Ok(f)
}

/// Parses `antecedent |~ consequent`.
pub fn parse_assertion(text: &str) -> Result<ConditionalAssertion, ParseError> {
    let mut p = Parser::new(text)?;
    let antecedent = p.formula()?;
    if p.peek() != Tok::Twiddle {
        return Err(p.error(&["`&`", "`|`", "`->`", "`<->`", "`|~`"]));
    }
    p.bump();
    let consequent = p.formula()?;
    p.finish(&["end of input"])?;
    Ok(ConditionalAssertion::new(antecedent, consequent))
}
