//! Reaction-list text format.
//!
//! ```text
//! # comment
//! r1: X1 -> 2 X1 + X2
//! 0 -> 3/2 A
//! A + B <-> C        # expands to two reactions
//! ```
//!
//! An optional `label:` prefix names the reaction; `<->` yields the forward
//! reaction followed by its reverse (labelled `label_rev`).

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{Network, NetworkBuilder};
use crate::error::{Error, Result};
use crate::Rational;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Number(BigInt),
    Slash,
    Plus,
    Colon,
    Arrow,
    BiArrow,
}

struct Lexed {
    tok: Tok,
    col: usize,
}

fn syntax(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Syntax {
        line,
        column,
        message: message.into(),
    }
}

fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '\''
}

fn lex(line_no: usize, line: &str) -> Result<Vec<Lexed>> {
    let chars: Vec<char> = line.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        match c {
            '#' => break,
            c if c.is_whitespace() => i += 1,
            '+' => {
                out.push(Lexed {
                    tok: Tok::Plus,
                    col,
                });
                i += 1;
            }
            '/' => {
                out.push(Lexed {
                    tok: Tok::Slash,
                    col,
                });
                i += 1;
            }
            ':' => {
                out.push(Lexed {
                    tok: Tok::Colon,
                    col,
                });
                i += 1;
            }
            '-' if chars.get(i + 1) == Some(&'>') => {
                out.push(Lexed {
                    tok: Tok::Arrow,
                    col,
                });
                i += 2;
            }
            '-' => {
                return Err(Error::NegativeCoefficient {
                    line: line_no,
                    column: col,
                })
            }
            '<' if chars.get(i + 1) == Some(&'-') && chars.get(i + 2) == Some(&'>') => {
                out.push(Lexed {
                    tok: Tok::BiArrow,
                    col,
                });
                i += 3;
            }
            c if c.is_ascii_digit() => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let s: String = chars[start..i].iter().collect();
                let v: BigInt = s.parse().expect("digits");
                out.push(Lexed {
                    tok: Tok::Number(v),
                    col,
                });
            }
            c if is_ident_start(c) => {
                let start = i;
                while i < chars.len() && is_ident_char(chars[i]) {
                    i += 1;
                }
                out.push(Lexed {
                    tok: Tok::Ident(chars[start..i].iter().collect()),
                    col,
                });
            }
            other => {
                return Err(syntax(
                    line_no,
                    col,
                    format!("unexpected character '{other}'"),
                ))
            }
        }
    }
    Ok(out)
}

struct LineParser<'a> {
    toks: &'a [Lexed],
    pos: usize,
    line: usize,
    end_col: usize,
}

impl LineParser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|l| &l.tok)
    }

    fn col(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end_col, |l| l.col)
    }

    fn complex(&mut self) -> Result<Vec<(String, Rational)>> {
        // lone "0" is the zero complex
        if let Some(Tok::Number(v)) = self.peek() {
            if v.is_zero()
                && !matches!(
                    self.toks.get(self.pos + 1).map(|l| &l.tok),
                    Some(Tok::Ident(_)) | Some(Tok::Slash)
                )
            {
                self.pos += 1;
                return Ok(Vec::new());
            }
        }
        let mut terms = vec![self.term()?];
        while self.peek() == Some(&Tok::Plus) {
            self.pos += 1;
            terms.push(self.term()?);
        }
        Ok(terms)
    }

    fn term(&mut self) -> Result<(String, Rational)> {
        let col = self.col();
        let mut coef = Rational::one();
        if let Some(Tok::Number(num)) = self.peek().cloned() {
            self.pos += 1;
            let mut den = BigInt::one();
            if self.peek() == Some(&Tok::Slash) {
                self.pos += 1;
                match self.peek().cloned() {
                    Some(Tok::Number(d)) if !d.is_zero() => {
                        den = d;
                        self.pos += 1;
                    }
                    _ => {
                        return Err(syntax(
                            self.line,
                            self.col(),
                            "expected nonzero denominator",
                        ))
                    }
                }
            }
            coef = Rational::new(num, den);
            if coef.is_zero() {
                return Err(syntax(self.line, col, "zero coefficient"));
            }
        }
        match self.peek().cloned() {
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                Ok((name, coef))
            }
            _ => Err(syntax(self.line, self.col(), "expected species name")),
        }
    }
}

/// Parses a reaction-list document into a validated [`Network`].
pub fn parse_network(text: &str) -> Result<Network> {
    let mut b = NetworkBuilder::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let toks = lex(line_no, raw)?;
        if toks.is_empty() {
            continue;
        }
        let mut p = LineParser {
            toks: &toks,
            pos: 0,
            line: line_no,
            end_col: raw.chars().count() + 1,
        };
        let mut label = None;
        if let (Some(Tok::Ident(name)), Some(Tok::Colon)) =
            (toks.first().map(|l| &l.tok), toks.get(1).map(|l| &l.tok))
        {
            label = Some(name.clone());
            p.pos = 2;
        }
        let lhs = p.complex()?;
        let reversible = match p.peek() {
            Some(Tok::Arrow) => false,
            Some(Tok::BiArrow) => true,
            _ => return Err(syntax(line_no, p.col(), "expected '->' or '<->'")),
        };
        p.pos += 1;
        let rhs = p.complex()?;
        if p.pos != toks.len() {
            return Err(syntax(line_no, p.col(), "unexpected trailing input"));
        }
        let reactant = b.complex(lhs.iter().map(|(s, c)| (s.as_str(), c.clone())))?;
        let product = b.complex(rhs.iter().map(|(s, c)| (s.as_str(), c.clone())))?;
        b.reaction(reactant, product, label.clone())?;
        if reversible {
            b.reaction(product, reactant, label.map(|l| format!("{l}_rev")))?;
        }
    }
    b.build()
}

/// Writes the network back in the reaction-list format, one reaction per line.
pub fn serialize_network(net: &Network) -> String {
    let mut out = String::new();
    for (j, r) in net.reactions().iter().enumerate() {
        if let Some(l) = &r.label {
            out.push_str(l);
            out.push_str(": ");
        }
        out.push_str(&net.format_reaction(j));
        out.push('\n');
    }
    out
}
