//! Parser for the S-expression form of formulas.
//!
//! ```text
//! term := var | "(" name term+ ")"
//! var  := "x" digits
//! name := [A-Za-z_][A-Za-z0-9_]*
//! ```
//!
//! Printing is the `Display` impl of [`Formula`].

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::error::FormulaError;
use crate::formula::{Formula, GeneratorSet};

#[derive(Debug, PartialEq)]
enum Token<'a> {
    Open,
    Close,
    Atom(&'a str),
}

fn tokenize(text: &str) -> Vec<(usize, Token<'_>)> {
    let mut out = Vec::new();
    let bytes = text.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        match bytes[i] {
            b'(' => {
                out.push((i, Token::Open));
                i += 1;
            }
            b')' => {
                out.push((i, Token::Close));
                i += 1;
            }
            b if b.is_ascii_whitespace() => i += 1,
            _ => {
                let start = i;
                while i < bytes.len() && !bytes[i].is_ascii_whitespace() && bytes[i] != b'(' && bytes[i] != b')' {
                    i += 1;
                }
                out.push((start, Token::Atom(&text[start..i])));
            }
        }
    }
    out
}

fn syntax(position: usize, message: impl Into<String>) -> FormulaError {
    FormulaError::Syntax { position, message: message.into() }
}

fn parse_var(position: usize, atom: &str) -> Result<Formula, FormulaError> {
    let digits = atom
        .strip_prefix('x')
        .filter(|d| !d.is_empty() && d.bytes().all(|b| b.is_ascii_digit()))
        .ok_or_else(|| syntax(position, format!("expected a variable like x1, found `{atom}`")))?;
    let index: usize = digits.parse().map_err(|_| syntax(position, "variable index overflows"))?;
    if index == 0 {
        return Err(syntax(position, "variable indices start at x1"));
    }
    Ok(Formula::Var(index))
}

struct Parser<'a> {
    tokens: Vec<(usize, Token<'a>)>,
    pos: usize,
    end: usize,
    env: &'a GeneratorSet,
}

impl<'a> Parser<'a> {
    fn term(&mut self) -> Result<Formula, FormulaError> {
        let Some((at, token)) = self.tokens.get(self.pos) else {
            return Err(syntax(self.end, "unexpected end of input"));
        };
        let at = *at;
        self.pos += 1;
        match token {
            Token::Atom(atom) => parse_var(at, atom),
            Token::Close => Err(syntax(at, "unexpected `)`")),
            Token::Open => {
                let name = match self.tokens.get(self.pos) {
                    Some((_, Token::Atom(name))) if crate::formula::is_identifier(name) => name.to_string(),
                    Some((p, _)) => return Err(syntax(*p, "expected a generator name after `(`")),
                    None => return Err(syntax(self.end, "unexpected end of input")),
                };
                self.pos += 1;
                let mut args = Vec::new();
                loop {
                    match self.tokens.get(self.pos) {
                        Some((_, Token::Close)) => {
                            self.pos += 1;
                            break;
                        }
                        Some(_) => args.push(self.term()?),
                        None => return Err(syntax(self.end, "unclosed `(`")),
                    }
                }
                if args.is_empty() {
                    return Err(syntax(at, format!("`{name}` needs at least one argument")));
                }
                let expected = self
                    .env
                    .arity_of(&name)
                    .ok_or_else(|| FormulaError::UnknownGenerator(name.clone()))?;
                if expected != args.len() {
                    return Err(FormulaError::ArityMismatch { name, expected, got: args.len() });
                }
                Ok(Formula::Apply { symbol: name, args })
            }
        }
    }
}

/// Parses one term, checking generator names and arities against `env`.
pub fn parse(text: &str, env: &GeneratorSet) -> Result<Formula, FormulaError> {
    let mut parser = Parser { tokens: tokenize(text), pos: 0, end: text.len(), env };
    let phi = parser.term()?;
    if let Some((at, _)) = parser.tokens.get(parser.pos) {
        return Err(syntax(*at, "trailing input after the term"));
    }
    Ok(phi)
}
