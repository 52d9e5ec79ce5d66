//! Recursive-descent parser for the ASCII surface syntax.
//!
//! ```text
//! implies := or ( "->" implies )?
//! or      := and ( "|" and )*
//! and     := unary ( "&" unary )*
//! unary   := ("~" | "G" | "H" | "L" | "F" | "P" | "M" | "f" | "g") unary
//!          | atom | "(" implies ")"
//! atom    := [a-z][a-zA-Z0-9_]*   (except "f" and "g")
//! ```

use std::fmt;

use thiserror::Error;

use super::{Formula, Language};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("{kind} at position {position}")]
pub struct ParseError {
    /// Byte offset into the input.
    pub position: usize,
    pub kind: ParseErrorKind,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParseErrorKind {
    UnexpectedChar(char),
    UnexpectedToken(String),
    UnexpectedEnd,
    FutureInL,
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseErrorKind::UnexpectedChar(c) => write!(f, "unexpected character `{c}`"),
            ParseErrorKind::UnexpectedToken(t) => write!(f, "unexpected `{t}`"),
            ParseErrorKind::UnexpectedEnd => write!(f, "unexpected end of input"),
            ParseErrorKind::FutureInL => write!(f, "F not in language L"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Token {
    Atom(String),
    Unary(char),
    And,
    Or,
    Implies,
    LParen,
    RParen,
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Token::Atom(a) => f.write_str(a),
            Token::Unary(c) => write!(f, "{c}"),
            Token::And => f.write_str("&"),
            Token::Or => f.write_str("|"),
            Token::Implies => f.write_str("->"),
            Token::LParen => f.write_str("("),
            Token::RParen => f.write_str(")"),
        }
    }
}

fn lex(text: &str, lang: Language) -> Result<Vec<(usize, Token)>, ParseError> {
    let mut out = Vec::new();
    let mut chars = text.char_indices().peekable();
    while let Some(&(pos, c)) = chars.peek() {
        let err = |kind| ParseError { position: pos, kind };
        let tok = match c {
            c if c.is_whitespace() => {
                chars.next();
                continue;
            }
            '~' => Token::Unary('~'),
            '&' => Token::And,
            '|' => Token::Or,
            '(' => Token::LParen,
            ')' => Token::RParen,
            '-' => {
                chars.next();
                match chars.peek() {
                    Some(&(_, '>')) => Token::Implies,
                    _ => return Err(err(ParseErrorKind::UnexpectedChar('-'))),
                }
            }
            'G' | 'H' | 'L' | 'P' | 'M' => Token::Unary(c),
            'F' if lang.allows_future() => Token::Unary('F'),
            'F' => return Err(err(ParseErrorKind::FutureInL)),
            'a'..='z' => {
                let mut end = pos;
                while let Some(&(i, d)) = chars.peek() {
                    if d.is_ascii_alphanumeric() || d == '_' {
                        end = i + d.len_utf8();
                        chars.next();
                    } else {
                        break;
                    }
                }
                let word = &text[pos..end];
                let tok = match word {
                    "f" => Token::Unary('f'),
                    "g" if lang.allows_future() => Token::Unary('g'),
                    "g" => return Err(err(ParseErrorKind::FutureInL)),
                    _ => Token::Atom(word.to_owned()),
                };
                out.push((pos, tok));
                continue;
            }
            other => return Err(err(ParseErrorKind::UnexpectedChar(other))),
        };
        chars.next();
        out.push((pos, tok));
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<(usize, Token)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|(_, t)| t)
    }

    fn error_here(&self) -> ParseError {
        match self.tokens.get(self.pos) {
            Some((p, t)) => ParseError {
                position: *p,
                kind: ParseErrorKind::UnexpectedToken(t.to_string()),
            },
            None => ParseError {
                position: self.end,
                kind: ParseErrorKind::UnexpectedEnd,
            },
        }
    }

    fn implies(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.or()?;
        if self.peek() == Some(&Token::Implies) {
            self.pos += 1;
            let rhs = self.implies()?;
            return Ok(lhs.implies(rhs));
        }
        Ok(lhs)
    }

    fn or(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.and()?;
        while self.peek() == Some(&Token::Or) {
            self.pos += 1;
            lhs = lhs.or(self.and()?);
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.unary()?;
        while self.peek() == Some(&Token::And) {
            self.pos += 1;
            lhs = lhs.and(self.unary()?);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        let Some(tok) = self.peek().cloned() else {
            return Err(self.error_here());
        };
        match tok {
            Token::Unary(op) => {
                self.pos += 1;
                let a = self.unary()?;
                Ok(match op {
                    '~' => a.not(),
                    'G' => a.always_future(),
                    'H' => a.always_past(),
                    'L' => a.necessarily(),
                    'F' => a.weak_future(),
                    'P' => a.some_past(),
                    'M' => a.possibly(),
                    'f' => a.some_future(),
                    'g' => a.weak_always(),
                    _ => unreachable!("lexer only emits known operators"),
                })
            }
            Token::Atom(name) => {
                self.pos += 1;
                Ok(Formula::Atom(name))
            }
            Token::LParen => {
                self.pos += 1;
                let inner = self.implies()?;
                if self.peek() != Some(&Token::RParen) {
                    return Err(self.error_here());
                }
                self.pos += 1;
                Ok(inner)
            }
            _ => Err(self.error_here()),
        }
    }
}

/// Parses and desugars a formula of the given language.
pub fn parse(text: &str, lang: Language) -> Result<Formula, ParseError> {
    let tokens = lex(text, lang)?;
    let mut parser = Parser {
        tokens,
        pos: 0,
        end: text.len(),
    };
    let f = parser.implies()?;
    if parser.pos != parser.tokens.len() {
        return Err(parser.error_here());
    }
    Ok(f)
}
