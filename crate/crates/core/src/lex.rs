//! Tokenizer shared by the term grammar and the spec-file grammar.

use std::fmt;

use num_bigint::BigInt;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Token {
    Ident(String),
    Int(BigInt),
    Sym(char),
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Token::Ident(s) => write!(f, "`{s}`"),
            Token::Int(i) => write!(f, "`{i}`"),
            Token::Sym(c) => write!(f, "`{c}`"),
        }
    }
}

/// A syntax error at a one-based column of the current line.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("column {column}: {message}")]
pub struct SyntaxError {
    pub column: usize,
    pub message: String,
}

const SYMBOLS: &str = "(),;:=+-*/^[]";

pub fn tokenize(line: &str) -> Result<Vec<(Token, usize)>, SyntaxError> {
    let chars: Vec<char> = line.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let column = i + 1;
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let digits: String = chars[start..i].iter().collect();
            out.push((Token::Int(digits.parse().expect("ascii digits")), column));
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push((Token::Ident(chars[start..i].iter().collect()), column));
        } else if SYMBOLS.contains(c) {
            out.push((Token::Sym(c), column));
            i += 1;
        } else {
            return Err(SyntaxError {
                column,
                message: format!("unexpected character `{c}`"),
            });
        }
    }
    Ok(out)
}

/// A position in a token stream.
#[derive(Debug, Clone)]
pub struct Cursor {
    tokens: Vec<(Token, usize)>,
    pos: usize,
    end_column: usize,
}

impl Cursor {
    pub fn new(line: &str) -> Result<Self, SyntaxError> {
        Ok(Self {
            tokens: tokenize(line)?,
            pos: 0,
            end_column: line.chars().count() + 1,
        })
    }

    pub fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|(t, _)| t)
    }

    pub fn peek_at(&self, ahead: usize) -> Option<&Token> {
        self.tokens.get(self.pos + ahead).map(|(t, _)| t)
    }

    pub fn column(&self) -> usize {
        self.tokens.get(self.pos).map_or(self.end_column, |(_, c)| *c)
    }

    pub fn at_end(&self) -> bool {
        self.pos >= self.tokens.len()
    }

    pub fn next(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).map(|(t, _)| t.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    pub fn error(&self, message: impl Into<String>) -> SyntaxError {
        SyntaxError {
            column: self.column(),
            message: message.into(),
        }
    }

    fn found(&self) -> String {
        self.peek().map_or_else(|| "end of line".to_string(), Token::to_string)
    }

    pub fn eat_sym(&mut self, c: char) -> bool {
        if self.peek() == Some(&Token::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    pub fn expect_sym(&mut self, c: char) -> Result<(), SyntaxError> {
        if self.eat_sym(c) {
            Ok(())
        } else {
            Err(self.error(format!("expected `{c}`, found {}", self.found())))
        }
    }

    pub fn eat_keyword(&mut self, word: &str) -> bool {
        if matches!(self.peek(), Some(Token::Ident(s)) if s == word) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    pub fn expect_ident(&mut self) -> Result<String, SyntaxError> {
        match self.peek() {
            Some(Token::Ident(s)) => {
                let s = s.clone();
                self.pos += 1;
                Ok(s)
            }
            _ => Err(self.error(format!("expected a name, found {}", self.found()))),
        }
    }

    pub fn expect_int(&mut self) -> Result<BigInt, SyntaxError> {
        match self.peek() {
            Some(Token::Int(i)) => {
                let i = i.clone();
                self.pos += 1;
                Ok(i)
            }
            _ => Err(self.error(format!("expected an integer, found {}", self.found()))),
        }
    }

    pub fn expect_end(&self) -> Result<(), SyntaxError> {
        if self.at_end() {
            Ok(())
        } else {
            Err(self.error(format!("unexpected {}", self.found())))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tokens_carry_columns() {
        let toks = tokenize("SEQ x = (1/n^2)").unwrap();
        assert_eq!(toks[0], (Token::Ident("SEQ".into()), 1));
        assert_eq!(toks[3], (Token::Sym('('), 9));
        assert_eq!(toks.len(), 10);
        assert_eq!(tokenize("a ? b").unwrap_err().column, 3);
    }
}
