//! Tokenizer shared by the polynomial, bracket and curve-expression grammars.

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tok {
    /// Unsigned decimal integer literal, kept as text so it can be parsed as a bignum.
    Int(String),
    Ident(String),
    Sym(char),
}

#[derive(Clone, Debug)]
pub struct Token {
    pub tok: Tok,
    pub pos: usize,
}

pub fn tokenize(text: &str) -> Result<Vec<Token>> {
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let (pos, c) = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].1.is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().map(|&(_, c)| c).collect();
            out.push(Token { tok: Tok::Int(s), pos });
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].1.is_ascii_alphanumeric() || chars[i].1 == '_') {
                i += 1;
            }
            let s: String = chars[start..i].iter().map(|&(_, c)| c).collect();
            out.push(Token { tok: Tok::Ident(s), pos });
        } else if "+-*/^()[],".contains(c) {
            out.push(Token { tok: Tok::Sym(c), pos });
            i += 1;
        } else if c == '\u{2212}' {
            // unicode minus sign
            out.push(Token { tok: Tok::Sym('-'), pos });
            i += 1;
        } else {
            return Err(Error::Syntax { pos, msg: format!("unexpected character `{c}`") });
        }
    }
    Ok(out)
}

/// Cursor over a token stream with position-aware errors.
pub struct Cursor {
    tokens: Vec<Token>,
    idx: usize,
    end: usize,
}

impl Cursor {
    pub fn new(text: &str) -> Result<Self> {
        let tokens = tokenize(text)?;
        Ok(Self { tokens, idx: 0, end: text.len() })
    }

    pub fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.idx).map(|t| &t.tok)
    }

    pub fn pos(&self) -> usize {
        self.tokens.get(self.idx).map_or(self.end, |t| t.pos)
    }

    pub fn next(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.idx).cloned();
        if t.is_some() {
            self.idx += 1;
        }
        t
    }

    pub fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.idx += 1;
            true
        } else {
            false
        }
    }

    pub fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(format!("expected `{c}`")))
        }
    }

    pub fn at_end(&self) -> bool {
        self.idx >= self.tokens.len()
    }

    pub fn error(&self, msg: impl Into<String>) -> Error {
        Error::Syntax { pos: self.pos(), msg: msg.into() }
    }

    pub fn expect_nat(&mut self) -> Result<u32> {
        match self.next() {
            Some(Token { tok: Tok::Int(s), pos }) => s
                .parse::<u32>()
                .map_err(|_| Error::Syntax { pos, msg: format!("integer `{s}` out of range") }),
            Some(t) => Err(Error::Syntax { pos: t.pos, msg: "expected a natural number".into() }),
            None => Err(self.error("expected a natural number, found end of input")),
        }
    }
}
