//! Tokenizer shared by the formula and structure parsers.

use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Token {
    Ident(String),
    Less,
    Equals,
    Dot,
    Tilde,
    Amp,
    Pipe,
    Arrow,
    DoubleArrow,
    LParen,
    RParen,
    Comma,
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Token::Ident(s) => write!(f, "{s}"),
            Token::Less => write!(f, "<"),
            Token::Equals => write!(f, "="),
            Token::Dot => write!(f, "."),
            Token::Tilde => write!(f, "~"),
            Token::Amp => write!(f, "&"),
            Token::Pipe => write!(f, "|"),
            Token::Arrow => write!(f, "->"),
            Token::DoubleArrow => write!(f, "<->"),
            Token::LParen => write!(f, "("),
            Token::RParen => write!(f, ")"),
            Token::Comma => write!(f, ","),
        }
    }
}

/// A token together with the byte offset where it starts.
pub(crate) struct Spanned {
    pub token: Token,
    pub pos: usize,
}

pub(crate) fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic()
}

pub(crate) fn is_ident_continue(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

/// Tokenizes `text`, returning the token stream or the offset of the
/// offending character.
pub(crate) fn tokenize(text: &str) -> Result<Vec<Spanned>, usize> {
    let mut out = Vec::new();
    let bytes = text.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let token = match c {
            '<' => {
                if bytes.get(i + 1) == Some(&b'-') && bytes.get(i + 2) == Some(&b'>') {
                    i += 3;
                    Token::DoubleArrow
                } else {
                    i += 1;
                    Token::Less
                }
            }
            '-' => {
                if bytes.get(i + 1) == Some(&b'>') {
                    i += 2;
                    Token::Arrow
                } else {
                    return Err(i);
                }
            }
            '=' => {
                i += 1;
                Token::Equals
            }
            '.' => {
                i += 1;
                Token::Dot
            }
            '~' => {
                i += 1;
                Token::Tilde
            }
            '&' => {
                i += 1;
                Token::Amp
            }
            '|' => {
                i += 1;
                Token::Pipe
            }
            '(' => {
                i += 1;
                Token::LParen
            }
            ')' => {
                i += 1;
                Token::RParen
            }
            ',' => {
                i += 1;
                Token::Comma
            }
            c if is_ident_start(c) => {
                let mut j = i + 1;
                while j < bytes.len() && is_ident_continue(bytes[j] as char) {
                    j += 1;
                }
                let s = text[i..j].to_string();
                i = j;
                Token::Ident(s)
            }
            _ => return Err(i),
        };
        out.push(Spanned { token, pos: start });
    }
    Ok(out)
}
