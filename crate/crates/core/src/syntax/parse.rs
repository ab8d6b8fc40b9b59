//! Recursive-descent parser for the formula text syntax.

use super::lex::{tokenize, Spanned, Token};
use super::{is_predicate_name, is_variable_name, Formula, Signature, SyntaxError};

/// Parses `text` into a formula, checking every predicate against `sig`.
pub fn parse(text: &str, sig: &Signature) -> Result<Formula, SyntaxError> {
    let tokens = tokenize(text).map_err(|pos| SyntaxError::Parse {
        pos,
        message: "unexpected character".to_string(),
    })?;
    let mut p = Parser {
        tokens,
        pos: 0,
        sig,
        end: text.len(),
    };
    let f = p.formula()?;
    if let Some(t) = p.peek() {
        return Err(SyntaxError::Parse {
            pos: t.pos,
            message: format!("unexpected `{}` after formula", t.token),
        });
    }
    Ok(f)
}

struct Parser<'a> {
    tokens: Vec<Spanned>,
    pos: usize,
    sig: &'a Signature,
    end: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Spanned> {
        self.tokens.get(self.pos)
    }

    fn peek_at(&self, k: usize) -> Option<&Token> {
        self.tokens.get(self.pos + k).map(|s| &s.token)
    }

    fn here(&self) -> usize {
        self.peek().map(|s| s.pos).unwrap_or(self.end)
    }

    fn bump(&mut self) -> Option<&Spanned> {
        let t = self.tokens.get(self.pos);
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, want: &Token) -> Result<(), SyntaxError> {
        match self.peek() {
            Some(s) if &s.token == want => {
                self.pos += 1;
                Ok(())
            }
            Some(s) => Err(SyntaxError::Parse {
                pos: s.pos,
                message: format!("expected `{want}`, found `{}`", s.token),
            }),
            None => Err(SyntaxError::Parse {
                pos: self.end,
                message: format!("expected `{want}`, found end of input"),
            }),
        }
    }

    fn err(&self, message: impl Into<String>) -> SyntaxError {
        SyntaxError::Parse {
            pos: self.here(),
            message: message.into(),
        }
    }

    fn variable(&mut self) -> Result<String, SyntaxError> {
        match self.bump() {
            Some(Spanned {
                token: Token::Ident(name),
                pos,
            }) => {
                if is_variable_name(name) {
                    Ok(name.clone())
                } else {
                    Err(SyntaxError::Parse {
                        pos: *pos,
                        message: format!("expected a variable, found `{name}`"),
                    })
                }
            }
            Some(s) => Err(SyntaxError::Parse {
                pos: s.pos,
                message: format!("expected a variable, found `{}`", s.token),
            }),
            None => Err(SyntaxError::Parse {
                pos: self.end,
                message: "expected a variable, found end of input".to_string(),
            }),
        }
    }

    fn formula(&mut self) -> Result<Formula, SyntaxError> {
        // quantifier: ("A" | "E") ident "." formula
        if let Some(Token::Ident(head)) = self.peek().map(|s| &s.token) {
            if (head == "A" || head == "E")
                && matches!(self.peek_at(1), Some(Token::Ident(v)) if is_variable_name(v))
                && matches!(self.peek_at(2), Some(Token::Dot))
            {
                let universal = head == "A";
                self.bump();
                let v = self.variable()?;
                self.expect(&Token::Dot)?;
                let body = self.formula()?;
                return Ok(if universal {
                    Formula::forall(v, body)
                } else {
                    Formula::exists(v, body)
                });
            }
        }
        self.iff()
    }

    fn iff(&mut self) -> Result<Formula, SyntaxError> {
        let mut parts = vec![self.implication()?];
        while matches!(self.peek().map(|s| &s.token), Some(Token::DoubleArrow)) {
            self.bump();
            parts.push(self.implication()?);
        }
        Ok(fold_right(parts, Formula::iff))
    }

    fn implication(&mut self) -> Result<Formula, SyntaxError> {
        let mut parts = vec![self.disjunction()?];
        while matches!(self.peek().map(|s| &s.token), Some(Token::Arrow)) {
            self.bump();
            parts.push(self.disjunction()?);
        }
        Ok(fold_right(parts, Formula::implies))
    }

    fn disjunction(&mut self) -> Result<Formula, SyntaxError> {
        let mut acc = self.conjunction()?;
        while matches!(self.peek().map(|s| &s.token), Some(Token::Pipe)) {
            self.bump();
            acc = Formula::or(acc, self.conjunction()?);
        }
        Ok(acc)
    }

    fn conjunction(&mut self) -> Result<Formula, SyntaxError> {
        let mut acc = self.negation()?;
        while matches!(self.peek().map(|s| &s.token), Some(Token::Amp)) {
            self.bump();
            acc = Formula::and(acc, self.negation()?);
        }
        Ok(acc)
    }

    fn negation(&mut self) -> Result<Formula, SyntaxError> {
        if matches!(self.peek().map(|s| &s.token), Some(Token::Tilde)) {
            self.bump();
            return Ok(Formula::not(self.negation()?));
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<Formula, SyntaxError> {
        match self.peek().map(|s| s.token.clone()) {
            Some(Token::LParen) => {
                self.bump();
                let f = self.formula()?;
                self.expect(&Token::RParen)?;
                Ok(f)
            }
            Some(Token::Ident(name)) => {
                if name == "true" {
                    self.bump();
                    return Ok(Formula::True);
                }
                if name == "false" {
                    self.bump();
                    return Ok(Formula::False);
                }
                let pos = self.here();
                self.bump();
                match self.peek().map(|s| &s.token) {
                    Some(Token::Less) => {
                        self.bump();
                        let y = self.variable()?;
                        self.var_ok(&name, pos)?;
                        Ok(Formula::less(name, y))
                    }
                    Some(Token::Equals) => {
                        self.bump();
                        let y = self.variable()?;
                        self.var_ok(&name, pos)?;
                        Ok(Formula::eq(name, y))
                    }
                    Some(Token::LParen) => {
                        self.bump();
                        let x = self.variable()?;
                        self.expect(&Token::RParen)?;
                        if !is_predicate_name(&name) {
                            return Err(SyntaxError::Parse {
                                pos,
                                message: format!("expected a predicate, found `{name}`"),
                            });
                        }
                        if !self.sig.contains(&name) {
                            return Err(SyntaxError::UnknownPredicate { name });
                        }
                        Ok(Formula::pred(name, x))
                    }
                    _ => Err(self.err(format!("expected `<`, `=` or `(` after `{name}`"))),
                }
            }
            Some(t) => Err(self.err(format!("expected an atom, found `{t}`"))),
            None => Err(self.err("expected an atom, found end of input")),
        }
    }

    fn var_ok(&self, name: &str, pos: usize) -> Result<(), SyntaxError> {
        if is_variable_name(name) {
            Ok(())
        } else {
            Err(SyntaxError::Parse {
                pos,
                message: format!("expected a variable, found `{name}`"),
            })
        }
    }
}

fn fold_right(mut parts: Vec<Formula>, join: impl Fn(Formula, Formula) -> Formula) -> Formula {
    let mut acc = parts.pop().expect("at least one part");
    while let Some(f) = parts.pop() {
        acc = join(f, acc);
    }
    acc
}
