//! Brute-force Tarski evaluation over finite word models, plus word
//! enumeration and bounded model search. Everything here is deliberately
//! simple: this module is the oracle the cleverer engines are tested
//! against.

use crate::syntax::{Formula, Signature};
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum EvalError {
    #[error("unbound free variable `{name}`")]
    UnboundVariable { name: String },
    #[error("unknown predicate `{name}`")]
    UnknownPredicate { name: String },
    #[error("assigned position {pos} is outside a word of length {len}")]
    PositionOutOfRange { pos: usize, len: usize },
    #[error("malformed word text at offset {pos}: {message}")]
    BadWordText { pos: usize, message: String },
}

/// One position of a word: the set of unary predicates holding there,
/// stored as a bitmask in signature order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter(pub u32);

impl Letter {
    pub const EMPTY: Letter = Letter(0);

    pub fn has(self, bit: usize) -> bool {
        self.0 >> bit & 1 == 1
    }

    pub fn with(self, bit: usize) -> Letter {
        Letter(self.0 | 1 << bit)
    }
}

/// A finite linear order with unary predicates: position `p` precedes
/// position `q` iff `p < q`, so the order axioms hold by construction.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct WordModel {
    sig: Signature,
    letters: Vec<Letter>,
}

impl WordModel {
    /// Builds a word, checking that no letter uses bits beyond the
    /// signature.
    pub fn new(sig: Signature, letters: Vec<Letter>) -> Result<Self, EvalError> {
        let width = sig.len();
        for l in &letters {
            if width < 32 && l.0 >> width != 0 {
                return Err(EvalError::UnknownPredicate {
                    name: format!("bit {}", l.0.ilog2()),
                });
            }
        }
        Ok(WordModel { sig, letters })
    }

    pub fn empty(sig: Signature) -> Self {
        WordModel { sig, letters: Vec::new() }
    }

    pub fn sig(&self) -> &Signature {
        &self.sig
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Does predicate `p` hold at position `pos`?
    pub fn holds(&self, p: &str, pos: usize) -> Result<bool, EvalError> {
        let bit = self
            .sig
            .index_of(p)
            .ok_or_else(|| EvalError::UnknownPredicate { name: p.to_string() })?;
        Ok(self.letters[pos].has(bit))
    }

    /// The subword on positions `range` (half-open).
    pub fn slice(&self, from: usize, to: usize) -> WordModel {
        WordModel {
            sig: self.sig.clone(),
            letters: self.letters[from..to].to_vec(),
        }
    }

    /// The strict suffix above position `p`.
    pub fn suffix_above(&self, p: usize) -> WordModel {
        self.slice(p + 1, self.len())
    }

    /// Parses the word text format: semicolon-separated letter sets such as
    /// `{P,Q};{};{P}`; the empty word is written `<empty>`.
    pub fn parse(text: &str, sig: &Signature) -> Result<Self, EvalError> {
        let trimmed = text.trim();
        if trimmed == "<empty>" {
            return Ok(WordModel::empty(sig.clone()));
        }
        let mut letters = Vec::new();
        let mut offset = 0;
        for part in trimmed.split(';') {
            let inner = part.trim();
            let inner = inner
                .strip_prefix('{')
                .and_then(|s| s.strip_suffix('}'))
                .ok_or_else(|| EvalError::BadWordText {
                    pos: offset,
                    message: format!("expected `{{...}}`, found `{part}`"),
                })?;
            let mut letter = Letter::EMPTY;
            for name in inner.split(',').map(str::trim).filter(|s| !s.is_empty()) {
                let bit = sig.index_of(name).ok_or_else(|| EvalError::UnknownPredicate {
                    name: name.to_string(),
                })?;
                letter = letter.with(bit);
            }
            letters.push(letter);
            offset += part.len() + 1;
        }
        Ok(WordModel { sig: sig.clone(), letters })
    }
}

impl fmt::Display for WordModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "<empty>");
        }
        for (i, l) in self.letters.iter().enumerate() {
            if i > 0 {
                write!(f, ";")?;
            }
            write!(f, "{{")?;
            let mut first = true;
            for (bit, name) in self.sig.preds().iter().enumerate() {
                if l.has(bit) {
                    if !first {
                        write!(f, ",")?;
                    }
                    write!(f, "{name}")?;
                    first = false;
                }
            }
            write!(f, "}}")?;
        }
        Ok(())
    }
}

/// Partial map from variable names to word positions.
pub type Assignment = BTreeMap<String, usize>;

/// Standard satisfaction: `<` is the position order, `P(x)` is membership
/// of `P` in the letter at `a(x)`. Quantifiers range over all positions of
/// the word; on the empty word existentials are false and universals true.
pub fn eval(w: &WordModel, phi: &Formula, a: &Assignment) -> Result<bool, EvalError> {
    let len = w.len();
    for (name, &pos) in a {
        if pos >= len {
            return Err(EvalError::PositionOutOfRange { pos, len });
        }
        let _ = name;
    }
    let mut env: Vec<(&str, usize)> = a.iter().map(|(k, &v)| (k.as_str(), v)).collect();
    eval_env(w, phi, &mut env)
}

fn lookup(env: &[(&str, usize)], name: &str) -> Result<usize, EvalError> {
    env.iter()
        .rev()
        .find(|(n, _)| *n == name)
        .map(|(_, p)| *p)
        .ok_or_else(|| EvalError::UnboundVariable { name: name.to_string() })
}

fn eval_env<'a>(
    w: &WordModel,
    phi: &'a Formula,
    env: &mut Vec<(&'a str, usize)>,
) -> Result<bool, EvalError> {
    match phi {
        Formula::True => Ok(true),
        Formula::False => Ok(false),
        Formula::Less(x, y) => Ok(lookup(env, x)? < lookup(env, y)?),
        Formula::Eq(x, y) => Ok(lookup(env, x)? == lookup(env, y)?),
        Formula::Pred(p, x) => {
            let pos = lookup(env, x)?;
            w.holds(p, pos)
        }
        Formula::Not(f) => Ok(!eval_env(w, f, env)?),
        Formula::And(a, b) => Ok(eval_env(w, a, env)? && eval_env(w, b, env)?),
        Formula::Or(a, b) => Ok(eval_env(w, a, env)? || eval_env(w, b, env)?),
        Formula::Implies(a, b) => Ok(!eval_env(w, a, env)? || eval_env(w, b, env)?),
        Formula::Iff(a, b) => Ok(eval_env(w, a, env)? == eval_env(w, b, env)?),
        Formula::Exists(v, f) => {
            for pos in 0..w.len() {
                env.push((v, pos));
                let holds = eval_env(w, f, env)?;
                env.pop();
                if holds {
                    return Ok(true);
                }
            }
            Ok(false)
        }
        Formula::Forall(v, f) => {
            for pos in 0..w.len() {
                env.push((v, pos));
                let holds = eval_env(w, f, env)?;
                env.pop();
                if !holds {
                    return Ok(false);
                }
            }
            Ok(true)
        }
    }
}

/// Convenience for sentences: evaluation under the empty assignment.
pub fn eval_sentence(w: &WordModel, phi: &Formula) -> Result<bool, EvalError> {
    eval(w, phi, &Assignment::new())
}

/// All words over `sig` of length `0..=max_len` in length-lexicographic
/// order: shorter words first, words of equal length ordered by comparing
/// letter bitmasks from the left.
pub fn enumerate_words(sig: &Signature, max_len: usize) -> impl Iterator<Item = WordModel> {
    let sig = sig.clone();
    let letter_count: u32 = 1 << sig.len();
    WordEnumerator {
        sig,
        letter_count,
        max_len,
        next: Some(Vec::new()),
    }
}

struct WordEnumerator {
    sig: Signature,
    letter_count: u32,
    max_len: usize,
    next: Option<Vec<Letter>>,
}

impl Iterator for WordEnumerator {
    type Item = WordModel;

    fn next(&mut self) -> Option<WordModel> {
        let current = self.next.take()?;
        let out = WordModel {
            sig: self.sig.clone(),
            letters: current.clone(),
        };
        // advance like an odometer, least significant at the right
        let mut letters = current;
        let mut i = letters.len();
        loop {
            if i == 0 {
                if letters.len() < self.max_len {
                    self.next = Some(vec![Letter::EMPTY; letters.len() + 1]);
                } else {
                    self.next = None;
                }
                break;
            }
            i -= 1;
            if letters[i].0 + 1 < self.letter_count {
                letters[i] = Letter(letters[i].0 + 1);
                for l in letters[i + 1..].iter_mut() {
                    *l = Letter::EMPTY;
                }
                self.next = Some(letters);
                break;
            }
        }
        Some(out)
    }
}

/// Returns the length-lexicographically first word of length at most
/// `max_len` satisfying the sentence `alpha`, if any.
pub fn find_finite_model(
    sig: &Signature,
    alpha: &Formula,
    max_len: usize,
) -> Result<Option<WordModel>, EvalError> {
    for w in enumerate_words(sig, max_len) {
        if eval_sentence(&w, alpha)? {
            return Ok(Some(w));
        }
    }
    Ok(None)
}
