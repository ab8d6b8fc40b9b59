//! First-order formulas over an arbitrary finite relational signature,
//! evaluated on [`FinStructure`]s. Used by the interpretation machinery,
//! where translated formulas mention n-ary relations rather than the
//! order-and-unary-predicates vocabulary of the main engines.
//!
//! The text syntax mirrors the main formula grammar, with atoms
//! `R(x1,…,xk)` and `x = y`.

use crate::structure::{FinStructure, StructureError};
use crate::syntax::is_variable_name;
use std::collections::BTreeSet;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RelError {
    #[error("syntax error at offset {pos}: {message}")]
    Parse { pos: usize, message: String },
    #[error("unbound free variable `{name}`")]
    UnboundVariable { name: String },
    #[error(transparent)]
    Structure(#[from] StructureError),
}

/// Formulas over named relations of arbitrary arity, with equality.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RelFormula {
    True,
    False,
    Eq(String, String),
    Atom(String, Vec<String>),
    Not(Box<RelFormula>),
    And(Box<RelFormula>, Box<RelFormula>),
    Or(Box<RelFormula>, Box<RelFormula>),
    Implies(Box<RelFormula>, Box<RelFormula>),
    Iff(Box<RelFormula>, Box<RelFormula>),
    Exists(String, Box<RelFormula>),
    Forall(String, Box<RelFormula>),
}

use RelFormula::*;

impl RelFormula {
    #[allow(clippy::should_implement_trait)]
    pub fn not(f: RelFormula) -> RelFormula {
        Not(Box::new(f))
    }

    pub fn and(a: RelFormula, b: RelFormula) -> RelFormula {
        And(Box::new(a), Box::new(b))
    }

    pub fn or(a: RelFormula, b: RelFormula) -> RelFormula {
        Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: RelFormula, b: RelFormula) -> RelFormula {
        Implies(Box::new(a), Box::new(b))
    }

    pub fn iff(a: RelFormula, b: RelFormula) -> RelFormula {
        Iff(Box::new(a), Box::new(b))
    }

    pub fn exists(v: impl Into<String>, f: RelFormula) -> RelFormula {
        Exists(v.into(), Box::new(f))
    }

    pub fn forall(v: impl Into<String>, f: RelFormula) -> RelFormula {
        Forall(v.into(), Box::new(f))
    }

    pub fn eq(x: impl Into<String>, y: impl Into<String>) -> RelFormula {
        Eq(x.into(), y.into())
    }

    pub fn atom(r: impl Into<String>, args: Vec<String>) -> RelFormula {
        Atom(r.into(), args)
    }

    pub fn and_all(fs: impl IntoIterator<Item = RelFormula>) -> RelFormula {
        let mut it = fs.into_iter();
        match it.next() {
            None => True,
            Some(first) => it.fold(first, RelFormula::and),
        }
    }

    pub fn or_all(fs: impl IntoIterator<Item = RelFormula>) -> RelFormula {
        let mut it = fs.into_iter();
        match it.next() {
            None => False,
            Some(first) => it.fold(first, RelFormula::or),
        }
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        match self {
            True | False => {}
            Eq(x, y) => {
                for v in [x, y] {
                    if !bound.iter().any(|b| b == v) {
                        out.insert(v.clone());
                    }
                }
            }
            Atom(_, args) => {
                for v in args {
                    if !bound.iter().any(|b| b == v) {
                        out.insert(v.clone());
                    }
                }
            }
            Not(f) => f.collect_free(bound, out),
            And(a, b) | Or(a, b) | Implies(a, b) | Iff(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Exists(v, f) | Forall(v, f) => {
                bound.push(v.clone());
                f.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    pub fn all_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        match self {
            True | False => {}
            Eq(x, y) => {
                out.insert(x.clone());
                out.insert(y.clone());
            }
            Atom(_, args) => out.extend(args.iter().cloned()),
            Not(f) => out.extend(f.all_vars()),
            And(a, b) | Or(a, b) | Implies(a, b) | Iff(a, b) => {
                out.extend(a.all_vars());
                out.extend(b.all_vars());
            }
            Exists(v, f) | Forall(v, f) => {
                out.insert(v.clone());
                out.extend(f.all_vars());
            }
        }
        out
    }

    /// Simultaneous capture-avoiding renaming of free variables.
    pub fn substitute_map(&self, map: &std::collections::BTreeMap<String, String>) -> RelFormula {
        if map.is_empty() {
            return self.clone();
        }
        let rep = |v: &String| map.get(v).cloned().unwrap_or_else(|| v.clone());
        match self {
            True => True,
            False => False,
            Eq(x, y) => Eq(rep(x), rep(y)),
            Atom(r, args) => Atom(r.clone(), args.iter().map(rep).collect()),
            Not(f) => RelFormula::not(f.substitute_map(map)),
            And(a, b) => RelFormula::and(a.substitute_map(map), b.substitute_map(map)),
            Or(a, b) => RelFormula::or(a.substitute_map(map), b.substitute_map(map)),
            Implies(a, b) => RelFormula::implies(a.substitute_map(map), b.substitute_map(map)),
            Iff(a, b) => RelFormula::iff(a.substitute_map(map), b.substitute_map(map)),
            Exists(v, f) | Forall(v, f) => {
                let make = |v: String, f: RelFormula| match self {
                    Exists(..) => RelFormula::exists(v, f),
                    _ => RelFormula::forall(v, f),
                };
                let mut inner = map.clone();
                inner.remove(v);
                // rename the binder if some replacement would be captured
                let clashing = inner.values().any(|t| t == v)
                    && f.free_vars().iter().any(|fv| inner.contains_key(fv));
                if clashing {
                    let mut avoid: BTreeSet<String> = f.all_vars();
                    avoid.extend(inner.values().cloned());
                    avoid.extend(inner.keys().cloned());
                    let v2 = crate::syntax::fresh_var(v, &avoid);
                    let mut rename = std::collections::BTreeMap::new();
                    rename.insert(v.clone(), v2.clone());
                    let renamed = f.substitute_map(&rename);
                    make(v2, renamed.substitute_map(&inner))
                } else {
                    make(v.clone(), f.substitute_map(&inner))
                }
            }
        }
    }

    /// Renames binders so that none of `avoid` is bound.
    pub fn rename_bound_away(&self, avoid: &BTreeSet<String>) -> RelFormula {
        match self {
            True | False | Eq(..) | Atom(..) => self.clone(),
            Not(f) => RelFormula::not(f.rename_bound_away(avoid)),
            And(a, b) => RelFormula::and(a.rename_bound_away(avoid), b.rename_bound_away(avoid)),
            Or(a, b) => RelFormula::or(a.rename_bound_away(avoid), b.rename_bound_away(avoid)),
            Implies(a, b) => {
                RelFormula::implies(a.rename_bound_away(avoid), b.rename_bound_away(avoid))
            }
            Iff(a, b) => RelFormula::iff(a.rename_bound_away(avoid), b.rename_bound_away(avoid)),
            Exists(v, f) | Forall(v, f) => {
                let body = f.rename_bound_away(avoid);
                let (v, body) = if avoid.contains(v) {
                    let mut taken = body.all_vars();
                    taken.extend(avoid.iter().cloned());
                    let v2 = crate::syntax::fresh_var(v, &taken);
                    let mut rename = std::collections::BTreeMap::new();
                    rename.insert(v.clone(), v2.clone());
                    (v2, body.substitute_map(&rename))
                } else {
                    (v.clone(), body)
                };
                match self {
                    Exists(..) => RelFormula::exists(v, body),
                    _ => RelFormula::forall(v, body),
                }
            }
        }
    }
}

/// Environment-based evaluation over a finite structure.
pub fn eval_rel(
    m: &FinStructure,
    phi: &RelFormula,
    env: &std::collections::BTreeMap<String, usize>,
) -> Result<bool, RelError> {
    let mut stack: Vec<(&str, usize)> = env.iter().map(|(k, &v)| (k.as_str(), v)).collect();
    eval_env(m, phi, &mut stack)
}

/// Evaluation against a reusable binding stack; later entries shadow
/// earlier ones.
pub(crate) fn eval_rel_stack<'a>(
    m: &FinStructure,
    phi: &'a RelFormula,
    env: &mut Vec<(&'a str, usize)>,
) -> Result<bool, RelError> {
    eval_env(m, phi, env)
}

fn lookup(env: &[(&str, usize)], name: &str) -> Result<usize, RelError> {
    env.iter()
        .rev()
        .find(|(n, _)| *n == name)
        .map(|(_, p)| *p)
        .ok_or_else(|| RelError::UnboundVariable {
            name: name.to_string(),
        })
}

fn eval_env<'a>(
    m: &FinStructure,
    phi: &'a RelFormula,
    env: &mut Vec<(&'a str, usize)>,
) -> Result<bool, RelError> {
    match phi {
        True => Ok(true),
        False => Ok(false),
        Eq(x, y) => Ok(lookup(env, x)? == lookup(env, y)?),
        Atom(r, args) => {
            let tuple = args
                .iter()
                .map(|v| lookup(env, v))
                .collect::<Result<Vec<usize>, _>>()?;
            Ok(m.holds(r, &tuple)?)
        }
        Not(f) => Ok(!eval_env(m, f, env)?),
        And(a, b) => Ok(eval_env(m, a, env)? && eval_env(m, b, env)?),
        Or(a, b) => Ok(eval_env(m, a, env)? || eval_env(m, b, env)?),
        Implies(a, b) => Ok(!eval_env(m, a, env)? || eval_env(m, b, env)?),
        Iff(a, b) => Ok(eval_env(m, a, env)? == eval_env(m, b, env)?),
        Exists(v, f) => {
            for e in 0..m.size() {
                env.push((v, e));
                let holds = eval_env(m, f, env)?;
                env.pop();
                if holds {
                    return Ok(true);
                }
            }
            Ok(false)
        }
        Forall(v, f) => {
            for e in 0..m.size() {
                env.push((v, e));
                let holds = eval_env(m, f, env)?;
                env.pop();
                if !holds {
                    return Ok(false);
                }
            }
            Ok(true)
        }
    }
}

fn prec(f: &RelFormula) -> u8 {
    match f {
        Exists(..) | Forall(..) => 0,
        Iff(..) => 1,
        Implies(..) => 2,
        Or(..) => 3,
        And(..) => 4,
        Not(..) => 5,
        _ => 6,
    }
}

impl fmt::Display for RelFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_prec(self, 0, f)
    }
}

fn write_prec(phi: &RelFormula, min: u8, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    let p = prec(phi);
    if p < min {
        write!(f, "(")?;
        write_prec(phi, 0, f)?;
        return write!(f, ")");
    }
    match phi {
        True => write!(f, "true"),
        False => write!(f, "false"),
        Eq(x, y) => write!(f, "{x} = {y}"),
        Atom(r, args) => write!(f, "{r}({})", args.join(",")),
        Not(a) => {
            write!(f, "~")?;
            write_prec(a, 5, f)
        }
        And(a, b) => {
            write_prec(a, 4, f)?;
            write!(f, " & ")?;
            write_prec(b, 5, f)
        }
        Or(a, b) => {
            write_prec(a, 3, f)?;
            write!(f, " | ")?;
            write_prec(b, 4, f)
        }
        Implies(a, b) => {
            write_prec(a, 3, f)?;
            write!(f, " -> ")?;
            write_prec(b, 2, f)
        }
        Iff(a, b) => {
            write_prec(a, 2, f)?;
            write!(f, " <-> ")?;
            write_prec(b, 1, f)
        }
        Exists(v, a) => {
            write!(f, "E {v}. ")?;
            write_prec(a, 0, f)
        }
        Forall(v, a) => {
            write!(f, "A {v}. ")?;
            write_prec(a, 0, f)
        }
    }
}

/// Parses the relational formula syntax. Relation names are capitalized
/// identifiers of any arity; no signature check is performed here, so
/// arity errors surface at evaluation time.
pub fn parse_rel(text: &str) -> Result<RelFormula, RelError> {
    use crate::syntax::lex_tokens;
    let tokens = lex_tokens(text).map_err(|pos| RelError::Parse {
        pos,
        message: "unexpected character".to_string(),
    })?;
    let mut p = RelParser {
        tokens,
        pos: 0,
        end: text.len(),
    };
    let f = p.formula()?;
    if p.pos < p.tokens.len() {
        return Err(RelError::Parse {
            pos: p.tokens[p.pos].1,
            message: "unexpected trailing input".to_string(),
        });
    }
    Ok(f)
}

struct RelParser {
    tokens: Vec<(crate::syntax::LexToken, usize)>,
    pos: usize,
    end: usize,
}

impl RelParser {
    fn peek(&self) -> Option<&crate::syntax::LexToken> {
        self.tokens.get(self.pos).map(|(t, _)| t)
    }

    fn peek_at(&self, k: usize) -> Option<&crate::syntax::LexToken> {
        self.tokens.get(self.pos + k).map(|(t, _)| t)
    }

    fn here(&self) -> usize {
        self.tokens.get(self.pos).map(|(_, p)| *p).unwrap_or(self.end)
    }

    fn bump(&mut self) -> Option<crate::syntax::LexToken> {
        let t = self.tokens.get(self.pos).map(|(t, _)| t.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn err(&self, message: impl Into<String>) -> RelError {
        RelError::Parse {
            pos: self.here(),
            message: message.into(),
        }
    }

    fn expect(&mut self, want: &crate::syntax::LexToken) -> Result<(), RelError> {
        if self.peek() == Some(want) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(format!("expected `{want}`")))
        }
    }

    fn variable(&mut self) -> Result<String, RelError> {
        use crate::syntax::LexToken as T;
        match self.bump() {
            Some(T::Ident(name)) if is_variable_name(&name) => Ok(name),
            Some(t) => Err(self.err(format!("expected a variable, found `{t}`"))),
            None => Err(self.err("expected a variable, found end of input")),
        }
    }

    fn formula(&mut self) -> Result<RelFormula, RelError> {
        use crate::syntax::LexToken as T;
        if let Some(T::Ident(head)) = self.peek() {
            if (head == "A" || head == "E")
                && matches!(self.peek_at(1), Some(T::Ident(v)) if is_variable_name(v))
                && matches!(self.peek_at(2), Some(T::Dot))
            {
                let universal = head == "A";
                self.bump();
                let v = self.variable()?;
                self.expect(&T::Dot)?;
                let body = self.formula()?;
                return Ok(if universal {
                    RelFormula::forall(v, body)
                } else {
                    RelFormula::exists(v, body)
                });
            }
        }
        self.iff()
    }

    fn iff(&mut self) -> Result<RelFormula, RelError> {
        use crate::syntax::LexToken as T;
        let mut parts = vec![self.implication()?];
        while self.peek() == Some(&T::DoubleArrow) {
            self.bump();
            parts.push(self.implication()?);
        }
        Ok(fold_right(parts, RelFormula::iff))
    }

    fn implication(&mut self) -> Result<RelFormula, RelError> {
        use crate::syntax::LexToken as T;
        let mut parts = vec![self.disjunction()?];
        while self.peek() == Some(&T::Arrow) {
            self.bump();
            parts.push(self.disjunction()?);
        }
        Ok(fold_right(parts, RelFormula::implies))
    }

    fn disjunction(&mut self) -> Result<RelFormula, RelError> {
        use crate::syntax::LexToken as T;
        let mut acc = self.conjunction()?;
        while self.peek() == Some(&T::Pipe) {
            self.bump();
            acc = RelFormula::or(acc, self.conjunction()?);
        }
        Ok(acc)
    }

    fn conjunction(&mut self) -> Result<RelFormula, RelError> {
        use crate::syntax::LexToken as T;
        let mut acc = self.negation()?;
        while self.peek() == Some(&T::Amp) {
            self.bump();
            acc = RelFormula::and(acc, self.negation()?);
        }
        Ok(acc)
    }

    fn negation(&mut self) -> Result<RelFormula, RelError> {
        use crate::syntax::LexToken as T;
        if self.peek() == Some(&T::Tilde) {
            self.bump();
            return Ok(RelFormula::not(self.negation()?));
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<RelFormula, RelError> {
        use crate::syntax::LexToken as T;
        match self.peek().cloned() {
            Some(T::LParen) => {
                self.bump();
                let f = self.formula()?;
                self.expect(&T::RParen)?;
                Ok(f)
            }
            Some(T::Ident(name)) => {
                if name == "true" {
                    self.bump();
                    return Ok(True);
                }
                if name == "false" {
                    self.bump();
                    return Ok(False);
                }
                self.bump();
                match self.peek() {
                    Some(T::Equals) => {
                        self.bump();
                        let y = self.variable()?;
                        if !is_variable_name(&name) {
                            return Err(self.err(format!("expected a variable, found `{name}`")));
                        }
                        Ok(RelFormula::eq(name, y))
                    }
                    Some(T::LParen) => {
                        self.bump();
                        let mut args = vec![self.variable()?];
                        while self.peek() == Some(&T::Comma) {
                            self.bump();
                            args.push(self.variable()?);
                        }
                        self.expect(&T::RParen)?;
                        Ok(RelFormula::atom(name, args))
                    }
                    _ => Err(self.err(format!("expected `=` or `(` after `{name}`"))),
                }
            }
            Some(t) => Err(self.err(format!("expected an atom, found `{t}`"))),
            None => Err(self.err("expected an atom, found end of input")),
        }
    }
}

fn fold_right(
    mut parts: Vec<RelFormula>,
    join: impl Fn(RelFormula, RelFormula) -> RelFormula,
) -> RelFormula {
    let mut acc = parts.pop().expect("at least one part");
    while let Some(f) = parts.pop() {
        acc = join(f, acc);
    }
    acc
}
