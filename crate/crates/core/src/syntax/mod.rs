//! Formula representation for first-order logic over a strict linear order
//! with finitely many unary predicates.
//!
//! Formulas are immutable trees; all constructions that could capture a
//! variable rename bound variables first. The concrete text syntax is
//!
//! ```text
//! formula    := quantified | iff
//! quantified := ("A" | "E") ident "." formula
//! iff        := impl ("<->" impl)*
//! impl       := disj ("->" disj)*
//! disj       := conj ("|" conj)*
//! conj       := neg ("&" neg)*
//! neg        := "~" neg | atom
//! atom       := ident "<" ident | ident "=" ident | ident "(" ident ")"
//!             | "true" | "false" | "(" formula ")"
//! ```
//!
//! Predicates are capitalized identifiers, variables lowercase ones.
//! `A`/`E` are the universal/existential quantifier keywords.

mod lex;
mod parse;

pub use parse::parse;

pub(crate) use lex::Token as LexToken;

/// Shared lexer entry point for the relational parser.
pub(crate) fn lex_tokens(text: &str) -> Result<Vec<(lex::Token, usize)>, usize> {
    Ok(lex::tokenize(text)?
        .into_iter()
        .map(|s| (s.token, s.pos))
        .collect())
}

use std::collections::BTreeSet;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SyntaxError {
    #[error("syntax error at offset {pos}: {message}")]
    Parse { pos: usize, message: String },
    #[error("unknown predicate `{name}`")]
    UnknownPredicate { name: String },
    #[error("invalid predicate name `{name}`: must be a capitalized identifier")]
    BadPredicateName { name: String },
    #[error("duplicate predicate name `{name}`")]
    DuplicatePredicate { name: String },
    #[error("invalid variable name `{name}`: must be a lowercase identifier")]
    BadVariableName { name: String },
    #[error("variable sets overlap on `{name}`")]
    OverlappingPartition { name: String },
}

/// The unary-predicate vocabulary. The order symbol `<` and equality are
/// always available and not listed.
///
/// The listed order is canonical: it fixes the bit layout of word letters.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Signature {
    preds: Vec<String>,
}

impl Signature {
    /// Builds a signature from distinct capitalized predicate names.
    pub fn new<I, S>(names: I) -> Result<Self, SyntaxError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut preds: Vec<String> = Vec::new();
        for name in names {
            let name = name.into();
            if !is_predicate_name(&name) {
                return Err(SyntaxError::BadPredicateName { name });
            }
            if preds.contains(&name) {
                return Err(SyntaxError::DuplicatePredicate { name });
            }
            preds.push(name);
        }
        Ok(Signature { preds })
    }

    pub fn preds(&self) -> &[String] {
        &self.preds
    }

    pub fn len(&self) -> usize {
        self.preds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.preds.is_empty()
    }

    /// Canonical index of a predicate, used as its letter bit.
    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.preds.iter().position(|p| p == name)
    }

    pub fn contains(&self, name: &str) -> bool {
        self.index_of(name).is_some()
    }
}

pub fn is_predicate_name(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_uppercase())
        && name.chars().skip(1).all(lex::is_ident_continue)
        && name != "A"
        && name != "E"
}

pub fn is_variable_name(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_lowercase())
        && name.chars().skip(1).all(lex::is_ident_continue)
        && name != "true"
        && name != "false"
}

/// First-order formulas over `<`, `=`, and the unary predicates of a
/// [`Signature`]. `True` and `False` are primitive nodes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Formula {
    True,
    False,
    /// `x < y`
    Less(String, String),
    /// `x = y`
    Eq(String, String),
    /// `P(x)`
    Pred(String, String),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
    Exists(String, Box<Formula>),
    Forall(String, Box<Formula>),
}

use Formula::*;

impl Formula {
    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Formula {
        Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Implies(Box::new(a), Box::new(b))
    }

    pub fn iff(a: Formula, b: Formula) -> Formula {
        Iff(Box::new(a), Box::new(b))
    }

    pub fn exists(v: impl Into<String>, f: Formula) -> Formula {
        Exists(v.into(), Box::new(f))
    }

    pub fn forall(v: impl Into<String>, f: Formula) -> Formula {
        Forall(v.into(), Box::new(f))
    }

    pub fn less(x: impl Into<String>, y: impl Into<String>) -> Formula {
        Less(x.into(), y.into())
    }

    pub fn eq(x: impl Into<String>, y: impl Into<String>) -> Formula {
        Eq(x.into(), y.into())
    }

    pub fn pred(p: impl Into<String>, x: impl Into<String>) -> Formula {
        Pred(p.into(), x.into())
    }

    /// `x <= y`, shorthand for `x < y | x = y`.
    pub fn leq(x: &str, y: &str) -> Formula {
        Formula::or(Formula::less(x, y), Formula::eq(x, y))
    }

    /// Conjunction of a list; the empty conjunction is `true`.
    pub fn and_all(fs: impl IntoIterator<Item = Formula>) -> Formula {
        let mut it = fs.into_iter();
        match it.next() {
            None => True,
            Some(first) => it.fold(first, Formula::and),
        }
    }

    /// Disjunction of a list; the empty disjunction is `false`.
    pub fn or_all(fs: impl IntoIterator<Item = Formula>) -> Formula {
        let mut it = fs.into_iter();
        match it.next() {
            None => False,
            Some(first) => it.fold(first, Formula::or),
        }
    }

    pub fn is_sentence(&self) -> bool {
        self.free_vars().is_empty()
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        match self {
            True | False => {}
            Less(x, y) | Eq(x, y) => {
                for v in [x, y] {
                    if !bound.iter().any(|b| b == v) {
                        out.insert(v.clone());
                    }
                }
            }
            Pred(_, x) => {
                if !bound.iter().any(|b| b == x) {
                    out.insert(x.clone());
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

    /// All predicate names occurring in the formula.
    pub fn predicates(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.visit(&mut |f| {
            if let Pred(p, _) = f {
                out.insert(p.clone());
            }
        });
        out
    }

    /// Checks that every predicate mentioned belongs to `sig`.
    pub fn check_signature(&self, sig: &Signature) -> Result<(), SyntaxError> {
        for p in self.predicates() {
            if !sig.contains(&p) {
                return Err(SyntaxError::UnknownPredicate { name: p });
            }
        }
        Ok(())
    }

    fn visit(&self, f: &mut impl FnMut(&Formula)) {
        f(self);
        match self {
            True | False | Less(..) | Eq(..) | Pred(..) => {}
            Not(a) => a.visit(f),
            And(a, b) | Or(a, b) | Implies(a, b) | Iff(a, b) => {
                a.visit(f);
                b.visit(f);
            }
            Exists(_, a) | Forall(_, a) => a.visit(f),
        }
    }

    /// Every variable name occurring anywhere, free or bound.
    pub fn all_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.visit(&mut |f| match f {
            Less(x, y) | Eq(x, y) => {
                out.insert(x.clone());
                out.insert(y.clone());
            }
            Pred(_, x) => {
                out.insert(x.clone());
            }
            Exists(v, _) | Forall(v, _) => {
                out.insert(v.clone());
            }
            _ => {}
        });
        out
    }

    /// Capture-avoiding substitution of variable `from` by variable `to`.
    ///
    /// Bound occurrences of `from` are left alone; binders that would
    /// capture `to` are renamed first.
    pub fn substitute(&self, from: &str, to: &str) -> Formula {
        if from == to {
            return self.clone();
        }
        let rep = |v: &String| {
            if v == from {
                to.to_string()
            } else {
                v.clone()
            }
        };
        match self {
            True => True,
            False => False,
            Less(x, y) => Less(rep(x), rep(y)),
            Eq(x, y) => Eq(rep(x), rep(y)),
            Pred(p, x) => Pred(p.clone(), rep(x)),
            Not(f) => Formula::not(f.substitute(from, to)),
            And(a, b) => Formula::and(a.substitute(from, to), b.substitute(from, to)),
            Or(a, b) => Formula::or(a.substitute(from, to), b.substitute(from, to)),
            Implies(a, b) => Formula::implies(a.substitute(from, to), b.substitute(from, to)),
            Iff(a, b) => Formula::iff(a.substitute(from, to), b.substitute(from, to)),
            Exists(v, f) | Forall(v, f) => {
                let make = |v: String, f: Formula| match self {
                    Exists(..) => Formula::exists(v, f),
                    _ => Formula::forall(v, f),
                };
                if v == from {
                    // bound occurrence, substitution stops here
                    make(v.clone(), (**f).clone())
                } else if v == to && f.free_vars().contains(from) {
                    let mut avoid = f.all_vars();
                    avoid.insert(from.to_string());
                    avoid.insert(to.to_string());
                    let v2 = fresh_var(v, &avoid);
                    let renamed = f.substitute(v, &v2);
                    make(v2, renamed.substitute(from, to))
                } else {
                    make(v.clone(), f.substitute(from, to))
                }
            }
        }
    }

    /// Renames bound variables so that none of `avoid` is used as a binder.
    pub fn rename_bound_away(&self, avoid: &BTreeSet<String>) -> Formula {
        match self {
            True | False | Less(..) | Eq(..) | Pred(..) => self.clone(),
            Not(f) => Formula::not(f.rename_bound_away(avoid)),
            And(a, b) => Formula::and(a.rename_bound_away(avoid), b.rename_bound_away(avoid)),
            Or(a, b) => Formula::or(a.rename_bound_away(avoid), b.rename_bound_away(avoid)),
            Implies(a, b) => {
                Formula::implies(a.rename_bound_away(avoid), b.rename_bound_away(avoid))
            }
            Iff(a, b) => Formula::iff(a.rename_bound_away(avoid), b.rename_bound_away(avoid)),
            Exists(v, f) | Forall(v, f) => {
                let body = f.rename_bound_away(avoid);
                let (v, body) = if avoid.contains(v) {
                    let mut taken = body.all_vars();
                    taken.extend(avoid.iter().cloned());
                    let v2 = fresh_var(v, &taken);
                    let renamed = body.substitute(v, &v2);
                    (v2, renamed)
                } else {
                    (v.clone(), body)
                };
                match self {
                    Exists(..) => Formula::exists(v, body),
                    _ => Formula::forall(v, body),
                }
            }
        }
    }

    /// Negation normal form: eliminates `->` and `<->` and pushes `~` down
    /// to atoms.
    pub fn nnf(&self) -> Formula {
        match self {
            True | False | Less(..) | Eq(..) | Pred(..) => self.clone(),
            And(a, b) => Formula::and(a.nnf(), b.nnf()),
            Or(a, b) => Formula::or(a.nnf(), b.nnf()),
            Implies(a, b) => Formula::or(a.negated_nnf(), b.nnf()),
            Iff(a, b) => Formula::or(
                Formula::and(a.nnf(), b.nnf()),
                Formula::and(a.negated_nnf(), b.negated_nnf()),
            ),
            Exists(v, f) => Formula::exists(v.clone(), f.nnf()),
            Forall(v, f) => Formula::forall(v.clone(), f.nnf()),
            Not(f) => f.negated_nnf(),
        }
    }

    /// Negation normal form of the negation.
    pub fn negated_nnf(&self) -> Formula {
        match self {
            True => False,
            False => True,
            Less(..) | Eq(..) | Pred(..) => Formula::not(self.clone()),
            Not(f) => f.nnf(),
            And(a, b) => Formula::or(a.negated_nnf(), b.negated_nnf()),
            Or(a, b) => Formula::and(a.negated_nnf(), b.negated_nnf()),
            Implies(a, b) => Formula::and(a.nnf(), b.negated_nnf()),
            Iff(a, b) => Formula::or(
                Formula::and(a.nnf(), b.negated_nnf()),
                Formula::and(a.negated_nnf(), b.nnf()),
            ),
            Exists(v, f) => Formula::forall(v.clone(), f.negated_nnf()),
            Forall(v, f) => Formula::exists(v.clone(), f.negated_nnf()),
        }
    }

    /// Structural key identifying formulas up to bound-variable renaming
    /// and negation normal form. Used for syntactic deduplication.
    pub fn canonical_key(&self) -> String {
        let mut out = String::new();
        self.nnf().key_into(&mut Vec::new(), &mut out);
        out
    }

    fn key_into(&self, binders: &mut Vec<String>, out: &mut String) {
        use std::fmt::Write;
        let var_key = |binders: &[String], v: &str| -> String {
            match binders.iter().rposition(|b| b == v) {
                Some(i) => format!("b{}", binders.len() - 1 - i),
                None => format!("f:{v}"),
            }
        };
        match self {
            True => out.push('T'),
            False => out.push('F'),
            Less(x, y) => {
                let _ = write!(out, "<({},{})", var_key(binders, x), var_key(binders, y));
            }
            Eq(x, y) => {
                let _ = write!(out, "=({},{})", var_key(binders, x), var_key(binders, y));
            }
            Pred(p, x) => {
                let _ = write!(out, "{p}({})", var_key(binders, x));
            }
            Not(f) => {
                out.push('!');
                f.key_into(binders, out);
            }
            And(a, b) | Or(a, b) | Implies(a, b) | Iff(a, b) => {
                out.push(match self {
                    And(..) => '&',
                    Or(..) => '|',
                    Implies(..) => '>',
                    _ => '~',
                });
                out.push('(');
                a.key_into(binders, out);
                out.push(',');
                b.key_into(binders, out);
                out.push(')');
            }
            Exists(v, f) | Forall(v, f) => {
                out.push(if matches!(self, Exists(..)) { 'E' } else { 'A' });
                out.push('.');
                binders.push(v.clone());
                f.key_into(binders, out);
                binders.pop();
            }
        }
    }
}

/// Returns a name not in `avoid`, derived from `base` by appending a
/// numeric suffix when necessary.
pub fn fresh_var(base: &str, avoid: &BTreeSet<String>) -> String {
    if !avoid.contains(base) {
        return base.to_string();
    }
    let stem: String = base
        .chars()
        .take_while(|c| !c.is_ascii_digit())
        .collect();
    let stem = if stem.is_empty() { "v".to_string() } else { stem };
    for i in 0u64.. {
        let cand = format!("{stem}{i}");
        if !avoid.contains(&cand) {
            return cand;
        }
    }
    unreachable!()
}

/// Domain to relativize a quantifier to.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RelDomain {
    /// Membership is defined by a formula with one designated free variable.
    Predicate { var: String, body: Formula },
    /// The open interval above a fixed variable: `v` is in the domain of
    /// `IntervalAbove(x)` iff `x < v`.
    IntervalAbove(String),
}

impl RelDomain {
    /// The guard formula stating that `v` lies in the domain.
    fn guard(&self, v: &str) -> Formula {
        match self {
            RelDomain::IntervalAbove(x) => Formula::less(x.clone(), v),
            RelDomain::Predicate { var, body } => body.substitute(var, v),
        }
    }

    /// Variables that must not be captured by binders of the relativized
    /// formula.
    fn outer_vars(&self) -> BTreeSet<String> {
        match self {
            RelDomain::IntervalAbove(x) => [x.clone()].into_iter().collect(),
            RelDomain::Predicate { var, body } => {
                let mut vs = body.free_vars();
                vs.remove(var);
                vs
            }
        }
    }
}

/// Relativizes every quantifier of `phi` to `domain`: `E v. B` becomes
/// `E v. (guard(v) & B)` and `A v. B` becomes `A v. (guard(v) -> B)`.
/// Atomic subformulas are unchanged. Bound variables clashing with the
/// domain's variables are renamed first.
pub fn relativize(phi: &Formula, domain: &RelDomain) -> Formula {
    let phi = phi.rename_bound_away(&domain.outer_vars());
    relativize_clean(&phi, domain)
}

fn relativize_clean(phi: &Formula, domain: &RelDomain) -> Formula {
    match phi {
        True | False | Less(..) | Eq(..) | Pred(..) => phi.clone(),
        Not(f) => Formula::not(relativize_clean(f, domain)),
        And(a, b) => Formula::and(relativize_clean(a, domain), relativize_clean(b, domain)),
        Or(a, b) => Formula::or(relativize_clean(a, domain), relativize_clean(b, domain)),
        Implies(a, b) => {
            Formula::implies(relativize_clean(a, domain), relativize_clean(b, domain))
        }
        Iff(a, b) => Formula::iff(relativize_clean(a, domain), relativize_clean(b, domain)),
        Exists(v, f) => Formula::exists(
            v.clone(),
            Formula::and(domain.guard(v), relativize_clean(f, domain)),
        ),
        Forall(v, f) => Formula::forall(
            v.clone(),
            Formula::implies(domain.guard(v), relativize_clean(f, domain)),
        ),
    }
}

/// The sentence stating that `p` holds somewhere and the set it defines has
/// no maximal element or no minimal element. Over linear orders this is the
/// one finite way to rule out finite models.
pub fn ub(sig: &Signature, p: &str) -> Result<Formula, SyntaxError> {
    if !sig.contains(p) {
        return Err(SyntaxError::UnknownPredicate { name: p.to_string() });
    }
    let above = Formula::forall(
        "y",
        Formula::implies(
            Formula::pred(p, "y"),
            Formula::exists("z", Formula::and(Formula::pred(p, "z"), Formula::less("y", "z"))),
        ),
    );
    let below = Formula::forall(
        "y",
        Formula::implies(
            Formula::pred(p, "y"),
            Formula::exists("z", Formula::and(Formula::pred(p, "z"), Formula::less("z", "y"))),
        ),
    );
    Ok(Formula::and(
        Formula::exists("x", Formula::pred(p, "x")),
        Formula::or(above, below),
    ))
}

/// `gamma if delta, else theta`: `(gamma & delta) | (theta & ~delta)`.
pub fn ite(gamma: Formula, delta: Formula, theta: Formula) -> Formula {
    Formula::or(
        Formula::and(gamma, delta.clone()),
        Formula::and(theta, Formula::not(delta)),
    )
}

/// Disjoint split of a formula's free variables into a prefix part and a
/// suffix part.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct VarPartition {
    left: BTreeSet<String>,
    right: BTreeSet<String>,
}

impl VarPartition {
    pub fn new<L, R, S>(left: L, right: R) -> Result<Self, SyntaxError>
    where
        L: IntoIterator<Item = S>,
        R: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let left: BTreeSet<String> = left.into_iter().map(Into::into).collect();
        let right: BTreeSet<String> = right.into_iter().map(Into::into).collect();
        if let Some(name) = left.intersection(&right).next() {
            return Err(SyntaxError::OverlappingPartition { name: name.clone() });
        }
        Ok(VarPartition { left, right })
    }

    /// The empty partition, suitable for sentences.
    pub fn empty() -> Self {
        VarPartition::default()
    }

    pub fn left(&self) -> &BTreeSet<String> {
        &self.left
    }

    pub fn right(&self) -> &BTreeSet<String> {
        &self.right
    }

    pub fn contains(&self, v: &str) -> bool {
        self.left.contains(v) || self.right.contains(v)
    }

    pub fn all(&self) -> BTreeSet<String> {
        self.left.union(&self.right).cloned().collect()
    }
}

// Precedence levels for printing: quantifier bodies reach to the end of the
// formula, so a quantified formula needs parentheses in any tighter context.
fn prec(f: &Formula) -> u8 {
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

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_prec(self, 0, f)
    }
}

fn write_prec(phi: &Formula, min: u8, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    let p = prec(phi);
    if p < min {
        write!(f, "(")?;
        write_prec(phi, 0, f)?;
        return write!(f, ")");
    }
    match phi {
        True => write!(f, "true"),
        False => write!(f, "false"),
        Less(x, y) => write!(f, "{x} < {y}"),
        Eq(x, y) => write!(f, "{x} = {y}"),
        Pred(p, x) => write!(f, "{p}({x})"),
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

#[cfg(test)]
mod tests {
    use super::*;

    fn sig() -> Signature {
        Signature::new(["P"]).unwrap()
    }

    #[test]
    fn relativize_guards_quantifiers() {
        let phi = Formula::exists("y", Formula::pred("P", "y"));
        let rel = relativize(&phi, &RelDomain::IntervalAbove("x".to_string()));
        assert_eq!(
            rel,
            Formula::exists(
                "y",
                Formula::and(Formula::less("x", "y"), Formula::pred("P", "y"))
            )
        );

        let all = Formula::forall("y", True);
        let rel = relativize(
            &all,
            &RelDomain::Predicate {
                var: "v".to_string(),
                body: Formula::pred("P", "v"),
            },
        );
        assert_eq!(
            rel,
            Formula::forall("y", Formula::implies(Formula::pred("P", "y"), True))
        );
    }

    #[test]
    fn relativize_leaves_atoms_alone() {
        let atom = Formula::pred("P", "z");
        let rel = relativize(
            &atom,
            &RelDomain::Predicate {
                var: "v".to_string(),
                body: Formula::pred("P", "v"),
            },
        );
        assert_eq!(rel, atom);
    }

    #[test]
    fn relativize_renames_clashing_binders() {
        // the bound x would capture the interval endpoint
        let phi = Formula::exists("x", Formula::pred("P", "x"));
        let rel = relativize(&phi, &RelDomain::IntervalAbove("x".to_string()));
        assert_eq!(rel.free_vars(), [String::from("x")].into());
        match &rel {
            Exists(v, _) => assert_ne!(v, "x"),
            other => panic!("unexpected shape {other:?}"),
        }
    }

    #[test]
    fn ub_has_the_displayed_shape() {
        let u = ub(&sig(), "P").unwrap();
        let printed = format!("{u}");
        assert_eq!(
            printed,
            "(E x. P(x)) & ((A y. P(y) -> (E z. P(z) & y < z)) | (A y. P(y) -> (E z. P(z) & z < y)))"
        );
        assert_eq!(
            ub(&sig(), "Q").unwrap_err(),
            SyntaxError::UnknownPredicate { name: "Q".into() }
        );
    }

    #[test]
    fn ite_is_the_raw_conditional() {
        let g = Formula::pred("P", "x");
        let d = Formula::less("x", "y");
        let t = Formula::eq("x", "y");
        assert_eq!(
            ite(g.clone(), d.clone(), t.clone()),
            Formula::or(
                Formula::and(g, d.clone()),
                Formula::and(t, Formula::not(d))
            )
        );
    }

    #[test]
    fn free_vars_and_substitution() {
        let phi = Formula::exists("y", Formula::less("x", "y"));
        assert_eq!(phi.free_vars(), [String::from("x")].into());

        // bound occurrences are untouched
        let bound = Formula::exists("x", Formula::pred("P", "x"));
        assert_eq!(bound.substitute("x", "u"), bound);

        // substitution renames a capturing binder
        let capture = Formula::exists("u", Formula::less("x", "u"));
        let sub = capture.substitute("x", "u");
        assert_eq!(sub.free_vars(), [String::from("u")].into());
        match &sub {
            Exists(v, body) => {
                assert_ne!(v, "u");
                assert_eq!(**body, Formula::less("u", v.clone()));
            }
            other => panic!("unexpected shape {other:?}"),
        }
    }

    #[test]
    fn nnf_pushes_negation_to_atoms() {
        let a = Formula::pred("P", "x");
        let b = Formula::less("x", "y");
        let f = Formula::not(Formula::and(a.clone(), b.clone()));
        assert_eq!(
            f.nnf(),
            Formula::or(Formula::not(a.clone()), Formula::not(b))
        );
        assert_eq!(
            Formula::not(Formula::exists("x", a.clone())).nnf(),
            Formula::forall("x", Formula::not(a))
        );
    }

    #[test]
    fn fresh_names_use_numeric_suffixes() {
        let avoid: BTreeSet<String> = ["x".to_string(), "x0".to_string()].into();
        assert_eq!(fresh_var("x", &avoid), "x1");
        assert_eq!(fresh_var("y", &avoid), "y");
    }
}
