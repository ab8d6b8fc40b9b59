//! Splitting decomposition: rewriting a formula, relative to a cut of the
//! order into a prefix and a suffix, as a disjunction of pairs of a
//! prefix-only formula and a suffix-only formula.
//!
//! The decomposition never materializes relativization predicates; a pair
//! `(prefix, suffix)` is interpreted by evaluating `prefix` in the prefix
//! word and `suffix` in the suffix word. This makes the empty-prefix and
//! empty-suffix cuts work without special cases.

use crate::semantics::{eval, Assignment, EvalError, WordModel};
use crate::syntax::{Formula, SyntaxError, VarPartition};
use std::collections::BTreeSet;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SplitError {
    #[error("free variable `{name}` is not in the partition")]
    VariableOutsidePartition { name: String },
    #[error("expected a sentence, but `{name}` occurs free")]
    NotASentence { name: String },
    #[error("decomposition exceeded the cap of {limit} pairs")]
    TooManyPairs { limit: usize },
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
}

/// The variable partition a decomposition is computed against.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SplitContext {
    pub partition: VarPartition,
}

impl SplitContext {
    pub fn new(partition: VarPartition) -> Self {
        SplitContext { partition }
    }

    pub fn sentence() -> Self {
        SplitContext::default()
    }
}

/// One disjunct: `prefix` holds in the prefix word and `suffix` holds in
/// the suffix word.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitPair {
    pub prefix: Formula,
    pub suffix: Formula,
}

/// A finite disjunction of [`SplitPair`]s; the empty disjunction is false.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitForm {
    pub pairs: Vec<SplitPair>,
}

impl SplitForm {
    fn falsum() -> SplitForm {
        SplitForm { pairs: Vec::new() }
    }

    fn verum() -> SplitForm {
        SplitForm {
            pairs: vec![SplitPair {
                prefix: Formula::True,
                suffix: Formula::True,
            }],
        }
    }

    fn single(prefix: Formula, suffix: Formula) -> SplitForm {
        SplitForm {
            pairs: vec![SplitPair { prefix, suffix }],
        }
    }

    /// Evaluates the disjunction at a cut: `left` assigns the prefix-part
    /// variables to positions of `prefix`, `right` assigns the suffix-part
    /// variables to positions of `suffix` (already shifted).
    pub fn eval_at_cut(
        &self,
        prefix: &WordModel,
        suffix: &WordModel,
        left: &Assignment,
        right: &Assignment,
    ) -> Result<bool, EvalError> {
        for pair in &self.pairs {
            if eval(prefix, &pair.prefix, left)? && eval(suffix, &pair.suffix, right)? {
                return Ok(true);
            }
        }
        Ok(false)
    }
}

// Constant-folding connective constructors. Quantifiers are never folded:
// over a possibly-empty domain `E u. true` is not `true`.
fn f_and(a: Formula, b: Formula) -> Formula {
    match (a, b) {
        (Formula::True, b) => b,
        (a, Formula::True) => a,
        (Formula::False, _) | (_, Formula::False) => Formula::False,
        (a, b) => Formula::and(a, b),
    }
}

fn f_not(a: Formula) -> Formula {
    match a {
        Formula::True => Formula::False,
        Formula::False => Formula::True,
        Formula::Not(inner) => *inner,
        a => Formula::not(a),
    }
}

/// Disjunction-of-pairs product: `(⋁ aᵢ) ∧ (⋁ bⱼ) = ⋁ (aᵢ ∧ bⱼ)`,
/// dropping contradictory pairs and deduplicating.
fn and_forms(a: &SplitForm, b: &SplitForm, cap: usize) -> Result<SplitForm, SplitError> {
    let mut out = Vec::new();
    let mut seen = BTreeSet::new();
    for pa in &a.pairs {
        for pb in &b.pairs {
            let prefix = f_and(pa.prefix.clone(), pb.prefix.clone());
            let suffix = f_and(pa.suffix.clone(), pb.suffix.clone());
            push_pair(&mut out, &mut seen, prefix, suffix, cap)?;
        }
    }
    Ok(SplitForm { pairs: out })
}

fn or_forms(a: SplitForm, b: SplitForm, cap: usize) -> Result<SplitForm, SplitError> {
    let mut out = Vec::new();
    let mut seen = BTreeSet::new();
    for p in a.pairs.into_iter().chain(b.pairs) {
        push_pair(&mut out, &mut seen, p.prefix, p.suffix, cap)?;
    }
    Ok(SplitForm { pairs: out })
}

fn push_pair(
    out: &mut Vec<SplitPair>,
    seen: &mut BTreeSet<(String, String)>,
    prefix: Formula,
    suffix: Formula,
    cap: usize,
) -> Result<(), SplitError> {
    if prefix == Formula::False || suffix == Formula::False {
        return Ok(());
    }
    let key = (prefix.canonical_key(), suffix.canonical_key());
    if seen.insert(key) {
        if out.len() >= cap {
            return Err(SplitError::TooManyPairs { limit: cap });
        }
        out.push(SplitPair { prefix, suffix });
    }
    Ok(())
}

/// Negation of a disjunction of pairs, kept in the same normal form:
/// `¬⋁ᵢ (ηᵢ ∧ θᵢ) = ⋀ᵢ (¬ηᵢ ∨ ¬θᵢ)`, distributed back into a disjunction
/// by the pair product. Constant folding prunes the forced branches.
fn negate_form(a: &SplitForm, cap: usize) -> Result<SplitForm, SplitError> {
    let mut acc = SplitForm::verum();
    for pair in &a.pairs {
        let clause = or_forms(
            SplitForm::single(f_not(pair.prefix.clone()), Formula::True),
            SplitForm::single(Formula::True, f_not(pair.suffix.clone())),
            cap,
        )?;
        acc = and_forms(&acc, &clause, cap)?;
    }
    Ok(acc)
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Side {
    Left,
    Right,
}

/// Decomposes `phi` relative to `ctx`: the result is equivalent to `phi`
/// at every cut, in the sense of [`SplitForm::eval_at_cut`], for every
/// assignment sending the left variables into the prefix and the right
/// variables into the suffix.
pub fn split_decompose(phi: &Formula, ctx: &SplitContext) -> Result<SplitForm, SplitError> {
    split_decompose_capped(phi, ctx, usize::MAX)
}

/// As [`split_decompose`], aborting with [`SplitError::TooManyPairs`] when
/// any intermediate disjunction grows beyond `cap` pairs. The recursion is
/// exponential in the worst case; the cap turns pathological inputs into
/// an honest error.
pub fn split_decompose_capped(
    phi: &Formula,
    ctx: &SplitContext,
    cap: usize,
) -> Result<SplitForm, SplitError> {
    for v in phi.free_vars() {
        if !ctx.partition.contains(&v) {
            return Err(SplitError::VariableOutsidePartition { name: v });
        }
    }
    let nnf = phi.nnf();
    let nnf = nnf.rename_bound_away(&ctx.partition.all());
    go(
        &nnf,
        &ctx.partition.left().clone(),
        &ctx.partition.right().clone(),
        cap,
    )
}

fn side_of(left: &BTreeSet<String>, v: &str) -> Side {
    if left.contains(v) {
        Side::Left
    } else {
        Side::Right
    }
}

/// Induction on negation normal form. Atomic cases:
/// an order atom whose variables straddle the cut collapses to true or
/// false, and same-side atoms pass through on their side.
fn go(
    phi: &Formula,
    left: &BTreeSet<String>,
    right: &BTreeSet<String>,
    cap: usize,
) -> Result<SplitForm, SplitError> {
    Ok(match phi {
        Formula::True => SplitForm::verum(),
        Formula::False => SplitForm::falsum(),
        Formula::Less(x, y) => match (side_of(left, x), side_of(left, y)) {
            (Side::Left, Side::Right) => SplitForm::verum(),
            (Side::Right, Side::Left) => SplitForm::falsum(),
            (Side::Left, Side::Left) => SplitForm::single(phi.clone(), Formula::True),
            (Side::Right, Side::Right) => SplitForm::single(Formula::True, phi.clone()),
        },
        Formula::Eq(x, y) => match (side_of(left, x), side_of(left, y)) {
            (Side::Left, Side::Right) | (Side::Right, Side::Left) => SplitForm::falsum(),
            (Side::Left, Side::Left) => SplitForm::single(phi.clone(), Formula::True),
            (Side::Right, Side::Right) => SplitForm::single(Formula::True, phi.clone()),
        },
        Formula::Pred(_, x) => match side_of(left, x) {
            Side::Left => SplitForm::single(phi.clone(), Formula::True),
            Side::Right => SplitForm::single(Formula::True, phi.clone()),
        },
        Formula::Not(inner) => negate_form(&go(inner, left, right, cap)?, cap)?,
        Formula::And(a, b) => {
            and_forms(&go(a, left, right, cap)?, &go(b, left, right, cap)?, cap)?
        }
        Formula::Or(a, b) => or_forms(go(a, left, right, cap)?, go(b, left, right, cap)?, cap)?,
        Formula::Exists(u, body) => exists_case(u, body, left, right, cap)?,
        Formula::Forall(u, body) => {
            // A u. B  =  ~E u. ~B, dualized without leaving normal form
            negate_form(&exists_case(u, &body.negated_nnf(), left, right, cap)?, cap)?
        }
        // nnf leaves no implications behind
        Formula::Implies(..) | Formula::Iff(..) => go(&phi.nnf(), left, right, cap)?,
    })
}

/// The witness of an existential lives either in the prefix or in the
/// suffix; each branch pushes the quantifier onto that side componentwise.
fn exists_case(
    u: &str,
    body: &Formula,
    left: &BTreeSet<String>,
    right: &BTreeSet<String>,
    cap: usize,
) -> Result<SplitForm, SplitError> {
    // `split_decompose` renamed binders away from the partition, but nested
    // binders of the same name can still shadow each other.
    let mut u = u.to_string();
    let mut body = body.clone();
    if left.contains(&u) || right.contains(&u) {
        let mut avoid: BTreeSet<String> = left.union(right).cloned().collect();
        avoid.extend(body.all_vars());
        let u2 = crate::syntax::fresh_var(&u, &avoid);
        body = body.substitute(&u, &u2);
        u = u2;
    }

    let mut left_ext = left.clone();
    left_ext.insert(u.clone());
    let in_prefix = go(&body, &left_ext, right, cap)?;
    let mut prefix_pairs = SplitForm::falsum();
    for pair in in_prefix.pairs {
        prefix_pairs = or_forms(
            prefix_pairs,
            SplitForm::single(Formula::exists(u.clone(), pair.prefix), pair.suffix),
            cap,
        )?;
    }

    let mut right_ext = right.clone();
    right_ext.insert(u.clone());
    let in_suffix = go(&body, left, &right_ext, cap)?;
    let mut suffix_pairs = SplitForm::falsum();
    for pair in in_suffix.pairs {
        suffix_pairs = or_forms(
            suffix_pairs,
            SplitForm::single(pair.prefix, Formula::exists(u.clone(), pair.suffix)),
            cap,
        )?;
    }

    or_forms(prefix_pairs, suffix_pairs, cap)
}

/// The decomposition of a sentence at the empty partition, with the
/// deduplicated component lists extracted.
#[derive(Debug, Clone)]
pub struct SentenceComponents {
    /// The full disjunction of (prefix sentence, suffix sentence) pairs.
    pub form: SplitForm,
    /// Distinct prefix components, trivial `true` omitted.
    pub prefix_sentences: Vec<Formula>,
    /// Distinct suffix components, trivial `true` omitted. Their count is
    /// the `ell` the witness-type machinery is indexed by.
    pub suffix_sentences: Vec<Formula>,
}

impl SentenceComponents {
    pub fn ell(&self) -> usize {
        self.suffix_sentences.len()
    }
}

/// Splits a sentence and extracts its component lists. For every word `w`
/// and every cut, the truth of the sentence in `w` is the disjunction over
/// pairs of "prefix component holds in the prefix and suffix component
/// holds in the suffix".
pub fn sentence_components(alpha: &Formula) -> Result<SentenceComponents, SplitError> {
    sentence_components_capped(alpha, usize::MAX)
}

/// As [`sentence_components`] with the pair cap of
/// [`split_decompose_capped`].
pub fn sentence_components_capped(
    alpha: &Formula,
    cap: usize,
) -> Result<SentenceComponents, SplitError> {
    if let Some(name) = alpha.free_vars().into_iter().next() {
        return Err(SplitError::NotASentence { name });
    }
    let form = split_decompose_capped(alpha, &SplitContext::sentence(), cap)?;
    let mut prefix_sentences = Vec::new();
    let mut suffix_sentences = Vec::new();
    let mut seen_prefix = BTreeSet::new();
    let mut seen_suffix = BTreeSet::new();
    for pair in &form.pairs {
        if pair.prefix != Formula::True && seen_prefix.insert(pair.prefix.canonical_key()) {
            prefix_sentences.push(pair.prefix.clone());
        }
        if pair.suffix != Formula::True && seen_suffix.insert(pair.suffix.canonical_key()) {
            suffix_sentences.push(pair.suffix.clone());
        }
    }
    Ok(SentenceComponents {
        form,
        prefix_sentences,
        suffix_sentences,
    })
}
