//! Interval-removal shrinking of finite models.
//!
//! When two positions `a < b` of a satisfying word carry the same witness
//! type, the interval `(a, b]` can be deleted (keeping `a`) without
//! changing the truth of the sentence: everything a prefix component sees
//! up to `a` is untouched, and the suffix above `a` after removal has the
//! same component truths as the suffix above `b` before. Iterating this
//! yields a model whose positions all carry distinct witness types, hence
//! of length at most `2^ell`.

use crate::semantics::{eval_sentence, EvalError, WordModel};
use crate::split::{sentence_components, SentenceComponents, SplitError};
use crate::syntax::Formula;
use crate::witness::{witness_type, WitnessError, WitnessType};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ShrinkError {
    #[error("the given word does not satisfy the sentence")]
    NotAModel,
    #[error(transparent)]
    Split(#[from] SplitError),
    #[error(transparent)]
    Witness(#[from] WitnessError),
    #[error(transparent)]
    Eval(#[from] EvalError),
}

/// One interval removal: positions `start < end` carried the same witness
/// type and `(start, end]` was deleted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShrinkStep {
    pub start: usize,
    pub end: usize,
    pub witness: WitnessType,
    pub before_len: usize,
    pub after_len: usize,
}

/// The sequence of removals performed by [`shrink_to_core`].
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ShrinkTrace {
    pub steps: Vec<ShrinkStep>,
}

fn remove_interval(w: &WordModel, start: usize, end: usize) -> WordModel {
    let mut letters = w.letters()[..=start].to_vec();
    letters.extend_from_slice(&w.letters()[end + 1..]);
    WordModel::new(w.sig().clone(), letters).expect("letters unchanged")
}

fn position_types(
    w: &WordModel,
    components: &SentenceComponents,
) -> Result<Vec<WitnessType>, WitnessError> {
    (0..w.len())
        .map(|p| witness_type(w, p, &components.suffix_sentences))
        .collect()
}

/// The earliest position whose witness type recurs, paired with the last
/// position carrying the same type.
fn first_equal_pair(types: &[WitnessType]) -> Option<(usize, usize)> {
    for a in 0..types.len() {
        for b in (a + 1..types.len()).rev() {
            if types[a] == types[b] {
                return Some((a, b));
            }
        }
    }
    None
}

/// Performs a single interval removal on a word satisfying `alpha`, if two
/// positions share a witness type. The result still satisfies `alpha`.
pub fn shrink_once(
    w: &WordModel,
    alpha: &Formula,
) -> Result<Option<(WordModel, ShrinkStep)>, ShrinkError> {
    let components = sentence_components(alpha)?;
    shrink_once_with(&components, w, alpha)
}

/// As [`shrink_once`], reusing precomputed components.
pub fn shrink_once_with(
    components: &SentenceComponents,
    w: &WordModel,
    alpha: &Formula,
) -> Result<Option<(WordModel, ShrinkStep)>, ShrinkError> {
    if !eval_sentence(w, alpha)? {
        return Err(ShrinkError::NotAModel);
    }
    let types = position_types(w, components)?;
    let Some((a, b)) = first_equal_pair(&types) else {
        return Ok(None);
    };
    let shrunk = remove_interval(w, a, b);
    let step = ShrinkStep {
        start: a,
        end: b,
        witness: types[a].clone(),
        before_len: w.len(),
        after_len: shrunk.len(),
    };
    Ok(Some((shrunk, step)))
}

/// Iterates [`shrink_once`] to a fixpoint. The core satisfies `alpha`, its
/// positions carry pairwise distinct witness types, and so its length is
/// at most `2^ell`.
pub fn shrink_to_core(
    w: &WordModel,
    alpha: &Formula,
) -> Result<(WordModel, ShrinkTrace), ShrinkError> {
    let components = sentence_components(alpha)?;
    shrink_to_core_with(&components, w, alpha)
}

/// As [`shrink_to_core`], reusing precomputed components. Witness types
/// are computed once: removing `(a, b]` with equal types at `a` and `b`
/// leaves the types of all surviving positions unchanged (positions up to
/// `a` keep their suffix truths, positions after `b` keep their suffixes),
/// so the type sequence of the shrunk word is the spliced sequence.
pub fn shrink_to_core_with(
    components: &SentenceComponents,
    w: &WordModel,
    alpha: &Formula,
) -> Result<(WordModel, ShrinkTrace), ShrinkError> {
    if !eval_sentence(w, alpha)? {
        return Err(ShrinkError::NotAModel);
    }
    let mut word = w.clone();
    let mut types = position_types(&word, components)?;
    let mut trace = ShrinkTrace::default();
    while let Some((a, b)) = first_equal_pair(&types) {
        let shrunk = remove_interval(&word, a, b);
        trace.steps.push(ShrinkStep {
            start: a,
            end: b,
            witness: types[a].clone(),
            before_len: word.len(),
            after_len: shrunk.len(),
        });
        types.drain(a + 1..=b);
        word = shrunk;
    }
    Ok((word, trace))
}

/// `2^ell` for the sentence's suffix-component count `ell`: the sentence
/// has a finite model iff it has one of length at most this bound, or the
/// empty model.
pub fn minimal_model_bound(alpha: &Formula) -> Result<u64, SplitError> {
    let components = sentence_components(alpha)?;
    let ell = components.ell() as u32;
    Ok(if ell >= 63 { u64::MAX } else { 1u64 << ell })
}
