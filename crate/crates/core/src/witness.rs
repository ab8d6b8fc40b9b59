//! Witness types over the suffix components of a sentence, and the finite
//! companion theory whose consistency matches finite satisfiability.
//!
//! Fix a sentence and its suffix components `θ_0, …, θ_{ℓ-1}` (from
//! [`crate::split::sentence_components`]). A position `p` of a word
//! *witnesses* the 0/1-vector recording which `θ_j` hold in the strict
//! suffix above `p`; every position witnesses exactly one such vector.

use crate::semantics::{eval_sentence, EvalError, WordModel};
use crate::split::{sentence_components, SplitError};
use crate::syntax::{relativize, Formula, RelDomain};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum WitnessError {
    #[error("witness type has length {got}, expected {expected}")]
    LengthMismatch { got: usize, expected: usize },
    #[error("position {pos} is out of range for a word of length {len}")]
    PositionOutOfRange { pos: usize, len: usize },
    #[error(transparent)]
    Split(#[from] SplitError),
    #[error(transparent)]
    Eval(#[from] EvalError),
}

/// A 0/1-sequence, one bit per suffix component.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct WitnessType {
    bits: Vec<bool>,
}

impl WitnessType {
    pub fn new(bits: Vec<bool>) -> Self {
        WitnessType { bits }
    }

    /// The `index`-th of the `2^len` types, bit `j` taken from the `j`-th
    /// binary digit of `index`.
    pub fn from_index(index: usize, len: usize) -> Self {
        WitnessType {
            bits: (0..len).map(|j| index >> j & 1 == 1).collect(),
        }
    }

    pub fn to_index(&self) -> usize {
        self.bits
            .iter()
            .enumerate()
            .fold(0, |acc, (j, &b)| acc | (b as usize) << j)
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn bit(&self, j: usize) -> bool {
        self.bits[j]
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }
}

impl std::fmt::Display for WitnessType {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.bits.is_empty() {
            return write!(f, "()");
        }
        for &b in &self.bits {
            write!(f, "{}", if b { '1' } else { '0' })?;
        }
        Ok(())
    }
}

/// The formula with one free variable `var` stating that `var` witnesses
/// `s`: the conjunction over `j` of the `j`-th suffix component
/// relativized to the open interval above `var`, negated where the bit
/// is 0. The empty conjunction is `true`.
pub fn witness_formula(
    s: &WitnessType,
    suffix_sentences: &[Formula],
    var: &str,
) -> Result<Formula, WitnessError> {
    if s.len() != suffix_sentences.len() {
        return Err(WitnessError::LengthMismatch {
            got: s.len(),
            expected: suffix_sentences.len(),
        });
    }
    let domain = RelDomain::IntervalAbove(var.to_string());
    let conjuncts = suffix_sentences.iter().enumerate().map(|(j, theta)| {
        let rel = relativize(theta, &domain);
        if s.bit(j) {
            rel
        } else {
            Formula::not(rel)
        }
    });
    Ok(Formula::and_all(conjuncts))
}

/// The unique type witnessed at position `p` of `w`: bit `j` is the truth
/// of the `j`-th suffix component on the strict suffix above `p`.
pub fn witness_type(
    w: &WordModel,
    p: usize,
    suffix_sentences: &[Formula],
) -> Result<WitnessType, WitnessError> {
    if p >= w.len() {
        return Err(WitnessError::PositionOutOfRange { pos: p, len: w.len() });
    }
    let suffix = w.suffix_above(p);
    let bits = suffix_sentences
        .iter()
        .map(|theta| eval_sentence(&suffix, theta))
        .collect::<Result<Vec<bool>, _>>()?;
    Ok(WitnessType::new(bits))
}

/// The finite companion theory of a sentence: the sentence itself, a least
/// element, successors for non-maximal elements, and a largest witness for
/// every witness type that is witnessed at all. A sentence entailing the
/// linear-order axioms has a nonempty finite model exactly when this
/// theory is consistent.
#[derive(Debug, Clone)]
pub struct CompanionTheory {
    pub sentence: Formula,
    /// `E x. A y. x <= y`
    pub zero_axiom: Formula,
    /// `A x. A y. (x < y -> E z. (x < z & A u. (x < u -> z <= u)))`
    pub successor_axiom: Formula,
    /// Indexed by [`WitnessType::to_index`]: for each type `s`,
    /// `E x. beta_s(x) -> E x. (beta_s(x) & A y. (x < y -> ~beta_s(y)))`.
    pub largest_witness_axioms: Vec<Formula>,
    /// The suffix components the types are built over.
    pub suffix_sentences: Vec<Formula>,
}

impl CompanionTheory {
    /// All `3 + 2^ell` axioms in a fixed order.
    pub fn axioms(&self) -> Vec<&Formula> {
        let mut out = vec![&self.sentence, &self.zero_axiom, &self.successor_axiom];
        out.extend(self.largest_witness_axioms.iter());
        out
    }

    pub fn ell(&self) -> usize {
        self.suffix_sentences.len()
    }
}

/// Builds the companion theory of the sentence `alpha`.
///
/// The empty word can satisfy `alpha` but never the zero axiom, so the
/// theory tracks nonempty models; the decision procedure reports the
/// empty model separately when it is the only one.
pub fn build_theory(alpha: &Formula) -> Result<CompanionTheory, WitnessError> {
    let components = sentence_components(alpha)?;
    build_theory_with(alpha, components.suffix_sentences)
}

/// As [`build_theory`], reusing already-computed suffix components.
pub fn build_theory_with(
    alpha: &Formula,
    suffix_sentences: Vec<Formula>,
) -> Result<CompanionTheory, WitnessError> {
    let zero_axiom = Formula::exists("x", Formula::forall("y", Formula::leq("x", "y")));
    let successor_axiom = Formula::forall(
        "x",
        Formula::forall(
            "y",
            Formula::implies(
                Formula::less("x", "y"),
                Formula::exists(
                    "z",
                    Formula::and(
                        Formula::less("x", "z"),
                        Formula::forall(
                            "u",
                            Formula::implies(Formula::less("x", "u"), Formula::leq("z", "u")),
                        ),
                    ),
                ),
            ),
        ),
    );
    let ell = suffix_sentences.len();
    let mut largest_witness_axioms = Vec::with_capacity(1 << ell);
    for index in 0..1usize << ell {
        let s = WitnessType::from_index(index, ell);
        let beta_x = witness_formula(&s, &suffix_sentences, "x")?;
        let beta_y = witness_formula(&s, &suffix_sentences, "y")?;
        let axiom = Formula::implies(
            Formula::exists("x", beta_x.clone()),
            Formula::exists(
                "x",
                Formula::and(
                    beta_x,
                    Formula::forall(
                        "y",
                        Formula::implies(Formula::less("x", "y"), Formula::not(beta_y)),
                    ),
                ),
            ),
        );
        largest_witness_axioms.push(axiom);
    }
    Ok(CompanionTheory {
        sentence: alpha.clone(),
        zero_axiom,
        successor_axiom,
        largest_witness_axioms,
        suffix_sentences,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semantics::{enumerate_words, eval, Assignment};
    use crate::syntax::{parse, Signature};

    fn sig() -> Signature {
        Signature::new(["P"]).unwrap()
    }

    #[test]
    fn empty_type_is_true() {
        let f = witness_formula(&WitnessType::new(vec![]), &[], "x").unwrap();
        assert_eq!(f, Formula::True);
    }

    #[test]
    fn singleton_types() {
        let sig = sig();
        let theta = parse("E y. P(y)", &sig).unwrap();
        let thetas = [theta];
        let pos = witness_formula(&WitnessType::new(vec![true]), &thetas, "x").unwrap();
        let expected = parse("E y. x < y & P(y)", &sig).unwrap();
        assert_eq!(pos, expected);
        let neg = witness_formula(&WitnessType::new(vec![false]), &thetas, "x").unwrap();
        assert_eq!(neg, Formula::not(expected));
    }

    #[test]
    fn length_mismatch() {
        let sig = sig();
        let theta = parse("E y. P(y)", &sig).unwrap();
        let err = witness_formula(&WitnessType::new(vec![]), &[theta], "x").unwrap_err();
        assert_eq!(err, WitnessError::LengthMismatch { got: 0, expected: 1 });
    }

    #[test]
    fn types_on_a_word() {
        let sig = sig();
        let theta = parse("E y. P(y)", &sig).unwrap();
        let thetas = vec![theta];
        let w = WordModel::parse("{P};{};{P}", &sig).unwrap();
        let t = |p| witness_type(&w, p, &thetas).unwrap();
        assert_eq!(t(0), WitnessType::new(vec![true]));
        assert_eq!(t(1), WitnessType::new(vec![true]));
        assert_eq!(t(2), WitnessType::new(vec![false]));
    }

    #[test]
    fn each_position_witnesses_exactly_its_type() {
        let sig = sig();
        let alpha = parse("E x. P(x)", &sig).unwrap();
        let components = crate::split::sentence_components(&alpha).unwrap();
        let thetas = &components.suffix_sentences;
        let ell = thetas.len();
        for w in enumerate_words(&sig, 4) {
            for p in 0..w.len() {
                let t = witness_type(&w, p, thetas).unwrap();
                for index in 0..1usize << ell {
                    let s = WitnessType::from_index(index, ell);
                    let beta = witness_formula(&s, thetas, "x").unwrap();
                    let mut a = Assignment::new();
                    a.insert("x".into(), p);
                    let holds = eval(&w, &beta, &a).unwrap();
                    assert_eq!(holds, s == t, "word {w}, position {p}, type {s}");
                }
            }
        }
    }

    #[test]
    fn axiom_counts() {
        let sig = sig();
        // ell = 0: exactly 4 axioms
        let t = build_theory(&Formula::True).unwrap();
        assert_eq!(t.axioms().len(), 4);
        // ell = 1: 5 axioms
        let t = build_theory(&parse("E x. P(x)", &sig).unwrap()).unwrap();
        assert_eq!(t.ell(), 1);
        assert_eq!(t.axioms().len(), 5);
    }

    #[test]
    fn nonempty_models_satisfy_the_theory() {
        let sig = sig();
        let alpha = parse("E x. P(x) & (A y. y < x | y = x)", &sig).unwrap();
        let theory = build_theory(&alpha).unwrap();
        for w in enumerate_words(&sig, 4) {
            if w.is_empty() || !eval_sentence(&w, &alpha).unwrap() {
                continue;
            }
            for ax in theory.axioms() {
                assert!(eval_sentence(&w, ax).unwrap(), "axiom {ax} fails on {w}");
            }
        }
    }
}
