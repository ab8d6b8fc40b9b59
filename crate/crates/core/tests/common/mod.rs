#![allow(dead_code)]

//! Shared corpus for the integration suites: a fixed signature, a fixed
//! seed, and cached generation so every test sees the same formulas.

use finlin_core::corpus::{generate_sentences, standard_sentences, CorpusOptions};
use finlin_core::semantics::{enumerate_words, WordModel};
use finlin_core::syntax::{Formula, Signature};
use std::sync::OnceLock;

pub const CORPUS_SEED: u64 = 0xC0FFEE;

pub fn corpus_sig() -> Signature {
    Signature::new(["P", "Q"]).unwrap()
}

/// The sentence corpus: the hand-picked standards plus seeded generation,
/// at least 200 sentences over two predicates with quantifier depth <= 3.
pub fn sentence_corpus() -> &'static [Formula] {
    static CORPUS: OnceLock<Vec<Formula>> = OnceLock::new();
    CORPUS.get_or_init(|| {
        let sig = corpus_sig();
        let mut out = standard_sentences(&sig);
        out.extend(generate_sentences(
            &sig,
            210,
            CORPUS_SEED,
            CorpusOptions::default(),
        ));
        out
    })
}

/// All words over the corpus signature up to the given length.
pub fn words_up_to(len: usize) -> Vec<WordModel> {
    enumerate_words(&corpus_sig(), len).collect()
}
