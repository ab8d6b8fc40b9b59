//! Shared fixtures for the benchmark targets.

use finlin_core::syntax::{parse, ub, Formula, Signature};

pub fn bench_sig() -> Signature {
    Signature::new(["P", "Q"]).unwrap()
}

/// Representative sentences: a one-quantifier witness, the
/// unbounded-predicate sentence, and a three-quantifier pattern.
pub fn bench_sentences(sig: &Signature) -> Vec<(&'static str, Formula)> {
    vec![
        ("some_p", parse("E x. P(x)", sig).unwrap()),
        ("unbounded_p", ub(sig, "P").unwrap()),
        (
            "dense_alternation",
            parse(
                "A x. (P(x) -> (E y. x < y & Q(y))) & (Q(x) -> (E y. y < x))",
                sig,
            )
            .unwrap(),
        ),
    ]
}
