//! Deterministic formula corpora for cross-validating the engines against
//! the brute-force semantics. Generation is seeded and filtered so that
//! every emitted sentence decomposes into a tractable number of component
//! pairs; the same seed always yields the same corpus.

use crate::split::{sentence_components_capped, split_decompose_capped, SplitContext};
use crate::syntax::{ite, ub, Formula, Signature, VarPartition};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeSet;

const VAR_POOL: [&str; 6] = ["x", "y", "z", "u", "v", "t"];

/// Caps applied while generating.
#[derive(Debug, Clone, Copy)]
pub struct CorpusOptions {
    pub max_quantifier_depth: usize,
    /// Connective depth on top of atoms.
    pub max_depth: usize,
    /// Discard sentences whose decomposition has more pairs than this.
    pub max_component_pairs: usize,
    /// Discard sentences with more suffix components than this.
    pub max_suffix_components: usize,
}

impl Default for CorpusOptions {
    fn default() -> Self {
        CorpusOptions {
            max_quantifier_depth: 3,
            max_depth: 7,
            max_component_pairs: 400,
            max_suffix_components: 6,
        }
    }
}

/// Hand-picked sentences exercising the interesting shapes: satisfiable
/// and unsatisfiable, empty-model-only, unbounded-predicate forms, and
/// conditional compositions.
pub fn standard_sentences(sig: &Signature) -> Vec<Formula> {
    let p = sig.preds().first().cloned().unwrap_or_default();
    let q = sig.preds().last().cloned().unwrap_or_default();
    let some_p = Formula::exists("x", Formula::pred(&p, "x"));
    let some_q = Formula::exists("x", Formula::pred(&q, "x"));
    let ub_p = ub(sig, &p).expect("first predicate");
    let mut out = vec![
        Formula::True,
        Formula::False,
        some_p.clone(),
        Formula::forall("x", Formula::pred(&p, "x")),
        ub_p.clone(),
        Formula::not(ub_p.clone()),
        // there is a minimum
        Formula::exists("x", Formula::forall("y", Formula::leq("x", "y"))),
        // at most one element
        Formula::forall("x", Formula::forall("y", Formula::eq("x", "y"))),
        // two distinct elements
        Formula::exists(
            "x",
            Formula::exists("y", Formula::not(Formula::eq("x", "y"))),
        ),
        // a contradiction
        Formula::and(some_p.clone(), Formula::not(some_p.clone())),
        // only the empty word
        Formula::forall("x", Formula::False),
        // every p is eventually followed by another p, and some p exists:
        // unsatisfiable on finite words
        Formula::and(
            some_p.clone(),
            Formula::forall(
                "x",
                Formula::implies(
                    Formula::pred(&p, "x"),
                    Formula::exists(
                        "y",
                        Formula::and(Formula::less("x", "y"), Formula::pred(&p, "y")),
                    ),
                ),
            ),
        ),
        // conditional compositions
        ite(
            some_p.clone(),
            Formula::exists("x", Formula::forall("y", Formula::leq("x", "y"))),
            some_q.clone(),
        ),
        ite(some_p, Formula::True, some_q),
    ];
    out.dedup_by_key(|f| f.canonical_key());
    out
}

fn gen_atom(rng: &mut ChaCha8Rng, sig: &Signature, scope: &[String]) -> Formula {
    let v = |rng: &mut ChaCha8Rng| scope[rng.random_range(0..scope.len())].clone();
    match rng.random_range(0..4) {
        0 => Formula::less(v(rng), v(rng)),
        1 => Formula::eq(v(rng), v(rng)),
        _ => {
            let p = sig.preds()[rng.random_range(0..sig.len())].clone();
            Formula::pred(p, v(rng))
        }
    }
}

fn gen_formula(
    rng: &mut ChaCha8Rng,
    sig: &Signature,
    scope: &mut Vec<String>,
    qdepth: usize,
    depth: usize,
) -> Formula {
    let can_atom = !scope.is_empty() && !sig.is_empty();
    let can_quant = qdepth > 0 && scope.len() < VAR_POOL.len();
    if depth == 0 || (!can_atom && !can_quant) {
        if can_atom {
            return gen_atom(rng, sig, scope);
        }
        return if rng.random_bool(0.5) {
            Formula::True
        } else {
            Formula::False
        };
    }
    let roll = rng.random_range(0..100u32);
    if roll < 30 && can_atom {
        gen_atom(rng, sig, scope)
    } else if roll < 60 && can_quant {
        let var = VAR_POOL
            .iter()
            .find(|v| !scope.iter().any(|s| s == *v))
            .expect("pool larger than scope")
            .to_string();
        scope.push(var.clone());
        let body = gen_formula(rng, sig, scope, qdepth - 1, depth - 1);
        scope.pop();
        if rng.random_bool(0.5) {
            Formula::exists(var, body)
        } else {
            Formula::forall(var, body)
        }
    } else if roll < 70 {
        Formula::not(gen_formula(rng, sig, scope, qdepth, depth - 1))
    } else if roll < 82 {
        Formula::and(
            gen_formula(rng, sig, scope, qdepth, depth - 1),
            gen_formula(rng, sig, scope, qdepth, depth - 1),
        )
    } else if roll < 94 {
        Formula::or(
            gen_formula(rng, sig, scope, qdepth, depth - 1),
            gen_formula(rng, sig, scope, qdepth, depth - 1),
        )
    } else {
        Formula::implies(
            gen_formula(rng, sig, scope, qdepth, depth - 1),
            gen_formula(rng, sig, scope, qdepth, depth - 1),
        )
    }
}

/// Generates `count` distinct sentences. Candidates whose decomposition
/// exceeds the option caps are discarded, so everything returned is cheap
/// to analyze downstream.
pub fn generate_sentences(
    sig: &Signature,
    count: usize,
    seed: u64,
    opts: CorpusOptions,
) -> Vec<Formula> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    while out.len() < count {
        let depth = 1 + rng.random_range(0..opts.max_depth);
        let qdepth = 1 + rng.random_range(0..opts.max_quantifier_depth);
        let f = gen_formula(&mut rng, sig, &mut Vec::new(), qdepth, depth);
        if !f.is_sentence() || !seen.insert(f.canonical_key()) {
            continue;
        }
        let Ok(components) = sentence_components_capped(&f, opts.max_component_pairs) else {
            continue;
        };
        if components.ell() > opts.max_suffix_components {
            continue;
        }
        out.push(f);
    }
    out
}

/// All ways of splitting the given free variables into a prefix part and
/// a suffix part.
pub fn all_partitions(free: &[String]) -> Vec<VarPartition> {
    let k = free.len();
    (0..1usize << k)
        .map(|mask| {
            let left: Vec<String> = free
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, v)| v.clone())
                .collect();
            let right: Vec<String> = free
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 0)
                .map(|(_, v)| v.clone())
                .collect();
            VarPartition::new(left, right).expect("disjoint by construction")
        })
        .collect()
}

/// Generates formulas with free variables among `free`, for decomposition
/// tests quantified over partitions and assignments. Every returned
/// formula decomposes within the pair cap under every partition of its
/// free variables.
pub fn generate_open_formulas(
    sig: &Signature,
    free: &[&str],
    count: usize,
    seed: u64,
    opts: CorpusOptions,
) -> Vec<Formula> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    let scope: Vec<String> = free.iter().map(|s| s.to_string()).collect();
    while out.len() < count {
        let depth = 1 + rng.random_range(0..opts.max_depth);
        let qdepth = rng.random_range(0..opts.max_quantifier_depth);
        let f = gen_formula(&mut rng, sig, &mut scope.clone(), qdepth, depth);
        if !seen.insert(f.canonical_key()) {
            continue;
        }
        let fv: Vec<String> = f.free_vars().into_iter().collect();
        let tractable = all_partitions(&fv).into_iter().all(|partition| {
            split_decompose_capped(&f, &SplitContext::new(partition), opts.max_component_pairs)
                .is_ok()
        });
        if tractable {
            out.push(f);
        }
    }
    out
}
