//! Finite models of a tiny set theory.
//!
//! The theory has three axioms over one binary membership relation:
//! extensionality, restricted adjunction of elements (any element of
//! anything can be adjoined to any set), and foundation for sets. Its
//! finite models are exactly the powersets of transitive hereditarily
//! finite sets, so their cardinalities are powers of two. The starred
//! variant replaces identity by extensional equivalence, which makes
//! models paddable to any larger cardinality by duplicating an
//! equivalence class.
//!
//! Membership is read off the single binary relation: an edge `(a, b)`
//! means `a` is an element of `b`.

use crate::structure::{FinStructure, Relation, StructureError};
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TisError {
    #[error("the structure is not a model of the set-theory axioms")]
    NotAModel,
    #[error("the structure is not a model of the starred axioms")]
    NotAStarModel,
    #[error("the set is not transitive")]
    NotTransitive,
    #[error("padding target {element} is outside a domain of size {size}")]
    BadPadTarget { element: usize, size: usize },
    #[error("classification failed: {message}")]
    Classification { message: String },
    #[error(transparent)]
    Structure(#[from] StructureError),
}

/// A hereditarily finite set in canonical form: elements are strictly
/// sorted and themselves canonical.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Hfs {
    elems: Vec<Hfs>,
}

impl Hfs {
    pub fn empty() -> Hfs {
        Hfs::default()
    }

    pub fn from_elems(mut elems: Vec<Hfs>) -> Hfs {
        elems.sort();
        elems.dedup();
        Hfs { elems }
    }

    pub fn singleton(e: Hfs) -> Hfs {
        Hfs { elems: vec![e] }
    }

    pub fn elems(&self) -> &[Hfs] {
        &self.elems
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn contains(&self, e: &Hfs) -> bool {
        self.elems.binary_search(e).is_ok()
    }

    /// Every element of an element is an element.
    pub fn is_transitive(&self) -> bool {
        self.elems
            .iter()
            .all(|e| e.elems.iter().all(|ee| self.contains(ee)))
    }
}

impl fmt::Display for Hfs {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.elems.is_empty() {
            return write!(f, "0");
        }
        write!(f, "{{")?;
        for (i, e) in self.elems.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, "}}")
    }
}

/// Per-axiom outcome of a set-theory check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TisReport {
    /// Distinct elements have distinct element sets (plain variant), or
    /// membership respects extensional equivalence (starred variant).
    pub first: bool,
    /// Restricted adjunction: for any set `x` and any `y` that is an
    /// element of something, some `u` has exactly the elements of `x`
    /// plus `y`.
    pub adjunction: bool,
    /// Foundation: every nonempty set has an element disjoint from it.
    pub foundation: bool,
}

impl TisReport {
    pub fn all(&self) -> bool {
        self.first && self.adjunction && self.foundation
    }
}

struct Membership {
    n: usize,
    mem: Vec<Vec<bool>>,
}

impl Membership {
    fn of(m: &FinStructure) -> Result<Membership, StructureError> {
        Ok(Membership {
            n: m.size(),
            mem: m.membership()?,
        })
    }

    /// Is `a` an element of `b`?
    fn holds(&self, a: usize, b: usize) -> bool {
        self.mem[a][b]
    }

    /// The elements of `x`, as a sorted list.
    fn col(&self, x: usize) -> Vec<usize> {
        (0..self.n).filter(|&v| self.mem[v][x]).collect()
    }

    /// `a ≈ b`: same elements.
    fn equiv(&self, a: usize, b: usize) -> bool {
        (0..self.n).all(|v| self.mem[v][a] == self.mem[v][b])
    }
}

/// Checks the three axioms by brute-force quantifier evaluation. The empty
/// structure is rejected by convention: a powerset is never empty.
pub fn check_tis(m: &FinStructure) -> Result<TisReport, StructureError> {
    let ms = Membership::of(m)?;
    let n = ms.n;
    if n == 0 {
        return Ok(TisReport {
            first: false,
            adjunction: false,
            foundation: false,
        });
    }

    // extensionality: x = y iff A z (z in x <-> z in y)
    let mut extensionality = true;
    'ext: for x in 0..n {
        for y in 0..n {
            let same = (0..n).all(|z| ms.holds(z, x) == ms.holds(z, y));
            if same != (x == y) {
                extensionality = false;
                break 'ext;
            }
        }
    }

    // restricted adjunction: y in z -> E u A v (v in u <-> v in x | v = y)
    let mut adjunction = true;
    'adj: for z in 0..n {
        for y in 0..n {
            if !ms.holds(y, z) {
                continue;
            }
            for x in 0..n {
                let found = (0..n).any(|u| {
                    (0..n).all(|v| ms.holds(v, u) == (ms.holds(v, x) || v == y))
                });
                if !found {
                    adjunction = false;
                    break 'adj;
                }
            }
        }
    }

    // foundation: y in x -> E z (z in x & A v (v in z -> v not in x))
    let foundation = check_foundation(&ms);

    Ok(TisReport {
        first: extensionality,
        adjunction,
        foundation,
    })
}

fn check_foundation(ms: &Membership) -> bool {
    let n = ms.n;
    for x in 0..n {
        let nonempty = (0..n).any(|y| ms.holds(y, x));
        if !nonempty {
            continue;
        }
        let found = (0..n).any(|z| {
            ms.holds(z, x) && (0..n).all(|v| !ms.holds(v, z) || !ms.holds(v, x))
        });
        if !found {
            return false;
        }
    }
    true
}

/// Checks the starred axioms, where extensional equivalence replaces
/// identity: congruence of membership, adjunction up to equivalence, and
/// foundation.
pub fn check_tis_star(m: &FinStructure) -> Result<TisReport, StructureError> {
    let ms = Membership::of(m)?;
    let n = ms.n;
    if n == 0 {
        return Ok(TisReport {
            first: false,
            adjunction: false,
            foundation: false,
        });
    }

    // congruence: x ~ x' & y ~ y' -> (x in y <-> x' in y')
    let mut congruence = true;
    'cong: for x in 0..n {
        for x2 in 0..n {
            if !ms.equiv(x, x2) {
                continue;
            }
            for y in 0..n {
                for y2 in 0..n {
                    if ms.equiv(y, y2) && ms.holds(x, y) != ms.holds(x2, y2) {
                        congruence = false;
                        break 'cong;
                    }
                }
            }
        }
    }

    // adjunction up to equivalence: y in z -> E u A v (v in u <-> v in x | v ~ y)
    let mut adjunction = true;
    'adj: for z in 0..n {
        for y in 0..n {
            if !ms.holds(y, z) {
                continue;
            }
            for x in 0..n {
                let found = (0..n).any(|u| {
                    (0..n).all(|v| ms.holds(v, u) == (ms.holds(v, x) || ms.equiv(v, y)))
                });
                if !found {
                    adjunction = false;
                    break 'adj;
                }
            }
        }
    }

    let foundation = check_foundation(&ms);

    Ok(TisReport {
        first: congruence,
        adjunction,
        foundation,
    })
}

/// The result of classifying a finite model: the transitive set `x` with
/// the model isomorphic to its powerset, and the isomorphism itself
/// (element `i` of the model maps to the subset `image[i]`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TisClassification {
    pub transitive_set: Hfs,
    pub image: Vec<Hfs>,
}

/// Classifies a finite model: picks the element with the most members,
/// reads the transitive set `x` off its members, and maps every model
/// element to the subset of `x` formed by its members. Fails when the
/// structure is not a model.
pub fn classify_tis(m: &FinStructure) -> Result<TisClassification, TisError> {
    if !check_tis(m)?.all() {
        return Err(TisError::NotAModel);
    }
    let ms = Membership::of(m)?;
    let n = ms.n;
    let top = (0..n)
        .max_by_key(|&x| ms.col(x).len())
        .expect("nonempty model");
    let carrier = ms.col(top);
    let fail = |message: String| TisError::Classification { message };

    // members of members must be members of the top element
    for &k in &carrier {
        for j in ms.col(k) {
            if !carrier.contains(&j) {
                return Err(fail(format!("element {j} escapes the maximal set")));
            }
        }
    }

    // decode each carrier element as a hereditarily finite set
    let mut decoded: BTreeMap<usize, Hfs> = BTreeMap::new();
    fn decode(
        k: usize,
        ms: &Membership,
        decoded: &mut BTreeMap<usize, Hfs>,
        in_progress: &mut Vec<usize>,
    ) -> Result<Hfs, TisError> {
        if let Some(h) = decoded.get(&k) {
            return Ok(h.clone());
        }
        if in_progress.contains(&k) {
            return Err(TisError::Classification {
                message: format!("membership cycle through element {k}"),
            });
        }
        in_progress.push(k);
        let mut elems = Vec::new();
        for j in ms.col(k) {
            elems.push(decode(j, ms, decoded, in_progress)?);
        }
        in_progress.pop();
        let h = Hfs::from_elems(elems);
        decoded.insert(k, h.clone());
        Ok(h)
    }
    for &k in &carrier {
        decode(k, &ms, &mut decoded, &mut Vec::new())?;
    }

    let transitive_set = Hfs::from_elems(carrier.iter().map(|k| decoded[k].clone()).collect());
    if !transitive_set.is_transitive() {
        return Err(fail("decoded set is not transitive".to_string()));
    }
    if transitive_set.len() != carrier.len() {
        return Err(fail("member decoding is not injective".to_string()));
    }

    let image: Vec<Hfs> = (0..n)
        .map(|a| Hfs::from_elems(ms.col(a).iter().map(|k| decoded[k].clone()).collect()))
        .collect();

    // the image must be a bijection onto the powerset preserving membership
    if n != 1usize.checked_shl(transitive_set.len() as u32).unwrap_or(0) {
        return Err(fail(format!(
            "model size {n} is not 2^{}",
            transitive_set.len()
        )));
    }
    let mut seen = std::collections::BTreeSet::new();
    for h in &image {
        if !h.elems().iter().all(|e| transitive_set.contains(e)) {
            return Err(fail("image is not a subset of the carrier".to_string()));
        }
        if !seen.insert(h.clone()) {
            return Err(fail("image is not injective".to_string()));
        }
    }
    for a in 0..n {
        for b in 0..n {
            if ms.holds(a, b) != image[b].contains(&image[a]) {
                return Err(fail(format!("edge ({a},{b}) not preserved")));
            }
        }
    }

    Ok(TisClassification {
        transitive_set,
        image,
    })
}

/// The powerset of a transitive set as a finite structure: one element per
/// subset, edges given by true membership. Subsets are ordered canonically.
pub fn powerset_model(x: &Hfs) -> Result<FinStructure, TisError> {
    if !x.is_transitive() {
        return Err(TisError::NotTransitive);
    }
    let base = x.elems();
    let k = base.len();
    assert!(k < 20, "powerset of a {k}-element set is too large");
    let mut subsets: Vec<Hfs> = (0..1usize << k)
        .map(|mask| {
            Hfs::from_elems(
                base.iter()
                    .enumerate()
                    .filter(|(i, _)| mask >> i & 1 == 1)
                    .map(|(_, e)| e.clone())
                    .collect(),
            )
        })
        .collect();
    subsets.sort();
    let mut edges = Vec::new();
    for (a, sa) in subsets.iter().enumerate() {
        for (b, sb) in subsets.iter().enumerate() {
            // sa is an element of sb; transitivity makes every element of x
            // a subset of x, so element-of is meaningful between subsets
            if sb.contains(sa) {
                edges.push((a, b));
            }
        }
    }
    Ok(FinStructure::from_edges(subsets.len(), &edges)?)
}

/// Duplicates the equivalence class of `target` by `k` fresh elements: the
/// new elements copy the target's membership row and column, so they are
/// extensionally equivalent to it and all starred axioms survive.
pub fn pad_model_at(
    m: &FinStructure,
    k: usize,
    target: usize,
) -> Result<FinStructure, TisError> {
    if !check_tis_star(m)?.all() {
        return Err(TisError::NotAStarModel);
    }
    if target >= m.size() {
        return Err(TisError::BadPadTarget {
            element: target,
            size: m.size(),
        });
    }
    let n = m.size();
    let ms = Membership::of(m)?;
    let mut tuples = m.single_binary()?.tuples.clone();
    let self_loop = ms.holds(target, target);
    for i in 0..k {
        let fresh = n + i;
        for y in 0..n {
            if ms.holds(target, y) {
                tuples.insert(vec![fresh, y]);
            }
            if ms.holds(y, target) {
                tuples.insert(vec![y, fresh]);
            }
        }
        if self_loop {
            for j in 0..=i {
                tuples.insert(vec![fresh, n + j]);
                tuples.insert(vec![n + j, fresh]);
            }
            tuples.insert(vec![fresh, fresh]);
        }
    }
    Ok(FinStructure::new(
        n + k,
        vec![Relation {
            name: "E".to_string(),
            arity: 2,
            tuples,
        }],
    )?)
}

/// Pads by duplicating the class of empty sets (present in every starred
/// model).
pub fn pad_model(m: &FinStructure, k: usize) -> Result<FinStructure, TisError> {
    if !check_tis_star(m)?.all() {
        return Err(TisError::NotAStarModel);
    }
    let ms = Membership::of(m)?;
    let target = (0..ms.n)
        .find(|&x| ms.col(x).is_empty())
        .expect("a starred model has an empty set");
    pad_model_at(m, k, target)
}
