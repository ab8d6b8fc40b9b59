//! Finite relational structures over a domain `{0, …, n-1}`.
//!
//! The text format for a structure with a single binary relation is
//! `n=4; edges=(0,1),(0,2)`. Further relations can be declared with
//! `rel NAME/ARITY = (t),(t),…` clauses, semicolon-separated.

use std::collections::BTreeSet;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum StructureError {
    #[error("malformed structure text: {message}")]
    BadText { message: String },
    #[error("tuple {tuple:?} has arity {got}, relation `{name}` expects {expected}")]
    ArityMismatch {
        name: String,
        tuple: Vec<usize>,
        got: usize,
        expected: usize,
    },
    #[error("element {element} is outside a domain of size {size}")]
    ElementOutOfRange { element: usize, size: usize },
    #[error("duplicate relation name `{name}`")]
    DuplicateRelation { name: String },
    #[error("expected exactly one binary relation, found {found}")]
    NotSingleBinary { found: usize },
    #[error("unknown relation `{name}`")]
    UnknownRelation { name: String },
}

/// A named relation: a set of arity-length tuples.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Relation {
    pub name: String,
    pub arity: usize,
    pub tuples: BTreeSet<Vec<usize>>,
}

/// A finite structure: a domain size and finitely many named relations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinStructure {
    size: usize,
    relations: Vec<Relation>,
}

impl FinStructure {
    pub fn new(size: usize, relations: Vec<Relation>) -> Result<Self, StructureError> {
        let mut names = BTreeSet::new();
        for rel in &relations {
            if !names.insert(rel.name.clone()) {
                return Err(StructureError::DuplicateRelation {
                    name: rel.name.clone(),
                });
            }
            for tuple in &rel.tuples {
                if tuple.len() != rel.arity {
                    return Err(StructureError::ArityMismatch {
                        name: rel.name.clone(),
                        tuple: tuple.clone(),
                        got: tuple.len(),
                        expected: rel.arity,
                    });
                }
                for &e in tuple {
                    if e >= size {
                        return Err(StructureError::ElementOutOfRange { element: e, size });
                    }
                }
            }
        }
        Ok(FinStructure { size, relations })
    }

    /// A structure with one binary relation `E`; an edge `(a, b)` is read
    /// as "a is a member of b" by the set-theory checks.
    pub fn from_edges(size: usize, edges: &[(usize, usize)]) -> Result<Self, StructureError> {
        let tuples = edges.iter().map(|&(a, b)| vec![a, b]).collect();
        FinStructure::new(
            size,
            vec![Relation {
                name: "E".to_string(),
                arity: 2,
                tuples,
            }],
        )
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn relations(&self) -> &[Relation] {
        &self.relations
    }

    pub fn relation(&self, name: &str) -> Result<&Relation, StructureError> {
        self.relations
            .iter()
            .find(|r| r.name == name)
            .ok_or_else(|| StructureError::UnknownRelation {
                name: name.to_string(),
            })
    }

    pub fn holds(&self, name: &str, tuple: &[usize]) -> Result<bool, StructureError> {
        let rel = self.relation(name)?;
        if tuple.len() != rel.arity {
            return Err(StructureError::ArityMismatch {
                name: name.to_string(),
                tuple: tuple.to_vec(),
                got: tuple.len(),
                expected: rel.arity,
            });
        }
        Ok(rel.tuples.contains(tuple))
    }

    /// The unique binary relation, for the set-theory operations.
    pub fn single_binary(&self) -> Result<&Relation, StructureError> {
        let binaries: Vec<&Relation> = self.relations.iter().filter(|r| r.arity == 2).collect();
        if binaries.len() != 1 || self.relations.len() != 1 {
            return Err(StructureError::NotSingleBinary {
                found: binaries.len(),
            });
        }
        Ok(binaries[0])
    }

    /// Membership matrix view of the single binary relation:
    /// `out[a][b]` iff the edge `(a, b)` is present.
    pub fn membership(&self) -> Result<Vec<Vec<bool>>, StructureError> {
        let rel = self.single_binary()?;
        let mut out = vec![vec![false; self.size]; self.size];
        for t in &rel.tuples {
            out[t[0]][t[1]] = true;
        }
        Ok(out)
    }

    pub fn parse(text: &str) -> Result<Self, StructureError> {
        let bad = |message: String| StructureError::BadText { message };
        let mut size: Option<usize> = None;
        let mut relations = Vec::new();
        for part in text.split(';') {
            let part = part.trim();
            if part.is_empty() {
                continue;
            }
            if let Some(rest) = part.strip_prefix("n") {
                let rest = rest.trim_start();
                if let Some(value) = rest.strip_prefix('=') {
                    size = Some(
                        value
                            .trim()
                            .parse()
                            .map_err(|_| bad(format!("bad domain size `{value}`")))?,
                    );
                    continue;
                }
            }
            if let Some(rest) = part.strip_prefix("edges") {
                let rest = rest.trim_start();
                let value = rest
                    .strip_prefix('=')
                    .ok_or_else(|| bad(format!("expected `edges=...`, found `{part}`")))?;
                let tuples = parse_tuples(value).map_err(bad)?;
                relations.push(Relation {
                    name: "E".to_string(),
                    arity: 2,
                    tuples: tuples.into_iter().collect(),
                });
                continue;
            }
            if let Some(rest) = part.strip_prefix("rel ") {
                let (head, value) = rest
                    .split_once('=')
                    .ok_or_else(|| bad(format!("expected `rel NAME/AR = ...` in `{part}`")))?;
                let (name, arity) = head
                    .trim()
                    .split_once('/')
                    .ok_or_else(|| bad(format!("expected `NAME/ARITY` in `{head}`")))?;
                let arity: usize = arity
                    .trim()
                    .parse()
                    .map_err(|_| bad(format!("bad arity `{arity}`")))?;
                let tuples = parse_tuples(value).map_err(bad)?;
                relations.push(Relation {
                    name: name.trim().to_string(),
                    arity,
                    tuples: tuples.into_iter().collect(),
                });
                continue;
            }
            return Err(bad(format!("unrecognized clause `{part}`")));
        }
        let size = size.ok_or_else(|| bad("missing `n=` clause".to_string()))?;
        FinStructure::new(size, relations)
    }
}

fn parse_tuples(text: &str) -> Result<Vec<Vec<usize>>, String> {
    let text = text.trim();
    if text.is_empty() {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    let mut rest = text;
    loop {
        rest = rest.trim_start();
        let inner_end = rest
            .find(')')
            .ok_or_else(|| format!("unterminated tuple in `{text}`"))?;
        let inner = rest
            .get(..inner_end)
            .and_then(|s| s.strip_prefix('('))
            .ok_or_else(|| format!("expected `(` in `{rest}`"))?;
        let tuple = inner
            .split(',')
            .map(|n| n.trim().parse::<usize>())
            .collect::<Result<Vec<usize>, _>>()
            .map_err(|_| format!("bad tuple `({inner})`"))?;
        out.push(tuple);
        rest = &rest[inner_end + 1..];
        rest = rest.trim_start();
        if rest.is_empty() {
            return Ok(out);
        }
        rest = rest
            .strip_prefix(',')
            .ok_or_else(|| format!("expected `,` between tuples near `{rest}`"))?;
    }
}

impl fmt::Display for FinStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n={}", self.size)?;
        for rel in &self.relations {
            if rel.name == "E" && rel.arity == 2 {
                write!(f, "; edges=")?;
            } else {
                write!(f, "; rel {}/{} = ", rel.name, rel.arity)?;
            }
            for (i, t) in rel.tuples.iter().enumerate() {
                if i > 0 {
                    write!(f, ",")?;
                }
                write!(f, "(")?;
                for (j, e) in t.iter().enumerate() {
                    if j > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{e}")?;
                }
                write!(f, ")")?;
            }
        }
        Ok(())
    }
}
