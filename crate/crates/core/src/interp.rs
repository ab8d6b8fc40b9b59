//! Parameterized translations between relational signatures, their
//! compositional lifting to formulas, and semantic verification of
//! interpretability claims on finite structures.
//!
//! A translation maps every source relation symbol to a target-language
//! formula over designated argument variables and shared parameter
//! variables; equality and the connectives pass through. Verifying an
//! interpretation means evaluating the lifted sentence in a concrete
//! target structure under a concrete parameter assignment that satisfies
//! the parameter domain.
//!
//! Translation text format, one clause per line:
//!
//! ```text
//! params: 2
//! domain: ~(w0 = w1)
//! R(v0,v1) := v0 = w0 & v1 = w1
//! ```

use crate::relational::{eval_rel, parse_rel, RelError, RelFormula};
use crate::structure::{FinStructure, StructureError};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum InterpError {
    #[error("no translation entry for symbol `{name}`")]
    MissingSymbol { name: String },
    #[error("symbol `{name}` is applied to {got} arguments, entry expects {expected}")]
    ArityMismatch {
        name: String,
        got: usize,
        expected: usize,
    },
    #[error("parameter variable `{name}` occurs free in the formula being lifted")]
    ParameterCollision { name: String },
    #[error("parameter assignment has length {got}, translation expects {expected}")]
    ParameterCount { got: usize, expected: usize },
    #[error("parameter value {value} is outside a domain of size {size}")]
    ParameterOutOfRange { value: usize, size: usize },
    #[error("parameter assignment does not satisfy the parameter domain")]
    DomainViolated,
    #[error("argument and parameter variables overlap on `{name}`")]
    OverlappingVariables { name: String },
    #[error("malformed translation text: {message}")]
    BadText { message: String },
    #[error(transparent)]
    Rel(#[from] RelError),
    #[error(transparent)]
    Structure(#[from] StructureError),
}

/// How one source symbol is translated: a body formula over the
/// designated argument variables and the translation's parameters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TranslationEntry {
    pub args: Vec<String>,
    pub body: RelFormula,
}

/// A parameterized translation of a source signature into the target
/// language.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Translation {
    params: Vec<String>,
    map: BTreeMap<String, TranslationEntry>,
    param_domain: RelFormula,
}

impl Translation {
    pub fn new(
        params: Vec<String>,
        map: BTreeMap<String, TranslationEntry>,
        param_domain: RelFormula,
    ) -> Result<Self, InterpError> {
        for entry in map.values() {
            for a in &entry.args {
                if params.contains(a) {
                    return Err(InterpError::OverlappingVariables { name: a.clone() });
                }
            }
        }
        Ok(Translation {
            params,
            map,
            param_domain,
        })
    }

    /// Parameter-free identity translation of the given symbols.
    pub fn identity(symbols: &[(String, usize)]) -> Translation {
        let map = symbols
            .iter()
            .map(|(name, arity)| {
                let args: Vec<String> = (0..*arity).map(|i| format!("v{i}")).collect();
                (
                    name.clone(),
                    TranslationEntry {
                        args: args.clone(),
                        body: RelFormula::atom(name.clone(), args),
                    },
                )
            })
            .collect();
        Translation {
            params: Vec::new(),
            map,
            param_domain: RelFormula::True,
        }
    }

    pub fn params(&self) -> &[String] {
        &self.params
    }

    pub fn dimension(&self) -> usize {
        self.params.len()
    }

    pub fn param_domain(&self) -> &RelFormula {
        &self.param_domain
    }

    pub fn entry(&self, symbol: &str) -> Option<&TranslationEntry> {
        self.map.get(symbol)
    }

    pub fn entries(&self) -> impl Iterator<Item = (&String, &TranslationEntry)> {
        self.map.iter()
    }

    pub fn parse(text: &str) -> Result<Translation, InterpError> {
        let bad = |message: String| InterpError::BadText { message };
        let mut params: Vec<String> = Vec::new();
        let mut domain = RelFormula::True;
        let mut map = BTreeMap::new();
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if let Some(rest) = line.strip_prefix("params:") {
                let p: usize = rest
                    .trim()
                    .parse()
                    .map_err(|_| bad(format!("bad parameter count `{rest}`")))?;
                params = (0..p).map(|i| format!("w{i}")).collect();
                continue;
            }
            if let Some(rest) = line.strip_prefix("domain:") {
                domain = parse_rel(rest.trim())?;
                continue;
            }
            let (head, body) = line
                .split_once(":=")
                .ok_or_else(|| bad(format!("expected `SYM(args) := formula` in `{line}`")))?;
            let head = head.trim();
            let open = head
                .find('(')
                .ok_or_else(|| bad(format!("expected `(` in `{head}`")))?;
            let name = head[..open].trim().to_string();
            let args_text = head[open + 1..]
                .strip_suffix(')')
                .ok_or_else(|| bad(format!("expected `)` in `{head}`")))?;
            let args: Vec<String> = args_text
                .split(',')
                .map(|a| a.trim().to_string())
                .filter(|a| !a.is_empty())
                .collect();
            let body = parse_rel(body.trim())?;
            map.insert(name, TranslationEntry { args, body });
        }
        Translation::new(params, map, domain)
    }
}

impl fmt::Display for Translation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "params: {}", self.params.len())?;
        if self.param_domain != RelFormula::True {
            writeln!(f, "domain: {}", self.param_domain)?;
        }
        for (name, entry) in &self.map {
            writeln!(f, "{name}({}) := {}", entry.args.join(","), entry.body)?;
        }
        Ok(())
    }
}

/// Lifts `phi` along the translation: every source atom is replaced by its
/// entry's body with the designated argument variables substituted, and
/// the connectives and quantifiers commute. Binders that would capture a
/// parameter variable are renamed.
pub fn lift(tau: &Translation, phi: &RelFormula) -> Result<RelFormula, InterpError> {
    let free = phi.free_vars();
    for w in tau.params() {
        if free.contains(w) {
            return Err(InterpError::ParameterCollision { name: w.clone() });
        }
    }
    let params: BTreeSet<String> = tau.params().iter().cloned().collect();
    let phi = phi.rename_bound_away(&params);
    lift_clean(tau, &phi)
}

fn lift_clean(tau: &Translation, phi: &RelFormula) -> Result<RelFormula, InterpError> {
    use RelFormula::*;
    Ok(match phi {
        True => True,
        False => False,
        Eq(x, y) => Eq(x.clone(), y.clone()),
        Atom(name, args) => {
            let entry = tau
                .entry(name)
                .ok_or_else(|| InterpError::MissingSymbol { name: name.clone() })?;
            if entry.args.len() != args.len() {
                return Err(InterpError::ArityMismatch {
                    name: name.clone(),
                    got: args.len(),
                    expected: entry.args.len(),
                });
            }
            let avoid: BTreeSet<String> = args.iter().cloned().collect();
            let body = entry.body.rename_bound_away(&avoid);
            let map: BTreeMap<String, String> = entry
                .args
                .iter()
                .cloned()
                .zip(args.iter().cloned())
                .collect();
            body.substitute_map(&map)
        }
        Not(a) => RelFormula::not(lift_clean(tau, a)?),
        And(a, b) => RelFormula::and(lift_clean(tau, a)?, lift_clean(tau, b)?),
        Or(a, b) => RelFormula::or(lift_clean(tau, a)?, lift_clean(tau, b)?),
        Implies(a, b) => RelFormula::implies(lift_clean(tau, a)?, lift_clean(tau, b)?),
        Iff(a, b) => RelFormula::iff(lift_clean(tau, a)?, lift_clean(tau, b)?),
        Exists(v, a) => RelFormula::exists(v.clone(), lift_clean(tau, a)?),
        Forall(v, a) => RelFormula::forall(v.clone(), lift_clean(tau, a)?),
    })
}

/// A concrete interpretability witness: a translation, a target structure,
/// and a parameter assignment.
#[derive(Debug, Clone)]
pub struct InterpretationWitness {
    pub translation: Translation,
    pub target_model: FinStructure,
    pub parameter_assignment: Vec<usize>,
}

impl InterpretationWitness {
    fn param_env(&self) -> Result<BTreeMap<String, usize>, InterpError> {
        if self.parameter_assignment.len() != self.translation.dimension() {
            return Err(InterpError::ParameterCount {
                got: self.parameter_assignment.len(),
                expected: self.translation.dimension(),
            });
        }
        let size = self.target_model.size();
        let mut env = BTreeMap::new();
        for (w, &value) in self
            .translation
            .params()
            .iter()
            .zip(&self.parameter_assignment)
        {
            if value >= size {
                return Err(InterpError::ParameterOutOfRange { value, size });
            }
            env.insert(w.clone(), value);
        }
        Ok(env)
    }
}

/// Evaluates the lifted `beta` in the witness's target structure under its
/// parameter assignment. Errors when the assignment has the wrong length
/// or fails the parameter domain; otherwise returns whether this witness
/// semantically validates the interpretation of `beta`.
pub fn verify_interpretation(
    witness: &InterpretationWitness,
    beta: &RelFormula,
) -> Result<bool, InterpError> {
    let env = witness.param_env()?;
    let domain_ok = eval_rel(
        &witness.target_model,
        witness.translation.param_domain(),
        &env,
    )?;
    if !domain_ok {
        return Err(InterpError::DomainViolated);
    }
    let lifted = lift(&witness.translation, beta)?;
    Ok(eval_rel(&witness.target_model, &lifted, &env)?)
}

/// The equivalence used by the diagram translation: `a ~ b` iff both are
/// off-parameter, or both equal the same parameter. One class per
/// parameter plus one sink class.
fn sim(a: &str, b: &str, params: &[String]) -> RelFormula {
    let both_off = RelFormula::and_all(params.iter().flat_map(|w| {
        [
            RelFormula::not(RelFormula::eq(a, w.clone())),
            RelFormula::not(RelFormula::eq(b, w.clone())),
        ]
    }));
    let same_param = RelFormula::or_all(params.iter().map(|w| {
        RelFormula::and(RelFormula::eq(a, w.clone()), RelFormula::eq(b, w.clone()))
    }));
    RelFormula::or(both_off, same_param)
}

/// Builds the translation interpreting a finite binary structure inside
/// "there exist n distinct elements": one parameter per element, the
/// parameter domain demands pairwise distinctness, and the relation is
/// translated as the disjunction over edges of "first argument is in the
/// class of the source, second in the class of the target".
pub fn build_diagram_interpretation(m: &FinStructure) -> Result<Translation, InterpError> {
    let rel = m.single_binary()?;
    let n = m.size();
    let params: Vec<String> = (0..n).map(|i| format!("w{i}")).collect();
    let mut distinct = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            distinct.push(RelFormula::not(RelFormula::eq(
                params[i].clone(),
                params[j].clone(),
            )));
        }
    }
    let param_domain = RelFormula::and_all(distinct);
    let body = RelFormula::or_all(rel.tuples.iter().map(|t| {
        RelFormula::and(
            sim("v0", &params[t[0]], &params),
            sim("v1", &params[t[1]], &params),
        )
    }));
    let mut map = BTreeMap::new();
    map.insert(
        rel.name.clone(),
        TranslationEntry {
            args: vec!["v0".to_string(), "v1".to_string()],
            body,
        },
    );
    Translation::new(params, map, param_domain)
}

/// The sentence asserting the existence of the structure inside a model:
/// `n` pairwise distinct elements realizing exactly the edges of `m`.
pub fn diagram_sentence(m: &FinStructure) -> Result<RelFormula, InterpError> {
    let rel = m.single_binary()?;
    let n = m.size();
    let vars: Vec<String> = (0..n).map(|i| format!("x{i}")).collect();
    let mut conjuncts = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            conjuncts.push(RelFormula::not(RelFormula::eq(
                vars[i].clone(),
                vars[j].clone(),
            )));
        }
    }
    for i in 0..n {
        for j in 0..n {
            let atom = RelFormula::atom(rel.name.clone(), vec![vars[i].clone(), vars[j].clone()]);
            if rel.tuples.contains(&vec![i, j]) {
                conjuncts.push(atom);
            } else {
                conjuncts.push(RelFormula::not(atom));
            }
        }
    }
    let mut body = RelFormula::and_all(conjuncts);
    for v in vars.into_iter().rev() {
        body = RelFormula::exists(v, body);
    }
    Ok(body)
}

/// Reads the translated relation back off the parameter classes: the
/// returned structure has one element per parameter, with an edge `(i, j)`
/// iff the lifted relation holds between the i-th and j-th parameter
/// values. For a faithful interpretation this is isomorphic to the
/// structure the translation was built from.
pub fn induced_parameter_structure(
    witness: &InterpretationWitness,
    symbol: &str,
) -> Result<FinStructure, InterpError> {
    let env = witness.param_env()?;
    let entry = witness
        .translation
        .entry(symbol)
        .ok_or_else(|| InterpError::MissingSymbol {
            name: symbol.to_string(),
        })?;
    if entry.args.len() != 2 {
        return Err(InterpError::ArityMismatch {
            name: symbol.to_string(),
            got: 2,
            expected: entry.args.len(),
        });
    }
    let n = witness.parameter_assignment.len();
    let mut stack: Vec<(&str, usize)> = env.iter().map(|(k, &v)| (k.as_str(), v)).collect();
    let mut edges = Vec::new();
    for i in 0..n {
        for j in 0..n {
            stack.push((&entry.args[0], witness.parameter_assignment[i]));
            stack.push((&entry.args[1], witness.parameter_assignment[j]));
            let holds = crate::relational::eval_rel_stack(&witness.target_model, &entry.body, &mut stack)?;
            stack.pop();
            stack.pop();
            if holds {
                edges.push((i, j));
            }
        }
    }
    Ok(FinStructure::from_edges(n, &edges)?)
}
