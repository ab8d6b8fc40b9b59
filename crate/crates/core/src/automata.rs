//! Compilation of formulas to finite-word acceptors and the finite-model
//! decision procedure built on top of it.
//!
//! Symbols are bitmasks: the low bits are the letter (one bit per unary
//! predicate, in signature order), the high bits are variable markers (one
//! track per free variable of the compilation context). A marked word is
//! accepted exactly when the markers place each context variable on
//! exactly one position and the formula holds under the induced
//! assignment.
//!
//! Transition guards are cubes (mask/value pairs) over the symbol bits, so
//! the alphabet is never enumerated beyond the bits a construction
//! actually constrains.

use crate::semantics::{Letter, WordModel};
use crate::syntax::{fresh_var, Formula, Signature};
use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt::Write as _;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AutomataError {
    #[error("state budget of {limit} states exceeded")]
    BudgetExceeded { limit: usize },
    #[error("free variable `{name}` is not in the compilation context")]
    FreeVariableOutsideContext { name: String },
    #[error("variable `{name}` appears twice in the compilation context")]
    DuplicateContextVariable { name: String },
    #[error("expected a sentence, but `{name}` occurs free")]
    NotASentence { name: String },
    #[error("too many symbol bits ({bits}); at most 63 are supported")]
    TooManyBits { bits: usize },
}

/// A conjunction of bit constraints: a symbol `s` matches iff
/// `s & mask == bits`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct Cube {
    mask: u64,
    bits: u64,
}

impl Cube {
    pub const ANY: Cube = Cube { mask: 0, bits: 0 };

    fn bit(i: usize, value: bool) -> Cube {
        Cube {
            mask: 1 << i,
            bits: (value as u64) << i,
        }
    }

    pub fn matches(self, symbol: u64) -> bool {
        symbol & self.mask == self.bits
    }

    /// Conjunction of two cubes, `None` when they contradict.
    fn meet(self, other: Cube) -> Option<Cube> {
        let common = self.mask & other.mask;
        if self.bits & common != other.bits & common {
            return None;
        }
        Some(Cube {
            mask: self.mask | other.mask,
            bits: self.bits | other.bits,
        })
    }

    fn without_bit(self, i: usize) -> Cube {
        let keep = !(1u64 << i);
        Cube {
            mask: self.mask & keep,
            bits: self.bits & keep,
        }
    }
}

/// A nondeterministic finite acceptor over marked-word symbols.
#[derive(Debug, Clone)]
pub struct Acceptor {
    pred_bits: usize,
    marker_vars: Vec<String>,
    initial: Vec<usize>,
    accepting: Vec<bool>,
    transitions: Vec<Vec<(Cube, usize)>>,
    deterministic: bool,
}

impl Acceptor {
    pub fn state_count(&self) -> usize {
        self.accepting.len()
    }

    pub fn is_deterministic(&self) -> bool {
        self.deterministic
    }

    pub fn marker_vars(&self) -> &[String] {
        &self.marker_vars
    }

    fn symbol_bits(&self) -> usize {
        self.pred_bits + self.marker_vars.len()
    }

    fn marker_bit(&self, var: &str) -> Option<usize> {
        self.marker_vars
            .iter()
            .position(|v| v == var)
            .map(|i| self.pred_bits + i)
    }

    /// Rejects everything.
    fn reject_all(pred_bits: usize, marker_vars: Vec<String>) -> Acceptor {
        Acceptor {
            pred_bits,
            marker_vars,
            initial: vec![0],
            accepting: vec![false],
            transitions: vec![vec![(Cube::ANY, 0)]],
            deterministic: true,
        }
    }

    /// Runs the acceptor on a concrete symbol sequence.
    pub fn accepts(&self, symbols: &[u64]) -> bool {
        let mut current: BTreeSet<usize> = self.initial.iter().copied().collect();
        for &s in symbols {
            let mut next = BTreeSet::new();
            for &q in &current {
                for &(cube, target) in &self.transitions[q] {
                    if cube.matches(s) {
                        next.insert(target);
                    }
                }
            }
            current = next;
            if current.is_empty() {
                return false;
            }
        }
        current.iter().any(|&q| self.accepting[q])
    }

    /// Language union by disjoint sum of the state sets.
    pub fn union(&self, other: &Acceptor) -> Acceptor {
        debug_assert_eq!(self.symbol_bits(), other.symbol_bits());
        let offset = self.state_count();
        let mut initial = self.initial.clone();
        initial.extend(other.initial.iter().map(|q| q + offset));
        let mut accepting = self.accepting.clone();
        accepting.extend(other.accepting.iter().copied());
        let mut transitions = self.transitions.clone();
        transitions.extend(
            other
                .transitions
                .iter()
                .map(|row| row.iter().map(|&(c, t)| (c, t + offset)).collect()),
        );
        Acceptor {
            pred_bits: self.pred_bits,
            marker_vars: self.marker_vars.clone(),
            initial,
            accepting,
            transitions,
            deterministic: false,
        }
    }

    /// Language intersection by the reachable product construction.
    pub fn intersect(&self, other: &Acceptor, budget: usize) -> Result<Acceptor, AutomataError> {
        debug_assert_eq!(self.symbol_bits(), other.symbol_bits());
        let mut index: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        let mut order: Vec<(usize, usize)> = Vec::new();
        let mut queue = VecDeque::new();
        let mut initial = Vec::new();
        for &a in &self.initial {
            for &b in &other.initial {
                if let Entry::Vacant(e) = index.entry((a, b)) {
                    e.insert(order.len());
                    order.push((a, b));
                    queue.push_back((a, b));
                }
                initial.push(index[&(a, b)]);
            }
        }
        initial.sort_unstable();
        initial.dedup();
        let mut transitions: Vec<Vec<(Cube, usize)>> = Vec::new();
        while let Some((a, b)) = queue.pop_front() {
            let mut row = Vec::new();
            for &(ca, ta) in &self.transitions[a] {
                for &(cb, tb) in &other.transitions[b] {
                    let Some(cube) = ca.meet(cb) else { continue };
                    let next = *index.entry((ta, tb)).or_insert_with(|| {
                        order.push((ta, tb));
                        queue.push_back((ta, tb));
                        order.len() - 1
                    });
                    if order.len() > budget {
                        return Err(AutomataError::BudgetExceeded { limit: budget });
                    }
                    row.push((cube, next));
                }
            }
            transitions.push(row);
        }
        let accepting = order
            .iter()
            .map(|&(a, b)| self.accepting[a] && other.accepting[b])
            .collect();
        Ok(Acceptor {
            pred_bits: self.pred_bits,
            marker_vars: self.marker_vars.clone(),
            initial,
            accepting,
            transitions,
            deterministic: self.deterministic && other.deterministic,
        })
    }

    /// The assignments over the union of the masks of `cubes`, returned as
    /// pairwise-disjoint cubes that jointly cover the whole symbol space.
    fn regions(cubes: impl Iterator<Item = Cube>) -> Vec<Cube> {
        let mut support = 0u64;
        for c in cubes {
            support |= c.mask;
        }
        let bits: Vec<u32> = (0..64).filter(|&i| support >> i & 1 == 1).collect();
        let mut out = Vec::with_capacity(1 << bits.len());
        for choice in 0u64..1 << bits.len() {
            let mut value = 0u64;
            for (k, &i) in bits.iter().enumerate() {
                if choice >> k & 1 == 1 {
                    value |= 1 << i;
                }
            }
            out.push(Cube {
                mask: support,
                bits: value,
            });
        }
        out
    }

    /// Subset construction. The result is deterministic and total: every
    /// symbol has exactly one matching outgoing cube in every state.
    pub fn determinize(&self, budget: usize) -> Result<Acceptor, AutomataError> {
        let start: Vec<usize> = {
            let s: BTreeSet<usize> = self.initial.iter().copied().collect();
            s.into_iter().collect()
        };
        let mut index: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
        let mut subsets: Vec<Vec<usize>> = Vec::new();
        index.insert(start.clone(), 0);
        subsets.push(start);
        let mut queue = VecDeque::from([0usize]);
        let mut transitions: Vec<Vec<(Cube, usize)>> = Vec::new();
        while let Some(id) = queue.pop_front() {
            let subset = subsets[id].clone();
            let regions = Self::regions(
                subset
                    .iter()
                    .flat_map(|&q| self.transitions[q].iter().map(|&(c, _)| c)),
            );
            let mut row = Vec::new();
            for region in regions {
                let mut target = BTreeSet::new();
                for &q in &subset {
                    for &(cube, t) in &self.transitions[q] {
                        // a region either refines a cube or misses it
                        if cube.meet(region).is_some() {
                            target.insert(t);
                        }
                    }
                }
                let target: Vec<usize> = target.into_iter().collect();
                let next = *index.entry(target.clone()).or_insert_with(|| {
                    subsets.push(target);
                    queue.push_back(subsets.len() - 1);
                    subsets.len() - 1
                });
                if subsets.len() > budget {
                    return Err(AutomataError::BudgetExceeded { limit: budget });
                }
                row.push((region, next));
            }
            transitions.push(row);
        }
        let accepting = subsets
            .iter()
            .map(|s| s.iter().any(|&q| self.accepting[q]))
            .collect();
        Ok(Acceptor {
            pred_bits: self.pred_bits,
            marker_vars: self.marker_vars.clone(),
            initial: vec![0],
            accepting,
            transitions,
            deterministic: true,
        })
    }

    /// Complement. Determinization makes the acceptor total, so flipping
    /// the accepting set complements over all marked words, including
    /// garbage markings; callers re-impose marker validity afterwards.
    pub fn complement(&self, budget: usize) -> Result<Acceptor, AutomataError> {
        let mut det = self.determinize(budget)?;
        for a in det.accepting.iter_mut() {
            *a = !*a;
        }
        Ok(det)
    }

    /// Moore partition refinement on a deterministic total acceptor.
    pub fn minimize(&self) -> Acceptor {
        debug_assert!(self.deterministic);
        let n = self.state_count();
        let regions = Self::regions(
            self.transitions
                .iter()
                .flat_map(|row| row.iter().map(|&(c, _)| c)),
        );
        let mut class: Vec<usize> = self.accepting.iter().map(|&a| a as usize).collect();
        let mut class_count = class.iter().collect::<BTreeSet<_>>().len();
        loop {
            let mut signatures: BTreeMap<(usize, Vec<usize>), usize> = BTreeMap::new();
            let mut next = vec![0usize; n];
            for q in 0..n {
                let succ: Vec<usize> = regions
                    .iter()
                    .map(|r| {
                        let t = self.transitions[q]
                            .iter()
                            .find(|(c, _)| c.meet(*r).is_some())
                            .map(|&(_, t)| t)
                            .expect("total acceptor");
                        class[t]
                    })
                    .collect();
                let fresh = signatures.len();
                next[q] = *signatures.entry((class[q], succ)).or_insert(fresh);
            }
            let next_count = signatures.len();
            class = next;
            if next_count == class_count {
                break;
            }
            class_count = next_count;
        }
        // one representative per class
        let mut repr = vec![usize::MAX; class_count];
        for q in 0..n {
            if repr[class[q]] == usize::MAX {
                repr[class[q]] = q;
            }
        }
        let transitions = repr
            .iter()
            .map(|&q| {
                self.transitions[q]
                    .iter()
                    .map(|&(c, t)| (c, class[t]))
                    .collect()
            })
            .collect();
        Acceptor {
            pred_bits: self.pred_bits,
            marker_vars: self.marker_vars.clone(),
            initial: vec![class[self.initial[0]]],
            accepting: repr.iter().map(|&q| self.accepting[q]).collect(),
            transitions,
            deterministic: true,
        }
    }

    /// Erases the marker track of `var`, which must be the last context
    /// variable: the result accepts a word iff some placement of the
    /// erased marker was accepted.
    pub fn project_marker(&self, var: &str) -> Acceptor {
        let bit = self.marker_bit(var).expect("marker present");
        debug_assert_eq!(bit + 1, self.symbol_bits());
        let transitions = self
            .transitions
            .iter()
            .map(|row| row.iter().map(|&(c, t)| (c.without_bit(bit), t)).collect())
            .collect();
        let mut marker_vars = self.marker_vars.clone();
        marker_vars.pop();
        Acceptor {
            pred_bits: self.pred_bits,
            marker_vars,
            initial: self.initial.clone(),
            accepting: self.accepting.clone(),
            transitions,
            deterministic: false,
        }
    }

    /// Is the accepted language empty? Plain reachability.
    pub fn is_empty(&self) -> bool {
        let mut seen = vec![false; self.state_count()];
        let mut queue: VecDeque<usize> = self.initial.iter().copied().collect();
        for &q in &self.initial {
            seen[q] = true;
        }
        while let Some(q) = queue.pop_front() {
            if self.accepting[q] {
                return false;
            }
            for &(_, t) in &self.transitions[q] {
                if !seen[t] {
                    seen[t] = true;
                    queue.push_back(t);
                }
            }
        }
        true
    }

    /// A minimum-length accepted symbol sequence, ties broken by comparing
    /// symbols from the left, so the result is length-lexicographically
    /// least. Each step takes the least concrete symbol of its transition
    /// region (unconstrained bits zero).
    pub fn shortest_accepted(&self, budget: usize) -> Result<Option<Vec<u64>>, AutomataError> {
        let det = if self.deterministic {
            self.clone()
        } else {
            self.determinize(budget)?
        };
        let start = det.initial[0];
        if det.accepting[start] {
            return Ok(Some(Vec::new()));
        }
        let mut parent: Vec<Option<(usize, u64)>> = vec![None; det.state_count()];
        let mut seen = vec![false; det.state_count()];
        seen[start] = true;
        let mut queue = VecDeque::from([start]);
        while let Some(q) = queue.pop_front() {
            let mut edges: Vec<(u64, usize)> = det.transitions[q]
                .iter()
                .map(|&(c, t)| (c.bits, t))
                .collect();
            edges.sort_unstable();
            for (symbol, t) in edges {
                if seen[t] {
                    continue;
                }
                seen[t] = true;
                parent[t] = Some((q, symbol));
                if det.accepting[t] {
                    let mut word = Vec::new();
                    let mut cur = t;
                    while let Some((p, s)) = parent[cur] {
                        word.push(s);
                        cur = p;
                    }
                    word.reverse();
                    return Ok(Some(word));
                }
                queue.push_back(t);
            }
        }
        Ok(None)
    }

    /// Renders the acceptor in DOT graph format.
    pub fn to_dot(&self, sig: &Signature) -> String {
        let mut out = String::from("digraph acceptor {\n  rankdir=LR;\n  node [shape=circle];\n");
        for (q, &acc) in self.accepting.iter().enumerate() {
            if acc {
                let _ = writeln!(out, "  q{q} [shape=doublecircle];");
            }
        }
        for &q in &self.initial {
            let _ = writeln!(out, "  start{q} [shape=point];");
            let _ = writeln!(out, "  start{q} -> q{q};");
        }
        for (q, row) in self.transitions.iter().enumerate() {
            for &(cube, t) in row {
                let _ = writeln!(
                    out,
                    "  q{q} -> q{t} [label=\"{}\"];",
                    self.cube_label(cube, sig)
                );
            }
        }
        out.push_str("}\n");
        out
    }

    fn cube_label(&self, cube: Cube, sig: &Signature) -> String {
        if cube.mask == 0 {
            return "*".to_string();
        }
        let mut parts = Vec::new();
        for i in 0..self.symbol_bits() {
            if cube.mask >> i & 1 == 0 {
                continue;
            }
            let name = if i < self.pred_bits {
                sig.preds()[i].clone()
            } else {
                format!("[{}]", self.marker_vars[i - self.pred_bits])
            };
            if cube.bits >> i & 1 == 1 {
                parts.push(name);
            } else {
                parts.push(format!("!{name}"));
            }
        }
        parts.join(" ")
    }
}

/// One entry of the per-stage state-count log.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StageStat {
    pub operation: String,
    pub states: usize,
}

/// Options for compilation and decision.
#[derive(Debug, Clone, Copy)]
pub struct CompileOptions {
    /// Abort with [`AutomataError::BudgetExceeded`] when any construction
    /// step would exceed this many states.
    pub max_states: usize,
}

impl Default for CompileOptions {
    fn default() -> Self {
        CompileOptions {
            max_states: 1_000_000,
        }
    }
}

/// Formula-to-acceptor compiler. Keeps a per-stage state-count log.
pub struct Compiler<'a> {
    sig: &'a Signature,
    opts: CompileOptions,
    stats: Vec<StageStat>,
}

impl<'a> Compiler<'a> {
    pub fn new(sig: &'a Signature) -> Self {
        Compiler::with_options(sig, CompileOptions::default())
    }

    pub fn with_options(sig: &'a Signature, opts: CompileOptions) -> Self {
        Compiler {
            sig,
            opts,
            stats: Vec::new(),
        }
    }

    pub fn stats(&self) -> &[StageStat] {
        &self.stats
    }

    fn log(&mut self, operation: impl Into<String>, a: &Acceptor) {
        self.stats.push(StageStat {
            operation: operation.into(),
            states: a.state_count(),
        });
    }

    /// Compiles `phi` against an ordered free-variable context. The
    /// acceptor accepts exactly the marked words whose markers are valid
    /// for the context and whose induced assignment satisfies `phi`.
    pub fn compile(&mut self, phi: &Formula, ctx: &[String]) -> Result<Acceptor, AutomataError> {
        let mut seen = BTreeSet::new();
        for v in ctx {
            if !seen.insert(v.clone()) {
                return Err(AutomataError::DuplicateContextVariable { name: v.clone() });
            }
        }
        for v in phi.free_vars() {
            if !ctx.contains(&v) {
                return Err(AutomataError::FreeVariableOutsideContext { name: v });
            }
        }
        self.check_bits(ctx.len())?;
        self.go(phi, ctx)
    }

    fn check_bits(&self, markers: usize) -> Result<(), AutomataError> {
        let bits = self.sig.len() + markers;
        if bits > 63 {
            return Err(AutomataError::TooManyBits { bits });
        }
        Ok(())
    }

    fn go(&mut self, phi: &Formula, ctx: &[String]) -> Result<Acceptor, AutomataError> {
        match phi {
            Formula::True => {
                let a = self.valid_markings(ctx)?;
                self.log("true", &a);
                Ok(a)
            }
            Formula::False => {
                let a = Acceptor::reject_all(self.sig.len(), ctx.to_vec());
                self.log("false", &a);
                Ok(a)
            }
            Formula::Less(x, y) => self.constrain(self.atom_less(x, y, ctx), ctx, "atom <"),
            Formula::Eq(x, y) => self.constrain(self.atom_eq(x, y, ctx), ctx, "atom ="),
            Formula::Pred(p, x) => self.constrain(self.atom_pred(p, x, ctx), ctx, "atom pred"),
            Formula::Not(f) => {
                let inner = self.go(f, ctx)?;
                let comp = inner.complement(self.opts.max_states)?;
                self.constrain(comp, ctx, "complement")
            }
            Formula::And(f, g) => {
                let fa = self.go(f, ctx)?;
                let ga = self.go(g, ctx)?;
                let a = fa.intersect(&ga, self.opts.max_states)?;
                self.log("product", &a);
                Ok(a)
            }
            Formula::Or(f, g) => {
                let fa = self.go(f, ctx)?;
                let ga = self.go(g, ctx)?;
                let a = fa.union(&ga);
                self.log("union", &a);
                Ok(a)
            }
            Formula::Implies(f, g) => {
                let rewritten = Formula::or(Formula::not((**f).clone()), (**g).clone());
                self.go(&rewritten, ctx)
            }
            Formula::Iff(f, g) => {
                let rewritten = Formula::and(
                    Formula::implies((**f).clone(), (**g).clone()),
                    Formula::implies((**g).clone(), (**f).clone()),
                );
                self.go(&rewritten, ctx)
            }
            Formula::Exists(v, body) => {
                let (v, body) = self.unshadow(v, body, ctx);
                self.check_bits(ctx.len() + 1)?;
                let mut inner_ctx = ctx.to_vec();
                inner_ctx.push(v.clone());
                let inner = self.go(&body, &inner_ctx)?;
                let projected = inner.project_marker(&v);
                self.log("project", &projected);
                let det = projected.determinize(self.opts.max_states)?.minimize();
                self.log("redeterminize", &det);
                Ok(det)
            }
            Formula::Forall(v, body) => {
                let rewritten =
                    Formula::not(Formula::exists(v.clone(), Formula::not((**body).clone())));
                self.go(&rewritten, ctx)
            }
        }
    }

    /// Renames the bound variable when it shadows a context variable.
    fn unshadow(&self, v: &str, body: &Formula, ctx: &[String]) -> (String, Formula) {
        if !ctx.iter().any(|c| c == v) {
            return (v.to_string(), body.clone());
        }
        let mut avoid: BTreeSet<String> = ctx.iter().cloned().collect();
        avoid.extend(body.all_vars());
        let v2 = fresh_var(v, &avoid);
        let renamed = body.substitute(v, &v2);
        (v2, renamed)
    }

    /// Intersects with the exactly-one-marker acceptor of every context
    /// variable, then determinizes and minimizes.
    fn constrain(
        &mut self,
        a: Acceptor,
        ctx: &[String],
        label: &str,
    ) -> Result<Acceptor, AutomataError> {
        let valid = self.valid_markings(ctx)?;
        let combined = a.intersect(&valid, self.opts.max_states)?;
        let det = combined.determinize(self.opts.max_states)?.minimize();
        self.log(label, &det);
        Ok(det)
    }

    /// Accepts exactly the words whose marker tracks place each context
    /// variable exactly once (any letters).
    fn valid_markings(&self, ctx: &[String]) -> Result<Acceptor, AutomataError> {
        let mut acc = self.universal(ctx);
        for i in 0..ctx.len() {
            let one = self.exactly_one(ctx, self.sig.len() + i);
            acc = acc.intersect(&one, self.opts.max_states)?;
        }
        Ok(acc)
    }

    fn universal(&self, ctx: &[String]) -> Acceptor {
        Acceptor {
            pred_bits: self.sig.len(),
            marker_vars: ctx.to_vec(),
            initial: vec![0],
            accepting: vec![true],
            transitions: vec![vec![(Cube::ANY, 0)]],
            deterministic: true,
        }
    }

    /// Two states: before and after the single allowed mark on `bit`.
    fn exactly_one(&self, ctx: &[String], bit: usize) -> Acceptor {
        Acceptor {
            pred_bits: self.sig.len(),
            marker_vars: ctx.to_vec(),
            initial: vec![0],
            accepting: vec![false, true],
            transitions: vec![
                vec![(Cube::bit(bit, false), 0), (Cube::bit(bit, true), 1)],
                vec![(Cube::bit(bit, false), 1)],
            ],
            deterministic: true,
        }
    }

    fn atom_pred(&self, p: &str, x: &str, ctx: &[String]) -> Acceptor {
        let pred = self.sig.index_of(p).expect("predicate checked by caller");
        let mx = self.marker_of(x, ctx);
        let on_mark = Cube::bit(mx, true)
            .meet(Cube::bit(pred, true))
            .expect("distinct bits");
        Acceptor {
            pred_bits: self.sig.len(),
            marker_vars: ctx.to_vec(),
            initial: vec![0],
            accepting: vec![false, true],
            transitions: vec![
                vec![(Cube::bit(mx, false), 0), (on_mark, 1)],
                vec![(Cube::bit(mx, false), 1)],
            ],
            deterministic: true,
        }
    }

    fn atom_less(&self, x: &str, y: &str, ctx: &[String]) -> Acceptor {
        if x == y {
            return Acceptor::reject_all(self.sig.len(), ctx.to_vec());
        }
        let mx = self.marker_of(x, ctx);
        let my = self.marker_of(y, ctx);
        let neither = Cube::bit(mx, false).meet(Cube::bit(my, false)).unwrap();
        let x_only = Cube::bit(mx, true).meet(Cube::bit(my, false)).unwrap();
        let y_only = Cube::bit(my, true).meet(Cube::bit(mx, false)).unwrap();
        Acceptor {
            pred_bits: self.sig.len(),
            marker_vars: ctx.to_vec(),
            initial: vec![0],
            accepting: vec![false, false, true],
            transitions: vec![
                vec![(neither, 0), (x_only, 1)],
                vec![(neither, 1), (y_only, 2)],
                vec![(neither, 2)],
            ],
            deterministic: true,
        }
    }

    fn atom_eq(&self, x: &str, y: &str, ctx: &[String]) -> Acceptor {
        let mx = self.marker_of(x, ctx);
        let my = self.marker_of(y, ctx);
        let both = Cube::bit(mx, true).meet(Cube::bit(my, true)).unwrap();
        let neither = Cube::bit(mx, false).meet(Cube::bit(my, false)).unwrap();
        Acceptor {
            pred_bits: self.sig.len(),
            marker_vars: ctx.to_vec(),
            initial: vec![0],
            accepting: vec![false, true],
            transitions: vec![vec![(neither, 0), (both, 1)], vec![(neither, 1)]],
            deterministic: true,
        }
    }

    fn marker_of(&self, v: &str, ctx: &[String]) -> usize {
        self.sig.len()
            + ctx
                .iter()
                .position(|c| c == v)
                .expect("context checked by caller")
    }
}

/// Compiles with default options, discarding stats.
pub fn compile(sig: &Signature, phi: &Formula, ctx: &[String]) -> Result<Acceptor, AutomataError> {
    Compiler::new(sig).compile(phi, ctx)
}

/// Outcome of the finite-model decision.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    /// The sentence has a finite word model; `minimal` is the
    /// length-lexicographically least one.
    HasFiniteModel { minimal: WordModel },
    NoFiniteModel,
}

#[derive(Debug, Clone)]
pub struct DecisionResult {
    pub verdict: Verdict,
    /// True when the empty word is the only finite model. The companion
    /// theory of the sentence is then inconsistent even though a (trivial)
    /// finite model exists.
    pub empty_model_only: bool,
    pub stats: Vec<StageStat>,
}

/// Decides whether the sentence `alpha` has a finite word model, returning
/// the minimal model when one exists. Words are exactly the finite models
/// of the linear-order axioms; for sentences entailing those axioms this
/// is the finite model property.
pub fn decide_fmp(
    sig: &Signature,
    alpha: &Formula,
    opts: CompileOptions,
) -> Result<DecisionResult, AutomataError> {
    decide_fmp_with_acceptor(sig, alpha, opts).map(|(r, _)| r)
}

/// As [`decide_fmp`], also returning the final deterministic minimized
/// acceptor (for inspection or DOT output).
pub fn decide_fmp_with_acceptor(
    sig: &Signature,
    alpha: &Formula,
    opts: CompileOptions,
) -> Result<(DecisionResult, Acceptor), AutomataError> {
    if let Some(name) = alpha.free_vars().into_iter().next() {
        return Err(AutomataError::NotASentence { name });
    }
    let mut compiler = Compiler::with_options(sig, opts);
    let acceptor = compiler.compile(alpha, &[])?;
    let det = acceptor.determinize(opts.max_states)?.minimize();
    compiler.log("final", &det);
    let shortest = det.shortest_accepted(opts.max_states)?;
    let (verdict, empty_model_only) = match shortest {
        None => (Verdict::NoFiniteModel, false),
        Some(symbols) => {
            let minimal = symbols_to_word(sig, &symbols);
            let empty_only = minimal.is_empty() && !has_nonempty_model(&det);
            (Verdict::HasFiniteModel { minimal }, empty_only)
        }
    };
    let result = DecisionResult {
        verdict,
        empty_model_only,
        stats: compiler.stats,
    };
    Ok((result, det))
}

/// Does the (deterministic, total) acceptor accept a word of length >= 1?
fn has_nonempty_model(det: &Acceptor) -> bool {
    let mut seen = vec![false; det.state_count()];
    let mut queue = VecDeque::new();
    for &q in &det.initial {
        for &(_, t) in &det.transitions[q] {
            if !seen[t] {
                seen[t] = true;
                queue.push_back(t);
            }
        }
    }
    while let Some(q) = queue.pop_front() {
        if det.accepting[q] {
            return true;
        }
        for &(_, t) in &det.transitions[q] {
            if !seen[t] {
                seen[t] = true;
                queue.push_back(t);
            }
        }
    }
    false
}

/// Interprets the symbols of a sentence acceptor (no marker bits) as word
/// letters.
pub fn symbols_to_word(sig: &Signature, symbols: &[u64]) -> WordModel {
    let letters = symbols.iter().map(|&s| Letter(s as u32)).collect();
    WordModel::new(sig.clone(), letters).expect("letter symbols")
}

pub fn word_to_symbols(w: &WordModel) -> Vec<u64> {
    w.letters().iter().map(|l| l.0 as u64).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semantics::{enumerate_words, eval_sentence, find_finite_model};
    use crate::syntax::{parse, ub};

    fn sig() -> Signature {
        Signature::new(["P"]).unwrap()
    }

    fn decide(text: &str) -> DecisionResult {
        let sig = sig();
        let alpha = parse(text, &sig).unwrap();
        decide_fmp(&sig, &alpha, CompileOptions::default()).unwrap()
    }

    #[test]
    fn decide_simple_sat() {
        let r = decide("E x. P(x)");
        match r.verdict {
            Verdict::HasFiniteModel { minimal } => assert_eq!(format!("{minimal}"), "{P}"),
            v => panic!("unexpected verdict {v:?}"),
        }
    }

    #[test]
    fn decide_contradiction() {
        let r = decide("(E x. P(x)) & ~(E x. P(x))");
        assert_eq!(r.verdict, Verdict::NoFiniteModel);
    }

    #[test]
    fn decide_ub_has_no_finite_model() {
        let sig = sig();
        let alpha = ub(&sig, "P").unwrap();
        let r = decide_fmp(&sig, &alpha, CompileOptions::default()).unwrap();
        assert_eq!(r.verdict, Verdict::NoFiniteModel);
    }

    #[test]
    fn empty_model_is_found_and_flagged() {
        let r = decide("A x. false");
        match r.verdict {
            Verdict::HasFiniteModel { minimal } => assert!(minimal.is_empty()),
            v => panic!("unexpected verdict {v:?}"),
        }
        assert!(r.empty_model_only);

        // satisfied by the empty word but also by longer ones
        let r = decide("A x. P(x)");
        assert!(!r.empty_model_only);
    }

    #[test]
    fn compiled_acceptor_matches_eval() {
        let sig = sig();
        for text in [
            "E x. P(x)",
            "A x. P(x)",
            "E x. E y. x < y & P(y)",
            "E x. ~P(x) | (A y. y = x)",
        ] {
            let alpha = parse(text, &sig).unwrap();
            let acceptor = compile(&sig, &alpha, &[]).unwrap();
            for w in enumerate_words(&sig, 5) {
                let direct = eval_sentence(&w, &alpha).unwrap();
                let accepted = acceptor.accepts(&word_to_symbols(&w));
                assert_eq!(direct, accepted, "{text} on {w}");
            }
        }
    }

    #[test]
    fn marker_discipline() {
        let sig = sig();
        let phi = parse("P(x)", &sig).unwrap();
        let a = compile(&sig, &phi, &["x".to_string()]).unwrap();
        let mark = 1u64 << sig.len();
        // exactly one mark, on a P-letter
        assert!(a.accepts(&[1 | mark]));
        assert!(a.accepts(&[0, 1 | mark]));
        // no marks, or two marks: rejected
        assert!(!a.accepts(&[1]));
        assert!(!a.accepts(&[1 | mark, 1 | mark]));
        // marked letter without P: rejected
        assert!(!a.accepts(&[mark]));
    }

    #[test]
    fn less_atom_orders_marks() {
        let sig = sig();
        let phi = parse("x < y", &sig).unwrap();
        let ctx = vec!["x".to_string(), "y".to_string()];
        let a = compile(&sig, &phi, &ctx).unwrap();
        let mx = 1u64 << sig.len();
        let my = 2u64 << sig.len();
        assert!(a.accepts(&[mx, my]));
        assert!(a.accepts(&[mx, 0, my]));
        assert!(!a.accepts(&[my, mx]));
        assert!(!a.accepts(&[mx | my]));
    }

    #[test]
    fn shortest_accepted_examples() {
        let sig = sig();
        let bot = compile(&sig, &Formula::False, &[]).unwrap();
        assert!(bot.is_empty());
        assert_eq!(bot.shortest_accepted(1000).unwrap(), None);

        let some_p = compile(&sig, &parse("E x. P(x)", &sig).unwrap(), &[]).unwrap();
        assert_eq!(some_p.shortest_accepted(1000).unwrap(), Some(vec![1]));

        let two = compile(&sig, &parse("E x. E y. x < y", &sig).unwrap(), &[]).unwrap();
        assert_eq!(two.shortest_accepted(1000).unwrap().unwrap().len(), 2);
    }

    #[test]
    fn decision_agrees_with_search() {
        let sig = sig();
        for text in [
            "E x. P(x)",
            "A x. P(x)",
            "E x. (A y. ~(y < x)) & P(x)",
            "E x. E y. ~(x = y) & P(x) & P(y)",
            "~(E x. x = x)",
        ] {
            let alpha = parse(text, &sig).unwrap();
            let r = decide_fmp(&sig, &alpha, CompileOptions::default()).unwrap();
            let search = find_finite_model(&sig, &alpha, 5).unwrap();
            match (&r.verdict, search) {
                (Verdict::HasFiniteModel { minimal }, Some(found)) => {
                    assert_eq!(minimal, &found, "{text}")
                }
                (Verdict::HasFiniteModel { minimal }, None) => {
                    assert!(minimal.len() > 5, "{text}")
                }
                (Verdict::NoFiniteModel, None) => {}
                (Verdict::NoFiniteModel, Some(found)) => {
                    panic!("{text}: decision says no model but {found} satisfies it")
                }
            }
        }
    }

    #[test]
    fn budget_is_reported() {
        let sig = sig();
        let alpha = ub(&sig, "P").unwrap();
        let err = decide_fmp(&sig, &alpha, CompileOptions { max_states: 2 }).unwrap_err();
        assert_eq!(err, AutomataError::BudgetExceeded { limit: 2 });
    }

    #[test]
    fn dot_output_mentions_labels() {
        let sig = sig();
        let a = compile(&sig, &parse("E x. P(x)", &sig).unwrap(), &[]).unwrap();
        let dot = a.to_dot(&sig);
        assert!(dot.starts_with("digraph"));
        assert!(dot.contains("doublecircle"));
    }
}
