//! Termination and normalization checks.
//!
//! Termination proofs combine the lexicographic path order, dependency pairs
//! with linear polynomial interpretations, and, for context-sensitive
//! systems, a transformation into an ordinary rewrite system whose
//! termination implies μ-termination.  Non-termination is shown by finding
//! a looping reduction of a left-hand side.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::time::Instant;

use crate::rewrite::{Budget, Engine, TriBool};
use crate::system::{underlying_trs, Gtrs, Rule};
use crate::term::{
    active_positions, active_vars, frozen_vars, matches, renaming_apart, unify, PositionFilter, ReplacementMap,
    Symbol, Term, Var, INTERNAL_MARK,
};

/// A strict precedence on function symbols given by ranks.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Precedence {
    rank: BTreeMap<Symbol, usize>,
}

impl Precedence {
    /// Builds a precedence from symbols listed from smallest to largest.
    pub fn from_ascending(symbols: &[Symbol]) -> Self {
        Precedence { rank: symbols.iter().cloned().enumerate().map(|(i, f)| (f, i + 1)).collect() }
    }

    /// True if `f` is strictly above `g`.
    pub fn gt(&self, f: &Symbol, g: &Symbol) -> bool {
        match (self.rank.get(f), self.rank.get(g)) {
            (Some(a), Some(b)) => a > b,
            _ => false,
        }
    }

    /// Symbols from largest to smallest.
    pub fn descending(&self) -> Vec<Symbol> {
        let mut v: Vec<(&Symbol, &usize)> = self.rank.iter().collect();
        v.sort_by(|a, b| b.1.cmp(a.1));
        v.into_iter().map(|(f, _)| f.clone()).collect()
    }
}

/// The lexicographic path order induced by a precedence.
pub fn lpo_gt(s: &Term, t: &Term, prec: &Precedence) -> bool {
    let Term::App(f, ss) = s else { return false };
    if ss.iter().any(|si| si == t || lpo_gt(si, t, prec)) {
        return true;
    }
    let Term::App(g, ts) = t else { return false };
    if f == g {
        let lex = ss.iter().zip(ts.iter()).find(|(a, b)| a != b).is_some_and(|(a, b)| lpo_gt(a, b, prec));
        lex && ts.iter().all(|tj| lpo_gt(s, tj, prec))
    } else {
        prec.gt(f, g) && ts.iter().all(|tj| lpo_gt(s, tj, prec))
    }
}

const EXHAUSTIVE_LIMIT: usize = 8;

fn rule_symbols(rules: &[Rule]) -> Vec<Symbol> {
    let mut out = BTreeSet::new();
    for r in rules {
        r.lhs.collect_symbols(&mut out);
        r.rhs.collect_symbols(&mut out);
    }
    out.into_iter().collect()
}

fn lpo_orients(rules: &[Rule], prec: &Precedence) -> bool {
    rules.iter().all(|r| lpo_gt(&r.lhs, &r.rhs, prec))
}

/// Searches a precedence whose path order orients every rule (conditions ignored).
pub fn orient_lpo(rules: &[Rule], deadline: Instant) -> Option<Precedence> {
    if rules.iter().any(|r| !r.rhs.vars().is_subset(&r.lhs.vars())) {
        return None;
    }
    let syms = rule_symbols(rules);
    if syms.len() <= EXHAUSTIVE_LIMIT {
        let mut idx: Vec<usize> = (0..syms.len()).collect();
        loop {
            if Instant::now() > deadline {
                return None;
            }
            let order: Vec<Symbol> = idx.iter().map(|&i| syms[i].clone()).collect();
            let prec = Precedence::from_ascending(&order);
            if lpo_orients(rules, &prec) {
                return Some(prec);
            }
            if !next_permutation(&mut idx) {
                return None;
            }
        }
    }
    let greedy = greedy_order(rules, &syms);
    let prec = Precedence::from_ascending(&greedy);
    lpo_orients(rules, &prec).then_some(prec)
}

fn next_permutation(v: &mut [usize]) -> bool {
    let n = v.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// Orders symbols by the length of the longest chain of "left root calls
/// right symbol" edges below them, ignoring edges closing a cycle.
fn greedy_order(rules: &[Rule], syms: &[Symbol]) -> Vec<Symbol> {
    let mut edges: BTreeMap<Symbol, BTreeSet<Symbol>> = BTreeMap::new();
    for r in rules {
        if let Some(f) = r.lhs.root() {
            for g in r.rhs.symbols() {
                if &g != f {
                    edges.entry(f.clone()).or_default().insert(g);
                }
            }
        }
    }
    fn height(
        f: &Symbol,
        edges: &BTreeMap<Symbol, BTreeSet<Symbol>>,
        memo: &mut BTreeMap<Symbol, usize>,
        stack: &mut BTreeSet<Symbol>,
    ) -> usize {
        if let Some(h) = memo.get(f) {
            return *h;
        }
        if !stack.insert(f.clone()) {
            return 0;
        }
        let h = edges
            .get(f)
            .map(|gs| gs.iter().map(|g| height(g, edges, memo, stack) + 1).max().unwrap_or(0))
            .unwrap_or(0);
        stack.remove(f);
        memo.insert(f.clone(), h);
        h
    }
    let mut memo = BTreeMap::new();
    let mut keyed: Vec<(usize, Symbol)> =
        syms.iter().map(|f| (height(f, &edges, &mut memo, &mut BTreeSet::new()), f.clone())).collect();
    keyed.sort();
    keyed.into_iter().map(|(_, f)| f).collect()
}

/// A linear polynomial with natural coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
struct Lin {
    c: i64,
    coef: BTreeMap<Var, i64>,
}

impl Lin {
    fn var(x: &Var) -> Lin {
        Lin { c: 0, coef: [(x.clone(), 1)].into_iter().collect() }
    }

    fn ge(&self, other: &Lin) -> bool {
        self.c >= other.c && other.coef.iter().all(|(x, k)| self.coef.get(x).copied().unwrap_or(0) >= *k)
    }

    fn gt(&self, other: &Lin) -> bool {
        self.ge(other) && self.c > other.c
    }

    fn add(mut self, other: &Lin) -> Lin {
        self.c += other.c;
        for (x, k) in &other.coef {
            *self.coef.entry(x.clone()).or_default() += k;
        }
        self
    }

    fn scale(mut self, k: i64) -> Lin {
        self.c *= k;
        self.coef.values_mut().for_each(|v| *v *= k);
        self.coef.retain(|_, v| *v != 0);
        self
    }
}

/// Interpretation shapes tried for each symbol.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Shape {
    Const(i64),
    Proj(usize, i64),
    Sum(i64),
    TwoSum,
}

impl Shape {
    fn candidates(arity: usize) -> Vec<Shape> {
        if arity == 0 {
            return vec![Shape::Const(0), Shape::Const(1), Shape::Const(2)];
        }
        if arity == 1 {
            return vec![Shape::Proj(0, 0), Shape::Proj(0, 1), Shape::Const(0), Shape::Const(1), Shape::TwoSum];
        }
        let mut out = vec![Shape::Sum(0)];
        out.extend((0..arity).map(|i| Shape::Proj(i, 0)));
        out.push(Shape::Sum(1));
        out.extend((0..arity).map(|i| Shape::Proj(i, 1)));
        out.extend([Shape::Const(0), Shape::Const(1), Shape::TwoSum]);
        out
    }

    fn apply(self, args: Vec<Lin>) -> Lin {
        match self {
            Shape::Const(k) => Lin { c: k, coef: BTreeMap::new() },
            Shape::Proj(i, k) => args[i].clone().add(&Lin { c: k, coef: BTreeMap::new() }),
            Shape::Sum(k) => args.iter().fold(Lin { c: k, coef: BTreeMap::new() }, |acc, a| acc.add(a)),
            Shape::TwoSum => args.iter().fold(Lin::default(), |acc, a| acc.add(a)).scale(2),
        }
    }
}

fn interpret(t: &Term, shapes: &HashMap<Symbol, Shape>) -> Option<Lin> {
    match t {
        Term::Var(x) => Some(Lin::var(x)),
        Term::App(f, args) => {
            let shape = *shapes.get(f)?;
            let vals = args.iter().map(|a| interpret(a, shapes)).collect::<Option<Vec<_>>>()?;
            Some(shape.apply(vals))
        }
    }
}

/// A dependency pair `ℓ♯ → u♯`.
#[derive(Debug, Clone)]
struct DepPair {
    lhs: Term,
    rhs: Term,
}

fn sharp(f: &Symbol) -> Symbol {
    Symbol::func(&format!("{INTERNAL_MARK}{}♯", f.name()), f.arity())
}

fn dependency_pairs(rules: &[Rule], defined: &BTreeSet<Symbol>) -> Vec<DepPair> {
    let mut out = Vec::new();
    for r in rules {
        let Term::App(f, largs) = &r.lhs else { continue };
        let lhs = Term::app(sharp(f), largs.clone());
        let proper: BTreeSet<&Term> = r.lhs.subterms().into_iter().filter(|(p, _)| !p.is_root()).map(|(_, t)| t).collect();
        for (_, u) in r.rhs.subterms() {
            if let Term::App(g, uargs) = u {
                if defined.contains(g) && !proper.contains(u) {
                    out.push(DepPair { lhs: lhs.clone(), rhs: Term::app(sharp(g), uargs.clone()) });
                }
            }
        }
    }
    out
}

fn cap(t: &Term, defined: &BTreeSet<Symbol>, counter: &mut usize) -> Term {
    match t {
        Term::App(f, args) if !defined.contains(f) => {
            Term::app(f.clone(), args.iter().map(|a| cap(a, defined, counter)).collect())
        }
        _ => {
            *counter += 1;
            Term::var(&format!("{INTERNAL_MARK}c{counter}"))
        }
    }
}

fn connected(a: &DepPair, b: &DepPair, defined: &BTreeSet<Symbol>) -> bool {
    let (Term::App(f, args), Term::App(g, _)) = (&a.rhs, &b.lhs) else { return false };
    if f != g {
        return false;
    }
    let mut counter = 0;
    let capped = Term::app(f.clone(), args.iter().map(|x| cap(x, defined, &mut counter)).collect());
    let ren = renaming_apart(&b.lhs.vars(), &capped.vars());
    let target = b.lhs.rename(&ren);
    unify(&capped, &target).is_some()
}

/// Strongly connected components that contain a cycle.
fn sccs(n: usize, edges: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let mut graph = petgraph::graph::DiGraph::<(), ()>::new();
    let nodes: Vec<_> = (0..n).map(|_| graph.add_node(())).collect();
    for (i, targets) in edges.iter().enumerate() {
        for &j in targets {
            graph.add_edge(nodes[i], nodes[j], ());
        }
    }
    petgraph::algo::tarjan_scc(&graph)
        .into_iter()
        .map(|comp| {
            let mut c: Vec<usize> = comp.into_iter().map(|ix| ix.index()).collect();
            c.sort();
            c
        })
        .filter(|c| c.len() > 1 || edges[c[0]].contains(&c[0]))
        .collect()
}

const SEARCH_NODES: usize = 400_000;
const IMPROVEMENT_NODES: usize = 20_000;

/// Constraint `[lhs] ≥ [rhs]`, optionally a candidate for strict decrease.
struct Constraint<'a> {
    lhs: &'a Term,
    rhs: &'a Term,
    pair: bool,
}

struct Search<'a> {
    order: Vec<Symbol>,
    by_level: Vec<Vec<&'a Constraint<'a>>>,
    pairs: Vec<&'a Constraint<'a>>,
    pair_level: usize,
    nodes: usize,
    deadline: Instant,
    best: Option<(usize, Vec<bool>)>,
    stop_at: usize,
}

impl<'a> Search<'a> {
    fn out_of_budget(&mut self) -> bool {
        self.nodes += 1;
        self.nodes > self.stop_at || (self.nodes.is_multiple_of(1024) && Instant::now() > self.deadline)
    }

    fn consistent(&self, level: usize, shapes: &HashMap<Symbol, Shape>) -> bool {
        self.by_level[level].iter().all(|c| {
            let l = interpret(c.lhs, shapes).expect("assigned");
            let r = interpret(c.rhs, shapes).expect("assigned");
            l.ge(&r)
        })
    }

    /// Extends the assignment to all symbols, ignoring strictness.
    fn complete(&mut self, level: usize, shapes: &mut HashMap<Symbol, Shape>) -> bool {
        if level == self.order.len() {
            return true;
        }
        if self.out_of_budget() {
            return false;
        }
        let f = self.order[level].clone();
        for shape in Shape::candidates(f.arity()) {
            shapes.insert(f.clone(), shape);
            if self.consistent(level, shapes) && self.complete(level + 1, shapes) {
                shapes.remove(&f);
                return true;
            }
        }
        shapes.remove(&f);
        false
    }

    /// Depth-first search up to the level where every pair is evaluable;
    /// returns true when the search should stop.
    fn run(&mut self, level: usize, shapes: &mut HashMap<Symbol, Shape>) -> bool {
        if self.out_of_budget() {
            return true;
        }
        let f = self.order[level].clone();
        for shape in Shape::candidates(f.arity()) {
            shapes.insert(f.clone(), shape);
            if !self.consistent(level, shapes) {
                continue;
            }
            if level < self.pair_level {
                if self.run(level + 1, shapes) {
                    shapes.remove(&f);
                    return true;
                }
                continue;
            }
            let strict: Vec<bool> = self
                .pairs
                .iter()
                .map(|c| {
                    let l = interpret(c.lhs, shapes).expect("assigned");
                    l.gt(&interpret(c.rhs, shapes).expect("assigned"))
                })
                .collect();
            let count = strict.iter().filter(|b| **b).count();
            if count > self.best.as_ref().map_or(0, |b| b.0) && self.complete(level + 1, shapes) {
                if self.best.is_none() {
                    self.stop_at = self.stop_at.min(self.nodes + IMPROVEMENT_NODES);
                }
                self.best = Some((count, strict));
                if count == self.pairs.len() {
                    shapes.remove(&f);
                    return true;
                }
            }
            if self.nodes > self.stop_at {
                shapes.remove(&f);
                return true;
            }
        }
        shapes.remove(&f);
        false
    }
}

/// Orders symbols so that constraints become fully assigned as early as
/// possible: repeatedly picks the symbol completing the most constraints,
/// then the one occurring in the most constraints.
fn constraint_order(cons: &[Constraint]) -> Vec<Symbol> {
    let sets: Vec<BTreeSet<Symbol>> = cons
        .iter()
        .map(|c| {
            let mut syms = c.lhs.symbols();
            c.rhs.collect_symbols(&mut syms);
            syms
        })
        .collect();
    let mut pending: BTreeSet<Symbol> = sets.iter().flatten().cloned().collect();
    let mut assigned: BTreeSet<Symbol> = BTreeSet::new();
    let mut order = Vec::new();
    while !pending.is_empty() {
        let score = |f: &Symbol| {
            let completes = sets
                .iter()
                .filter(|s| s.contains(f) && s.iter().all(|g| g == f || assigned.contains(g)))
                .count();
            let occurs = sets.iter().filter(|s| s.contains(f)).count();
            (completes, occurs)
        };
        let best = pending.iter().max_by_key(|f| score(f)).cloned().expect("nonempty");
        pending.remove(&best);
        assigned.insert(best.clone());
        order.push(best);
    }
    order
}

/// Finds an interpretation weakly orienting all rules and pairs with at
/// least one pair strictly decreasing; returns the strict flags.
fn reduction_pair(rules: &[Rule], pairs: &[&DepPair], deadline: Instant) -> Option<Vec<bool>> {
    let mut cons: Vec<Constraint> = rules.iter().map(|r| Constraint { lhs: &r.lhs, rhs: &r.rhs, pair: false }).collect();
    cons.extend(pairs.iter().map(|p| Constraint { lhs: &p.lhs, rhs: &p.rhs, pair: true }));
    let order = constraint_order(&cons);
    let level_of = |c: &Constraint| {
        let mut syms = c.lhs.symbols();
        c.rhs.collect_symbols(&mut syms);
        syms.iter().map(|f| order.iter().position(|g| g == f).expect("collected")).max().unwrap_or(0)
    };
    let mut by_level: Vec<Vec<&Constraint>> = vec![Vec::new(); order.len().max(1)];
    for c in &cons {
        by_level[level_of(c)].push(c);
    }
    let pair_refs: Vec<&Constraint> = cons.iter().filter(|c| c.pair).collect();
    let pair_level = pair_refs.iter().map(|c| level_of(c)).max().unwrap_or(0);
    let mut search =
        Search { order, by_level, pairs: pair_refs, pair_level, nodes: 0, deadline, best: None, stop_at: SEARCH_NODES };
    search.run(0, &mut HashMap::new());
    search.best.map(|(_, strict)| strict)
}

/// Proves termination of an ordinary rewrite system with dependency pairs.
fn dp_terminating(rules: &[Rule], deadline: Instant) -> bool {
    if rules.iter().any(|r| !r.rhs.vars().is_subset(&r.lhs.vars())) {
        return false;
    }
    let defined: BTreeSet<Symbol> = rules.iter().filter_map(|r| r.lhs.root().cloned()).collect();
    let dps = dependency_pairs(rules, &defined);
    let n = dps.len();
    let edges: Vec<Vec<usize>> =
        (0..n).map(|i| (0..n).filter(|&j| connected(&dps[i], &dps[j], &defined)).collect()).collect();
    let mut work = sccs(n, &edges);
    while let Some(comp) = work.pop() {
        if Instant::now() > deadline {
            return false;
        }
        let members: Vec<&DepPair> = comp.iter().map(|&i| &dps[i]).collect();
        let Some(strict) = reduction_pair(rules, &members, deadline) else { return false };
        let rest: Vec<usize> = comp.iter().zip(strict).filter(|(_, s)| !s).map(|(&i, _)| i).collect();
        let sub_edges: Vec<Vec<usize>> = rest
            .iter()
            .map(|&i| rest.iter().enumerate().filter(|(_, &j)| edges[i].contains(&j)).map(|(k, _)| k).collect())
            .collect();
        for c in sccs(rest.len(), &sub_edges) {
            work.push(c.into_iter().map(|k| rest[k]).collect());
        }
    }
    true
}

/// True if the transformation below simulates μ-rewriting faithfully.
fn transformable(g: &Gtrs) -> bool {
    g.rules.iter().all(|r| {
        let nonvar = r.lhs.subterms().iter().filter(|(_, t)| !t.is_var()).count();
        r.lhs.is_linear()
            && r.rhs.vars().is_subset(&r.lhs.vars())
            && active_positions(&r.lhs, &g.mu, &PositionFilter::NonVariable).len() == nonvar
            && active_vars(&r.lhs, &g.mu).is_disjoint(&frozen_vars(&r.rhs, &g.mu))
    })
}

fn passive_symbol(f: &Symbol) -> Symbol {
    Symbol::func(&format!("{INTERNAL_MARK}n_{}", f.name()), f.arity())
}

fn activate_symbol() -> Symbol {
    Symbol::func(&format!("{INTERNAL_MARK}act"), 1)
}

fn passive(t: &Term) -> Term {
    match t {
        Term::Var(_) => t.clone(),
        Term::App(f, args) => Term::app(passive_symbol(f), args.iter().map(passive).collect()),
    }
}

fn translate(t: &Term, frozen_in_lhs: &BTreeSet<Var>, mu: &ReplacementMap) -> Term {
    match t {
        Term::Var(x) if frozen_in_lhs.contains(x) => Term::app(activate_symbol(), vec![t.clone()]),
        Term::Var(_) => t.clone(),
        Term::App(f, args) => Term::app(
            f.clone(),
            args.iter()
                .enumerate()
                .map(|(i, a)| if mu.is_active(f, i + 1) { translate(a, frozen_in_lhs, mu) } else { passive(a) })
                .collect(),
        ),
    }
}

/// Encodes frozen subterms with passive symbols and adds activation rules,
/// so that every μ-step is simulated by at least one ordinary step.
fn passive_encoding(g: &Gtrs) -> Vec<Rule> {
    let mut out: Vec<Rule> = g
        .rules
        .iter()
        .map(|r| Rule::plain(r.label.clone(), r.lhs.clone(), translate(&r.rhs, &frozen_vars(&r.lhs, &g.mu), &g.mu)))
        .collect();
    let act = activate_symbol();
    for f in &g.funcs {
        let xs: Vec<Term> = (1..=f.arity()).map(|i| Term::var(&format!("x{i}"))).collect();
        let ys: Vec<Term> = xs
            .iter()
            .enumerate()
            .map(|(i, x)| if g.mu.is_active(f, i + 1) { Term::app(act.clone(), vec![x.clone()]) } else { x.clone() })
            .collect();
        out.push(Rule::plain(
            format!("act_{}", f.name()),
            Term::app(act.clone(), vec![Term::app(passive_symbol(f), xs)]),
            Term::app(f.clone(), ys),
        ));
    }
    out.push(Rule::plain("act", Term::app(act, vec![Term::var("x")]), Term::var("x")));
    out
}

/// The outcome of a termination analysis with its evidence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TerminationProof {
    /// The tri-state answer.
    pub answer: TriBool,
    /// The technique that produced the answer.
    pub method: String,
    /// A precedence when the path order succeeded on the underlying rules.
    pub precedence: Option<Precedence>,
}

fn loop_witness(g: &Gtrs, b: Budget) -> Option<String> {
    for r in &g.rules {
        let extra: BTreeSet<Var> = r.rhs.vars().difference(&r.lhs.vars()).cloned().collect();
        if !extra.is_disjoint(&active_vars(&r.rhs, &g.mu)) {
            return Some(format!("rule {} has an active extra variable", r.label));
        }
    }
    let probe = Budget { max_successors: b.max_successors.min(200), ..b };
    let engine = Engine::new(g, probe);
    for r in &g.rules {
        for first in &engine.one_step(&r.lhs).terms {
            for u in &engine.successors(first).terms {
                for p in active_positions(u, &g.mu, &PositionFilter::NonVariable) {
                    if matches(&r.lhs, u.subterm_at(&p).expect("valid position")).is_some() {
                        return Some(format!("{} reduces to {} containing an instance of itself", r.lhs, u));
                    }
                }
            }
        }
    }
    None
}

/// Analyses termination of the rewrite relation of `g`.
pub fn termination_proof(g: &Gtrs, b: Budget) -> TerminationProof {
    let deadline = Instant::now() + b.timeout;
    let u = underlying_trs(g);
    if let Some(prec) = orient_lpo(&u.rules, deadline) {
        let names: Vec<String> = prec.descending().iter().map(|f| f.name().to_string()).collect();
        return TerminationProof {
            answer: TriBool::Yes,
            method: format!("path order with precedence {}", names.join(" > ")),
            precedence: Some(prec),
        };
    }
    if dp_terminating(&u.rules, deadline) {
        return TerminationProof {
            answer: TriBool::Yes,
            method: "dependency pairs with linear interpretations".into(),
            precedence: None,
        };
    }
    if !u.mu_is_top() && transformable(&u) {
        let encoded = passive_encoding(&u);
        if orient_lpo(&encoded, deadline).is_some() || dp_terminating(&encoded, deadline) {
            return TerminationProof {
                answer: TriBool::Yes,
                method: "passive-symbol encoding of frozen arguments, then dependency pairs".into(),
                precedence: None,
            };
        }
    }
    if !g.is_conditional() {
        if let Some(w) = loop_witness(g, b) {
            return TerminationProof { answer: TriBool::No, method: format!("loop: {w}"), precedence: None };
        }
    }
    TerminationProof { answer: TriBool::Unknown, method: "no technique succeeded".into(), precedence: None }
}

/// Termination of the rewrite relation of `g`.
pub fn terminating(g: &Gtrs, b: Budget) -> TriBool {
    termination_proof(g, b).answer
}

/// Errors of the normalization check.
#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum NormalizingError {
    /// The system has conditional rules.
    #[error("normalization is only checked for unconditional systems")]
    Conditional,
}

/// Normalization: certified only through termination.
pub fn normalizing(g: &Gtrs, b: Budget) -> Result<TriBool, NormalizingError> {
    if g.is_conditional() {
        return Err(NormalizingError::Conditional);
    }
    Ok(if terminating(g, b).is_yes() { TriBool::Yes } else { TriBool::Unknown })
}

/// True if conditions are decreasing w.r.t. the path order: each condition's
/// left-hand side is below the rule's left-hand side.
pub fn quasi_decreasing_by(g: &Gtrs, prec: &Precedence) -> bool {
    g.rules.iter().all(|r| {
        r.conds.iter().all(|a| a.args.first().is_some_and(|s| lpo_gt(&r.lhs, s, prec)))
    })
}
