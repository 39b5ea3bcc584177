//! Bounded context-sensitive conditional rewriting: one-step rewriting,
//! successor and predecessor closures, reachability, joinability and a
//! condition solver used by every oracle.

use std::cell::{Cell, RefCell};
use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;
use std::rc::Rc;
use std::time::{Duration, Instant};

use serde::Serialize;

use crate::system::{atoms_vars, Atom, Gtrs, Pred, Rule, Semantics};
use crate::term::{
    active_positions, fresh_internal, match_into, unify_with, Position, PositionFilter, Substitution, Symbol, Term,
    Var,
};

/// Resource limits for bounded search.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Budget {
    /// Maximal nesting of condition evaluation.
    pub max_depth: usize,
    /// Terms larger than this are not expanded further.
    pub max_term_size: usize,
    /// Maximal size of a successor or predecessor set.
    pub max_successors: usize,
    /// Maximal number of rule application attempts per engine.
    pub max_steps: usize,
    /// Wall-clock limit per engine.
    pub timeout: Duration,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { max_depth: 4, max_term_size: 40, max_successors: 300, max_steps: 200_000, timeout: Duration::from_secs(2) }
    }
}

impl Budget {
    /// A budget with every component scaled by `k` (the timeout included).
    pub fn scaled(self, k: usize) -> Budget {
        Budget {
            max_depth: self.max_depth + k.saturating_sub(1),
            max_term_size: self.max_term_size * k,
            max_successors: self.max_successors * k,
            max_steps: self.max_steps * k,
            timeout: self.timeout * k as u32,
        }
    }
}

/// A three-valued answer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum TriBool {
    /// Definitely true.
    Yes,
    /// Definitely false.
    No,
    /// Not decided within the budget.
    Unknown,
}

impl TriBool {
    /// Lifts a boolean.
    pub fn from_bool(b: bool) -> Self {
        if b {
            TriBool::Yes
        } else {
            TriBool::No
        }
    }

    /// Kleene conjunction.
    pub fn and(self, other: TriBool) -> TriBool {
        match (self, other) {
            (TriBool::No, _) | (_, TriBool::No) => TriBool::No,
            (TriBool::Yes, TriBool::Yes) => TriBool::Yes,
            _ => TriBool::Unknown,
        }
    }

    /// Kleene disjunction.
    pub fn or(self, other: TriBool) -> TriBool {
        match (self, other) {
            (TriBool::Yes, _) | (_, TriBool::Yes) => TriBool::Yes,
            (TriBool::No, TriBool::No) => TriBool::No,
            _ => TriBool::Unknown,
        }
    }


    /// True for `Yes`.
    pub fn is_yes(self) -> bool {
        self == TriBool::Yes
    }

    /// True for `No`.
    pub fn is_no(self) -> bool {
        self == TriBool::No
    }
}

impl std::ops::Not for TriBool {
    type Output = TriBool;

    /// Kleene negation.
    fn not(self) -> TriBool {
        match self {
            TriBool::Yes => TriBool::No,
            TriBool::No => TriBool::Yes,
            TriBool::Unknown => TriBool::Unknown,
        }
    }
}

impl fmt::Display for TriBool {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TriBool::Yes => write!(f, "yes"),
            TriBool::No => write!(f, "no"),
            TriBool::Unknown => write!(f, "unknown"),
        }
    }
}

/// A set of terms together with a flag telling whether it may be incomplete.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TermSet {
    /// The terms found.
    pub terms: BTreeSet<Term>,
    /// Set when some search hit a budget limit.
    pub truncated: bool,
}

/// Solutions of a condition sequence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Solutions {
    /// Substitutions on the logic variables satisfying every atom.
    pub subs: Vec<Substitution>,
    /// True when `subs` lists every solution up to the solver's search space.
    pub complete: bool,
}

impl Solutions {
    fn none_complete() -> Self {
        Solutions { subs: Vec::new(), complete: true }
    }

    fn unknown() -> Self {
        Solutions { subs: Vec::new(), complete: false }
    }

    /// Yes if a solution exists, No if the search was complete and found none.
    pub fn status(&self) -> TriBool {
        if !self.subs.is_empty() {
            TriBool::Yes
        } else if self.complete {
            TriBool::No
        } else {
            TriBool::Unknown
        }
    }
}

/// A recorded rewrite step, replayable against the rule set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepTrace {
    /// Position of the contracted redex.
    pub position: Position,
    /// Label of the applied rule.
    pub rule: String,
    /// The rule instance used; its conditions were established by the solver.
    pub instance: Rule,
    /// The resulting term.
    pub result: Term,
}

/// Memoized answers per term, tagged with the condition depth at which they
/// were computed.  Shallower answers had more depth available, and complete
/// answers are exact at every depth.
type DepthCache = HashMap<Term, Vec<(usize, Rc<TermSet>)>>;

fn lookup(cache: &DepthCache, t: &Term, depth: usize) -> Option<Rc<TermSet>> {
    let entries = cache.get(t)?;
    entries.iter().filter(|(d, r)| !r.truncated || *d <= depth).min_by_key(|(d, _)| *d).map(|(_, r)| r.clone())
}

/// A bounded rewriting engine for one system.  Results are memoized.
pub struct Engine<'g> {
    g: &'g Gtrs,
    budget: Budget,
    deadline: Instant,
    defined: BTreeSet<Symbol>,
    semantics: Option<Semantics>,
    attempts: Cell<usize>,
    step_cache: RefCell<DepthCache>,
    back_cache: RefCell<DepthCache>,
    forward_cache: RefCell<DepthCache>,
    backward_cache: RefCell<DepthCache>,
    in_progress: RefCell<HashMap<(bool, Term), TermSet>>,
    cycle_hit: Cell<bool>,
}

const NARROWING_DEPTH: usize = 2;
const FIXPOINT_ROUNDS: usize = 8;

impl<'g> Engine<'g> {
    /// Creates an engine whose deadline starts now.
    pub fn new(g: &'g Gtrs, budget: Budget) -> Self {
        Engine {
            g,
            budget,
            deadline: Instant::now() + budget.timeout,
            defined: crate::system::defined_symbols(g),
            semantics: g.semantics(),
            attempts: Cell::new(0),
            step_cache: RefCell::new(HashMap::new()),
            back_cache: RefCell::new(HashMap::new()),
            forward_cache: RefCell::new(HashMap::new()),
            backward_cache: RefCell::new(HashMap::new()),
            in_progress: RefCell::new(HashMap::new()),
            cycle_hit: Cell::new(false),
        }
    }

    /// The system rewritten by this engine.
    pub fn system(&self) -> &Gtrs {
        self.g
    }

    /// The budget of this engine.
    pub fn budget(&self) -> Budget {
        self.budget
    }

    fn exhausted(&self) -> bool {
        self.attempts.get() > self.budget.max_steps || Instant::now() > self.deadline
    }

    fn tick(&self) {
        self.attempts.set(self.attempts.get() + 1);
    }

    fn is_defined(&self, f: &Symbol) -> bool {
        self.defined.contains(f)
    }

    fn rename(&self, r: &Rule) -> Rule {
        let sigma = Substitution::from_pairs(r.vars().into_iter().map(|v| {
            let fresh = fresh_internal(&v);
            (v, Term::Var(fresh))
        }));
        r.apply(&sigma)
    }

    /// All terms reachable from `t` in one step.
    pub fn one_step(&self, t: &Term) -> TermSet {
        (*self.step_at(t, 0)).clone()
    }

    /// One-step rewriting with a replayable trace per result.
    pub fn one_step_traced(&self, t: &Term) -> (Vec<StepTrace>, bool) {
        let mut trace = Vec::new();
        let set = self.rewrite_step(t, 0, Some(&mut trace));
        (trace, set.truncated)
    }

    fn step_at(&self, t: &Term, depth: usize) -> Rc<TermSet> {
        self.tabled(false, t, depth, |e| e.rewrite_step(t, depth, None))
    }

    /// Memoized evaluation with cycle detection.  A query that depends on
    /// itself starts from an empty provisional answer and is iterated until
    /// the answer is stable, which yields the least fixpoint.
    fn tabled(&self, backward: bool, t: &Term, depth: usize, compute: impl Fn(&Self) -> TermSet) -> Rc<TermSet> {
        let cache = if backward { &self.back_cache } else { &self.step_cache };
        if let Some(hit) = lookup(&cache.borrow(), t, depth) {
            return hit;
        }
        let marker = (backward, t.clone());
        if let Some(prov) = self.in_progress.borrow().get(&marker) {
            self.cycle_hit.set(true);
            return Rc::new(prov.clone());
        }
        let outer_hit = self.cycle_hit.replace(false);
        let mut provisional = TermSet::default();
        let mut any_hit = false;
        let mut rounds = 0;
        let result = loop {
            self.in_progress.borrow_mut().insert(marker.clone(), provisional.clone());
            self.cycle_hit.set(false);
            let res = compute(self);
            let hit = self.cycle_hit.get();
            any_hit |= hit;
            self.in_progress.borrow_mut().remove(&marker);
            rounds += 1;
            if !hit || res == provisional {
                break res;
            }
            if rounds >= FIXPOINT_ROUNDS {
                break TermSet { truncated: true, ..res };
            }
            provisional = res;
        };
        self.cycle_hit.set(outer_hit || any_hit);
        let res = Rc::new(result);
        let stable = !any_hit || self.in_progress.borrow().is_empty();
        if stable && !self.exhausted() {
            cache.borrow_mut().entry(t.clone()).or_default().push((depth, res.clone()));
        }
        res
    }

    fn rewrite_step(&self, t: &Term, depth: usize, mut trace: Option<&mut Vec<StepTrace>>) -> TermSet {
        let mut out = TermSet::default();
        for p in active_positions(t, &self.g.mu, &PositionFilter::NonVariable) {
            let sub = t.subterm_at(&p).expect("active positions are valid");
            for rule in &self.g.rules {
                if rule.lhs.root() != sub.root() {
                    continue;
                }
                if self.exhausted() {
                    out.truncated = true;
                    return out;
                }
                self.tick();
                let r = self.rename(rule);
                let mut sigma = Substitution::new();
                if !match_into(&r.lhs, sub, &mut sigma) {
                    continue;
                }
                let lhs_vars = r.lhs.vars();
                let logic: BTreeSet<Var> = r.vars().into_iter().filter(|v| !lhs_vars.contains(v)).collect();
                let conds: Vec<Atom> = r.conds.iter().map(|a| a.apply(&sigma)).collect();
                let sols = if conds.is_empty() {
                    Solutions { subs: vec![Substitution::new()], complete: true }
                } else if depth >= self.budget.max_depth {
                    Solutions::unknown()
                } else {
                    self.solve_at(&conds, &logic, depth + 1)
                };
                if !sols.complete {
                    out.truncated = true;
                }
                for theta in sols.subs {
                    let full = sigma.then(&theta);
                    let rhs = full.apply(&r.rhs);
                    if rhs.vars().iter().any(|v| logic.contains(v)) {
                        out.truncated = true;
                        continue;
                    }
                    let result = t.subterm_replace(&p, rhs).expect("valid position");
                    if let Some(tr) = trace.as_deref_mut() {
                        tr.push(StepTrace {
                            position: p.clone(),
                            rule: rule.label.clone(),
                            instance: r.apply(&full),
                            result: result.clone(),
                        });
                    }
                    out.terms.insert(result);
                }
            }
        }
        out
    }

    /// All terms `u` with `u → t` in one step.
    pub fn one_step_back(&self, t: &Term) -> TermSet {
        (*self.back_at(t, 0)).clone()
    }

    fn back_at(&self, t: &Term, depth: usize) -> Rc<TermSet> {
        self.tabled(true, t, depth, |e| e.rewrite_back(t, depth))
    }

    fn rewrite_back(&self, t: &Term, depth: usize) -> TermSet {
        let mut out = TermSet::default();
        for p in active_positions(t, &self.g.mu, &PositionFilter::All) {
            let sub = t.subterm_at(&p).expect("active positions are valid");
            for rule in &self.g.rules {
                if !rule.rhs.is_var() && rule.rhs.root() != sub.root() {
                    continue;
                }
                if self.exhausted() {
                    out.truncated = true;
                    return out;
                }
                self.tick();
                let r = self.rename(rule);
                let mut sigma = Substitution::new();
                if !match_into(&r.rhs, sub, &mut sigma) {
                    continue;
                }
                let rhs_vars = r.rhs.vars();
                let logic: BTreeSet<Var> = r.vars().into_iter().filter(|v| !rhs_vars.contains(v)).collect();
                let conds: Vec<Atom> = r.conds.iter().map(|a| a.apply(&sigma)).collect();
                let sols = if conds.is_empty() {
                    Solutions { subs: vec![Substitution::new()], complete: true }
                } else if depth >= self.budget.max_depth {
                    Solutions::unknown()
                } else {
                    self.solve_at(&conds, &logic, depth + 1)
                };
                if !sols.complete {
                    out.truncated = true;
                }
                for theta in sols.subs {
                    let lhs = sigma.then(&theta).apply(&r.lhs);
                    if lhs.vars().iter().any(|v| logic.contains(v)) {
                        out.truncated = true;
                        continue;
                    }
                    out.terms.insert(t.subterm_replace(&p, lhs).expect("valid position"));
                }
            }
        }
        out
    }

    fn closure(&self, t: &Term, depth: usize, backward: bool) -> Rc<TermSet> {
        let cache = if backward { &self.backward_cache } else { &self.forward_cache };
        if let Some(hit) = lookup(&cache.borrow(), t, depth) {
            return hit;
        }
        let outer_hit = self.cycle_hit.replace(false);
        let mut seen: BTreeSet<Term> = BTreeSet::new();
        seen.insert(t.clone());
        let mut queue = VecDeque::from([t.clone()]);
        let mut truncated = false;
        'outer: while let Some(u) = queue.pop_front() {
            if self.exhausted() {
                truncated = true;
                break;
            }
            if u.size() > self.budget.max_term_size {
                truncated = true;
                continue;
            }
            let next = if backward { self.back_at(&u, depth) } else { self.step_at(&u, depth) };
            truncated |= next.truncated;
            for v in &next.terms {
                if seen.insert(v.clone()) {
                    if seen.len() > self.budget.max_successors {
                        truncated = true;
                        break 'outer;
                    }
                    queue.push_back(v.clone());
                }
            }
        }
        let res = Rc::new(TermSet { terms: seen, truncated });
        let hit = self.cycle_hit.get();
        self.cycle_hit.set(outer_hit || hit);
        if !self.exhausted() && (!hit || self.in_progress.borrow().is_empty()) {
            cache.borrow_mut().entry(t.clone()).or_default().push((depth, res.clone()));
        }
        res
    }

    /// The reflexive-transitive successor closure of `t`.
    pub fn successors(&self, t: &Term) -> TermSet {
        (*self.closure(t, 0, false)).clone()
    }

    /// The reflexive-transitive predecessor closure of `t`.
    pub fn predecessors(&self, t: &Term) -> TermSet {
        (*self.closure(t, 0, true)).clone()
    }

    fn component(&self, t: &Term, depth: usize) -> TermSet {
        let mut seen: BTreeSet<Term> = BTreeSet::new();
        seen.insert(t.clone());
        let mut queue = VecDeque::from([t.clone()]);
        let mut truncated = false;
        'outer: while let Some(u) = queue.pop_front() {
            if self.exhausted() {
                truncated = true;
                break;
            }
            if u.size() > self.budget.max_term_size {
                truncated = true;
                continue;
            }
            for next in [self.step_at(&u, depth), self.back_at(&u, depth)] {
                truncated |= next.truncated;
                for v in &next.terms {
                    if seen.insert(v.clone()) {
                        if seen.len() > self.budget.max_successors {
                            truncated = true;
                            break 'outer;
                        }
                        queue.push_back(v.clone());
                    }
                }
            }
        }
        TermSet { terms: seen, truncated }
    }

    /// Decides `s →* t` within the budget.
    pub fn reachable(&self, s: &Term, t: &Term) -> TriBool {
        if s == t {
            return TriBool::Yes;
        }
        let fw = self.closure(s, 0, false);
        if fw.terms.contains(t) {
            return TriBool::Yes;
        }
        if !fw.truncated {
            return TriBool::No;
        }
        let bw = self.closure(t, 0, true);
        if bw.terms.contains(s) {
            TriBool::Yes
        } else if !bw.truncated {
            TriBool::No
        } else {
            TriBool::Unknown
        }
    }

    /// Decides whether `s` and `t` have a common reduct.
    pub fn joinable(&self, s: &Term, t: &Term) -> TriBool {
        let a = self.closure(s, 0, false);
        let b = self.closure(t, 0, false);
        if a.terms.intersection(&b.terms).next().is_some() {
            TriBool::Yes
        } else if !a.truncated && !b.truncated {
            TriBool::No
        } else {
            TriBool::Unknown
        }
    }

    /// Decides whether `t` is a normal form.
    pub fn is_irreducible(&self, t: &Term) -> TriBool {
        let s = self.step_at(t, 0);
        if !s.terms.is_empty() {
            TriBool::No
        } else if s.truncated {
            TriBool::Unknown
        } else {
            TriBool::Yes
        }
    }

    /// Solves a condition sequence; only variables in `logic` may be instantiated.
    pub fn solve(&self, atoms: &[Atom], logic: &BTreeSet<Var>) -> Solutions {
        self.solve_at(atoms, logic, 0)
    }

    /// Feasibility of a condition sequence with a witness on success.
    pub fn feasible(&self, atoms: &[Atom], logic: &BTreeSet<Var>) -> (TriBool, Option<Substitution>) {
        let sols = self.solve(atoms, logic);
        let status = sols.status();
        (status, sols.subs.into_iter().next())
    }

    /// Decides whether an atom holds, treating all its variables as constants.
    pub fn holds(&self, atom: &Atom) -> TriBool {
        self.solve(std::slice::from_ref(atom), &BTreeSet::new()).status()
    }

    fn solve_at(&self, atoms: &[Atom], logic: &BTreeSet<Var>, depth: usize) -> Solutions {
        let mut out = Solutions { subs: Vec::new(), complete: true };
        self.solve_rec(atoms.to_vec(), Substitution::new(), logic, depth, &mut out);
        let mut seen = BTreeSet::new();
        out.subs.retain(|s| seen.insert(s.clone()));
        out
    }

    fn has_logic(t: &Term, logic: &BTreeSet<Var>) -> bool {
        match t {
            Term::Var(v) => logic.contains(v),
            Term::App(_, args) => args.iter().any(|a| Self::has_logic(a, logic)),
        }
    }

    fn readiness(&self, a: &Atom, logic: &BTreeSet<Var>) -> u8 {
        let any = a.args.iter().any(|t| Self::has_logic(t, logic));
        if !any {
            return 0;
        }
        match a.pred {
            Pred::Reach | Pred::Step => {
                let (s, t) = (a.lhs(), a.rhs());
                if !Self::has_logic(s, logic) {
                    1
                } else if let Term::App(f, _) = s {
                    if !self.is_defined(f) {
                        1
                    } else if !Self::has_logic(t, logic) {
                        2
                    } else {
                        4
                    }
                } else if !Self::has_logic(t, logic) {
                    2
                } else {
                    4
                }
            }
            Pred::Cond => match self.semantics {
                Some(Semantics::Oriented) => self.readiness(&Atom::reach(a.lhs().clone(), a.rhs().clone()), logic),
                _ => {
                    if Self::has_logic(a.lhs(), logic) && Self::has_logic(a.rhs(), logic) {
                        4
                    } else {
                        2
                    }
                }
            },
            Pred::User(_) => 3,
        }
    }

    fn solve_rec(&self, mut atoms: Vec<Atom>, theta: Substitution, logic: &BTreeSet<Var>, depth: usize, out: &mut Solutions) {
        if atoms.is_empty() {
            out.subs.push(theta);
            return;
        }
        if out.subs.len() >= self.budget.max_successors || self.exhausted() {
            out.complete = false;
            return;
        }
        let idx = (0..atoms.len()).min_by_key(|&i| (self.readiness(&atoms[i], logic), i)).unwrap_or(0);
        let atom = atoms.remove(idx);
        let sols = self.solve_atom(&atom, logic, depth);
        if !sols.complete {
            out.complete = false;
        }
        for eta in sols.subs {
            let rest: Vec<Atom> = atoms.iter().map(|a| a.apply(&eta)).collect();
            self.solve_rec(rest, theta.then(&eta), logic, depth, out);
        }
    }

    fn solve_atom(&self, a: &Atom, logic: &BTreeSet<Var>, depth: usize) -> Solutions {
        if depth > self.budget.max_depth + 1 {
            return Solutions::unknown();
        }
        match &a.pred {
            Pred::Reach => self.solve_reach(a.lhs(), a.rhs(), logic, depth),
            Pred::Step => self.solve_step(a.lhs(), a.rhs(), logic, depth),
            Pred::Cond => match self.semantics {
                Some(Semantics::Oriented) => self.solve_reach(a.lhs(), a.rhs(), logic, depth),
                Some(Semantics::Join) => {
                    let z = Term::Var(fresh_internal("z"));
                    let mut ext = logic.clone();
                    ext.insert(z.as_var().expect("variable").clone());
                    let sols = self.solve_at(
                        &[Atom::reach(a.lhs().clone(), z.clone()), Atom::reach(a.rhs().clone(), z)],
                        &ext,
                        depth,
                    );
                    restrict_solutions(sols, logic, a)
                }
                Some(Semantics::SemiEquational) => self.solve_conversion(a.lhs(), a.rhs(), logic, depth),
                None => self.solve_clauses(a, logic, depth),
            },
            Pred::User(_) => self.solve_clauses(a, logic, depth),
        }
    }

    fn unify_all(&self, pattern: &Term, candidates: &BTreeSet<Term>, logic: &BTreeSet<Var>) -> Vec<Substitution> {
        let bindable = |v: &Var| logic.contains(v);
        let mut ordered: Vec<&Term> = candidates.iter().collect();
        ordered.sort_by_key(|u| u.size());
        ordered.into_iter().filter_map(|u| unify_with(pattern, u, &bindable)).collect()
    }

    fn solve_reach(&self, s: &Term, t: &Term, logic: &BTreeSet<Var>, depth: usize) -> Solutions {
        let ls = Self::has_logic(s, logic);
        let lt = Self::has_logic(t, logic);
        if !ls && !lt {
            if s == t {
                return Solutions { subs: vec![Substitution::new()], complete: true };
            }
            let fw = self.closure(s, depth, false);
            if fw.terms.contains(t) {
                return Solutions { subs: vec![Substitution::new()], complete: true };
            }
            if !fw.truncated {
                return Solutions::none_complete();
            }
            let bw = self.closure(t, depth, true);
            if bw.terms.contains(s) {
                return Solutions { subs: vec![Substitution::new()], complete: true };
            }
            return Solutions { subs: Vec::new(), complete: !bw.truncated };
        }
        if let Term::App(f, sargs) = s {
            if !self.is_defined(f) {
                match t {
                    Term::Var(x) if logic.contains(x) => {}
                    Term::Var(_) => return Solutions::none_complete(),
                    Term::App(g, targs) => {
                        if g != f {
                            return Solutions::none_complete();
                        }
                        return self.decompose(f, sargs, targs, logic, depth);
                    }
                }
            }
        }
        if !ls {
            let fw = self.closure(s, depth, false);
            return Solutions { subs: self.unify_all(t, &fw.terms, logic), complete: !fw.truncated };
        }
        if !lt {
            let bw = self.closure(t, depth, true);
            return Solutions { subs: self.unify_all(s, &bw.terms, logic), complete: !bw.truncated };
        }
        self.narrow(s, t, logic, depth, NARROWING_DEPTH)
    }

    fn decompose(&self, f: &Symbol, sargs: &[Term], targs: &[Term], logic: &BTreeSet<Var>, depth: usize) -> Solutions {
        let bindable = |v: &Var| logic.contains(v);
        let mut theta = Substitution::new();
        let mut atoms = Vec::new();
        for (i, (a, b)) in sargs.iter().zip(targs).enumerate() {
            if self.g.mu.is_active(f, i + 1) {
                atoms.push(Atom::reach(a.clone(), b.clone()));
            } else if !crate::term::unify_into(&theta.apply(a), &theta.apply(b), &mut theta, &bindable) {
                return Solutions::none_complete();
            }
        }
        let atoms: Vec<Atom> = atoms.iter().map(|a| a.apply(&theta)).collect();
        let mut sols = self.solve_at(&atoms, logic, depth);
        sols.subs = sols.subs.into_iter().map(|eta| theta.then(&eta)).collect();
        sols
    }

    fn solve_step(&self, s: &Term, t: &Term, logic: &BTreeSet<Var>, depth: usize) -> Solutions {
        let ls = Self::has_logic(s, logic);
        let lt = Self::has_logic(t, logic);
        if !ls {
            let next = self.step_at(s, depth);
            return Solutions { subs: self.unify_all(t, &next.terms, logic), complete: !next.truncated };
        }
        if !lt {
            let prev = self.back_at(t, depth);
            return Solutions { subs: self.unify_all(s, &prev.terms, logic), complete: !prev.truncated };
        }
        let mut subs = Vec::new();
        for (u, theta) in self.narrow_once(s, logic, depth) {
            let bindable = |v: &Var| logic.contains(v);
            if let Some(eta) = unify_with(&u, &theta.apply(t), &bindable) {
                subs.push(theta.then(&eta));
            }
        }
        Solutions { subs: keep_closed(subs, logic, &[s, t]), complete: false }
    }

    fn solve_conversion(&self, s: &Term, t: &Term, logic: &BTreeSet<Var>, depth: usize) -> Solutions {
        let ls = Self::has_logic(s, logic);
        let lt = Self::has_logic(t, logic);
        if !ls {
            let comp = self.component(s, depth);
            return Solutions { subs: self.unify_all(t, &comp.terms, logic), complete: !comp.truncated };
        }
        if !lt {
            let comp = self.component(t, depth);
            return Solutions { subs: self.unify_all(s, &comp.terms, logic), complete: !comp.truncated };
        }
        let z = Term::Var(fresh_internal("z"));
        let mut ext = logic.clone();
        ext.insert(z.as_var().expect("variable").clone());
        let sols = self.solve_at(&[Atom::reach(s.clone(), z.clone()), Atom::reach(t.clone(), z)], &ext, depth);
        let mut r = restrict_solutions(sols, logic, &Atom::cond(s.clone(), t.clone()));
        r.complete = false;
        r
    }

    fn solve_clauses(&self, a: &Atom, logic: &BTreeSet<Var>, depth: usize) -> Solutions {
        if depth > self.budget.max_depth {
            return Solutions::unknown();
        }
        let mut out = Solutions { subs: Vec::new(), complete: true };
        for clause in &self.g.clauses {
            if clause.head.pred != a.pred {
                continue;
            }
            self.tick();
            let mut cv = BTreeSet::new();
            clause.head.args.iter().for_each(|t| t.collect_vars(&mut cv));
            cv.extend(atoms_vars(&clause.body));
            let ren = Substitution::from_pairs(cv.iter().map(|v| (v.clone(), Term::Var(fresh_internal(v)))));
            let head = ren.apply_atom(&clause.head);
            let body: Vec<Atom> = clause.body.iter().map(|b| ren.apply_atom(b)).collect();
            let mut ext = logic.clone();
            ext.extend(atoms_vars(&body));
            ext.extend(head.vars());
            let bindable = |v: &Var| ext.contains(v);
            let mut theta = Substitution::new();
            if !head.args.iter().zip(&a.args).all(|(h, x)| {
                crate::term::unify_into(&theta.apply(h), &theta.apply(x), &mut theta, &bindable)
            }) {
                continue;
            }
            let body: Vec<Atom> = body.iter().map(|b| b.apply(&theta)).collect();
            let sub = self.solve_at(&body, &ext, depth + 1);
            if !sub.complete {
                out.complete = false;
            }
            for eta in sub.subs {
                out.subs.push(theta.then(&eta));
            }
        }
        
        restrict_solutions(out, logic, a)
    }

    fn narrow_once(&self, u: &Term, logic: &BTreeSet<Var>, depth: usize) -> Vec<(Term, Substitution)> {
        let mut out = Vec::new();
        if depth > self.budget.max_depth {
            return out;
        }
        for p in active_positions(u, &self.g.mu, &PositionFilter::NonVariable) {
            let sub = u.subterm_at(&p).expect("valid position");
            for rule in &self.g.rules {
                if rule.lhs.root() != sub.root() || self.exhausted() {
                    continue;
                }
                self.tick();
                let r = self.rename(rule);
                let mut ext = logic.clone();
                ext.extend(r.vars());
                let bindable = |v: &Var| ext.contains(v);
                let Some(theta) = unify_with(sub, &r.lhs, &bindable) else { continue };
                let conds: Vec<Atom> = r.conds.iter().map(|a| a.apply(&theta)).collect();
                let sols = if conds.is_empty() {
                    Solutions { subs: vec![Substitution::new()], complete: true }
                } else {
                    self.solve_at(&conds, &ext, depth + 1)
                };
                for eta in sols.subs {
                    let full = theta.then(&eta);
                    let next = full.apply(&u.subterm_replace(&p, r.rhs.clone()).expect("valid position"));
                    out.push((next, full.restrict(logic)));
                }
            }
        }
        out
    }

    fn narrow(&self, s: &Term, t: &Term, logic: &BTreeSet<Var>, depth: usize, fuel: usize) -> Solutions {
        let bindable = |v: &Var| logic.contains(v);
        let mut subs = Vec::new();
        if let Some(theta) = unify_with(s, t, &bindable) {
            subs.push(theta);
        }
        let mut frontier = vec![(s.clone(), Substitution::new())];
        for _ in 0..fuel {
            let mut next = Vec::new();
            for (u, theta) in &frontier {
                for (v, eta) in self.narrow_once(u, logic, depth) {
                    let acc = theta.then(&eta);
                    if let Some(m) = unify_with(&v, &acc.apply(t), &bindable) {
                        subs.push(acc.then(&m));
                    }
                    if next.len() < self.budget.max_successors {
                        next.push((v, acc));
                    }
                }
            }
            frontier = next;
        }
        Solutions { subs: keep_closed(subs, logic, &[s, t]), complete: false }
    }
}

trait ApplyAtom {
    fn apply_atom(&self, a: &Atom) -> Atom;
}

impl ApplyAtom for Substitution {
    fn apply_atom(&self, a: &Atom) -> Atom {
        a.apply(self)
    }
}

fn keep_closed(subs: Vec<Substitution>, logic: &BTreeSet<Var>, terms: &[&Term]) -> Vec<Substitution> {
    let mut allowed: BTreeSet<Var> = logic.clone();
    terms.iter().for_each(|t| t.collect_vars(&mut allowed));
    subs.into_iter()
        .map(|s| s.restrict(logic))
        .filter(|s| s.iter().all(|(_, t)| t.vars().is_subset(&allowed)))
        .collect()
}

fn restrict_solutions(sols: Solutions, logic: &BTreeSet<Var>, a: &Atom) -> Solutions {
    let mut allowed: BTreeSet<Var> = logic.clone();
    allowed.extend(a.vars());
    let mut complete = sols.complete;
    let mut subs = Vec::new();
    for s in sols.subs {
        let r = s.restrict(logic);
        if r.iter().all(|(_, t)| t.vars().is_subset(&allowed)) {
            subs.push(r);
        } else {
            complete = false;
        }
    }
    Solutions { subs, complete }
}

/// One-step rewriting of `t` in `g`.
pub fn one_step(g: &Gtrs, t: &Term, b: Budget) -> TermSet {
    Engine::new(g, b).one_step(t)
}

/// Successor closure of `t` in `g`.
pub fn successors(g: &Gtrs, t: &Term, b: Budget) -> TermSet {
    Engine::new(g, b).successors(t)
}

/// Reachability `s →* t` in `g`.
pub fn reachable(g: &Gtrs, s: &Term, t: &Term, b: Budget) -> TriBool {
    Engine::new(g, b).reachable(s, t)
}

/// Irreducibility of `t` in `g`.
pub fn is_irreducible(g: &Gtrs, t: &Term, b: Budget) -> TriBool {
    Engine::new(g, b).is_irreducible(t)
}
