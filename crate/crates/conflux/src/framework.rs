//! Proof trees, strategy combinators, the built-in strategies and verdict
//! extraction.

use std::collections::BTreeSet;
use std::fmt;
use std::time::{Duration, Instant};

use serde::Serialize;

use crate::processors::{apply, Application, Budgets, Outcome, Problem, ProblemKind, ProcessorId};
use crate::system::{classify, SystemClass};
use crate::transforms::Combination;

/// One processor application recorded in a proof tree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Step {
    /// The processor.
    pub processor: ProcessorId,
    /// The combination, for modular decompositions.
    pub combination: Option<Combination>,
    /// Oracle evidence and remarks.
    pub notes: Vec<String>,
    /// Positive answers propagate through this step.
    pub sound: bool,
    /// Negative answers propagate through this step.
    pub complete: bool,
}

impl Step {
    fn from_application(app: &Application, kind: ProblemKind) -> Self {
        Step {
            processor: app.processor,
            combination: app.combination,
            notes: app.notes.clone(),
            sound: app.is_sound(kind),
            complete: app.is_complete(kind),
        }
    }
}

/// What a step produced.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StepResult {
    /// The processor closed the problem positively.
    Yes,
    /// The processor answered negatively.
    No,
    /// The processor produced these subproblems.
    Children(Vec<ProofTree>),
}

/// A proof tree: each inner node is a problem with the processor applied to it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ProofTree {
    /// An unsolved problem.
    Open(Problem),
    /// A problem and the step applied to it.
    Node {
        /// The problem.
        problem: Problem,
        /// The processor application.
        step: Step,
        /// Its result.
        result: StepResult,
    },
}

impl ProofTree {
    /// The problem labelling the root.
    pub fn problem(&self) -> &Problem {
        match self {
            ProofTree::Open(p) | ProofTree::Node { problem: p, .. } => p,
        }
    }

    /// The step at the root, if any.
    pub fn step(&self) -> Option<&Step> {
        match self {
            ProofTree::Open(_) => None,
            ProofTree::Node { step, .. } => Some(step),
        }
    }

    /// Direct subtrees.
    pub fn children(&self) -> &[ProofTree] {
        match self {
            ProofTree::Node { result: StepResult::Children(cs), .. } => cs,
            _ => &[],
        }
    }

    fn from_application(p: &Problem, app: &Application) -> Self {
        let step = Step::from_application(app, p.kind);
        let result = match &app.outcome {
            Outcome::No => StepResult::No,
            Outcome::Subproblems(ps) if ps.is_empty() => StepResult::Yes,
            Outcome::Subproblems(ps) => StepResult::Children(ps.iter().cloned().map(ProofTree::Open).collect()),
        };
        ProofTree::Node { problem: p.clone(), step, result }
    }

    /// Processors in preorder.
    pub fn processors(&self) -> Vec<ProcessorId> {
        let mut out = Vec::new();
        self.walk(&mut |t| {
            if let Some(s) = t.step() {
                out.push(s.processor);
            }
        });
        out
    }

    /// Number of open leaves.
    pub fn open_leaves(&self) -> usize {
        let mut n = 0;
        self.walk(&mut |t| {
            if matches!(t, ProofTree::Open(_)) {
                n += 1;
            }
        });
        n
    }

    /// Visits every subtree in preorder.
    pub fn walk<'a>(&'a self, f: &mut impl FnMut(&'a ProofTree)) {
        f(self);
        for c in self.children() {
            c.walk(f);
        }
    }

    /// True if some root-to-leaf path follows exactly these processors.
    pub fn has_path(&self, path: &[ProcessorId]) -> bool {
        match (path.split_first(), self.step()) {
            (None, _) => true,
            (Some((first, rest)), Some(s)) if s.processor == *first => {
                rest.is_empty() || self.children().iter().any(|c| c.has_path(rest))
            }
            _ => self.children().iter().any(|c| c.has_path(path)),
        }
    }
}

/// The three possible answers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Answer {
    /// The property holds.
    Yes,
    /// The property fails.
    No,
    /// Undecided.
    Maybe,
}

impl fmt::Display for Answer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Answer::Yes => "YES",
            Answer::No => "NO",
            Answer::Maybe => "MAYBE",
        })
    }
}

/// An answer together with the tree it was read from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    /// The answer.
    pub answer: Answer,
    /// The witnessing tree.
    pub tree: ProofTree,
}

fn proves_yes(t: &ProofTree) -> bool {
    match t {
        ProofTree::Open(_) => false,
        ProofTree::Node { step, result, .. } => {
            step.sound
                && match result {
                    StepResult::Yes => true,
                    StepResult::No => false,
                    StepResult::Children(cs) => cs.iter().all(proves_yes),
                }
        }
    }
}

fn proves_no(t: &ProofTree) -> bool {
    match t {
        ProofTree::Open(_) => false,
        ProofTree::Node { step, result, .. } => {
            step.complete
                && match result {
                    StepResult::Yes => false,
                    StepResult::No => true,
                    StepResult::Children(cs) => cs.iter().any(proves_no),
                }
        }
    }
}

/// Reads the answer off a tree.
pub fn answer_of(t: &ProofTree) -> Answer {
    if proves_yes(t) {
        Answer::Yes
    } else if proves_no(t) {
        Answer::No
    } else {
        Answer::Maybe
    }
}

/// Builds the verdict for a tree.
pub fn verdict(t: ProofTree) -> Verdict {
    Verdict { answer: answer_of(&t), tree: t }
}

/// Conditions under which a guarded strategy runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Guard {
    /// The problem has this kind.
    Kind(ProblemKind),
    /// The system has no conditional rule.
    Unconditional,
    /// The system has a conditional rule.
    Conditional,
}

impl Guard {
    fn holds(self, p: &Problem) -> bool {
        match self {
            Guard::Kind(k) => p.kind == k,
            Guard::Unconditional => !p.system.is_conditional(),
            Guard::Conditional => p.system.is_conditional(),
        }
    }
}

/// A strategy expression.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Strategy {
    /// Apply one processor; fails if it is not applicable.
    Apply(ProcessorId),
    /// Run the first strategy, then the second on every resulting open problem.
    Seq(Box<Strategy>, Box<Strategy>),
    /// Run the first strategy; use the second if the first is not conclusive.
    Alt(Box<Strategy>, Box<Strategy>),
    /// Run with different oracle budgets.
    WithBudget(Box<Strategy>, Budgets),
    /// Re-enter the built-in strategy for the problem's system class.
    Recurse,
    /// Leave the problem open without failing.
    Skip,
    /// Run only if the guard holds.
    When(Guard, Box<Strategy>),
}

/// The two binary combinators.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CombineOp {
    /// Sequential composition.
    Seq,
    /// Left-biased alternative.
    Alt,
}

/// Combines two strategies.
pub fn combine(op: CombineOp, s1: Strategy, s2: Strategy) -> Strategy {
    match op {
        CombineOp::Seq => Strategy::Seq(Box::new(s1), Box::new(s2)),
        CombineOp::Alt => Strategy::Alt(Box::new(s1), Box::new(s2)),
    }
}

impl Strategy {
    /// `s1` then `s2`.
    pub fn seq(s1: Strategy, s2: Strategy) -> Strategy {
        combine(CombineOp::Seq, s1, s2)
    }

    /// `s1`, or else `s2`.
    pub fn alt(s1: Strategy, s2: Strategy) -> Strategy {
        combine(CombineOp::Alt, s1, s2)
    }

    /// Right-nested sequence; an empty list is `Skip`.
    pub fn seq_all(parts: Vec<Strategy>) -> Strategy {
        parts.into_iter().rev().reduce(|acc, s| Strategy::seq(s, acc)).unwrap_or(Strategy::Skip)
    }

    /// Right-nested alternatives.
    ///
    /// # Panics
    /// If `parts` is empty.
    pub fn alt_all(parts: Vec<Strategy>) -> Strategy {
        parts.into_iter().rev().reduce(|acc, s| Strategy::alt(s, acc)).expect("at least one alternative")
    }

    /// Apply `s` if possible, otherwise continue unchanged.
    pub fn attempt(s: Strategy) -> Strategy {
        Strategy::alt(s, Strategy::Skip)
    }

    /// Run `s` only when the guard holds.
    pub fn when(g: Guard, s: Strategy) -> Strategy {
        Strategy::When(g, Box::new(s))
    }

    /// Run `s` with the given budgets.
    pub fn with_budget(s: Strategy, b: Budgets) -> Strategy {
        Strategy::WithBudget(Box::new(s), b)
    }

    /// Processors mentioned by the expression, in preorder.
    pub fn processors(&self) -> Vec<ProcessorId> {
        let mut out = Vec::new();
        self.collect(&mut out);
        out
    }

    fn collect(&self, out: &mut Vec<ProcessorId>) {
        match self {
            Strategy::Apply(id) => out.push(*id),
            Strategy::Seq(a, b) | Strategy::Alt(a, b) => {
                a.collect(out);
                b.collect(out);
            }
            Strategy::WithBudget(s, _) | Strategy::When(_, s) => s.collect(out),
            Strategy::Recurse | Strategy::Skip => {}
        }
    }
}

fn ap(id: ProcessorId) -> Strategy {
    Strategy::Apply(id)
}

fn then_recurse(id: ProcessorId) -> Strategy {
    Strategy::seq(ap(id), Strategy::Recurse)
}

fn by_kind(cr: Strategy, wcr: Strategy, scr: Strategy) -> Strategy {
    Strategy::alt_all(vec![
        Strategy::when(Guard::Kind(ProblemKind::Cr), cr),
        Strategy::when(Guard::Kind(ProblemKind::Wcr), wcr),
        Strategy::when(Guard::Kind(ProblemKind::Scr), scr),
        ap(ProcessorId::Jo),
    ])
}

fn local_tail() -> Strategy {
    Strategy::alt_all(vec![
        then_recurse(ProcessorId::He),
        then_recurse(ProcessorId::Md),
        then_recurse(ProcessorId::Cr),
    ])
}

fn unconditional_strategy() -> Strategy {
    use ProcessorId::*;
    let pre = |tail: Strategy| Strategy::seq_all(vec![Strategy::attempt(ap(EVar)), Strategy::attempt(ap(Simp)), tail]);
    let cr = Strategy::alt_all(vec![
        then_recurse(Md),
        ap(Orth),
        then_recurse(Scr),
        then_recurse(Kb),
        then_recurse(CnvJ),
        then_recurse(CanCr),
    ]);
    by_kind(pre(cr), pre(local_tail()), pre(local_tail()))
}

fn conditional_strategy(unravel: bool) -> Strategy {
    use ProcessorId::*;
    let pre = |rest: Strategy| {
        let continue_with = Strategy::alt(
            Strategy::when(Guard::Unconditional, Strategy::Recurse),
            Strategy::when(Guard::Conditional, rest),
        );
        Strategy::seq(
            Strategy::attempt(ap(EVar)),
            Strategy::alt(then_recurse(Inl), Strategy::seq(Strategy::attempt(ap(Simp)), continue_with)),
        )
    };
    let mut cr = Vec::new();
    if unravel {
        cr.push(then_recurse(Uconf));
        cr.push(then_recurse(U));
    }
    cr.extend([ap(Orth), then_recurse(Wcr), then_recurse(Kb)]);
    let local = Strategy::alt(then_recurse(He), then_recurse(Cr));
    by_kind(pre(Strategy::alt_all(cr)), pre(local.clone()), pre(local))
}

/// The built-in strategy for a system class.
pub fn builtin_strategy(c: SystemClass) -> Strategy {
    match c {
        SystemClass::Trs | SystemClass::CsTrs => unconditional_strategy(),
        SystemClass::Ctrs(_) | SystemClass::CsCtrs(_) => conditional_strategy(true),
        SystemClass::Gtrs => conditional_strategy(false),
    }
}

/// Named strategies selectable from the command line.
pub fn preset(name: &str) -> Option<Strategy> {
    match name {
        "auto" => Some(Strategy::Recurse),
        "trs" => Some(unconditional_strategy()),
        "ctrs" => Some(conditional_strategy(true)),
        "gtrs" => Some(conditional_strategy(false)),
        _ => None,
    }
}

/// Names accepted by [`preset`].
pub const PRESETS: [&str; 4] = ["auto", "trs", "ctrs", "gtrs"];

/// Settings for a proof search.
#[derive(Debug, Clone)]
pub struct RunConfig {
    /// Wall-clock limit for the whole search.
    pub deadline: Duration,
    /// Oracle budgets for processors.
    pub budgets: Budgets,
    /// Processors that are never applied.
    pub disabled: BTreeSet<ProcessorId>,
    /// Maximal nesting of `Recurse`.
    pub max_recursion: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            deadline: Duration::from_secs(120),
            budgets: Budgets::default(),
            disabled: BTreeSet::new(),
            max_recursion: 32,
        }
    }
}

impl RunConfig {
    /// Default settings with a different deadline.
    pub fn with_deadline(deadline: Duration) -> Self {
        RunConfig { deadline, ..RunConfig::default() }
    }
}

struct Runner<'a> {
    cfg: &'a RunConfig,
    end: Instant,
    path: Vec<String>,
}

fn problem_key(p: &Problem) -> String {
    let mut rules: Vec<String> = p.system.rules.iter().map(|r| r.canonical().to_string()).collect();
    rules.sort();
    let pair = p.pair.as_ref().map(|pi| pi.canonical_key()).unwrap_or_default();
    format!("{}|{}|{:?}|{:?}|{}", p.kind, rules.join(";"), p.system.mu, p.system.clauses, pair)
}

impl Runner<'_> {
    fn remaining(&self) -> Option<Duration> {
        let left = self.end.saturating_duration_since(Instant::now());
        (!left.is_zero()).then_some(left)
    }

    fn eval(&mut self, s: &Strategy, p: &Problem, b: &Budgets) -> Option<ProofTree> {
        match s {
            Strategy::Skip => Some(ProofTree::Open(p.clone())),
            Strategy::Apply(id) => {
                if self.cfg.disabled.contains(id) {
                    return None;
                }
                let left = self.remaining()?;
                let mut clamped = *b;
                clamped.oracle.timeout = clamped.oracle.timeout.min(left);
                clamped.termination.timeout = clamped.termination.timeout.min(left);
                apply(*id, p, &clamped).map(|app| ProofTree::from_application(p, &app))
            }
            Strategy::Seq(first, second) => {
                let t = self.eval(first, p, b)?;
                Some(self.extend(t, second, b))
            }
            Strategy::Alt(left, right) => {
                let l = self.eval(left, p, b);
                if l.as_ref().is_some_and(|t| answer_of(t) != Answer::Maybe) {
                    return l;
                }
                let r = self.eval(right, p, b);
                if r.as_ref().is_some_and(|t| answer_of(t) != Answer::Maybe) {
                    return r;
                }
                l.or(r)
            }
            Strategy::WithBudget(inner, nb) => self.eval(inner, p, nb),
            Strategy::When(g, inner) => {
                if g.holds(p) {
                    self.eval(inner, p, b)
                } else {
                    None
                }
            }
            Strategy::Recurse => {
                let key = problem_key(p);
                if self.path.len() >= self.cfg.max_recursion || self.path.contains(&key) {
                    return None;
                }
                self.path.push(key);
                let strategy = builtin_strategy(classify(&p.system));
                let out = self.eval(&strategy, p, b);
                self.path.pop();
                out
            }
        }
    }

    fn extend(&mut self, t: ProofTree, s: &Strategy, b: &Budgets) -> ProofTree {
        match t {
            ProofTree::Open(q) => self.eval(s, &q, b).unwrap_or(ProofTree::Open(q)),
            ProofTree::Node { problem, step, result: StepResult::Children(cs) } => {
                let mut out = Vec::with_capacity(cs.len());
                let mut refuted = false;
                for c in cs {
                    if refuted {
                        out.push(c);
                        continue;
                    }
                    let e = self.extend(c, s, b);
                    refuted = answer_of(&e) == Answer::No;
                    out.push(e);
                }
                ProofTree::Node { problem, step, result: StepResult::Children(out) }
            }
            closed => closed,
        }
    }
}

/// Runs a strategy on a problem with default budgets.
pub fn run(p: &Problem, s: &Strategy, deadline: Duration) -> ProofTree {
    run_with(p, s, &RunConfig::with_deadline(deadline))
}

/// Runs a strategy on a problem.
pub fn run_with(p: &Problem, s: &Strategy, cfg: &RunConfig) -> ProofTree {
    let mut runner = Runner { cfg, end: Instant::now() + cfg.deadline, path: Vec::new() };
    runner.eval(s, p, &cfg.budgets).unwrap_or_else(|| ProofTree::Open(p.clone()))
}

/// Runs the built-in strategy and extracts the verdict.
pub fn prove(p: &Problem, cfg: &RunConfig) -> Verdict {
    verdict(run_with(p, &Strategy::Recurse, cfg))
}

fn expected_flags(id: ProcessorId, kind: ProblemKind, comb: Option<Combination>) -> Option<(bool, bool)> {
    use ProblemKind::*;
    use ProcessorId as P;
    let flags = match (id, kind) {
        (P::EVar | P::Simp, Cr | Wcr | Scr) => (true, true),
        (P::Inl, Cr) => (true, true),
        (P::Inl, Wcr | Scr) => (false, true),
        (P::Md, Cr | Scr) => (true, comb == Some(Combination::Disjoint)),
        (P::Md, Wcr) => (true, comb.is_some()),
        (P::He, Wcr | Scr) => (true, true),
        (P::U | P::Uconf, Cr) => (true, false),
        (P::Orth, Cr | Wcr) => (true, true),
        (P::Cr, Wcr) => (true, false),
        (P::Cr, Scr) => (false, true),
        (P::Wcr, Cr | Scr) => (false, true),
        (P::Scr, Cr | Wcr) => (true, false),
        (P::CanJ | P::CnvJ | P::CanCr, Cr) => (true, false),
        (P::Kb, Cr) => (true, true),
        (P::Jo, Jo | Sjo) => (true, true),
        _ => return None,
    };
    Some(flags)
}

fn check_node(t: &ProofTree, out: &mut Vec<String>) {
    let ProofTree::Node { problem, step, result } = t else { return };
    let here = format!("{} on {}", step.processor, problem);
    let Some((sound, complete)) = expected_flags(step.processor, problem.kind, step.combination) else {
        out.push(format!("{here}: processor does not accept this kind"));
        return;
    };
    if (sound, complete) != (step.sound, step.complete) {
        out.push(format!("{here}: recorded flags ({}, {}) differ from ({sound}, {complete})", step.sound, step.complete));
    }
    match result {
        StepResult::No if !matches!(step.processor, ProcessorId::EVar | ProcessorId::Jo) => {
            out.push(format!("{here}: only P_EVar and P_JO may end in no"));
        }
        StepResult::Yes if !matches!(step.processor, ProcessorId::Orth | ProcessorId::Kb | ProcessorId::He | ProcessorId::Jo) => {
            out.push(format!("{here}: this processor never ends in yes"));
        }
        StepResult::Children(cs) => {
            if step.processor == ProcessorId::Md && cs.len() != 2 {
                out.push(format!("{here}: a decomposition has two parts"));
            }
            if step.processor == ProcessorId::Md && step.combination.is_none() {
                out.push(format!("{here}: decomposition without a combination"));
            }
            if problem.pair.is_some() {
                out.push(format!("{here}: joinability problems have no subproblems"));
            }
        }
        _ => {}
    }
    if problem.kind.has_pair() != problem.pair.is_some() {
        out.push(format!("{here}: pair does not match the problem kind"));
    }
}

fn audit_yes(t: &ProofTree, out: &mut Vec<String>) {
    match t {
        ProofTree::Open(p) => out.push(format!("open problem {p} under a positive verdict")),
        ProofTree::Node { problem, step, result } => {
            let sound = expected_flags(step.processor, problem.kind, step.combination).is_some_and(|f| f.0);
            if !sound {
                out.push(format!("{} on {} is not sound", step.processor, problem));
            }
            match result {
                StepResult::Yes => {}
                StepResult::No => out.push(format!("{} on {} ends in no under a positive verdict", step.processor, problem)),
                StepResult::Children(cs) => cs.iter().for_each(|c| audit_yes(c, out)),
            }
        }
    }
}

fn complete_no_path(t: &ProofTree) -> bool {
    match t {
        ProofTree::Open(_) => false,
        ProofTree::Node { problem, step, result } => {
            expected_flags(step.processor, problem.kind, step.combination).is_some_and(|f| f.1)
                && match result {
                    StepResult::No => true,
                    StepResult::Yes => false,
                    StepResult::Children(cs) => cs.iter().any(complete_no_path),
                }
        }
    }
}

/// Re-checks a verdict against an independently written flag table.
/// Returns one message per violation.
pub fn audit(v: &Verdict) -> Vec<String> {
    let mut out = Vec::new();
    v.tree.walk(&mut |t| check_node(t, &mut out));
    match v.answer {
        Answer::Yes => audit_yes(&v.tree, &mut out),
        Answer::No => {
            if !complete_no_path(&v.tree) {
                out.push("negative verdict without a complete path to no".to_string());
            }
        }
        Answer::Maybe => {}
    }
    if v.answer != answer_of(&v.tree) {
        out.push(format!("recorded answer {} differs from the tree's {}", v.answer, answer_of(&v.tree)));
    }
    out
}
