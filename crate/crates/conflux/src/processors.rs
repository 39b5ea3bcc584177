//! Processors: guarded partial functions from problems to outcomes, each
//! with soundness and completeness flags per problem kind.

use std::collections::BTreeSet;
use std::fmt;
use std::time::{Duration, Instant};

use serde::Serialize;

use crate::oracles::feasibility::{feasible, FeasibilityQuery};
use crate::oracles::joinability::{joinable_pair_explained, strongly_joinable_pair};
use crate::oracles::termination::{normalizing, orient_lpo, termination_proof, TerminationProof};
use crate::pairs::{
    canonical_rmap, convective_rmap, critical_pairs, eccps, improper_ccps, proper_ccps, syntactic_profile,
    ConditionalPair,
};
use crate::rewrite::{Budget, TriBool};
use crate::system::{classify, defined_symbols, Gtrs, Rule, Semantics, SystemClass};
use crate::term::{active_positions, frozen_vars, PositionFilter, Position, ReplacementMap, Term};
use crate::transforms::{
    decompose_modular, inline, simplify, u_preserves_irreducibility, unravel_u, unravel_uconf, Combination,
};

/// The five kinds of problems.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum ProblemKind {
    /// Confluence.
    Cr,
    /// Local confluence.
    Wcr,
    /// Strong confluence.
    Scr,
    /// Joinability of a conditional pair.
    Jo,
    /// Strong joinability of a conditional pair.
    Sjo,
}

impl ProblemKind {
    /// The confluence kinds.
    pub const CONFLUENCE: [ProblemKind; 3] = [ProblemKind::Cr, ProblemKind::Wcr, ProblemKind::Scr];

    /// The conventional short name.
    pub fn name(self) -> &'static str {
        match self {
            ProblemKind::Cr => "CR",
            ProblemKind::Wcr => "WCR",
            ProblemKind::Scr => "SCR",
            ProblemKind::Jo => "JO",
            ProblemKind::Sjo => "SJO",
        }
    }

    /// True for the kinds that carry a pair.
    pub fn has_pair(self) -> bool {
        matches!(self, ProblemKind::Jo | ProblemKind::Sjo)
    }
}

impl fmt::Display for ProblemKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A confluence or joinability problem.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Problem {
    /// The kind of question.
    pub kind: ProblemKind,
    /// The system.
    pub system: Gtrs,
    /// The pair, for joinability problems.
    pub pair: Option<ConditionalPair>,
}

impl Problem {
    /// A confluence problem of the given kind.
    pub fn confluence(kind: ProblemKind, system: Gtrs) -> Self {
        assert!(!kind.has_pair(), "joinability problems need a pair");
        Problem { kind, system, pair: None }
    }

    /// A joinability problem.
    pub fn joinability(kind: ProblemKind, system: Gtrs, pair: ConditionalPair) -> Self {
        assert!(kind.has_pair(), "confluence problems carry no pair");
        Problem { kind, system, pair: Some(pair) }
    }

    /// Same kind, different system.
    pub fn with_system(&self, system: Gtrs) -> Self {
        Problem { system, ..self.clone() }
    }
}

impl fmt::Display for Problem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.pair {
            Some(pi) => write!(f, "{}(R, {})", self.kind, pi),
            None => write!(f, "{}(R)", self.kind),
        }
    }
}

/// The result of an applicable processor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    /// The problem is negative.
    No,
    /// The problem is reduced to these; an empty list closes the branch.
    Subproblems(Vec<Problem>),
}

/// The sixteen processors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum ProcessorId {
    /// Extra variables check.
    EVar,
    /// Simplification.
    Simp,
    /// Inlining of conditions.
    Inl,
    /// Modular decomposition.
    Md,
    /// Critical and variable pairs.
    He,
    /// The unraveling U.
    U,
    /// The unraveling U_conf.
    Uconf,
    /// Orthogonality.
    Orth,
    /// To confluence.
    Cr,
    /// To local confluence.
    Wcr,
    /// To strong confluence.
    Scr,
    /// Local confluence under the canonical replacement map.
    CanJ,
    /// Local confluence under the convective replacement map.
    CnvJ,
    /// Confluence under the canonical replacement map.
    CanCr,
    /// Termination plus local confluence.
    Kb,
    /// Joinability.
    Jo,
}

impl ProcessorId {
    /// Every processor in table order.
    pub const ALL: [ProcessorId; 16] = [
        ProcessorId::EVar,
        ProcessorId::Simp,
        ProcessorId::Inl,
        ProcessorId::Md,
        ProcessorId::He,
        ProcessorId::U,
        ProcessorId::Uconf,
        ProcessorId::Orth,
        ProcessorId::Cr,
        ProcessorId::Wcr,
        ProcessorId::Scr,
        ProcessorId::CanJ,
        ProcessorId::CnvJ,
        ProcessorId::CanCr,
        ProcessorId::Kb,
        ProcessorId::Jo,
    ];

    /// The display name, such as `P_HE`.
    pub fn name(self) -> &'static str {
        match self {
            ProcessorId::EVar => "P_EVar",
            ProcessorId::Simp => "P_Simp",
            ProcessorId::Inl => "P_Inl",
            ProcessorId::Md => "P_MD",
            ProcessorId::He => "P_HE",
            ProcessorId::U => "P_U",
            ProcessorId::Uconf => "P_Uconf",
            ProcessorId::Orth => "P_Orth",
            ProcessorId::Cr => "P_CR",
            ProcessorId::Wcr => "P_WCR",
            ProcessorId::Scr => "P_SCR",
            ProcessorId::CanJ => "P_CanJ",
            ProcessorId::CnvJ => "P_CnvJ",
            ProcessorId::CanCr => "P_CanCR",
            ProcessorId::Kb => "P_KB",
            ProcessorId::Jo => "P_JO",
        }
    }

    /// Looks a processor up by name, with or without the `P_` prefix.
    pub fn from_name(s: &str) -> Option<ProcessorId> {
        let bare = s.strip_prefix("P_").unwrap_or(s).to_ascii_lowercase();
        ProcessorId::ALL.into_iter().find(|p| p.name()[2..].to_ascii_lowercase() == bare)
    }
}

impl fmt::Display for ProcessorId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// When a guarantee holds for a kind.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Guarantee {
    /// Whenever the processor applies.
    Always,
    /// Only when the decomposition used one of these combinations.
    For(Vec<Combination>),
}

impl Guarantee {
    fn holds(&self, comb: Option<Combination>) -> bool {
        match self {
            Guarantee::Always => true,
            Guarantee::For(cs) => comb.is_some_and(|c| cs.contains(&c)),
        }
    }
}

/// Static description of a processor.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProcessorMeta {
    /// The processor.
    pub id: ProcessorId,
    /// Kinds the processor accepts.
    pub applies_to: Vec<ProblemKind>,
    /// Kinds on which positive answers propagate upwards.
    pub sound_for: Vec<(ProblemKind, Guarantee)>,
    /// Kinds on which negative answers propagate upwards.
    pub complete_for: Vec<(ProblemKind, Guarantee)>,
}

impl ProcessorMeta {
    /// Soundness on `kind` given the combination recorded by the step.
    pub fn is_sound(&self, kind: ProblemKind, comb: Option<Combination>) -> bool {
        self.sound_for.iter().any(|(k, g)| *k == kind && g.holds(comb))
    }

    /// Completeness on `kind` given the combination recorded by the step.
    pub fn is_complete(&self, kind: ProblemKind, comb: Option<Combination>) -> bool {
        self.complete_for.iter().any(|(k, g)| *k == kind && g.holds(comb))
    }
}

fn always(kinds: &[ProblemKind]) -> Vec<(ProblemKind, Guarantee)> {
    kinds.iter().map(|k| (*k, Guarantee::Always)).collect()
}

/// The soundness and completeness table.
pub fn meta(id: ProcessorId) -> ProcessorMeta {
    use ProblemKind::*;
    let conf = [Cr, Wcr, Scr];
    let (applies_to, sound_for, complete_for): (Vec<ProblemKind>, _, _) = match id {
        ProcessorId::EVar | ProcessorId::Simp => (conf.to_vec(), always(&conf), always(&conf)),
        ProcessorId::Inl => (conf.to_vec(), always(&[Cr]), always(&conf)),
        ProcessorId::Md => {
            let all = vec![Combination::Disjoint, Combination::ConstructorSharing, Combination::Composable];
            let complete = vec![
                (Cr, Guarantee::For(vec![Combination::Disjoint])),
                (Wcr, Guarantee::For(all)),
                (Scr, Guarantee::For(vec![Combination::Disjoint])),
            ];
            (conf.to_vec(), always(&conf), complete)
        }
        ProcessorId::He => (vec![Wcr, Scr], always(&[Wcr, Scr]), always(&[Wcr, Scr])),
        ProcessorId::U | ProcessorId::Uconf => (vec![Cr], always(&[Cr]), Vec::new()),
        ProcessorId::Orth => (vec![Cr, Wcr], always(&[Cr, Wcr]), always(&[Cr, Wcr])),
        ProcessorId::Cr => (vec![Wcr, Scr], always(&[Wcr]), always(&[Scr])),
        ProcessorId::Wcr => (vec![Cr, Scr], Vec::new(), always(&[Cr, Scr])),
        ProcessorId::Scr => (vec![Cr, Wcr], always(&[Cr, Wcr]), Vec::new()),
        ProcessorId::CanJ | ProcessorId::CnvJ | ProcessorId::CanCr => (vec![Cr], always(&[Cr]), Vec::new()),
        ProcessorId::Kb => (vec![Cr], always(&[Cr]), always(&[Cr])),
        ProcessorId::Jo => (vec![Jo, Sjo], always(&[Jo, Sjo]), always(&[Jo, Sjo])),
    };
    ProcessorMeta { id, applies_to, sound_for, complete_for }
}

/// Budgets used by the oracles that processors consult.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budgets {
    /// Feasibility and joinability.
    pub oracle: Budget,
    /// Termination.
    pub termination: Budget,
}

impl Default for Budgets {
    fn default() -> Self {
        Budgets { oracle: Budget::default(), termination: Budget { timeout: Duration::from_secs(5), ..Budget::default() } }
    }
}

/// An applicable processor's result with its evidence.
#[derive(Debug, Clone)]
pub struct Application {
    /// The processor.
    pub processor: ProcessorId,
    /// Its outcome.
    pub outcome: Outcome,
    /// The combination, when the processor decomposed the system.
    pub combination: Option<Combination>,
    /// Oracle evidence and remarks.
    pub notes: Vec<String>,
}

impl Application {
    fn new(processor: ProcessorId, outcome: Outcome) -> Self {
        Application { processor, outcome, combination: None, notes: Vec::new() }
    }

    fn note(mut self, s: impl Into<String>) -> Self {
        self.notes.push(s.into());
        self
    }

    fn subproblems(processor: ProcessorId, ps: Vec<Problem>) -> Self {
        Application::new(processor, Outcome::Subproblems(ps))
    }

    /// Soundness of this step for the kind it was applied to.
    pub fn is_sound(&self, kind: ProblemKind) -> bool {
        meta(self.processor).is_sound(kind, self.combination)
    }

    /// Completeness of this step for the kind it was applied to.
    pub fn is_complete(&self, kind: ProblemKind) -> bool {
        meta(self.processor).is_complete(kind, self.combination)
    }
}

/// Applies a processor; `None` means the problem is outside its domain.
pub fn apply(id: ProcessorId, p: &Problem, b: &Budgets) -> Option<Application> {
    if !meta(id).applies_to.contains(&p.kind) {
        return None;
    }
    match id {
        ProcessorId::EVar => p_evar(p, b),
        ProcessorId::Simp => p_simp(p, b),
        ProcessorId::Inl => p_inl(p),
        ProcessorId::Md => p_md(p),
        ProcessorId::He => p_he(p, b),
        ProcessorId::U => p_u(p, b),
        ProcessorId::Uconf => p_uconf(p),
        ProcessorId::Orth => p_orth(p),
        ProcessorId::Cr => p_bridge(p, ProblemKind::Cr),
        ProcessorId::Wcr => p_bridge(p, ProblemKind::Wcr),
        ProcessorId::Scr => p_bridge(p, ProblemKind::Scr),
        ProcessorId::CanJ => p_canj_cnvj(p, MapChoice::Canonical, b),
        ProcessorId::CnvJ => p_canj_cnvj(p, MapChoice::Convective, b),
        ProcessorId::CanCr => p_cancr(p, b),
        ProcessorId::Kb => p_kb(p, b),
        ProcessorId::Jo => p_jo(p, b),
    }
}

/// An extra variable of the right-hand side with no defined symbol above one
/// of its occurrences.
fn exposed_extra_variable(r: &Rule, defined: &BTreeSet<crate::term::Symbol>) -> Option<(crate::term::Var, Position)> {
    let mut bound = r.lhs.vars();
    bound.extend(r.cond_vars());
    for x in r.rhs.vars_ordered() {
        if bound.contains(&x) {
            continue;
        }
        let top = ReplacementMap::top(&r.rhs.symbols());
        for p in active_positions(&r.rhs, &top, &PositionFilter::OfVariable(x.clone())) {
            let exposed = (0..p.0.len()).all(|k| {
                let q = Position(p.0[..k].to_vec());
                r.rhs.subterm_at(&q).ok().and_then(Term::root).is_none_or(|f| !defined.contains(f))
            });
            if exposed {
                return Some((x, p));
            }
        }
    }
    None
}

/// Disproves confluence from a feasible rule with an exposed extra variable.
pub fn p_evar(p: &Problem, b: &Budgets) -> Option<Application> {
    let g = &p.system;
    let defined = defined_symbols(g);
    for r in &g.rules {
        let Some((x, pos)) = exposed_extra_variable(r, &defined) else { continue };
        let feas = if r.conds.is_empty() {
            TriBool::Yes
        } else {
            feasible(&FeasibilityQuery::new(g, r.conds.clone()), b.oracle).answer
        };
        if feas.is_yes() {
            return Some(
                Application::new(ProcessorId::EVar, Outcome::No)
                    .note(format!("rule {r} is feasible and its extra variable {x} occurs at {pos} below no defined symbol")),
            );
        }
    }
    None
}

/// Replaces the system by its simplification.
pub fn p_simp(p: &Problem, b: &Budgets) -> Option<Application> {
    let s = simplify(&p.system, b.oracle);
    if s.rules == p.system.rules && s.clauses == p.system.clauses {
        return None;
    }
    let removed: Vec<String> = p
        .system
        .rules
        .iter()
        .filter(|r| !s.rules.iter().any(|q| q.label == r.label))
        .map(|r| r.label.clone())
        .collect();
    let mut app = Application::subproblems(ProcessorId::Simp, vec![p.with_system(s)]);
    if !removed.is_empty() {
        app = app.note(format!("removed rules {}", removed.join(", ")));
    }
    Some(app)
}

/// Replaces the system by its inlining.
pub fn p_inl(p: &Problem) -> Option<Application> {
    let s = inline(&p.system);
    if s.rules == p.system.rules {
        return None;
    }
    Some(Application::subproblems(ProcessorId::Inl, vec![p.with_system(s)]))
}

/// Splits a TRS into two modules when modularity justifies it for the kind.
pub fn p_md(p: &Problem) -> Option<Application> {
    let g = &p.system;
    if g.is_conditional() || !g.mu_is_top() {
        return None;
    }
    let d = decompose_modular(g).ok()??;
    let prof = syntactic_profile(g);
    let lp = d.layer_preserving.0 && d.layer_preserving.1;
    let sound = match p.kind {
        ProblemKind::Cr => {
            d.comb == Combination::Disjoint
                || (d.comb == Combination::ConstructorSharing && prof.left_linear)
                || lp
        }
        ProblemKind::Wcr => true,
        ProblemKind::Scr => prof.linear,
        _ => false,
    };
    if !sound {
        return None;
    }
    let comb = d.comb;
    let mut app = Application::subproblems(
        ProcessorId::Md,
        vec![p.with_system(d.part1), p.with_system(d.part2)],
    )
    .note(format!("{comb} combination"));
    app.combination = Some(comb);
    Some(app)
}

/// True for SE systems where no variable of a variable pair is frozen in a
/// condition of its rule.
fn se_variable_condition(g: &Gtrs) -> bool {
    g.rules.iter().all(|r| {
        let xs = crate::term::active_vars(&r.lhs, &g.mu);
        r.conds.iter().all(|a| {
            let frozen: BTreeSet<_> = a.args.iter().flat_map(|t| frozen_vars(t, &g.mu)).collect();
            xs.is_disjoint(&frozen)
        })
    })
}

/// Local or strong confluence as joinability of the relevant pairs.
pub fn p_he(p: &Problem, b: &Budgets) -> Option<Application> {
    let g = &p.system;
    let class = classify(g);
    let (kind, pairs, set) = match p.kind {
        ProblemKind::Wcr => {
            if class.semantics() == Some(Semantics::SemiEquational) && se_variable_condition(g) {
                let mut ps = proper_ccps(g, b.oracle);
                ps.extend(improper_ccps(g, b.oracle));
                (ProblemKind::Jo, ps, "pCCP ∪ iCCP")
            } else {
                let set = match class {
                    SystemClass::Trs => "CP",
                    SystemClass::CsTrs => "CP ∪ LHCP",
                    _ => "ECCP",
                };
                (ProblemKind::Jo, eccps(g, b.oracle), set)
            }
        }
        ProblemKind::Scr => {
            if class != SystemClass::Trs || !syntactic_profile(g).linear {
                return None;
            }
            (ProblemKind::Sjo, critical_pairs(g).ok()?, "CP")
        }
        _ => return None,
    };
    let n = pairs.len();
    let subs = pairs.into_iter().map(|pi| Problem::joinability(kind, g.clone(), pi)).collect();
    Some(Application::subproblems(ProcessorId::He, subs).note(format!("{n} pairs in {set}")))
}

fn termination_note(t: &TerminationProof) -> String {
    format!("terminating: {}", t.method)
}

/// Confluence of a terminating DCTRS via the unraveling U.
pub fn p_u(p: &Problem, b: &Budgets) -> Option<Application> {
    let g = &p.system;
    if !g.is_conditional() {
        return None;
    }
    let u = unravel_u(g).ok()?;
    if !u_preserves_irreducibility(g, b.oracle).ok()?.is_yes() {
        return None;
    }
    let t = termination_proof(g, b.termination);
    if !t.answer.is_yes() {
        return None;
    }
    Some(
        Application::subproblems(ProcessorId::U, vec![Problem::confluence(ProblemKind::Cr, u)])
            .note(termination_note(&t))
            .note("U preserves irreducibility: every partially grounded condition is feasible"),
    )
}

/// Confluence of a weakly left-linear DCTRS via the unraveling U_conf.
pub fn p_uconf(p: &Problem) -> Option<Application> {
    let g = &p.system;
    if !g.is_conditional() || !syntactic_profile(g).weakly_left_linear {
        return None;
    }
    let u = unravel_uconf(g).ok()?;
    Some(Application::subproblems(ProcessorId::Uconf, vec![Problem::confluence(ProblemKind::Cr, u)]))
}

/// Closes confluence problems of orthogonal systems.
pub fn p_orth(p: &Problem) -> Option<Application> {
    let g = &p.system;
    let prof = syntactic_profile(g);
    let class = classify(g);
    let oriented = class == SystemClass::Ctrs(Semantics::Oriented);
    let reason = if class == SystemClass::Trs && prof.weakly_orthogonal {
        "weakly orthogonal TRS"
    } else if class == SystemClass::CsTrs && prof.mu_orthogonal {
        "μ-orthogonal CS-TRS"
    } else if oriented && prof.max_rule_type <= 2 && prof.almost_orthogonal && prof.almost_normal {
        "almost orthogonal and almost normal 2-CTRS"
    } else if oriented && prof.max_rule_type <= 3 && prof.orthogonal && prof.properly_oriented && prof.right_stable {
        "orthogonal, properly oriented and right-stable 3-CTRS"
    } else {
        return None;
    };
    Some(Application::subproblems(ProcessorId::Orth, Vec::new()).note(reason))
}

/// Moves between confluence, local confluence and strong confluence.
pub fn p_bridge(p: &Problem, target: ProblemKind) -> Option<Application> {
    let id = match target {
        ProblemKind::Cr => ProcessorId::Cr,
        ProblemKind::Wcr => ProcessorId::Wcr,
        ProblemKind::Scr => ProcessorId::Scr,
        _ => return None,
    };
    if p.kind == target || !meta(id).applies_to.contains(&p.kind) {
        return None;
    }
    Some(Application::subproblems(id, vec![Problem::confluence(target, p.system.clone())]))
}

/// Which replacement map a context-sensitive processor uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MapChoice {
    /// μ_can.
    Canonical,
    /// μ_cnv, falling back to μ_can.
    Convective,
}

/// Renders the active arguments of a replacement map.
pub fn describe_mu(g: &Gtrs) -> String {
    let parts: Vec<String> = g
        .funcs
        .iter()
        .filter(|f| f.arity() > 0)
        .map(|f| {
            let idx: Vec<String> = g.mu.get(f).iter().map(|i| i.to_string()).collect();
            format!("μ({}) = {{{}}}", f.name(), idx.join(","))
        })
        .collect();
    parts.join(", ")
}

/// Confluence of a left-linear TRS as local confluence of a terminating
/// context-sensitive restriction.
pub fn p_canj_cnvj(p: &Problem, mode: MapChoice, b: &Budgets) -> Option<Application> {
    let g = &p.system;
    if classify(g) != SystemClass::Trs || !syntactic_profile(g).left_linear {
        return None;
    }
    let can = canonical_rmap(g).ok()?;
    let candidates: Vec<(ReplacementMap, &str)> = match mode {
        MapChoice::Canonical => vec![(can, "μ_can")],
        MapChoice::Convective => vec![(convective_rmap(g).ok()?, "μ_cnv"), (can, "μ_can")],
    };
    let id = if mode == MapChoice::Canonical { ProcessorId::CanJ } else { ProcessorId::CnvJ };
    for (mu, name) in candidates {
        let gm = g.with_mu(mu);
        let prof = syntactic_profile(&gm);
        let guard = match mode {
            MapChoice::Canonical => prof.level_decreasing,
            MapChoice::Convective => prof.lhrv,
        };
        if !guard {
            continue;
        }
        let t = termination_proof(&gm, b.termination);
        if !t.answer.is_yes() {
            continue;
        }
        let desc = describe_mu(&gm);
        return Some(
            Application::subproblems(id, vec![Problem::confluence(ProblemKind::Wcr, gm)])
                .note(format!("{name}: {desc}"))
                .note(termination_note(&t)),
        );
    }
    None
}

/// Confluence of a normalizing left-linear TRS as confluence under μ_can.
pub fn p_cancr(p: &Problem, b: &Budgets) -> Option<Application> {
    let g = &p.system;
    if classify(g) != SystemClass::Trs || !syntactic_profile(g).left_linear {
        return None;
    }
    let mu = canonical_rmap(g).ok()?;
    let gm = g.with_mu(mu);
    if gm.mu_is_top() || !normalizing(g, b.termination).ok()?.is_yes() {
        return None;
    }
    let desc = describe_mu(&gm);
    Some(
        Application::subproblems(ProcessorId::CanCr, vec![Problem::confluence(ProblemKind::Cr, gm)])
            .note(format!("μ_can: {desc}"))
            .note("normalizing: terminating"),
    )
}

/// True if a path order orients every rule and puts every condition side
/// below its left-hand side.
fn decreasing(g: &Gtrs, b: Budget) -> bool {
    let mut rules: Vec<Rule> = Vec::new();
    for r in &g.rules {
        rules.push(r.unconditional());
        for a in &r.conds {
            for s in &a.args {
                rules.push(Rule::plain(r.label.clone(), r.lhs.clone(), s.clone()));
            }
        }
    }
    orient_lpo(&rules, Instant::now() + b.timeout).is_some()
}

/// Confluence of a terminating system via its local confluence.
pub fn p_kb(p: &Problem, b: &Budgets) -> Option<Application> {
    let g = &p.system;
    let t = termination_proof(g, b.termination);
    if !t.answer.is_yes() {
        return None;
    }
    let class = classify(g);
    let join = class == SystemClass::Ctrs(Semantics::Join);
    let oriented1 = class == SystemClass::Ctrs(Semantics::Oriented) && syntactic_profile(g).max_rule_type == 1;
    if (join || oriented1) && decreasing(g, b.termination) {
        let mut pairs = proper_ccps(g, b.oracle);
        pairs.extend(improper_ccps(g, b.oracle));
        if pairs.iter().all(ConditionalPair::is_overlay) {
            let subs = pairs.into_iter().map(|pi| Problem::joinability(ProblemKind::Jo, g.clone(), pi)).collect();
            let mut app = Application::subproblems(ProcessorId::Kb, subs)
                .note(termination_note(&t))
                .note("decreasing, and all conditional critical pairs are overlays");
            if oriented1 {
                app = app.note("overlay branch taken for an oriented 1-CTRS");
            }
            return Some(app);
        }
    }
    Some(
        Application::subproblems(ProcessorId::Kb, vec![Problem::confluence(ProblemKind::Wcr, g.clone())])
            .note(termination_note(&t)),
    )
}

/// Decides (strong) joinability of the problem's pair.
pub fn p_jo(p: &Problem, b: &Budgets) -> Option<Application> {
    let pi = p.pair.as_ref()?;
    let (answer, reason) = match p.kind {
        ProblemKind::Jo => {
            let r = joinable_pair_explained(&p.system, pi, b.oracle);
            (r.answer, r.reason)
        }
        ProblemKind::Sjo => {
            let a = strongly_joinable_pair(&p.system, pi, b.oracle);
            (a, format!("strong joinability {a}"))
        }
        _ => return None,
    };
    match answer {
        TriBool::Yes => Some(Application::subproblems(ProcessorId::Jo, Vec::new()).note(reason)),
        TriBool::No => Some(Application::new(ProcessorId::Jo, Outcome::No).note(reason)),
        TriBool::Unknown => None,
    }
}
