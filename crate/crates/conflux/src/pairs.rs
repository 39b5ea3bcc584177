//! Conditional critical pairs, conditional variable pairs, LH(μ)-critical
//! pairs, canonical and convective replacement maps, and the syntactic
//! profile consulted by processor guards.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::rewrite::{Budget, Engine, TriBool};
use crate::system::{classify, defined_symbols, rule_type, Atom, Gtrs, Pred, Rule, Semantics, SystemClass};
use crate::term::{
    active_positions, active_vars, canonical_renaming, fresh_primed, frozen_vars, matches, renaming_apart, unify,
    Position, PositionFilter, ReplacementMap, Substitution, Term, Var,
};

/// Errors for operations restricted to unconditional systems.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum PairsError {
    /// The system has conditional rules.
    #[error("operation requires an unconditional system")]
    Conditional,
}

/// The origin of a conditional pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum PairKind {
    /// Overlap of two rules at an active non-variable position.
    ProperCcp,
    /// Root overlap of a 3-rule with a renamed copy of itself.
    ImproperCcp,
    /// Rewriting below an active variable occurrence of a conditional rule.
    Cvp,
    /// Rewriting below an active variable that is also frozen somewhere.
    Lhcp,
}

impl fmt::Display for PairKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            PairKind::ProperCcp => "pCCP",
            PairKind::ImproperCcp => "iCCP",
            PairKind::Cvp => "CVP",
            PairKind::Lhcp => "LHCP",
        };
        write!(f, "{s}")
    }
}

/// Where a pair came from.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Provenance {
    /// Labels of the outer rule and, for overlaps, the inner rule.
    pub rules: Vec<String>,
    /// Critical position in the outer left-hand side.
    pub position: Position,
    /// The pair kind.
    pub kind: PairKind,
    /// The critical variable of variable pairs.
    pub variable: Option<Var>,
}

/// A conditional pair `⟨s, t⟩ ⇐ c`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ConditionalPair {
    /// Left term.
    pub left: Term,
    /// Right term.
    pub right: Term,
    /// Conditions.
    pub conds: Vec<Atom>,
    /// Origin of the pair.
    pub provenance: Provenance,
    /// Feasibility of the conditions at generation time.
    pub feasibility: TriBool,
}

impl ConditionalPair {
    /// An unconditional pair of the given kind.
    pub fn plain(left: Term, right: Term, kind: PairKind) -> Self {
        ConditionalPair {
            left,
            right,
            conds: Vec::new(),
            provenance: Provenance { rules: Vec::new(), position: Position::root(), kind, variable: None },
            feasibility: TriBool::Yes,
        }
    }

    /// True if both sides coincide.
    pub fn is_trivial(&self) -> bool {
        self.left == self.right
    }

    /// True if the critical position is the root.
    pub fn is_overlay(&self) -> bool {
        self.provenance.position.is_root()
    }

    /// True if there are no conditions.
    pub fn is_unconditional(&self) -> bool {
        self.conds.is_empty()
    }

    /// Variables of the two sides.
    pub fn side_vars(&self) -> BTreeSet<Var> {
        let mut out = self.left.vars();
        self.right.collect_vars(&mut out);
        out
    }

    /// Variables of the conditions.
    pub fn cond_vars(&self) -> BTreeSet<Var> {
        crate::system::atoms_vars(&self.conds)
    }

    /// All variables.
    pub fn vars(&self) -> BTreeSet<Var> {
        let mut out = self.side_vars();
        out.extend(self.cond_vars());
        out
    }

    /// Applies a substitution to sides and conditions.
    pub fn apply(&self, sigma: &Substitution) -> ConditionalPair {
        ConditionalPair {
            left: sigma.apply(&self.left),
            right: sigma.apply(&self.right),
            conds: self.conds.iter().map(|a| a.apply(sigma)).collect(),
            ..self.clone()
        }
    }

    /// A key identifying the pair up to renaming, swapping sides, and
    /// permuting conditions.
    pub fn canonical_key(&self) -> String {
        let mut best: Option<String> = None;
        let orders = permutations(self.conds.len());
        for swap in [false, true] {
            let (a, b) = if swap { (&self.right, &self.left) } else { (&self.left, &self.right) };
            for perm in &orders {
                let conds: Vec<&Atom> = perm.iter().map(|&i| &self.conds[i]).collect();
                let mut terms: Vec<&Term> = vec![a, b];
                for c in &conds {
                    terms.extend(c.args.iter());
                }
                let map = canonical_renaming(&terms);
                let sigma = Substitution::from_pairs(map.into_iter().map(|(k, v)| (k, Term::Var(v))));
                let mut key = format!("{}|{}", sigma.apply(a), sigma.apply(b));
                for c in conds {
                    key.push('|');
                    key.push_str(&c.apply(&sigma).to_string());
                }
                if best.as_ref().is_none_or(|k| key < *k) {
                    best = Some(key);
                }
            }
        }
        best.unwrap_or_default()
    }

    /// True if the pairs coincide up to renaming, symmetry and condition order.
    pub fn same_as(&self, other: &ConditionalPair) -> bool {
        self.canonical_key() == other.canonical_key()
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n > 4 {
        return vec![(0..n).collect()];
    }
    let mut out = vec![vec![]];
    for k in 0..n {
        let mut next = Vec::new();
        for p in out {
            for pos in 0..=p.len() {
                let mut q = p.clone();
                q.insert(pos, k);
                next.push(q);
            }
        }
        out = next;
    }
    out
}

impl fmt::Display for ConditionalPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "⟨{}, {}⟩", self.left, self.right)?;
        if !self.conds.is_empty() {
            let parts: Vec<String> = self.conds.iter().map(|a| a.to_string()).collect();
            write!(f, " ⇐ {}", parts.join(", "))?;
        }
        Ok(())
    }
}

/// A raw overlap between two rules.
#[derive(Debug, Clone)]
pub struct Overlap {
    /// Index of the outer rule.
    pub outer: usize,
    /// Index of the inner rule.
    pub inner: usize,
    /// The resulting pair.
    pub pair: ConditionalPair,
}

/// All overlaps at `μ`-active non-variable positions, without feasibility
/// filtering or deduplication.
pub fn overlaps(g: &Gtrs, mu: &ReplacementMap) -> Vec<Overlap> {
    let mut out = Vec::new();
    for (i, outer) in g.rules.iter().enumerate() {
        for (j, inner) in g.rules.iter().enumerate() {
            let ren = renaming_apart(&inner.vars(), &outer.vars());
            let sigma = Substitution::from_pairs(ren.into_iter().map(|(k, v)| (k, Term::Var(v))));
            let inner = inner.apply(&sigma);
            for p in active_positions(&outer.lhs, mu, &PositionFilter::NonVariable) {
                if p.is_root() && i == j {
                    continue;
                }
                let sub = outer.lhs.subterm_at(&p).expect("valid position");
                let Some(theta) = unify(sub, &inner.lhs) else { continue };
                let left = theta.apply(&outer.lhs.subterm_replace(&p, inner.rhs.clone()).expect("valid position"));
                let right = theta.apply(&outer.rhs);
                let conds: Vec<Atom> = outer.conds.iter().chain(inner.conds.iter()).map(|a| a.apply(&theta)).collect();
                out.push(Overlap {
                    outer: i,
                    inner: j,
                    pair: ConditionalPair {
                        left,
                        right,
                        conds,
                        provenance: Provenance {
                            rules: vec![outer.label.clone(), inner.label.clone()],
                            position: p,
                            kind: PairKind::ProperCcp,
                            variable: None,
                        },
                        feasibility: TriBool::Unknown,
                    },
                });
            }
        }
    }
    out
}

fn feasibility(engine: &Engine, conds: &[Atom]) -> TriBool {
    if conds.is_empty() {
        return TriBool::Yes;
    }
    let logic = crate::system::atoms_vars(conds);
    engine.feasible(conds, &logic).0
}

fn rule_feasibility(g: &Gtrs, engine: &Engine) -> Vec<TriBool> {
    g.rules.iter().map(|r| feasibility(engine, &r.conds)).collect()
}

fn dedup(pairs: Vec<ConditionalPair>) -> Vec<ConditionalPair> {
    let mut seen = BTreeSet::new();
    pairs.into_iter().filter(|p| seen.insert(p.canonical_key())).collect()
}

fn keep_feasible(engine: &Engine, pairs: Vec<ConditionalPair>) -> Vec<ConditionalPair> {
    pairs
        .into_iter()
        .filter_map(|mut p| {
            p.feasibility = feasibility(engine, &p.conds);
            (!p.feasibility.is_no()).then_some(p)
        })
        .collect()
}

/// Proper conditional critical pairs of feasible rules with feasible
/// conditions, deduplicated.
pub fn proper_ccps(g: &Gtrs, b: Budget) -> Vec<ConditionalPair> {
    let engine = Engine::new(g, b);
    let feasible = rule_feasibility(g, &engine);
    let raw: Vec<ConditionalPair> = overlaps(g, &g.mu)
        .into_iter()
        .filter(|o| !feasible[o.outer].is_no() && !feasible[o.inner].is_no())
        .map(|o| o.pair)
        .collect();
    dedup(keep_feasible(&engine, raw))
}

/// Improper conditional critical pairs of proper 3-rules.
pub fn improper_ccps(g: &Gtrs, b: Budget) -> Vec<ConditionalPair> {
    let engine = Engine::new(g, b);
    let mut raw = Vec::new();
    for r in &g.rules {
        if rule_type(r) != 3 || feasibility(&engine, &r.conds).is_no() {
            continue;
        }
        let ren = renaming_apart(&r.vars(), &r.vars());
        let copy = r.apply(&Substitution::from_pairs(ren.into_iter().map(|(k, v)| (k, Term::Var(v)))));
        let Some(theta) = unify(&r.lhs, &copy.lhs) else { continue };
        raw.push(ConditionalPair {
            left: theta.apply(&copy.rhs),
            right: theta.apply(&r.rhs),
            conds: r.conds.iter().chain(copy.conds.iter()).map(|a| a.apply(&theta)).collect(),
            provenance: Provenance {
                rules: vec![r.label.clone(), r.label.clone()],
                position: Position::root(),
                kind: PairKind::ImproperCcp,
                variable: None,
            },
            feasibility: TriBool::Unknown,
        });
    }
    dedup(keep_feasible(&engine, raw))
}

fn variable_pairs(g: &Gtrs, r: &Rule, kind: PairKind, keep: impl Fn(&Var) -> bool) -> Vec<ConditionalPair> {
    let mut out = Vec::new();
    let used = r.vars();
    for x in r.lhs.vars_ordered() {
        if !keep(&x) {
            continue;
        }
        let xp = fresh_primed(&x, &used);
        for p in active_positions(&r.lhs, &g.mu, &PositionFilter::OfVariable(x.clone())) {
            let mut conds = vec![Atom::step(Term::Var(x.clone()), Term::Var(xp.clone()))];
            conds.extend(r.conds.iter().cloned());
            out.push(ConditionalPair {
                left: r.lhs.subterm_replace(&p, Term::Var(xp.clone())).expect("valid position"),
                right: r.rhs.clone(),
                conds,
                provenance: Provenance { rules: vec![r.label.clone()], position: p, kind, variable: Some(x.clone()) },
                feasibility: TriBool::Unknown,
            });
        }
    }
    out
}

/// Conditional variable pairs.  Pairs whose joinability follows from the
/// shape of the rule alone (the variable does not occur in the conditions
/// and every occurrence in both sides is active) are omitted.
pub fn cvps(g: &Gtrs) -> Vec<ConditionalPair> {
    let mut out = Vec::new();
    for r in &g.rules {
        let cv = r.cond_vars();
        let frozen: BTreeSet<Var> = frozen_vars(&r.lhs, &g.mu).union(&frozen_vars(&r.rhs, &g.mu)).cloned().collect();
        out.extend(variable_pairs(g, r, PairKind::Cvp, |x| cv.contains(x) || frozen.contains(x)));
    }
    dedup(out)
}

/// LH(μ)-critical pairs of an unconditional system.
pub fn lhcps(g: &Gtrs) -> Result<Vec<ConditionalPair>, PairsError> {
    if g.is_conditional() {
        return Err(PairsError::Conditional);
    }
    let mut out = Vec::new();
    for r in &g.rules {
        let frozen: BTreeSet<Var> = frozen_vars(&r.lhs, &g.mu).union(&frozen_vars(&r.rhs, &g.mu)).cloned().collect();
        let active = active_vars(&r.lhs, &g.mu);
        out.extend(variable_pairs(g, r, PairKind::Lhcp, |x| active.contains(x) && frozen.contains(x)));
    }
    Ok(dedup(out))
}

/// Extended conditional critical pairs according to the system class.
pub fn eccps(g: &Gtrs, b: Budget) -> Vec<ConditionalPair> {
    let mut out = proper_ccps(g, b);
    match classify(g) {
        SystemClass::Trs => {}
        SystemClass::CsTrs => out.extend(lhcps(g).unwrap_or_default()),
        _ => {
            out.extend(improper_ccps(g, b));
            let engine = Engine::new(g, b);
            out.extend(keep_feasible(&engine, cvps(g)));
        }
    }
    out
}

/// The least replacement map making every non-variable position of every
/// left-hand side active.
pub fn canonical_rmap(g: &Gtrs) -> Result<ReplacementMap, PairsError> {
    if g.is_conditional() {
        return Err(PairsError::Conditional);
    }
    let mut mu = ReplacementMap::bottom();
    for r in &g.rules {
        for (p, t) in r.lhs.subterms() {
            if t.is_var() {
                continue;
            }
            activate_path(&mut mu, &r.lhs, &p);
        }
    }
    Ok(mu)
}

fn activate_path(mu: &mut ReplacementMap, t: &Term, p: &Position) {
    let mut cur = t;
    for &i in &p.0 {
        if let Term::App(f, args) = cur {
            mu.activate(f, i);
            cur = &args[i - 1];
        }
    }
}

/// Critical pairs of an unconditional system with all arguments active.
pub fn critical_pairs(g: &Gtrs) -> Result<Vec<ConditionalPair>, PairsError> {
    if g.is_conditional() {
        return Err(PairsError::Conditional);
    }
    let top = ReplacementMap::top(&g.funcs);
    Ok(dedup(overlaps(g, &top).into_iter().map(|o| o.pair).collect()))
}

/// The least replacement map making every critical position active.
pub fn convective_rmap(g: &Gtrs) -> Result<ReplacementMap, PairsError> {
    if g.is_conditional() {
        return Err(PairsError::Conditional);
    }
    let top = ReplacementMap::top(&g.funcs);
    let mut mu = ReplacementMap::bottom();
    for o in overlaps(g, &top) {
        activate_path(&mut mu, &g.rules[o.outer].lhs, &o.pair.provenance.position);
    }
    Ok(mu)
}

/// Syntactic properties used by processor guards.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct SyntacticProfile {
    /// Every left-hand side is linear.
    pub left_linear: bool,
    /// Every left- and right-hand side is linear.
    pub linear: bool,
    /// Left-linear with only trivial critical pairs of the underlying rules.
    pub weakly_orthogonal: bool,
    /// Left-linear with no critical pairs at active positions and no LH(μ)-critical pairs.
    pub mu_orthogonal: bool,
    /// Left-linear with no overlaps of the conditional rules.
    pub orthogonal: bool,
    /// Left-linear with only trivial root overlaps of the conditional rules.
    pub almost_orthogonal: bool,
    /// Condition left-hand sides only use variables bound earlier.
    pub deterministic: bool,
    /// Deterministic on rules whose right-hand side has extra variables.
    pub properly_oriented: bool,
    /// Condition right-hand sides are fresh linear constructor terms or ground normal forms.
    pub right_stable: bool,
    /// Right-stable and oriented.
    pub almost_normal: bool,
    /// Shared variables of left-hand sides and condition right-hand sides are not used elsewhere.
    pub weakly_left_linear: bool,
    /// Variable levels never grow from left to right.
    pub level_decreasing: bool,
    /// Active variables of left-hand sides are never frozen.
    pub lhrv: bool,
    /// The largest rule type.
    pub max_rule_type: u8,
}

fn cond_sides(a: &Atom) -> Option<(&Term, &Term)> {
    match a.pred {
        Pred::Cond | Pred::Reach => Some((a.lhs(), a.rhs())),
        _ => None,
    }
}

/// True if every condition is a binary `≈` or `→*` atom.
pub fn has_equational_conditions(g: &Gtrs) -> bool {
    g.rules.iter().flat_map(|r| r.conds.iter()).all(|a| cond_sides(a).is_some())
}

fn is_deterministic_rule(r: &Rule) -> bool {
    let mut bound = r.lhs.vars();
    for a in &r.conds {
        let Some((s, t)) = cond_sides(a) else { return false };
        if !s.vars().is_subset(&bound) {
            return false;
        }
        t.collect_vars(&mut bound);
    }
    true
}

/// The level of each variable occurrence: the number of frozen arguments
/// traversed from the root; the maximum over the occurrences of `x`.
pub fn level(t: &Term, x: &str, mu: &ReplacementMap) -> Option<usize> {
    match t {
        Term::Var(y) => (&**y == x).then_some(0),
        Term::App(f, args) => args
            .iter()
            .enumerate()
            .filter_map(|(i, a)| {
                let extra = usize::from(!mu.is_active(f, i + 1));
                level(a, x, mu).map(|l| l + extra)
            })
            .max(),
    }
}

fn is_ground_normal_form(t: &Term, rules: &[Rule]) -> bool {
    t.is_ground() && t.subterms().iter().all(|(_, s)| rules.iter().all(|r| matches(&r.lhs, s).is_none()))
}

/// Computes all syntactic flags.
pub fn syntactic_profile(g: &Gtrs) -> SyntacticProfile {
    let rules = &g.rules;
    let defined = defined_symbols(g);
    let is_constructor_term = |t: &Term| t.symbols().iter().all(|f| !defined.contains(f));
    let left_linear = rules.iter().all(|r| r.lhs.is_linear());
    let linear = left_linear && rules.iter().all(|r| r.rhs.is_linear());
    let top = ReplacementMap::top(&g.funcs);
    let unconditional: Vec<Rule> = rules.iter().map(Rule::unconditional).collect();
    let underlying = Gtrs { rules: unconditional.clone(), clauses: Vec::new(), ..g.clone() };
    let weakly_orthogonal = left_linear && overlaps(&underlying, &top).iter().all(|o| o.pair.is_trivial());
    let cond_overlaps = overlaps(g, &top);
    let orthogonal = left_linear && cond_overlaps.is_empty();
    let almost_orthogonal =
        left_linear && cond_overlaps.iter().all(|o| o.pair.is_trivial() && o.pair.is_overlay());
    let mu_orthogonal = left_linear
        && !g.is_conditional()
        && overlaps(g, &g.mu).is_empty()
        && lhcps(g).map(|v| v.is_empty()).unwrap_or(false);
    let deterministic = has_equational_conditions(g) && rules.iter().all(is_deterministic_rule);
    let properly_oriented = has_equational_conditions(g)
        && rules.iter().all(|r| r.rhs.vars().is_subset(&r.lhs.vars()) || is_deterministic_rule(r));
    let right_stable = has_equational_conditions(g)
        && rules.iter().all(|r| {
            let mut seen = r.lhs.vars();
            r.conds.iter().all(|a| {
                let (s, t) = cond_sides(a).expect("checked");
                s.collect_vars(&mut seen);
                let tv = t.vars();
                let fresh = tv.is_disjoint(&seen);
                let shape = (t.is_linear() && is_constructor_term(t)) || is_ground_normal_form(t, &unconditional);
                seen.extend(tv);
                fresh && shape
            })
        });
    let almost_normal = right_stable && g.semantics() == Some(Semantics::Oriented);
    let weakly_left_linear = has_equational_conditions(g)
        && rules.iter().filter(|r| r.is_conditional()).all(|r| {
            let mut pool: Vec<Var> = Vec::new();
            collect_occurrences(&r.lhs, &mut pool);
            for a in &r.conds {
                if let Some((_, t)) = cond_sides(a) {
                    collect_occurrences(t, &mut pool);
                }
            }
            let mut used = r.rhs.vars();
            for a in &r.conds {
                if let Some((s, _)) = cond_sides(a) {
                    s.collect_vars(&mut used);
                }
            }
            pool.iter().filter(|x| pool.iter().filter(|y| y == x).count() > 1).all(|x| !used.contains(x))
        });
    let level_decreasing = rules.iter().all(|r| {
        r.rhs.vars().iter().all(|x| match (level(&r.rhs, x, &g.mu), level(&r.lhs, x, &g.mu)) {
            (Some(a), Some(b)) => a <= b,
            _ => false,
        })
    });
    let lhrv = rules.iter().all(|r| {
        let act = active_vars(&r.lhs, &g.mu);
        act.is_disjoint(&frozen_vars(&r.lhs, &g.mu)) && act.is_disjoint(&frozen_vars(&r.rhs, &g.mu))
    });
    SyntacticProfile {
        left_linear,
        linear,
        weakly_orthogonal,
        mu_orthogonal,
        orthogonal,
        almost_orthogonal,
        deterministic,
        properly_oriented,
        right_stable,
        almost_normal,
        weakly_left_linear,
        level_decreasing,
        lhrv,
        max_rule_type: rules.iter().map(rule_type).max().unwrap_or(1),
    }
}

fn collect_occurrences(t: &Term, out: &mut Vec<Var>) {
    match t {
        Term::Var(v) => out.push(v.clone()),
        Term::App(_, args) => args.iter().for_each(|a| collect_occurrences(a, out)),
    }
}
