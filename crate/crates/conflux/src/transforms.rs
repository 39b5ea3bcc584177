//! System-to-system transformations: simplification, inlining, the U and
//! U_conf unravelings, and modular decomposition of TRSs.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use petgraph::algo::{condensation, toposort};
use petgraph::graph::{DiGraph, NodeIndex};
use thiserror::Error;

use crate::oracles::feasibility::{feasible, FeasibilityQuery};
use crate::pairs::syntactic_profile;
use crate::rewrite::{Budget, Engine, TriBool};
use crate::system::{defined_symbols, Atom, Gtrs, HornClause, Pred, Rule, Semantics};
use crate::term::{frozen_vars, Substitution, Symbol, Term, Var};

/// Reasons a transformation does not apply.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TransformError {
    /// The system has conditional rules.
    #[error("the system is conditional")]
    Conditional,
    /// The system is not an oriented deterministic 3-CTRS with all arguments active.
    #[error("the system is not a deterministic 3-CTRS")]
    NotDeterministic,
}

/// How the two parts of a decomposition are combined.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, serde::Serialize)]
pub enum Combination {
    /// No shared symbols.
    Disjoint,
    /// Only constructor symbols are shared.
    ConstructorSharing,
    /// Shared defined symbols have all their rules in both parts.
    Composable,
}

impl fmt::Display for Combination {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Combination::Disjoint => write!(f, "disjoint"),
            Combination::ConstructorSharing => write!(f, "constructor-sharing"),
            Combination::Composable => write!(f, "composable"),
        }
    }
}

/// A split of a TRS into two modules.
#[derive(Debug, Clone)]
pub struct Decomposition {
    /// The first module.
    pub part1: Gtrs,
    /// The second module.
    pub part2: Gtrs,
    /// The strongest combination that holds.
    pub comb: Combination,
    /// Layer preservation of each module.
    pub layer_preserving: (bool, bool),
}

fn is_trivial_cond(a: &Atom, sem: Option<Semantics>) -> bool {
    sem.is_some() && a.pred == Pred::Cond && a.lhs() == a.rhs()
}

fn simplify_round(g: &Gtrs, b: Budget) -> Gtrs {
    let engine = Engine::new(g, b);
    let sem = g.semantics();
    let holds = |a: &Atom| a.is_ground() && engine.holds(a).is_yes();
    let mut rules = Vec::new();
    for r in &g.rules {
        if r.lhs == r.rhs {
            continue;
        }
        let conds: Vec<Atom> = r.conds.iter().filter(|a| !is_trivial_cond(a, sem)).cloned().collect();
        if !conds.is_empty() {
            let q = FeasibilityQuery::new(g, conds.clone());
            if engine.feasible(&q.conditions, &q.logic_vars()).0.is_no() {
                continue;
            }
        }
        let conds = conds.into_iter().filter(|a| !holds(a)).collect();
        rules.push(Rule { conds, ..r.clone() });
    }
    let clauses = g
        .clauses
        .iter()
        .map(|c| HornClause { head: c.head.clone(), body: c.body.iter().filter(|a| !holds(a)).cloned().collect() })
        .collect();
    let mut out = Gtrs { rules, clauses, ..g.clone() };
    out.refresh_signature();
    out.mu = g.mu.clone();
    out
}

/// Removes trivial rules, trivial conditions, infeasible rules and ground
/// conditions that hold, until nothing changes.
pub fn simplify(g: &Gtrs, b: Budget) -> Gtrs {
    let mut cur = g.clone();
    loop {
        let next = simplify_round(&cur, b);
        if next.rules == cur.rules && next.clauses == cur.clauses {
            return Gtrs { funcs: g.funcs.clone(), mu: g.mu.clone(), ..next };
        }
        cur = next;
    }
}

fn has_reachability_semantics(a: &Atom, sem: Option<Semantics>) -> bool {
    a.pred == Pred::Reach || (a.pred == Pred::Cond && sem == Some(Semantics::Oriented))
}

/// The first inlinable condition of an O-rule, as its index and variable.
fn inlinable(r: &Rule, g: &Gtrs) -> Option<(usize, Var)> {
    let sem = g.semantics();
    if !r.conds.iter().all(|a| has_reachability_semantics(a, sem)) {
        return None;
    }
    let mut frozen = frozen_vars(&r.rhs, &g.mu);
    for a in &r.conds {
        frozen.extend(frozen_vars(a.lhs(), &g.mu));
    }
    r.conds.iter().enumerate().find_map(|(i, a)| {
        let x = a.rhs().as_var()?;
        let mut blocked = r.lhs.vars();
        a.lhs().collect_vars(&mut blocked);
        for (j, other) in r.conds.iter().enumerate() {
            if j != i {
                other.rhs().collect_vars(&mut blocked);
            }
        }
        (!blocked.contains(x) && !frozen.contains(x)).then(|| (i, x.clone()))
    })
}

/// Inlines conditions `s ≈ x` of O-rules as long as possible.
pub fn inline(g: &Gtrs) -> Gtrs {
    let mut rules = g.rules.clone();
    for r in rules.iter_mut() {
        while let Some((i, x)) = inlinable(r, g) {
            let sigma = Substitution::from_pairs([(x, r.conds[i].lhs().clone())]);
            let conds = r.conds.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, a)| a.apply(&sigma)).collect();
            *r = Rule { label: r.label.clone(), lhs: r.lhs.clone(), rhs: sigma.apply(&r.rhs), conds };
        }
    }
    Gtrs { rules, ..g.clone() }
}

fn check_dctrs(g: &Gtrs) -> Result<(), TransformError> {
    let p = syntactic_profile(g);
    let sem_ok = g.semantics().is_none_or(|s| s == Semantics::Oriented)
        || g.rules.iter().flat_map(|r| &r.conds).all(|a| a.pred == Pred::Reach);
    if !p.deterministic || p.max_rule_type > 3 || !sem_ok || !g.mu_is_top() {
        return Err(TransformError::NotDeterministic);
    }
    Ok(())
}

/// Variables of `ℓ, t₁, ..., tₖ` in order of first occurrence.
fn accumulated(lhs: &Term, targets: &[&Term]) -> Vec<Var> {
    let mut out: Vec<Var> = Vec::new();
    for t in std::iter::once(lhs).chain(targets.iter().copied()) {
        for x in t.vars_ordered() {
            if !out.contains(&x) {
                out.push(x);
            }
        }
    }
    out
}

fn fresh_symbol(base: &str, arity: usize, taken: &mut BTreeSet<String>) -> Symbol {
    let mut name = base.to_string();
    while taken.contains(&name) {
        name.push('\'');
    }
    taken.insert(name.clone());
    Symbol::func(&name, arity)
}

fn u_term(sym: &Symbol, first: &Term, xs: &[Var]) -> Term {
    let mut args = vec![first.clone()];
    args.extend(xs.iter().map(|x| Term::Var(x.clone())));
    Term::app(sym.clone(), args)
}

/// Emits the unconditional rules of a conditional rule, asking `name_of`
/// for the U-symbol of each condition index.
fn unravel_rule(r: &Rule, mut name_of: impl FnMut(usize, usize) -> Symbol) -> Vec<Rule> {
    let n = r.conds.len();
    let targets: Vec<&Term> = r.conds.iter().map(Atom::rhs).collect();
    let xs: Vec<Vec<Var>> = (0..n).map(|i| accumulated(&r.lhs, &targets[..i])).collect();
    let syms: Vec<Symbol> = (0..n).map(|i| name_of(i, xs[i].len() + 1)).collect();
    let label = |k: usize| format!("{}.{}", r.label, k);
    let mut out = vec![Rule::plain(label(0), r.lhs.clone(), u_term(&syms[0], r.conds[0].lhs(), &xs[0]))];
    for i in 1..n {
        out.push(Rule::plain(
            label(i),
            u_term(&syms[i - 1], targets[i - 1], &xs[i - 1]),
            u_term(&syms[i], r.conds[i].lhs(), &xs[i]),
        ));
    }
    out.push(Rule::plain(label(n), u_term(&syms[n - 1], targets[n - 1], &xs[n - 1]), r.rhs.clone()));
    out
}

fn unraveled_system(g: &Gtrs, rules: Vec<Rule>) -> Gtrs {
    let mut out = Gtrs::trs(rules);
    out.funcs.extend(g.funcs.iter().cloned());
    out.mu = crate::term::ReplacementMap::top(&out.funcs);
    out
}

/// The unraveling U with one fresh symbol `U_label_i` per rule and condition.
pub fn unravel_u(g: &Gtrs) -> Result<Gtrs, TransformError> {
    check_dctrs(g)?;
    let mut taken: BTreeSet<String> = g.funcs.iter().map(|f| f.name().to_string()).collect();
    let mut rules = Vec::new();
    for r in &g.rules {
        if !r.is_conditional() {
            rules.push(r.clone());
            continue;
        }
        rules.extend(unravel_rule(r, |i, arity| fresh_symbol(&format!("U_{}_{}", r.label, i + 1), arity, &mut taken)));
    }
    Ok(unraveled_system(g, rules))
}

/// The key of the `i`-th U-symbol: `ℓ, s₁, t₁, ..., sᵢ` up to renaming.
fn prefix_key(r: &Rule, i: usize) -> String {
    let mut terms: Vec<&Term> = vec![&r.lhs];
    for a in &r.conds[..i] {
        terms.push(a.lhs());
        terms.push(a.rhs());
    }
    terms.push(r.conds[i].lhs());
    let map = crate::term::canonical_renaming(&terms);
    let sigma = Substitution::from_pairs(map.into_iter().map(|(k, v)| (k, Term::Var(v))));
    let parts: Vec<String> = terms.iter().map(|t| sigma.apply(t).to_string()).collect();
    parts.join(" | ")
}

/// The unraveling U_conf, where rules whose condition prefixes coincide up to
/// renaming share their U-symbols.
pub fn unravel_uconf(g: &Gtrs) -> Result<Gtrs, TransformError> {
    check_dctrs(g)?;
    let mut taken: BTreeSet<String> = g.funcs.iter().map(|f| f.name().to_string()).collect();
    let mut shared: BTreeMap<String, Symbol> = BTreeMap::new();
    let mut rules: Vec<Rule> = Vec::new();
    for r in &g.rules {
        if !r.is_conditional() {
            rules.push(r.clone());
            continue;
        }
        let emitted = unravel_rule(r, |i, arity| {
            let key = prefix_key(r, i);
            let k = shared.len() + 1;
            shared.entry(key).or_insert_with(|| fresh_symbol(&format!("Uc_{k}"), arity, &mut taken)).clone()
        });
        for e in emitted {
            if !rules.iter().any(|q| q.is_variant_of(&e)) {
                rules.push(e);
            }
        }
    }
    Ok(unraveled_system(g, rules))
}

/// A sufficient check that U preserves irreducibility: every condition with
/// its left-hand side variables replaced by constants is feasible.
pub fn u_preserves_irreducibility(g: &Gtrs, b: Budget) -> Result<TriBool, TransformError> {
    check_dctrs(g)?;
    for r in g.rules.iter().filter(|r| r.is_conditional()) {
        let lv = r.lhs.vars();
        let conds: Vec<Atom> = r.conds.iter().map(|a| a.map_terms(|t| t.ground_vars(&lv))).collect();
        if !feasible(&FeasibilityQuery::new(g, conds), b).answer.is_yes() {
            return Ok(TriBool::Unknown);
        }
    }
    Ok(TriBool::Yes)
}

fn rule_symbols(rules: &[Rule]) -> BTreeSet<Symbol> {
    let mut out = BTreeSet::new();
    for r in rules {
        r.lhs.collect_symbols(&mut out);
        r.rhs.collect_symbols(&mut out);
    }
    out
}

/// Classes of rules connected by sharing a symbol accepted by `link`.
fn components(rules: &[Rule], link: impl Fn(&Symbol) -> bool) -> Vec<Vec<usize>> {
    let syms: Vec<BTreeSet<Symbol>> =
        rules.iter().map(|r| rule_symbols(std::slice::from_ref(r)).into_iter().filter(|f| link(f)).collect()).collect();
    let mut comp: Vec<usize> = (0..rules.len()).collect();
    fn find(comp: &mut [usize], i: usize) -> usize {
        let mut i = i;
        while comp[i] != i {
            comp[i] = comp[comp[i]];
            i = comp[i];
        }
        i
    }
    for i in 0..rules.len() {
        for j in 0..i {
            if !syms[i].is_disjoint(&syms[j]) {
                let (a, b) = (find(&mut comp, i), find(&mut comp, j));
                comp[a.max(b)] = a.min(b);
            }
        }
    }
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for i in 0..rules.len() {
        let root = find(&mut comp, i);
        groups.entry(root).or_default().push(i);
    }
    groups.into_values().collect()
}

/// Splits the smallest class off the others.
fn split_smallest(groups: &[Vec<usize>]) -> (BTreeSet<usize>, BTreeSet<usize>) {
    let small = groups.iter().enumerate().min_by_key(|(k, grp)| (grp.len(), *k)).map(|(k, _)| k).expect("classes");
    let first: BTreeSet<usize> = groups[small].iter().copied().collect();
    let rest = groups.iter().enumerate().filter(|(k, _)| *k != small).flat_map(|(_, grp)| grp.iter().copied()).collect();
    (first, rest)
}

/// A composable split from two disjoint families of maximal defined symbols,
/// each closed under the symbols their rules use.
fn composable_split(rules: &[Rule], defined: &BTreeSet<Symbol>) -> Option<(BTreeSet<usize>, BTreeSet<usize>)> {
    let mut graph: DiGraph<Symbol, ()> = DiGraph::new();
    let nodes: BTreeMap<Symbol, NodeIndex> = defined.iter().map(|f| (f.clone(), graph.add_node(f.clone()))).collect();
    for r in rules {
        let from = nodes[r.lhs.root().expect("lhs is not a variable")];
        for f in rule_symbols(std::slice::from_ref(r)) {
            if let Some(&to) = nodes.get(&f) {
                if to != from {
                    graph.update_edge(from, to, ());
                }
            }
        }
    }
    let closure = |start: NodeIndex| -> BTreeSet<Symbol> {
        let mut dfs = petgraph::visit::Dfs::new(&graph, start);
        let mut out = BTreeSet::new();
        while let Some(n) = dfs.next(&graph) {
            out.insert(graph[n].clone());
        }
        out
    };
    let cond = condensation(graph.clone(), true);
    let order = toposort(&cond, None).ok()?;
    let tops: Vec<NodeIndex> = order
        .into_iter()
        .filter(|&n| cond.neighbors_directed(n, petgraph::Direction::Incoming).next().is_none())
        .collect();
    if tops.len() < 2 {
        return None;
    }
    let rep = |n: NodeIndex| nodes[&cond[n][0]];
    let mut firsts: Vec<BTreeSet<Symbol>> = tops.iter().map(|&n| closure(rep(n))).collect();
    firsts.sort_by_key(|s| s.len());
    let a = firsts[0].clone();
    let b: BTreeSet<Symbol> = firsts[1..].iter().flatten().cloned().collect();
    let pick = |s: &BTreeSet<Symbol>| -> BTreeSet<usize> {
        rules.iter().enumerate().filter(|(_, r)| s.contains(r.lhs.root().expect("lhs"))).map(|(i, _)| i).collect()
    };
    Some((pick(&a), pick(&b)))
}

fn layer_preserving_sharing(rules: &[Rule], shared: &BTreeSet<Symbol>) -> bool {
    rules.iter().all(|r| r.rhs.root().is_some_and(|f| !shared.contains(f)))
}

fn layer_preserving_composable(rules: &[Rule], shared: &BTreeSet<Symbol>) -> bool {
    let alien = |t: &Term| t.root().is_some_and(|f| !shared.contains(f));
    rules.iter().all(|r| !alien(&r.lhs) || alien(&r.rhs))
}

/// Splits a TRS into two modules under the strongest combination available.
pub fn decompose_modular(g: &Gtrs) -> Result<Option<Decomposition>, TransformError> {
    if g.is_conditional() {
        return Err(TransformError::Conditional);
    }
    if g.rules.len() < 2 {
        return Ok(None);
    }
    let defined = defined_symbols(g);
    let disjoint = components(&g.rules, |_| true);
    let sharing = components(&g.rules, |f| defined.contains(f));
    let (comb, (i1, i2)) = if disjoint.len() >= 2 {
        (Combination::Disjoint, split_smallest(&disjoint))
    } else if sharing.len() >= 2 {
        (Combination::ConstructorSharing, split_smallest(&sharing))
    } else {
        match composable_split(&g.rules, &defined) {
            Some(split) => (Combination::Composable, split),
            None => return Ok(None),
        }
    };
    let take = |ix: &BTreeSet<usize>| -> Vec<Rule> { ix.iter().map(|&i| g.rules[i].clone()).collect() };
    let (r1, r2) = (take(&i1), take(&i2));
    let shared: BTreeSet<Symbol> = rule_symbols(&r1).intersection(&rule_symbols(&r2)).cloned().collect();
    let layer_preserving = match comb {
        Combination::Composable => {
            (layer_preserving_composable(&r1, &shared), layer_preserving_composable(&r2, &shared))
        }
        _ => (layer_preserving_sharing(&r1, &shared), layer_preserving_sharing(&r2, &shared)),
    };
    let part = |rules: Vec<Rule>| {
        let mut p = Gtrs::new(rules, g.mu.clone(), Vec::new(), BTreeSet::new());
        p.mu = g.mu.restrict(&p.funcs);
        p
    };
    Ok(Some(Decomposition { part1: part(r1), part2: part(r2), comb, layer_preserving }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pairs::critical_pairs;
    use crate::system::v;

    fn t(name: &str, args: Vec<Term>) -> Term {
        Term::func(name, args)
    }
    fn c(name: &str) -> Term {
        Term::constant(name)
    }
    fn rendered(g: &Gtrs) -> Vec<String> {
        g.rules.iter().map(|r| r.to_string()).collect()
    }

    fn cops409() -> Gtrs {
        let s = |x: Term| t("s", vec![x]);
        let fxy = t("f", vec![v("x"), v("y")]);
        Gtrs::ctrs(
            vec![
                Rule::plain("1", c("b"), c("b")),
                Rule::plain("2", t("g", vec![s(v("x"))]), v("x")),
                Rule::plain("3", t("h", vec![s(v("x"))]), v("x")),
                Rule::new(
                    "4",
                    fxy.clone(),
                    t("g", vec![s(v("x"))]),
                    vec![Atom::cond(t("c", vec![t("g", vec![v("x")])]), t("c", vec![c("a")]))],
                ),
                Rule::new(
                    "5",
                    fxy,
                    t("h", vec![s(v("x"))]),
                    vec![Atom::cond(t("c", vec![t("h", vec![v("x")])]), t("c", vec![c("a")]))],
                ),
            ],
            Semantics::Oriented,
        )
    }

    fn ex_tr_u() -> Gtrs {
        Gtrs::ctrs(
            vec![
                Rule::new("1", c("a"), c("b"), vec![Atom::cond(c("a"), c("b"))]),
                Rule::new("2", c("a"), c("b"), vec![Atom::cond(c("a"), c("c"))]),
            ],
            Semantics::Oriented,
        )
    }

    fn ex_uconf_fails() -> Gtrs {
        Gtrs::ctrs(
            vec![
                Rule::plain("1", t("g", vec![v("x")]), v("x")),
                Rule::new("2", t("f", vec![v("x")]), v("x"), vec![Atom::cond(t("g", vec![v("x")]), v("x"))]),
            ],
            Semantics::Oriented,
        )
    }

    fn ex4() -> Gtrs {
        let cons = |x: Term, y: Term| t("cons", vec![x, y]);
        let from = |x: Term| t("from", vec![x]);
        Gtrs::trs(vec![
            Rule::plain("1", c("nats"), from(c("0"))),
            Rule::plain(
                "2",
                t("inc", vec![cons(v("x"), v("y"))]),
                cons(t("s", vec![v("x")]), t("inc", vec![v("y")])),
            ),
            Rule::plain("3", t("hd", vec![cons(v("x"), v("y"))]), v("x")),
            Rule::plain("4", t("tl", vec![cons(v("x"), v("y"))]), v("y")),
            Rule::plain("5", from(v("x")), cons(v("x"), from(t("s", vec![v("x")])))),
            Rule::plain(
                "6",
                t("inc", vec![t("tl", vec![from(v("x"))])]),
                t("tl", vec![t("inc", vec![from(v("x"))])]),
            ),
        ])
    }

    #[test]
    fn simplify_examples() {
        let b = Budget::default();
        let g = simplify(&cops409(), b);
        assert_eq!(g.rules.iter().map(|r| r.label.as_str()).collect::<Vec<_>>(), ["2", "3", "4", "5"]);
        assert!(simplify(&ex_tr_u(), b).rules.is_empty());
        let again = simplify(&g, b);
        assert_eq!(again.rules, g.rules);
    }

    #[test]
    fn simplify_drops_holding_ground_conditions() {
        let g = Gtrs::ctrs(
            vec![
                Rule::plain("1", c("a"), c("b")),
                Rule::new("2", t("f", vec![v("x")]), v("x"), vec![Atom::cond(c("a"), c("b")), Atom::cond(v("x"), v("x"))]),
            ],
            Semantics::Oriented,
        );
        assert_eq!(rendered(&simplify(&g, Budget::default())), ["a → b", "f(x) → x"]);
    }

    #[test]
    fn inline_examples() {
        let hindley = Gtrs::ctrs(
            vec![
                Rule::plain("1", c("b"), c("a")),
                Rule::new("2", c("b"), v("x"), vec![Atom::cond(c("c"), v("x"))]),
                Rule::plain("3", c("c"), c("b")),
                Rule::plain("4", c("c"), c("d")),
            ],
            Semantics::Oriented,
        );
        assert_eq!(rendered(&inline(&hindley))[1], "b → c");
        let cops387 = Gtrs::ctrs(
            vec![Rule::new(
                "2",
                t("f", vec![t("g", vec![v("x")])]),
                v("x"),
                vec![Atom::cond(v("x"), t("s", vec![c("0")]))],
            )],
            Semantics::Oriented,
        );
        assert_eq!(inline(&cops387).rules, cops387.rules);
        let fy = Gtrs::ctrs(
            vec![Rule::new("1", t("f", vec![v("x")]), v("y"), vec![Atom::cond(t("g", vec![v("x")]), v("y"))])],
            Semantics::Oriented,
        );
        assert_eq!(rendered(&inline(&fy)), ["f(x) → g(x)"]);
    }

    #[test]
    fn inline_respects_variable_restriction() {
        let in_lhs = Gtrs::ctrs(
            vec![Rule::new("1", t("f", vec![v("x")]), v("x"), vec![Atom::cond(c("a"), v("x"))])],
            Semantics::Oriented,
        );
        assert_eq!(inline(&in_lhs).rules, in_lhs.rules);
        let joined = Gtrs::ctrs(
            vec![Rule::new("1", t("f", vec![v("x")]), v("y"), vec![Atom::cond(t("g", vec![v("x")]), v("y"))])],
            Semantics::Join,
        );
        assert_eq!(inline(&joined).rules, joined.rules);
        let twice = Gtrs::ctrs(
            vec![Rule::new(
                "1",
                t("f", vec![v("x")]),
                v("y"),
                vec![Atom::cond(t("g", vec![v("x")]), v("y")), Atom::cond(c("a"), v("y"))],
            )],
            Semantics::Oriented,
        );
        assert_eq!(inline(&twice).rules, twice.rules);
    }

    #[test]
    fn unravel_u_examples() {
        let u = unravel_u(&ex_tr_u()).unwrap();
        assert_eq!(rendered(&u), ["a → U_1_1(a)", "U_1_1(b) → b", "a → U_2_1(a)", "U_2_1(c) → b"]);
        let names: BTreeSet<&str> = u.funcs.iter().map(|f| f.name()).collect();
        assert_eq!(names, ["U_1_1", "U_2_1", "a", "b", "c"].into_iter().collect());
        let u2 = unravel_u(&ex_uconf_fails()).unwrap();
        assert_eq!(rendered(&u2), ["g(x) → x", "f(x) → U_2_1(g(x),x)", "U_2_1(x,x) → x"]);
        let plain = ex4();
        assert_eq!(unravel_u(&plain).unwrap().rules, plain.rules);
    }

    #[test]
    fn unravel_uconf_examples() {
        let u = unravel_uconf(&ex_tr_u()).unwrap();
        assert_eq!(rendered(&u), ["a → Uc_1(a)", "Uc_1(b) → b", "Uc_1(c) → b"]);
        let distinct = Gtrs::ctrs(
            vec![
                Rule::new("1", c("a"), c("b"), vec![Atom::cond(c("b"), c("a"))]),
                Rule::new("2", c("a"), c("b"), vec![Atom::cond(c("c"), c("a"))]),
            ],
            Semantics::Oriented,
        );
        assert_eq!(rendered(&unravel_uconf(&distinct).unwrap()), ["a → Uc_1(b)", "Uc_1(a) → b", "a → Uc_2(c)", "Uc_2(a) → b"]);
        assert_eq!(unravel_uconf(&ex4()).unwrap().rules, ex4().rules);
    }

    #[test]
    fn unravel_shares_up_to_renaming() {
        let g = Gtrs::ctrs(
            vec![
                Rule::new("1", t("f", vec![v("x")]), c("a"), vec![Atom::cond(t("g", vec![v("x")]), c("b"))]),
                Rule::new("2", t("f", vec![v("y")]), c("c"), vec![Atom::cond(t("g", vec![v("y")]), c("d"))]),
            ],
            Semantics::Oriented,
        );
        let u = unravel_uconf(&g).unwrap();
        assert_eq!(rendered(&u), ["f(x) → Uc_1(g(x),x)", "Uc_1(b,x) → a", "Uc_1(d,y) → c"]);
    }

    #[test]
    fn unravel_rejects_non_deterministic() {
        let g = Gtrs::ctrs(
            vec![Rule::new("1", c("a"), c("b"), vec![Atom::cond(v("x"), c("b"))])],
            Semantics::Oriented,
        );
        assert_eq!(unravel_u(&g).unwrap_err(), TransformError::NotDeterministic);
        let type4 = Gtrs::ctrs(vec![Rule::new("1", c("a"), v("y"), vec![Atom::cond(c("a"), c("b"))])], Semantics::Oriented);
        assert_eq!(unravel_uconf(&type4).unwrap_err(), TransformError::NotDeterministic);
        let join = Gtrs::ctrs(vec![Rule::new("1", c("a"), c("b"), vec![Atom::cond(c("a"), c("b"))])], Semantics::Join);
        assert!(unravel_u(&join).is_err());
    }

    #[test]
    fn irreducibility_check() {
        let b = Budget::default();
        assert_eq!(u_preserves_irreducibility(&ex_uconf_fails(), b), Ok(TriBool::Yes));
        assert_eq!(u_preserves_irreducibility(&ex_tr_u(), b), Ok(TriBool::Unknown));
        assert_eq!(u_preserves_irreducibility(&ex4(), b), Ok(TriBool::Yes));
    }

    #[test]
    fn decomposition_examples() {
        let d = decompose_modular(&ex4()).unwrap().unwrap();
        assert_eq!(d.comb, Combination::ConstructorSharing);
        assert_eq!(rendered(&d.part1), ["hd(cons(x,y)) → x"]);
        assert_eq!(d.part2.rules.len(), 5);
        assert_eq!(d.layer_preserving, (false, false));
        let disj = Gtrs::trs(vec![Rule::plain("1", c("a"), c("b")), Rule::plain("2", t("f", vec![v("x")]), v("x"))]);
        let d = decompose_modular(&disj).unwrap().unwrap();
        assert_eq!(d.comb, Combination::Disjoint);
        assert_eq!(d.part1.rules.len() + d.part2.rules.len(), 2);
        let single = Gtrs::trs(vec![Rule::plain("1", c("a"), c("b"))]);
        assert!(decompose_modular(&single).unwrap().is_none());
        assert_eq!(decompose_modular(&ex_tr_u()).unwrap_err(), TransformError::Conditional);
    }

    #[test]
    fn composable_split_keeps_shared_rules() {
        let g = Gtrs::trs(vec![
            Rule::plain("1", t("f", vec![v("x")]), t("h", vec![v("x")])),
            Rule::plain("2", t("g", vec![v("x")]), t("h", vec![v("x")])),
            Rule::plain("3", t("h", vec![c("a")]), c("b")),
        ]);
        let d = decompose_modular(&g).unwrap().unwrap();
        assert_eq!(d.comb, Combination::Composable);
        assert_eq!(rendered(&d.part1), ["f(x) → h(x)", "h(a) → b"]);
        assert_eq!(rendered(&d.part2), ["g(x) → h(x)", "h(a) → b"]);
        let whole: BTreeSet<String> = rendered(&g).into_iter().collect();
        let union: BTreeSet<String> = rendered(&d.part1).into_iter().chain(rendered(&d.part2)).collect();
        assert_eq!(whole, union);
        let cps = |h: &Gtrs| -> BTreeSet<String> {
            critical_pairs(h).unwrap().iter().map(|p| p.canonical_key()).collect()
        };
        let parts: BTreeSet<String> = cps(&d.part1).union(&cps(&d.part2)).cloned().collect();
        assert_eq!(cps(&g), parts);
    }
}
