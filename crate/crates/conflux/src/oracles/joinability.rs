//! Joinability and strong joinability of terms and conditional pairs.

use std::collections::BTreeSet;

use crate::oracles::feasibility::feasible_with;
use crate::pairs::{ConditionalPair, PairKind};
use crate::rewrite::{Budget, Engine, TriBool};
use crate::system::{atoms_vars, Atom, Gtrs};
use crate::term::{Substitution, Term, Var};

/// The reserved name of the common reduct in joinability encodings.
pub const JOIN_VAR: &str = "⋄z";

/// Feasibility witnesses tried as instantiating substitutions.
const MAX_WITNESSES: usize = 16;

/// A joinability answer with the branch that produced it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JoinResult {
    /// The tri-state answer.
    pub answer: TriBool,
    /// A short description of the evidence.
    pub reason: String,
}

impl JoinResult {
    fn new(answer: TriBool, reason: impl Into<String>) -> Self {
        JoinResult { answer, reason: reason.into() }
    }
}

/// Decides whether `s` and `t` have a common reduct, after replacing
/// variables by fresh constants.
pub fn joinable_terms(g: &Gtrs, s: &Term, t: &Term, b: Budget) -> TriBool {
    let engine = Engine::new(g, b);
    joinable_terms_with(&engine, s, t)
}

fn joinable_terms_with(engine: &Engine, s: &Term, t: &Term) -> TriBool {
    if s == t {
        return TriBool::Yes;
    }
    engine.joinable(&s.ground_down(), &t.ground_down())
}

/// Decides joinability of a conditional pair.
pub fn joinable_pair(g: &Gtrs, pair: &ConditionalPair, b: Budget) -> TriBool {
    joinable_pair_explained(g, pair, b).answer
}

fn grounded(sigma: &Substitution, t: &Term) -> Term {
    sigma.apply(t).ground_down()
}

/// Decides joinability of a conditional pair and reports the evidence.
pub fn joinable_pair_explained(g: &Gtrs, pair: &ConditionalPair, b: Budget) -> JoinResult {
    let engine = Engine::new(g, b);
    if pair.is_trivial() {
        return JoinResult::new(TriBool::Yes, "trivial pair");
    }
    if pair.conds.is_empty() {
        return match joinable_terms_with(&engine, &pair.left, &pair.right) {
            TriBool::Yes => JoinResult::new(TriBool::Yes, "common reduct found"),
            TriBool::No => JoinResult::new(TriBool::No, "reduct sets are complete and disjoint"),
            TriBool::Unknown => JoinResult::new(TriBool::Unknown, "reduct search truncated"),
        };
    }
    let cvars = atoms_vars(&pair.conds);
    let feas = feasible_with(&engine, &pair.conds, &cvars);
    if feas.answer.is_no() {
        return JoinResult::new(TriBool::Yes, "infeasible conditions");
    }
    let sides = joinable_terms_with(&engine, &pair.left, &pair.right);
    if sides.is_yes() {
        return JoinResult::new(TriBool::Yes, "grounded sides have a common reduct");
    }
    if cvars.is_disjoint(&pair.side_vars()) {
        return match (feas.answer, sides) {
            (TriBool::Yes, TriBool::No) => {
                JoinResult::new(TriBool::No, "feasible conditions unrelated to non-joinable sides")
            }
            _ => JoinResult::new(TriBool::Unknown, "undecided"),
        };
    }
    let mut witnesses: Vec<Substitution> = feas.witness.iter().cloned().collect();
    witnesses.extend(engine.solve(&pair.conds, &cvars).subs.into_iter().take(MAX_WITNESSES));
    for (name, sigma) in candidate_substitutions(g, pair, &witnesses) {
        let conds: Vec<Atom> = pair.conds.iter().map(|a| a.map_terms(|t| grounded(&sigma, t))).collect();
        if !engine.solve(&conds, &BTreeSet::new()).status().is_yes() {
            continue;
        }
        let s = grounded(&sigma, &pair.left);
        let t = grounded(&sigma, &pair.right);
        if engine.joinable(&s, &t).is_no() {
            return JoinResult::new(TriBool::No, format!("{name}: instance {s}, {t} is feasible and not joinable"));
        }
    }
    if feas.answer.is_yes() {
        let z = Term::Var(Var::from(JOIN_VAR));
        let mut query = pair.conds.clone();
        query.push(Atom::reach(pair.left.clone(), z.clone()));
        query.push(Atom::reach(pair.right.clone(), z));
        let mut logic = pair.vars();
        logic.insert(Var::from(JOIN_VAR));
        if engine.solve(&query, &logic).status().is_no() {
            return JoinResult::new(TriBool::No, "conditions feasible but joined conditions infeasible");
        }
    }
    JoinResult::new(TriBool::Unknown, "undecided")
}

fn candidate_substitutions(
    g: &Gtrs,
    pair: &ConditionalPair,
    witnesses: &[Substitution],
) -> Vec<(&'static str, Substitution)> {
    let mut out = vec![("H1", Substitution::new())];
    if let (PairKind::Cvp, Some(x)) = (pair.provenance.kind, pair.provenance.variable.as_ref()) {
        if let Some(Atom { args, .. }) = pair.conds.first() {
            if let Some(xp) = args.get(1).and_then(Term::as_var) {
                for r in g.rules.iter().filter(|r| !r.is_conditional()) {
                    out.push((
                        "H2",
                        Substitution::from_pairs([
                            (x.clone(), r.lhs.ground_down()),
                            (xp.clone(), r.rhs.ground_down()),
                        ]),
                    ));
                }
            }
        }
    }
    for w in witnesses {
        if !out.iter().any(|(_, s)| s == w) {
            out.push(("H3", w.clone()));
        }
    }
    out
}

fn step_or_equal(engine: &Engine, t: &Term) -> crate::rewrite::TermSet {
    let mut s = engine.one_step(t);
    s.terms.insert(t.clone());
    s
}

/// Decides strong joinability: `s →= u ←* t` and `s →* v ←= t`.
pub fn strongly_joinable_pair(g: &Gtrs, pair: &ConditionalPair, b: Budget) -> TriBool {
    if pair.is_trivial() {
        return TriBool::Yes;
    }
    let engine = Engine::new(g, b);
    if !pair.conds.is_empty() && feasible_with(&engine, &pair.conds, &atoms_vars(&pair.conds)).answer.is_no() {
        return TriBool::Yes;
    }
    let s = pair.left.ground_down();
    let t = pair.right.ground_down();
    let (s1, t1) = (step_or_equal(&engine, &s), step_or_equal(&engine, &t));
    let (ss, ts) = (engine.successors(&s), engine.successors(&t));
    let left = s1.terms.intersection(&ts.terms).next().is_some();
    let right = ss.terms.intersection(&t1.terms).next().is_some();
    if left && right {
        return TriBool::Yes;
    }
    let complete = !(s1.truncated || t1.truncated || ss.truncated || ts.truncated);
    if complete && pair.conds.is_empty() {
        TriBool::No
    } else {
        TriBool::Unknown
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pairs::{eccps, proper_ccps};
    use crate::system::{v, Rule, Semantics};

    fn t(name: &str, args: Vec<Term>) -> Term {
        Term::func(name, args)
    }
    fn c(name: &str) -> Term {
        Term::constant(name)
    }

    fn cops387() -> Gtrs {
        let s = |x: Term| t("s", vec![x]);
        let g = |x: Term| t("g", vec![x]);
        Gtrs::ctrs(
            vec![
                Rule::plain("1", g(s(v("x"))), g(v("x"))),
                Rule::new("2", t("f", vec![g(v("x"))]), v("x"), vec![Atom::cond(v("x"), s(c("0")))]),
            ],
            Semantics::Oriented,
        )
    }

    fn cops409_simplified() -> Gtrs {
        let s = |x: Term| t("s", vec![x]);
        let cgx = Atom::cond(t("c", vec![t("g", vec![v("x")])]), t("c", vec![c("a")]));
        let chx = Atom::cond(t("c", vec![t("h", vec![v("x")])]), t("c", vec![c("a")]));
        let fxy = t("f", vec![v("x"), v("y")]);
        Gtrs::ctrs(
            vec![
                Rule::plain("2", t("g", vec![s(v("x"))]), v("x")),
                Rule::plain("3", t("h", vec![s(v("x"))]), v("x")),
                Rule::new("4", fxy.clone(), t("g", vec![s(v("x"))]), vec![cgx]),
                Rule::new("5", fxy, t("h", vec![s(v("x"))]), vec![chx]),
            ],
            Semantics::Oriented,
        )
    }

    #[test]
    fn term_joinability() {
        let g = cops387();
        let b = Budget::default();
        let fg0 = t("f", vec![t("g", vec![c("0")])]);
        let s0 = t("s", vec![c("0")]);
        assert_eq!(joinable_terms(&g, &fg0, &s0, b), TriBool::No);
        assert_eq!(joinable_terms(&g, &s0, &fg0, b), TriBool::No);
        assert_eq!(joinable_terms(&g, &s0, &s0, b), TriBool::Yes);
        let g409 = cops409_simplified();
        let hs = t("h", vec![t("s", vec![v("x")])]);
        let gs = t("g", vec![t("s", vec![v("x")])]);
        assert_eq!(joinable_terms(&g409, &hs, &gs, b), TriBool::Yes);
    }

    #[test]
    fn pair_cascade() {
        let g = cops387();
        let b = Budget::default();
        let pairs = eccps(&g, b);
        let p5 = pairs.iter().find(|p| p.provenance.kind == PairKind::ProperCcp).unwrap();
        let r = joinable_pair_explained(&g, p5, b);
        assert_eq!(r.answer, TriBool::No, "{}", r.reason);
        let g409 = cops409_simplified();
        let p25 = &proper_ccps(&g409, b)[0];
        assert_eq!(joinable_pair(&g409, p25, b), TriBool::Yes);
        let trivial = ConditionalPair { right: p5.left.clone(), ..p5.clone() };
        assert_eq!(joinable_pair(&g, &trivial, b), TriBool::Yes);
    }

    #[test]
    fn strong_joinability() {
        let b = Budget::default();
        let g = Gtrs::trs(vec![Rule::plain("1", c("c"), c("a")), Rule::plain("2", c("c"), c("b"))]);
        let ab = ConditionalPair::plain(c("a"), c("b"), PairKind::ProperCcp);
        assert_eq!(strongly_joinable_pair(&g, &ab, b), TriBool::No);
        let aa = ConditionalPair::plain(c("a"), c("a"), PairKind::ProperCcp);
        assert_eq!(strongly_joinable_pair(&g, &aa, b), TriBool::Yes);
        let g2 = Gtrs::trs(vec![Rule::plain("1", c("b"), c("d")), Rule::plain("2", c("c"), c("d"))]);
        let bc = ConditionalPair::plain(c("b"), c("c"), PairKind::ProperCcp);
        assert_eq!(strongly_joinable_pair(&g2, &bc, b), TriBool::Yes);
    }
}
