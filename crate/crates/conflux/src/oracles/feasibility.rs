//! Bounded feasibility of condition sequences.

use std::collections::BTreeSet;

use crate::rewrite::{Budget, Engine, TriBool};
use crate::system::{atoms_vars, constructors, Atom, Gtrs};
use crate::term::{Substitution, Symbol, Term, Var};

/// A feasibility question: is there a substitution satisfying every atom?
#[derive(Debug, Clone)]
pub struct FeasibilityQuery<'a> {
    /// The system whose theory is used.
    pub system: &'a Gtrs,
    /// The condition sequence.
    pub conditions: Vec<Atom>,
    /// Additional existentially quantified variables.
    pub fresh_vars: BTreeSet<Var>,
}

impl<'a> FeasibilityQuery<'a> {
    /// A query over the variables of the conditions.
    pub fn new(system: &'a Gtrs, conditions: Vec<Atom>) -> Self {
        FeasibilityQuery { system, conditions, fresh_vars: BTreeSet::new() }
    }

    /// Every existentially quantified variable.
    pub fn logic_vars(&self) -> BTreeSet<Var> {
        let mut out = atoms_vars(&self.conditions);
        out.extend(self.fresh_vars.iter().cloned());
        out
    }
}

/// The answer to a feasibility query.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FeasibilityResult {
    /// The tri-state answer.
    pub answer: TriBool,
    /// A satisfying substitution when the answer is Yes.
    pub witness: Option<Substitution>,
}

const ENUMERATION_DEPTH: usize = 2;
const ENUMERATION_TERMS: usize = 24;
const ENUMERATION_TRIALS: usize = 200;

/// Decides a query within the budget.
pub fn feasible(q: &FeasibilityQuery, b: Budget) -> FeasibilityResult {
    let engine = Engine::new(q.system, b);
    feasible_with(&engine, &q.conditions, &q.logic_vars())
}

/// Decides feasibility with an existing engine.
pub fn feasible_with(engine: &Engine, conds: &[Atom], logic: &BTreeSet<Var>) -> FeasibilityResult {
    if conds.is_empty() {
        return FeasibilityResult { answer: TriBool::Yes, witness: Some(Substitution::new()) };
    }
    let (answer, witness) = engine.feasible(conds, logic);
    if answer != TriBool::Unknown {
        return FeasibilityResult { answer, witness: witness.map(|w| w.restrict(logic)) };
    }
    match enumerate_witness(engine, conds, logic) {
        Some(w) => FeasibilityResult { answer: TriBool::Yes, witness: Some(w) },
        None => FeasibilityResult { answer: TriBool::Unknown, witness: None },
    }
}

/// Ground constructor terms in order of increasing depth, ties broken by
/// symbol order.
pub fn constructor_terms(g: &Gtrs, depth: usize, cap: usize) -> Vec<Term> {
    let cons: Vec<Symbol> = constructors(g).into_iter().collect();
    let mut out: Vec<Term> = Vec::new();
    let mut seen = BTreeSet::new();
    for _ in 0..=depth {
        let mut next = out.clone();
        for f in &cons {
            for args in tuples(&out, f.arity(), cap) {
                let t = Term::app(f.clone(), args);
                if seen.insert(t.clone()) {
                    next.push(t);
                }
            }
        }
        out = next;
        if out.len() >= cap {
            out.truncate(cap);
            break;
        }
    }
    out
}

fn tuples(pool: &[Term], n: usize, cap: usize) -> Vec<Vec<Term>> {
    let mut acc = vec![Vec::new()];
    for _ in 0..n {
        let mut next = Vec::new();
        for prefix in &acc {
            for t in pool {
                let mut p = prefix.clone();
                p.push(t.clone());
                next.push(p);
                if next.len() >= cap {
                    break;
                }
            }
        }
        acc = next;
    }
    acc
}

fn enumerate_witness(engine: &Engine, conds: &[Atom], logic: &BTreeSet<Var>) -> Option<Substitution> {
    let vars: Vec<Var> = atoms_vars(conds).intersection(logic).cloned().collect();
    if vars.is_empty() || vars.len() > 2 {
        return None;
    }
    let pool = constructor_terms(engine.system(), ENUMERATION_DEPTH, ENUMERATION_TERMS);
    let none = BTreeSet::new();
    for combo in tuples(&pool, vars.len(), ENUMERATION_TRIALS) {
        let sigma = Substitution::from_pairs(vars.iter().cloned().zip(combo));
        let inst: Vec<Atom> = conds.iter().map(|a| a.apply(&sigma)).collect();
        if engine.solve(&inst, &none).status().is_yes() {
            return Some(sigma);
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::system::{v, Rule, Semantics};

    fn t(name: &str, args: Vec<Term>) -> Term {
        Term::func(name, args)
    }

    fn cops387() -> Gtrs {
        let s = |x: Term| t("s", vec![x]);
        let g = |x: Term| t("g", vec![x]);
        Gtrs::ctrs(
            vec![
                Rule::plain("1", g(s(v("x"))), g(v("x"))),
                Rule::new("2", t("f", vec![g(v("x"))]), v("x"), vec![Atom::cond(v("x"), s(Term::constant("0")))]),
            ],
            Semantics::Oriented,
        )
    }

    #[test]
    fn reference_queries() {
        let g = cops387();
        let s0 = t("s", vec![Term::constant("0")]);
        let sx = t("s", vec![v("x'")]);
        let q = FeasibilityQuery::new(&g, vec![Atom::reach(sx.clone(), s0.clone())]);
        let r = feasible(&q, Budget::default());
        assert_eq!(r.answer, TriBool::Yes);
        assert_eq!(r.witness.unwrap().get("x'"), Some(&Term::constant("0")));
        let fig2 = vec![
            Atom::reach(sx.clone(), s0),
            Atom::reach(t("f", vec![t("g", vec![v("x'")])]), v("z")),
            Atom::reach(sx, v("z")),
        ];
        assert_eq!(feasible(&FeasibilityQuery::new(&g, fig2), Budget::default()).answer, TriBool::No);
        let empty = feasible(&FeasibilityQuery::new(&g, vec![]), Budget::default());
        assert_eq!(empty.answer, TriBool::Yes);
        assert!(empty.witness.unwrap().is_empty());
    }

    #[test]
    fn enumeration_is_breadth_first() {
        let g = cops387();
        let ts = constructor_terms(&g, 2, 10);
        assert_eq!(ts[0], Term::constant("0"));
        assert!(ts.windows(2).all(|w| w[0].depth() <= w[1].depth()));
    }
}
