//! Randomized invariants over terms, systems, the file formats and proofs.

use std::collections::{BTreeMap, BTreeSet};
use std::time::Duration;

use conflux::framework::{audit, prove, Answer, RunConfig};
use conflux::frontend::parse::parse;
use conflux::frontend::render::{equivalent_systems, render_proof, render_system, ProofFormat, SystemFormat};
use conflux::processors::{Problem, ProblemKind};
use conflux::rewrite::{Budget, Engine, TriBool};
use conflux::system::{Gtrs, Rule};
use conflux::term::{unify, Position, ReplacementMap, Symbol, Term, Var};
use proptest::prelude::*;

const SIG: [(&str, usize); 5] = [("a", 0), ("b", 0), ("f", 1), ("h", 1), ("g", 2)];

fn term(vars: &'static [&'static str]) -> impl Strategy<Value = Term> {
    let leaf = prop_oneof![
        prop::sample::select(vars).prop_map(Term::var),
        prop::sample::select(vec!["a", "b"]).prop_map(Term::constant),
    ];
    leaf.prop_recursive(3, 12, 2, |inner| {
        prop_oneof![
            (prop::sample::select(vec!["f", "h"]), inner.clone()).prop_map(|(f, x)| Term::func(f, vec![x])),
            (inner.clone(), inner).prop_map(|(x, y)| Term::func("g", vec![x, y])),
        ]
    })
}

fn ground() -> impl Strategy<Value = Term> {
    let leaf = prop::sample::select(vec!["a", "b"]).prop_map(Term::constant);
    leaf.prop_recursive(3, 12, 2, |inner| {
        prop_oneof![
            (prop::sample::select(vec!["f", "h"]), inner.clone()).prop_map(|(f, x)| Term::func(f, vec![x])),
            (inner.clone(), inner).prop_map(|(x, y)| Term::func("g", vec![x, y])),
        ]
    })
}

fn matches(pattern: &Term, t: &Term, s: &mut BTreeMap<Var, Term>) -> bool {
    match (pattern, t) {
        (Term::Var(x), _) => s.entry(x.clone()).or_insert_with(|| t.clone()) == t,
        (Term::App(f, xs), Term::App(g, ys)) => f == g && xs.iter().zip(ys).all(|(p, u)| matches(p, u, s)),
        _ => false,
    }
}

fn instantiate(t: &Term, s: &BTreeMap<Var, Term>) -> Term {
    match t {
        Term::Var(x) => s.get(x).cloned().unwrap_or_else(|| t.clone()),
        Term::App(f, args) => Term::app(f.clone(), args.iter().map(|a| instantiate(a, s)).collect()),
    }
}

fn active_reducts(g: &Gtrs, t: &Term, out: &mut BTreeSet<Term>, rebuild: &dyn Fn(Term) -> Term) {
    for r in &g.rules {
        let mut s = BTreeMap::new();
        if matches(&r.lhs, t, &mut s) {
            out.insert(rebuild(instantiate(&r.rhs, &s)));
        }
    }
    if let Term::App(f, args) = t {
        for (i, a) in args.iter().enumerate() {
            if g.mu.is_active(f, i + 1) {
                let place = |u: Term| {
                    let mut args = args.clone();
                    args[i] = u;
                    rebuild(Term::app(f.clone(), args))
                };
                active_reducts(g, a, out, &place);
            }
        }
    }
}

fn rule() -> impl Strategy<Value = (Term, Term)> {
    (term(&["x", "y"]), term(&["x", "y"])).prop_filter("well-formed rule", |(l, r)| !l.is_var() && r.vars().is_subset(&l.vars()))
}

fn trs() -> impl Strategy<Value = Gtrs> {
    prop::collection::vec(rule(), 1..=3).prop_map(|rs| {
        let rules = rs.into_iter().enumerate().map(|(i, (l, r))| Rule::plain((i + 1).to_string(), l, r)).collect();
        let mut g = Gtrs::trs(rules);
        g.funcs.extend(SIG.iter().map(|(n, k)| Symbol::func(n, *k)));
        g.mu = ReplacementMap::top(&g.funcs);
        g
    })
}

fn cs_trs() -> impl Strategy<Value = Gtrs> {
    (trs(), any::<[bool; 3]>()).prop_map(|(g, bits)| {
        let mut mu = g.mu.clone();
        mu.set(Symbol::func("f", 1), if bits[0] { [1].into() } else { BTreeSet::new() });
        mu.set(Symbol::func("h", 1), if bits[1] { [1].into() } else { BTreeSet::new() });
        mu.set(Symbol::func("g", 2), if bits[2] { [1].into() } else { [1, 2].into() });
        g.with_mu(mu)
    })
}

fn tri() -> impl Strategy<Value = TriBool> {
    prop::sample::select(vec![TriBool::Yes, TriBool::No, TriBool::Unknown])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn unifiers_unify(s in term(&["x", "y"]), t in term(&["y", "z"])) {
        if let Some(sigma) = unify(&s, &t) {
            let u = sigma.apply(&s);
            prop_assert_eq!(&u, &sigma.apply(&t));
            prop_assert_eq!(sigma.apply(&u), u);
        }
    }

    #[test]
    fn unification_is_symmetric_in_success(s in term(&["x", "y"]), t in term(&["y", "z"])) {
        prop_assert_eq!(unify(&s, &t).is_some(), unify(&t, &s).is_some());
    }

    #[test]
    fn replacing_then_reading(t in term(&["x"]), s in term(&["y"]), k in any::<prop::sample::Index>()) {
        let ps: Vec<Position> = t.positions();
        let p = k.get(&ps);
        let u = t.subterm_replace(p, s.clone()).unwrap();
        prop_assert_eq!(u.subterm_at(p).unwrap(), &s);
    }

    #[test]
    fn three_valued_de_morgan(a in tri(), b in tri()) {
        prop_assert_eq!(!a.and(b), (!a).or(!b));
        prop_assert_eq!(!a.or(b), (!a).and(!b));
        prop_assert_eq!(!!a, a);
    }

    #[test]
    fn cops_round_trip(g in cs_trs()) {
        let text = render_system(&g, SystemFormat::Cops).unwrap();
        let back = parse(&text, None).unwrap();
        prop_assert!(equivalent_systems(&back, &g), "{}", text);
    }

    #[test]
    fn tpdb_round_trip(g in cs_trs()) {
        let text = render_system(&g, SystemFormat::Tpdb).unwrap();
        let back = parse(&text, None).unwrap();
        prop_assert!(equivalent_systems(&back, &g), "{}", text);
    }

    #[test]
    fn one_step_rewrites_only_active_positions(g in cs_trs(), t in ground()) {
        let ours = Engine::new(&g, Budget::default()).one_step(&t);
        let mut naive = BTreeSet::new();
        active_reducts(&g, &t, &mut naive, &|u| u);
        prop_assert!(!ours.truncated);
        prop_assert_eq!(ours.terms, naive);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn random_proofs_pass_the_audit(g in trs(), kind in prop::sample::select(vec![ProblemKind::Cr, ProblemKind::Wcr, ProblemKind::Scr])) {
        let v = prove(&Problem::confluence(kind, g.clone()), &RunConfig::with_deadline(Duration::from_secs(3)));
        prop_assert!(audit(&v).is_empty(), "{:?}", audit(&v));
        let text = render_proof(&v, ProofFormat::Structured);
        let answer = v.answer.to_string();
        prop_assert_eq!(text.lines().next(), Some(answer.as_str()));
        if kind == ProblemKind::Cr && v.answer == Answer::Yes {
            let engine = Engine::new(&g, Budget::default());
            for t in [Term::constant("a"), Term::func("f", vec![Term::constant("b")]), Term::func("g", vec![Term::constant("a"), Term::constant("b")])] {
                let a = engine.successors(&t);
                let b = a.terms.iter().map(|u| engine.successors(u)).collect::<Vec<_>>();
                if !a.truncated && b.iter().all(|s| !s.truncated) {
                    for (s1, s2) in b.iter().zip(b.iter().skip(1)) {
                        prop_assert!(s1.terms.intersection(&s2.terms).next().is_some(), "reducts of {t} do not join");
                    }
                }
            }
        }
    }
}
