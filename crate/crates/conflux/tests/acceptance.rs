//! End-to-end acceptance run.
//!
//! Every criterion is checked independently and reported on its own line as
//! `[PASS]` or `[FAIL]`; the test fails if any criterion fails.

use std::collections::{BTreeMap, BTreeSet};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::time::{Duration, Instant};

use conflux::framework::{answer_of, audit, prove, run_with, Answer, ProofTree, RunConfig, Strategy, Verdict};
use conflux::frontend::cli::run_cli;
use conflux::frontend::parse::{parse, Format};
use conflux::frontend::render::{equivalent_systems, render_system, SystemFormat};
use conflux::oracles::termination::terminating;
use conflux::pairs::{proper_ccps, ConditionalPair, PairKind};
use conflux::processors::{apply, Budgets, Problem, ProblemKind, ProcessorId};
use conflux::rewrite::{Budget, Engine, TriBool};
use conflux::system::{v as var, Atom, Gtrs, Rule, Semantics};
use conflux::transforms::{inline, Combination};
use conflux::term::{Symbol, Term, Var};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn fixtures_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures")
}

fn fixture_paths() -> Vec<(Format, PathBuf)> {
    let mut out = Vec::new();
    for (format, dir) in [(Format::Cops, "cops"), (Format::Tpdb, "tpdb")] {
        let mut files: Vec<PathBuf> = std::fs::read_dir(fixtures_dir().join(dir))
            .expect("fixture directory")
            .map(|e| e.expect("entry").path())
            .filter(|p| p.extension().is_some_and(|x| x == "trs"))
            .collect();
        files.sort();
        out.extend(files.into_iter().map(|p| (format, p)));
    }
    out
}

fn load(name: &str) -> Gtrs {
    let text = std::fs::read_to_string(fixtures_dir().join("cops").join(format!("{name}.trs"))).expect("fixture");
    parse(&text, None).expect("fixture parses")
}

fn cfg(secs: u64) -> RunConfig {
    RunConfig::with_deadline(Duration::from_secs(secs))
}

fn cr(g: Gtrs) -> Problem {
    Problem::confluence(ProblemKind::Cr, g)
}

fn t(name: &str, args: Vec<Term>) -> Term {
    Term::func(name, args)
}

fn c(name: &str) -> Term {
    Term::constant(name)
}

fn nodes_with(tree: &ProofTree, id: ProcessorId) -> Vec<&ProofTree> {
    let mut out = Vec::new();
    tree.walk(&mut |n| {
        if n.step().is_some_and(|s| s.processor == id) {
            out.push(n);
        }
    });
    out
}

fn pair(left: Term, right: Term, conds: Vec<Atom>) -> ConditionalPair {
    ConditionalPair { conds, ..ConditionalPair::plain(left, right, PairKind::ProperCcp) }
}

fn timed(limit: Duration, f: impl FnOnce() -> Verdict) -> Result<(Verdict, Duration), String> {
    let start = Instant::now();
    let v = f();
    let took = start.elapsed();
    ensure(took <= limit, format!("took {took:?}, limit {limit:?}"))?;
    Ok((v, took))
}

fn clean_audit(v: &Verdict) -> Result<(), String> {
    let issues = audit(v);
    ensure(issues.is_empty(), format!("audit: {issues:?}"))
}

fn criterion_cops387() -> Check {
    let (v, took) = timed(Duration::from_secs(10), || prove(&cr(load("cops387")), &cfg(10)))?;
    ensure(v.answer == Answer::No, format!("answer {}", v.answer))?;
    ensure(v.tree.has_path(&[ProcessorId::Wcr, ProcessorId::He, ProcessorId::Jo]), "no P_WCR → P_HE → P_JO path")?;
    let s = |x: Term| t("s", vec![x]);
    let expected = pair(t("f", vec![t("g", vec![var("x")])]), s(var("x")), vec![Atom::cond(s(var("x")), s(c("0")))]);
    let refuted = nodes_with(&v.tree, ProcessorId::Jo).into_iter().any(|n| {
        matches!(n, ProofTree::Node { result: conflux::framework::StepResult::No, .. })
            && n.problem().pair.as_ref().is_some_and(|p| p.same_as(&expected))
    });
    ensure(refuted, "P_JO does not refute ⟨f(g(x)), s(x)⟩ ⇐ s(x) ≈ s(0)")?;
    clean_audit(&v)?;
    Ok(format!("NO via P_WCR → P_HE → P_JO in {took:.2?}"))
}

fn criterion_cops387_bot() -> Check {
    let (v, took) = timed(Duration::from_secs(10), || prove(&cr(load("cops387-bot")), &cfg(10)))?;
    ensure(v.answer == Answer::Yes, format!("answer {}", v.answer))?;
    ensure(v.tree.processors() == [ProcessorId::Kb, ProcessorId::He], format!("processors {:?}", v.tree.processors()))?;
    let he = nodes_with(&v.tree, ProcessorId::He);
    ensure(he.len() == 1 && he[0].children().is_empty(), "P_HE produced subproblems")?;
    clean_audit(&v)?;
    Ok(format!("YES via P_KB → P_HE with no pairs in {took:.2?}"))
}

fn criterion_cops409() -> Check {
    let (v, took) = timed(Duration::from_secs(30), || prove(&cr(load("cops409")), &cfg(30)))?;
    ensure(v.answer == Answer::Yes, format!("answer {}", v.answer))?;
    let simp = nodes_with(&v.tree, ProcessorId::Simp);
    let simplified = simp.first().and_then(|n| n.children().first()).ok_or("no P_Simp step")?;
    let rules = &simplified.problem().system.rules;
    ensure(rules.len() == 4, format!("{} rules after P_Simp", rules.len()))?;
    ensure(!rules.iter().any(|r| r.lhs == c("b") && r.rhs == c("b")), "b → b survived")?;
    let s = |x: Term| t("s", vec![x]);
    let ca = t("c", vec![c("a")]);
    let expected = pair(
        t("h", vec![s(var("x"))]),
        t("g", vec![s(var("x"))]),
        vec![Atom::cond(t("c", vec![t("g", vec![var("x")])]), ca.clone()), Atom::cond(t("c", vec![t("h", vec![var("x")])]), ca)],
    );
    let joined = nodes_with(&v.tree, ProcessorId::Jo).into_iter().any(|n| {
        n.children().is_empty()
            && matches!(n, ProofTree::Node { result: conflux::framework::StepResult::Yes, .. })
            && n.problem().pair.as_ref().is_some_and(|p| p.same_as(&expected))
    });
    ensure(joined, "overlay pair not closed by P_JO")?;
    clean_audit(&v)?;
    Ok(format!("YES via {:?} in {took:.2?}", v.tree.processors()))
}

fn criterion_ex4() -> Check {
    let (v, took) = timed(Duration::from_secs(30), || prove(&cr(load("ex4")), &cfg(30)))?;
    ensure(v.answer == Answer::Yes, format!("answer {}", v.answer))?;
    let md = nodes_with(&v.tree, ProcessorId::Md);
    let md = md.first().ok_or("no P_MD step")?;
    ensure(
        md.step().and_then(|s| s.combination) == Some(Combination::ConstructorSharing),
        "split is not constructor-sharing",
    )?;
    let cons = |x: Term, y: Term| t("cons", vec![x, y]);
    let from = |x: Term| t("from", vec![x]);
    let s = |x: Term| t("s", vec![x]);
    let hd = Rule::plain("r", t("hd", vec![cons(var("x"), var("y"))]), var("x"));
    let parts = md.children();
    let r1 = parts
        .iter()
        .find(|p| p.problem().system.rules.len() == 1 && p.problem().system.rules[0].is_variant_of(&hd))
        .ok_or("no part {hd(x:y) → x}")?;
    ensure(r1.step().map(|s| s.processor) == Some(ProcessorId::Orth) && r1.children().is_empty(), "R₁ not closed by P_Orth")?;
    let r2 = parts.iter().find(|p| p.problem().system.rules.len() == 5).ok_or("no five-rule part")?;
    ensure(r2.has_path(&[ProcessorId::CnvJ, ProcessorId::He, ProcessorId::Jo]), "R₂ lacks P_CnvJ → P_HE → P_JO")?;
    let cp = pair(t("inc", vec![t("tl", vec![cons(var("x"), from(s(var("x"))))])]), t("tl", vec![t("inc", vec![from(var("x"))])]), vec![]);
    let jo = nodes_with(r2, ProcessorId::Jo);
    let jo = jo.iter().find(|n| n.problem().pair.as_ref().is_some_and(|p| p.same_as(&cp))).ok_or("pair (inc/tl) not in a JO node")?;
    let sys = &jo.problem().system;
    ensure(!sys.mu_is_top(), "JO system is not context-sensitive")?;
    let engine = Engine::new(sys, Budget::default());
    let goal = t("inc", vec![from(s(var("x")))]);
    let left_chain = [cp.left.clone(), goal.clone()];
    let right_chain = [
        cp.right.clone(),
        t("tl", vec![t("inc", vec![cons(var("x"), from(s(var("x"))))])]),
        t("tl", vec![cons(s(var("x")), t("inc", vec![from(s(var("x")))]))]),
        goal,
    ];
    for chain in [&left_chain[..], &right_chain[..]] {
        for w in chain.windows(2) {
            ensure(engine.one_step(&w[0]).terms.contains(&w[1]), format!("{} ↛ {}", w[0], w[1]))?;
        }
    }
    clean_audit(&v)?;
    Ok(format!("YES via constructor-sharing split, displayed join replayed, {took:.2?}"))
}

fn criterion_hindley() -> Check {
    let g = load("hindley");
    let v = prove(&cr(g.clone()), &cfg(30));
    ensure(v.answer == Answer::No, format!("answer {}", v.answer))?;
    let jo_no = nodes_with(&v.tree, ProcessorId::Jo)
        .into_iter()
        .any(|n| matches!(n, ProofTree::Node { result: conflux::framework::StepResult::No, .. }) && n.problem().pair.as_ref().is_some_and(|p| !p.conds.is_empty()));
    ensure(jo_no, "refutation does not come from a conditional pair")?;
    clean_audit(&v)?;
    let wcr = Problem::confluence(ProblemKind::Wcr, g);
    let forced = run_with(&wcr, &Strategy::seq(Strategy::Apply(ProcessorId::Inl), Strategy::Recurse), &cfg(30));
    ensure(forced.step().map(|s| s.processor) == Some(ProcessorId::Inl), "P_Inl not applied")?;
    let below = forced.children().first().ok_or("P_Inl produced no subproblem")?;
    ensure(answer_of(below) == Answer::Yes, "inlined TRS is not shown locally confluent")?;
    ensure(answer_of(&forced) != Answer::Yes, "YES propagated through P_Inl on WCR")?;
    let mut through_inl = false;
    let auto = prove(&wcr, &cfg(30));
    if auto.answer == Answer::Yes {
        through_inl = auto.tree.processors().contains(&ProcessorId::Inl);
    }
    ensure(!through_inl, "WCR YES uses P_Inl")?;
    ensure(auto.answer != Answer::Yes, format!("WCR answer {}", auto.answer))?;
    Ok(format!("CR NO by an instantiated pair; forced P_Inl on WCR gives {}", answer_of(&forced)))
}

fn criterion_extru() -> Check {
    let g = load("extru");
    let v = prove(&cr(g.clone()), &cfg(20));
    ensure(v.answer == Answer::Yes, format!("answer {}", v.answer))?;
    let simp = nodes_with(&v.tree, ProcessorId::Simp);
    let after = simp.first().and_then(|n| n.children().first()).ok_or("no P_Simp step")?;
    ensure(after.problem().system.rules.is_empty(), "P_Simp did not empty the system")?;
    let mut no_simp = cfg(20);
    no_simp.disabled.insert(ProcessorId::Simp);
    let w = prove(&cr(g), &no_simp);
    ensure(w.answer == Answer::Yes, format!("answer without P_Simp {}", w.answer))?;
    ensure(w.tree.has_path(&[ProcessorId::Uconf, ProcessorId::Orth]), "no P_Uconf → P_Orth path")?;
    clean_audit(&v)?;
    clean_audit(&w)?;
    Ok("YES via P_Simp; YES via P_Uconf → P_Orth without P_Simp".into())
}

fn criterion_uconf_fails() -> Check {
    let g = load("uconf-fails");
    let p = cr(g.clone());
    ensure(apply(ProcessorId::Uconf, &p, &Budgets::default()).is_none(), "P_Uconf applied")?;
    let v = prove(&p, &cfg(20));
    ensure(v.answer == Answer::Yes, format!("answer {}", v.answer))?;
    ensure(!v.tree.processors().contains(&ProcessorId::Uconf), "P_Uconf in proof")?;
    let u = nodes_with(&v.tree, ProcessorId::U);
    let u = u.first().ok_or("no P_U step")?;
    let sub = &u.children().first().ok_or("P_U produced no subproblem")?.problem().system;
    let sym = sub.funcs.iter().find(|f| !g.funcs.contains(f)).ok_or("no fresh symbol")?.clone();
    ensure(sym.arity() == 2, "fresh symbol is not binary")?;
    let uu = |a: Term, b: Term| Term::app(sym.clone(), vec![a, b]);
    let expected = [
        Rule::plain("a", t("g", vec![var("x")]), var("x")),
        Rule::plain("b", t("f", vec![var("x")]), uu(t("g", vec![var("x")]), var("x"))),
        Rule::plain("c", uu(var("x"), var("x")), var("x")),
    ];
    ensure(
        sub.rules.len() == 3 && expected.iter().all(|e| sub.rules.iter().any(|r| r.is_variant_of(e))),
        format!("U(R) is {}", sub.summary()),
    )?;
    ensure(terminating(sub, Budget::default()) == TriBool::Yes, "U(R) not shown terminating")?;
    clean_audit(&v)?;
    Ok(format!("YES via {:?}; P_Uconf not applicable", v.tree.processors()))
}

fn criterion_incomplete_processors() -> Check {
    let mut seen = Vec::new();
    for (name, off) in [
        ("extru", vec![]),
        ("extru", vec![ProcessorId::Simp]),
        ("u-not-complete", vec![]),
        ("u-not-complete", vec![ProcessorId::Simp]),
        ("u-not-complete", vec![ProcessorId::Simp, ProcessorId::Kb]),
        ("canj-not-complete", vec![]),
        ("canj-not-complete", vec![ProcessorId::Kb]),
        ("canj-not-complete", vec![ProcessorId::Kb, ProcessorId::Scr]),
        ("canj-not-complete-ext", vec![ProcessorId::Kb]),
    ] {
        let mut config = cfg(20);
        config.disabled.extend(off.iter().copied());
        let v = prove(&cr(load(name)), &config);
        ensure(v.answer != Answer::No, format!("{name} without {off:?}: NO"))?;
        clean_audit(&v)?;
        if off.is_empty() {
            ensure(v.answer == Answer::Yes, format!("{name}: {}", v.answer))?;
        }
        seen.push(format!("{name}{}={}", if off.is_empty() { "" } else { "*" }, v.answer));
    }
    let g = load("u-not-complete");
    let forced = run_with(&cr(g), &Strategy::seq(Strategy::Apply(ProcessorId::Uconf), Strategy::Recurse), &cfg(20));
    ensure(answer_of(&forced) != Answer::No, "NO propagated through P_Uconf")?;
    let canj = load("canj-not-complete");
    for id in [ProcessorId::CnvJ, ProcessorId::CanJ] {
        let forced = run_with(&cr(canj.clone()), &Strategy::seq(Strategy::Apply(id), Strategy::Recurse), &cfg(20));
        ensure(answer_of(&forced) != Answer::No, format!("NO propagated through {id}"))?;
    }
    Ok(seen.join(" "))
}

const POOL: [(&str, usize); 5] = [("a", 0), ("b", 0), ("f", 1), ("g", 2), ("h", 1)];

fn random_sig(rng: &mut StdRng) -> Vec<(&'static str, usize)> {
    loop {
        let n = rng.gen_range(1..=3);
        let mut syms: Vec<(&str, usize)> = Vec::new();
        while syms.len() < n {
            let s = POOL[rng.gen_range(0..POOL.len())];
            if !syms.contains(&s) {
                syms.push(s);
            }
        }
        if syms.iter().any(|s| s.1 > 0) {
            return syms;
        }
    }
}

fn random_term(rng: &mut StdRng, sig: &[(&str, usize)], vars: &[&str], depth: usize) -> Term {
    let leaves: Vec<&(&str, usize)> = sig.iter().filter(|s| s.1 == 0).collect();
    let funs: Vec<&(&str, usize)> = sig.iter().filter(|s| s.1 > 0).collect();
    let leaf_roll = depth == 0 || funs.is_empty() || rng.gen_bool(0.3);
    if leaf_roll {
        let k = rng.gen_range(0..vars.len() + leaves.len());
        if k < vars.len() || leaves.is_empty() {
            return var(vars[k % vars.len()]);
        }
        return c(leaves[k - vars.len()].0);
    }
    let (name, arity) = *funs[rng.gen_range(0..funs.len())];
    t(name, (0..arity).map(|_| random_term(rng, sig, vars, depth - 1)).collect())
}

fn random_trs(rng: &mut StdRng) -> (Gtrs, Vec<(&'static str, usize)>) {
    let sig = random_sig(rng);
    let n = rng.gen_range(1..=4);
    let mut rules = Vec::new();
    while rules.len() < n {
        let lhs = random_term(rng, &sig, &["x", "y"], 3);
        if lhs.is_var() {
            continue;
        }
        let names: Vec<String> = lhs.vars().iter().map(|x| x.to_string()).collect();
        let names: Vec<&str> = names.iter().map(String::as_str).collect();
        let rhs = if names.is_empty() {
            random_ground(rng, &sig, 3)
        } else {
            random_term(rng, &sig, &names, 3)
        };
        if !rhs.vars().is_subset(&lhs.vars()) {
            continue;
        }
        rules.push(Rule::plain((rules.len() + 1).to_string(), lhs, rhs));
    }
    let mut g = Gtrs::trs(rules);
    g.funcs.extend(sig.iter().map(|(n, a)| Symbol::func(n, *a)));
    g.mu = conflux::term::ReplacementMap::top(&g.funcs);
    (g, sig)
}

fn random_ground(rng: &mut StdRng, sig: &[(&str, usize)], depth: usize) -> Term {
    let consts: Vec<&(&str, usize)> = sig.iter().filter(|s| s.1 == 0).collect();
    if consts.is_empty() {
        return c("a");
    }
    let funs: Vec<&(&str, usize)> = sig.iter().filter(|s| s.1 > 0).collect();
    if depth == 0 || rng.gen_bool(0.4) {
        return c(consts[rng.gen_range(0..consts.len())].0);
    }
    let (name, arity) = *funs[rng.gen_range(0..funs.len())];
    t(name, (0..arity).map(|_| random_ground(rng, sig, depth - 1)).collect())
}

type Binding = BTreeMap<Var, Term>;

fn resolve(t: &Term, s: &Binding) -> Term {
    match t {
        Term::Var(x) => s.get(x).map_or_else(|| t.clone(), |u| resolve(u, s)),
        Term::App(f, args) => Term::app(f.clone(), args.iter().map(|a| resolve(a, s)).collect()),
    }
}

fn instantiate(t: &Term, s: &Binding) -> Term {
    match t {
        Term::Var(x) => s.get(x).cloned().unwrap_or_else(|| t.clone()),
        Term::App(f, args) => Term::app(f.clone(), args.iter().map(|a| instantiate(a, s)).collect()),
    }
}

fn occurs(x: &Var, t: &Term) -> bool {
    match t {
        Term::Var(y) => x == y,
        Term::App(_, args) => args.iter().any(|a| occurs(x, a)),
    }
}

fn robinson(a: &Term, b: &Term) -> Option<Binding> {
    let mut s = Binding::new();
    let mut todo = vec![(a.clone(), b.clone())];
    while let Some((l, r)) = todo.pop() {
        let (l, r) = (resolve(&l, &s), resolve(&r, &s));
        match (&l, &r) {
            _ if l == r => {}
            (Term::Var(x), u) | (u, Term::Var(x)) => {
                if occurs(x, u) {
                    return None;
                }
                s.insert(x.clone(), u.clone());
            }
            (Term::App(f, xs), Term::App(g, ys)) => {
                if f != g || xs.len() != ys.len() {
                    return None;
                }
                todo.extend(xs.iter().cloned().zip(ys.iter().cloned()));
            }
        }
    }
    Some(s)
}

fn matcher(pattern: &Term, t: &Term, s: &mut Binding) -> bool {
    match (pattern, t) {
        (Term::Var(x), _) => match s.get(x) {
            Some(u) => u == t,
            None => {
                s.insert(x.clone(), t.clone());
                true
            }
        },
        (Term::App(f, xs), Term::App(g, ys)) => f == g && xs.len() == ys.len() && xs.iter().zip(ys).all(|(p, u)| matcher(p, u, s)),
        _ => false,
    }
}

fn positions(t: &Term) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    if let Term::App(_, args) = t {
        for (i, a) in args.iter().enumerate() {
            out.extend(positions(a).into_iter().map(|mut p| {
                p.insert(0, i);
                p
            }));
        }
    }
    out
}

fn at<'a>(t: &'a Term, p: &[usize]) -> &'a Term {
    p.iter().fold(t, |u, &i| &u.args()[i])
}

fn replace(t: &Term, p: &[usize], s: Term) -> Term {
    match p.split_first() {
        None => s,
        Some((&i, rest)) => {
            let Term::App(f, args) = t else { unreachable!("position below variable") };
            let mut args = args.clone();
            args[i] = replace(&args[i], rest, s);
            Term::app(f.clone(), args)
        }
    }
}

fn prime(t: &Term) -> Term {
    match t {
        Term::Var(x) => Term::var(&format!("{x}#")),
        Term::App(f, args) => Term::app(f.clone(), args.iter().map(prime).collect()),
    }
}

fn canonical_side(t: &Term, names: &mut BTreeMap<Var, usize>) -> String {
    match t {
        Term::Var(x) => {
            let n = names.len();
            format!("_{}", names.entry(x.clone()).or_insert(n))
        }
        Term::App(f, args) => {
            let inner: Vec<String> = args.iter().map(|a| canonical_side(a, names)).collect();
            format!("{}({})", f.name(), inner.join(","))
        }
    }
}

fn canonical_pair(l: &Term, r: &Term) -> String {
    let key = |a: &Term, b: &Term| {
        let mut names = BTreeMap::new();
        let x = canonical_side(a, &mut names);
        format!("{x} = {}", canonical_side(b, &mut names))
    };
    std::cmp::min(key(l, r), key(r, l))
}

fn brute_force_cps(g: &Gtrs) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    for (i, outer) in g.rules.iter().enumerate() {
        for (j, inner) in g.rules.iter().enumerate() {
            let (il, ir) = (prime(&inner.lhs), prime(&inner.rhs));
            for p in positions(&outer.lhs) {
                if (p.is_empty() && i == j) || at(&outer.lhs, &p).is_var() {
                    continue;
                }
                if let Some(s) = robinson(at(&outer.lhs, &p), &il) {
                    let left = resolve(&replace(&outer.lhs, &p, ir.clone()), &s);
                    let right = resolve(&outer.rhs, &s);
                    out.insert(canonical_pair(&left, &right));
                }
            }
        }
    }
    out
}

fn criterion_critical_pairs() -> Check {
    let mut rng = StdRng::seed_from_u64(9);
    let mut total = 0;
    for k in 0..200 {
        let (g, _) = random_trs(&mut rng);
        let ours: BTreeSet<String> =
            proper_ccps(&g, Budget::default()).iter().map(|p| canonical_pair(&p.left, &p.right)).collect();
        let theirs = brute_force_cps(&g);
        ensure(ours == theirs, format!("system {k} {}: {ours:?} vs {theirs:?}", g.summary()))?;
        total += theirs.len();
    }
    Ok(format!("200 systems, {total} pairs, 0 discrepancies"))
}

fn naive_one_step(g: &Gtrs, t: &Term) -> BTreeSet<Term> {
    let mut out = BTreeSet::new();
    for p in positions(t) {
        let sub = at(t, &p);
        for r in &g.rules {
            let mut s = Binding::new();
            if matcher(&r.lhs, sub, &mut s) {
                out.insert(replace(t, &p, instantiate(&r.rhs, &s)));
            }
        }
    }
    out
}

fn criterion_one_step() -> Check {
    let mut rng = StdRng::seed_from_u64(9);
    let systems: Vec<(Gtrs, Vec<(&str, usize)>)> = (0..200).map(|_| random_trs(&mut rng)).collect();
    let mut redexes = 0;
    for k in 0..1000 {
        let (g, sig) = &systems[k % systems.len()];
        let term = random_term(&mut rng, sig, &["x", "y", "z"], 3);
        let ours = Engine::new(g, Budget::default()).one_step(&term);
        ensure(!ours.truncated, format!("one_step truncated on {term}"))?;
        let theirs = naive_one_step(g, &term);
        ensure(ours.terms == theirs, format!("{term} in {}: {:?} vs {theirs:?}", g.summary(), ours.terms))?;
        redexes += theirs.len();
    }
    Ok(format!("1000 terms, {redexes} reducts, 0 discrepancies"))
}

const CTRS_POOL: [(&str, usize); 5] = [("a", 0), ("b", 0), ("c", 0), ("f", 1), ("g", 1)];

fn ground_terms(sig: &[(&str, usize)], depth: usize) -> Vec<Term> {
    let mut level: Vec<Term> = sig.iter().filter(|s| s.1 == 0).map(|s| c(s.0)).collect();
    for _ in 0..depth {
        let mut next: BTreeSet<Term> = level.iter().cloned().collect();
        for (name, arity) in sig.iter().filter(|s| s.1 > 0) {
            let mut tuples: Vec<Vec<Term>> = vec![vec![]];
            for _ in 0..*arity {
                tuples = tuples
                    .into_iter()
                    .flat_map(|tu| level.iter().map(move |x| [tu.clone(), vec![x.clone()]].concat()))
                    .collect();
            }
            next.extend(tuples.into_iter().map(|args| t(name, args)));
        }
        level = next.into_iter().collect();
    }
    level
}

fn closure(engine: &Engine, t: &Term, cap: usize) -> Option<BTreeSet<Term>> {
    let mut seen: BTreeSet<Term> = [t.clone()].into();
    let mut todo = vec![t.clone()];
    while let Some(u) = todo.pop() {
        let next = engine.one_step(&u);
        if next.truncated {
            return None;
        }
        for w in next.terms {
            if w.size() > 12 {
                return None;
            }
            if seen.insert(w.clone()) {
                todo.push(w);
            }
        }
        if seen.len() > cap {
            return None;
        }
    }
    Some(seen)
}

fn random_octrs(rng: &mut StdRng) -> Gtrs {
    let term = |rng: &mut StdRng, vars: &[&str]| random_term(rng, &CTRS_POOL, vars, 2);
    let mut rules = Vec::new();
    for i in 0..rng.gen_range(1..=3) {
        let lhs = loop {
            let l = term(rng, &["x"]);
            if !l.is_var() {
                break l;
            }
        };
        let rhs = loop {
            let r = term(rng, &["x"]);
            if r.vars().is_subset(&lhs.vars()) {
                break r;
            }
        };
        rules.push(Rule::plain(format!("u{i}"), lhs, rhs));
    }
    let lhs = loop {
        let l = term(rng, &["x"]);
        if !l.is_var() {
            break l;
        }
    };
    let s = loop {
        let s = term(rng, &["x"]);
        if s.vars().is_subset(&lhs.vars()) {
            break s;
        }
    };
    let rhs = loop {
        let r = term(rng, &["x", "y"]);
        if r.vars().contains("y") && r.vars().is_subset(&["x".into(), "y".into()].into()) {
            break r;
        }
    };
    rules.push(Rule::new("i", lhs, rhs, vec![Atom::cond(s, var("y"))]));
    let mut g = Gtrs::ctrs(rules, Semantics::Oriented);
    g.funcs.extend(CTRS_POOL.iter().map(|(n, a)| Symbol::func(n, *a)));
    g.mu = conflux::term::ReplacementMap::top(&g.funcs);
    g
}

fn criterion_inlining() -> Check {
    let mut rng = StdRng::seed_from_u64(11);
    let terms = ground_terms(&CTRS_POOL, 3);
    let (mut systems, mut compared, mut skipped) = (0, 0, 0);
    while systems < 50 {
        let g = random_octrs(&mut rng);
        let h = inline(&g);
        if h.rules == g.rules {
            continue;
        }
        systems += 1;
        let (eg, eh) = (Engine::new(&g, Budget::default()), Engine::new(&h, Budget::default()));
        for term in &terms {
            let (sg, sh) = (eg.one_step(term), eh.one_step(term));
            ensure(
                sh.truncated || sg.truncated || sh.terms.is_subset(&sg.terms),
                format!("{term}: inline step outside R in {}", g.summary()),
            )?;
            match (closure(&eg, term, 400), closure(&eh, term, 400)) {
                (Some(a), Some(b)) => {
                    ensure(a == b, format!("→* differs on {term} in {}", g.summary()))?;
                    compared += 1;
                }
                _ => skipped += 1,
            }
        }
    }
    ensure(compared * 2 >= compared + skipped, format!("only {compared} closures compared, {skipped} skipped"))?;
    Ok(format!("50 systems, {compared} closures equal, {skipped} unbounded skipped, 0 violations"))
}

fn criterion_audit() -> Check {
    let mut counts: BTreeMap<String, usize> = BTreeMap::new();
    for (_, path) in fixture_paths() {
        let g = parse(&std::fs::read_to_string(&path).map_err(|e| e.to_string())?, None).map_err(|e| e.to_string())?;
        for kind in [ProblemKind::Cr, ProblemKind::Wcr, ProblemKind::Scr] {
            let v = prove(&Problem::confluence(kind, g.clone()), &cfg(30));
            let issues = audit(&v);
            ensure(issues.is_empty(), format!("{} {kind}: {issues:?}", path.display()))?;
            *counts.entry(v.answer.to_string()).or_default() += 1;
        }
    }
    Ok(format!("{counts:?} over all fixtures and properties, 0 violations"))
}

fn signature_terms(g: &Gtrs, depth: usize) -> Vec<Term> {
    let mut sig: Vec<(&str, usize)> = g.funcs.iter().map(|f| (f.name(), f.arity())).collect();
    if !sig.iter().any(|s| s.1 == 0) {
        sig.push(("k", 0));
    }
    ground_terms(&sig, depth)
}

fn normal_forms(engine: &Engine, t: &Term) -> Option<BTreeSet<Term>> {
    let reach = closure(engine, t, 5000)?;
    let mut out = BTreeSet::new();
    for u in reach {
        let next = engine.one_step(&u);
        if next.truncated {
            return None;
        }
        if next.terms.is_empty() {
            out.insert(u);
        }
    }
    Some(out)
}

fn criterion_newman() -> Check {
    let mut checked = Vec::new();
    for (_, path) in fixture_paths() {
        let g = parse(&std::fs::read_to_string(&path).map_err(|e| e.to_string())?, None).map_err(|e| e.to_string())?;
        if terminating(&g, Budget::default()) != TriBool::Yes {
            continue;
        }
        let v = prove(&cr(g.clone()), &cfg(30));
        if v.answer == Answer::Maybe {
            continue;
        }
        let engine = Engine::new(&g, Budget::default());
        let mut ambiguous = None;
        for term in signature_terms(&g, 3) {
            let nfs = normal_forms(&engine, &term).ok_or(format!("{}: closure of {term} not exhaustive", path.display()))?;
            if nfs.len() != 1 {
                ambiguous = Some(term);
                break;
            }
        }
        let name = path.file_stem().unwrap().to_string_lossy().to_string();
        match (v.answer, ambiguous) {
            (Answer::Yes, Some(term)) => return Err(format!("{name}: YES but {term} has several normal forms")),
            (Answer::No, None) => return Err(format!("{name}: NO but all terms of depth ≤ 3 have unique normal forms")),
            _ => checked.push(format!("{name}={}", v.answer)),
        }
    }
    ensure(!checked.is_empty(), "no terminating fixture with a definite verdict")?;
    Ok(checked.join(" "))
}

fn criterion_round_trip() -> Check {
    let mut n = 0;
    for (format, path) in fixture_paths() {
        let text = std::fs::read_to_string(&path).map_err(|e| e.to_string())?;
        let g = parse(&text, Some(format)).map_err(|e| format!("{}: {e}", path.display()))?;
        let out_format = match format {
            Format::Cops => SystemFormat::Cops,
            Format::Tpdb => SystemFormat::Tpdb,
        };
        let rendered = render_system(&g, out_format).or_else(|_| render_system(&g, SystemFormat::Extended)).map_err(|e| e.to_string())?;
        let back = parse(&rendered, None).map_err(|e| format!("{}: reparse: {e}", path.display()))?;
        ensure(equivalent_systems(&g, &back), format!("{}: round trip changed the system", path.display()))?;
        let mut first = BTreeSet::new();
        for proof in ["none", "text", "structured"] {
            let args = ["--proof", proof, "--timeout", "30", path.to_str().unwrap()];
            let (mut out, mut err) = (Vec::new(), Vec::new());
            let code = run_cli(args, &mut std::io::empty(), &mut out, &mut err);
            ensure(code == 0, format!("{}: exit {code}: {}", path.display(), String::from_utf8_lossy(&err)))?;
            let out = String::from_utf8(out).map_err(|e| e.to_string())?;
            let line = out.lines().next().unwrap_or_default().to_string();
            ensure(["YES", "NO", "MAYBE"].contains(&line.as_str()), format!("{}: first line {line:?}", path.display()))?;
            if proof == "structured" {
                for l in out.lines().skip(1) {
                    serde_json::from_str::<serde_json::Value>(l).map_err(|e| format!("{}: {e} in {l}", path.display()))?;
                }
            }
            first.insert(line);
        }
        ensure(first.len() == 1, format!("{}: answers differ across proof modes {first:?}", path.display()))?;
        n += 1;
    }
    Ok(format!("{n} fixtures round-trip with a well-formed verdict line"))
}

#[test]
fn acceptance() {
    let criteria: [Criterion; 14] = [
        ("COPS 387 refuted", criterion_cops387),
        ("COPS 387 with empty replacement map", criterion_cops387_bot),
        ("COPS 409", criterion_cops409),
        ("lazy lists", criterion_ex4),
        ("Hindley-style conditional system", criterion_hindley),
        ("infeasible rules", criterion_extru),
        ("unraveling where U_conf fails", criterion_uconf_fails),
        ("non-complete processors never refute", criterion_incomplete_processors),
        ("critical pairs against brute force", criterion_critical_pairs),
        ("one-step rewriting against naive", criterion_one_step),
        ("inlining preserves reachability", criterion_inlining),
        ("proof audit over corpus", criterion_audit),
        ("Newman cross-check", criterion_newman),
        ("round trip and verdict line", criterion_round_trip),
    ];
    let mut failed = Vec::new();
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|e| {
            Err(e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_else(|| "panic".into()))
        });
        let took = start.elapsed();
        match result {
            Ok(detail) => println!("[PASS] {:>2}. {name}: {detail} ({took:.1?})", i + 1),
            Err(why) => {
                println!("[FAIL] {:>2}. {name}: {why} ({took:.1?})", i + 1);
                failed.push(i + 1);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
