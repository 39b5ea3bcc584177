//! Generalized term rewriting systems: atoms, conditional rules, Horn clauses,
//! system classification and the first-order theory of rewriting.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use crate::term::{canonical_renaming, var_name, ReplacementMap, Substitution, Symbol, Term, Var};

/// Predicate symbols of atoms.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Pred {
    /// One-step rewriting `→`.
    Step,
    /// Many-step rewriting `→*`.
    Reach,
    /// The condition predicate `≈`, whose meaning is fixed by Horn clauses.
    Cond,
    /// Any other predicate symbol.
    User(Symbol),
}

impl Pred {
    /// Number of arguments.
    pub fn arity(&self) -> usize {
        match self {
            Pred::User(s) => s.arity(),
            _ => 2,
        }
    }

    /// True for the built-in binary predicates.
    pub fn is_builtin(&self) -> bool {
        !matches!(self, Pred::User(_))
    }
}

impl fmt::Display for Pred {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Pred::Step => write!(f, "→"),
            Pred::Reach => write!(f, "→*"),
            Pred::Cond => write!(f, "≈"),
            Pred::User(s) => write!(f, "{s}"),
        }
    }
}

/// An atom `P(t₁, ..., tₙ)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Atom {
    /// The predicate.
    pub pred: Pred,
    /// The arguments; their count equals the predicate arity.
    pub args: Vec<Term>,
}

impl Atom {
    /// Builds a binary atom of a built-in predicate.
    pub fn binary(pred: Pred, s: Term, t: Term) -> Self {
        Atom { pred, args: vec![s, t] }
    }

    /// `s →* t`.
    pub fn reach(s: Term, t: Term) -> Self {
        Atom::binary(Pred::Reach, s, t)
    }

    /// `s → t`.
    pub fn step(s: Term, t: Term) -> Self {
        Atom::binary(Pred::Step, s, t)
    }

    /// `s ≈ t`.
    pub fn cond(s: Term, t: Term) -> Self {
        Atom::binary(Pred::Cond, s, t)
    }

    /// Left argument of a binary atom.
    pub fn lhs(&self) -> &Term {
        &self.args[0]
    }

    /// Right argument of a binary atom.
    pub fn rhs(&self) -> &Term {
        &self.args[1]
    }

    /// Variables of the atom.
    pub fn vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.args.iter().for_each(|t| t.collect_vars(&mut out));
        out
    }

    /// Applies a substitution to every argument.
    pub fn apply(&self, sigma: &Substitution) -> Atom {
        Atom { pred: self.pred.clone(), args: self.args.iter().map(|t| sigma.apply(t)).collect() }
    }

    /// Maps every argument through `f`.
    pub fn map_terms(&self, f: impl Fn(&Term) -> Term) -> Atom {
        Atom { pred: self.pred.clone(), args: self.args.iter().map(f).collect() }
    }

    /// True if the atom has no variables.
    pub fn is_ground(&self) -> bool {
        self.args.iter().all(Term::is_ground)
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.pred.is_builtin() {
            write!(f, "{} {} {}", self.args[0], self.pred, self.args[1])
        } else {
            let parts: Vec<String> = self.args.iter().map(|t| t.to_string()).collect();
            write!(f, "{}({})", self.pred, parts.join(","))
        }
    }
}

/// Variables of an atom list.
pub fn atoms_vars(atoms: &[Atom]) -> BTreeSet<Var> {
    let mut out = BTreeSet::new();
    for a in atoms {
        a.args.iter().for_each(|t| t.collect_vars(&mut out));
    }
    out
}

/// A conditional rewrite rule `ℓ → r ⇐ c`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rule {
    /// The rule label used in proofs.
    pub label: String,
    /// Left-hand side; never a variable.
    pub lhs: Term,
    /// Right-hand side.
    pub rhs: Term,
    /// Conditions.
    pub conds: Vec<Atom>,
}

impl Rule {
    /// Builds a rule; panics if the left-hand side is a variable.
    pub fn new(label: impl Into<String>, lhs: Term, rhs: Term, conds: Vec<Atom>) -> Self {
        assert!(!lhs.is_var(), "left-hand side of a rule must not be a variable");
        Rule { label: label.into(), lhs, rhs, conds }
    }

    /// An unconditional rule.
    pub fn plain(label: impl Into<String>, lhs: Term, rhs: Term) -> Self {
        Rule::new(label, lhs, rhs, Vec::new())
    }

    /// True if the rule has conditions.
    pub fn is_conditional(&self) -> bool {
        !self.conds.is_empty()
    }

    /// All variables of the rule.
    pub fn vars(&self) -> BTreeSet<Var> {
        let mut out = self.lhs.vars();
        self.rhs.collect_vars(&mut out);
        out.extend(atoms_vars(&self.conds));
        out
    }

    /// Variables of the conditions.
    pub fn cond_vars(&self) -> BTreeSet<Var> {
        atoms_vars(&self.conds)
    }

    /// Applies a variable renaming or substitution to every part of the rule.
    pub fn apply(&self, sigma: &Substitution) -> Rule {
        Rule {
            label: self.label.clone(),
            lhs: sigma.apply(&self.lhs),
            rhs: sigma.apply(&self.rhs),
            conds: self.conds.iter().map(|a| a.apply(sigma)).collect(),
        }
    }

    /// Copy of the rule without its conditions.
    pub fn unconditional(&self) -> Rule {
        Rule { conds: Vec::new(), ..self.clone() }
    }

    /// True if the two rules coincide up to variable renaming (labels ignored).
    pub fn is_variant_of(&self, other: &Rule) -> bool {
        if self.conds.len() != other.conds.len() || self.conds.iter().zip(&other.conds).any(|(a, b)| a.pred != b.pred) {
            return false;
        }
        let mut xs = vec![self.lhs.clone(), self.rhs.clone()];
        let mut ys = vec![other.lhs.clone(), other.rhs.clone()];
        for (a, b) in self.conds.iter().zip(&other.conds) {
            xs.extend(a.args.iter().cloned());
            ys.extend(b.args.iter().cloned());
        }
        crate::term::variant_many(&xs, &ys)
    }

    /// The rule with variables renamed to a canonical scheme.
    pub fn canonical(&self) -> Rule {
        let mut terms: Vec<&Term> = vec![&self.lhs, &self.rhs];
        for a in &self.conds {
            terms.extend(a.args.iter());
        }
        let map = canonical_renaming(&terms);
        let sigma = Substitution::from_pairs(map.into_iter().map(|(k, v)| (k, Term::Var(v))));
        Rule { label: String::new(), ..self.apply(&sigma) }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} → {}", self.lhs, self.rhs)?;
        if !self.conds.is_empty() {
            let parts: Vec<String> = self.conds.iter().map(|a| a.to_string()).collect();
            write!(f, " ⇐ {}", parts.join(", "))?;
        }
        Ok(())
    }
}

/// The rule type in 1..=4 according to the variable distribution.
pub fn rule_type(r: &Rule) -> u8 {
    let lv = r.lhs.vars();
    let rv = r.rhs.vars();
    let cv = r.cond_vars();
    if rv.is_subset(&lv) && cv.is_subset(&lv) {
        1
    } else if rv.is_subset(&lv) {
        2
    } else if rv.iter().all(|v| lv.contains(v) || cv.contains(v)) {
        3
    } else {
        4
    }
}

/// A definite Horn clause `A ⇐ c`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HornClause {
    /// Head atom; its predicate is neither `→` nor `→*`.
    pub head: Atom,
    /// Body atoms.
    pub body: Vec<Atom>,
}

impl HornClause {
    /// Builds a clause; panics if the head predicate is `→` or `→*`.
    pub fn new(head: Atom, body: Vec<Atom>) -> Self {
        assert!(!matches!(head.pred, Pred::Step | Pred::Reach), "clause heads may not be rewrite atoms");
        HornClause { head, body }
    }

    fn terms(&self) -> Vec<Term> {
        let mut out = self.head.args.clone();
        for a in &self.body {
            out.extend(a.args.iter().cloned());
        }
        out
    }

    fn preds(&self) -> Vec<Pred> {
        std::iter::once(self.head.pred.clone()).chain(self.body.iter().map(|a| a.pred.clone())).collect()
    }

    /// True if the clauses coincide up to variable renaming.
    pub fn is_variant_of(&self, other: &HornClause) -> bool {
        self.body.len() == other.body.len()
            && self.preds() == other.preds()
            && crate::term::variant_many(&self.terms(), &other.terms())
    }
}

impl fmt::Display for HornClause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.head)?;
        if !self.body.is_empty() {
            let parts: Vec<String> = self.body.iter().map(|a| a.to_string()).collect();
            write!(f, " ⇐ {}", parts.join(" ∧ "))?;
        }
        Ok(())
    }
}

/// Evaluation semantics of `≈` in conditional systems.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Semantics {
    /// `s ≈ t` iff `s` and `t` are joinable.
    Join,
    /// `s ≈ t` iff `s →* t`.
    Oriented,
    /// `s ≈ t` iff `s ↔* t`.
    SemiEquational,
}

impl Semantics {
    /// The Horn clauses defining `≈` under this semantics.
    pub fn clauses(self) -> Vec<HornClause> {
        let (x, y, z) = (Term::var("x"), Term::var("y"), Term::var("z"));
        match self {
            Semantics::Join => vec![HornClause::new(
                Atom::cond(x.clone(), y.clone()),
                vec![Atom::reach(x, z.clone()), Atom::reach(y, z)],
            )],
            Semantics::Oriented => vec![HornClause::new(Atom::cond(x.clone(), y.clone()), vec![Atom::reach(x, y)])],
            Semantics::SemiEquational => vec![
                HornClause::new(Atom::cond(x.clone(), x.clone()), vec![]),
                HornClause::new(
                    Atom::cond(x.clone(), z.clone()),
                    vec![Atom::step(x.clone(), y.clone()), Atom::cond(y.clone(), z.clone())],
                ),
                HornClause::new(Atom::cond(x.clone(), z.clone()), vec![Atom::step(y.clone(), x), Atom::cond(y, z)]),
            ],
        }
    }

    /// Single-letter prefix used in class names.
    pub fn letter(self) -> &'static str {
        match self {
            Semantics::Join => "J",
            Semantics::Oriented => "O",
            Semantics::SemiEquational => "SE",
        }
    }
}

/// Recognizes a clause set as one of the standard `≈` definitions.
pub fn recognize_semantics(clauses: &[HornClause]) -> Option<Semantics> {
    [Semantics::Join, Semantics::Oriented, Semantics::SemiEquational].into_iter().find(|sem| {
        let std = sem.clauses();
        std.len() == clauses.len()
            && std.iter().all(|c| clauses.iter().any(|d| c.is_variant_of(d)))
            && clauses.iter().all(|d| std.iter().any(|c| c.is_variant_of(d)))
    })
}

/// The most specific class a system belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum SystemClass {
    /// Unconditional 2-rules with all arguments active.
    Trs,
    /// Unconditional 2-rules with an arbitrary replacement map.
    CsTrs,
    /// Conditional rules with `≈` conditions, all arguments active.
    Ctrs(Semantics),
    /// Conditional rules with `≈` conditions and an arbitrary replacement map.
    CsCtrs(Semantics),
    /// Anything else.
    Gtrs,
}

impl SystemClass {
    /// True for TRSs and CS-TRSs.
    pub fn is_unconditional(self) -> bool {
        matches!(self, SystemClass::Trs | SystemClass::CsTrs)
    }

    /// The `≈` semantics, for conditional classes.
    pub fn semantics(self) -> Option<Semantics> {
        match self {
            SystemClass::Ctrs(s) | SystemClass::CsCtrs(s) => Some(s),
            _ => None,
        }
    }
}

impl fmt::Display for SystemClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SystemClass::Trs => write!(f, "TRS"),
            SystemClass::CsTrs => write!(f, "CS-TRS"),
            SystemClass::Ctrs(s) => write!(f, "{}-CTRS", s.letter()),
            SystemClass::CsCtrs(s) => write!(f, "{}-CS-CTRS", s.letter()),
            SystemClass::Gtrs => write!(f, "GTRS"),
        }
    }
}

/// A generalized term rewriting system `(F, Π, μ, H, R)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Gtrs {
    /// Function symbols.
    pub funcs: BTreeSet<Symbol>,
    /// Predicate symbols.
    pub preds: BTreeSet<Pred>,
    /// Replacement map.
    pub mu: ReplacementMap,
    /// Horn clauses.
    pub clauses: Vec<HornClause>,
    /// Conditional rewrite rules.
    pub rules: Vec<Rule>,
}

impl Gtrs {
    /// Builds a system whose signature is collected from the rules and clauses
    /// plus `extra_funcs`.
    pub fn new(rules: Vec<Rule>, mu: ReplacementMap, clauses: Vec<HornClause>, extra_funcs: BTreeSet<Symbol>) -> Self {
        let mut g = Gtrs { funcs: extra_funcs, preds: BTreeSet::new(), mu, clauses, rules };
        g.refresh_signature();
        g
    }

    /// An unconditional system with all arguments active.
    pub fn trs(rules: Vec<Rule>) -> Self {
        let mut g = Gtrs::new(rules, ReplacementMap::bottom(), Vec::new(), BTreeSet::new());
        g.mu = ReplacementMap::top(&g.funcs);
        g
    }

    /// A conditional system with all arguments active under the given semantics.
    pub fn ctrs(rules: Vec<Rule>, sem: Semantics) -> Self {
        let mut g = Gtrs::new(rules, ReplacementMap::bottom(), sem.clauses(), BTreeSet::new());
        g.mu = ReplacementMap::top(&g.funcs);
        g
    }

    /// Recomputes `funcs` and `preds` so that every occurring symbol is declared.
    pub fn refresh_signature(&mut self) {
        let mut funcs = std::mem::take(&mut self.funcs);
        let mut preds: BTreeSet<Pred> = [Pred::Step, Pred::Reach].into_iter().collect();
        let mut add_atom = |a: &Atom, funcs: &mut BTreeSet<Symbol>| {
            preds.insert(a.pred.clone());
            a.args.iter().for_each(|t| t.collect_symbols(funcs));
        };
        for r in &self.rules {
            r.lhs.collect_symbols(&mut funcs);
            r.rhs.collect_symbols(&mut funcs);
            r.conds.iter().for_each(|a| add_atom(a, &mut funcs));
        }
        for c in &self.clauses {
            add_atom(&c.head, &mut funcs);
            c.body.iter().for_each(|a| add_atom(a, &mut funcs));
        }
        funcs.retain(|f| !f.is_grounding());
        self.mu = self.mu.restrict(&funcs);
        self.funcs = funcs;
        self.preds = preds;
    }

    /// Copy with a different rule set, keeping signature, μ and clauses.
    /// New symbols get all arguments active if μ was μ_⊤, none otherwise.
    pub fn with_rules(&self, rules: Vec<Rule>) -> Gtrs {
        let was_top = self.mu_is_top();
        let mut g = Gtrs { rules, ..self.clone() };
        g.refresh_signature();
        if was_top {
            g.mu = ReplacementMap::top(&g.funcs);
        }
        g
    }

    /// Copy with a different replacement map.
    pub fn with_mu(&self, mu: ReplacementMap) -> Gtrs {
        Gtrs { mu: mu.restrict(&self.funcs), ..self.clone() }
    }

    /// True if μ = μ_⊤ on the signature.
    pub fn mu_is_top(&self) -> bool {
        self.mu.is_top_for(&self.funcs)
    }

    /// True if some rule is conditional.
    pub fn is_conditional(&self) -> bool {
        self.rules.iter().any(Rule::is_conditional)
    }

    /// The `≈` semantics if the clauses are a standard definition.
    pub fn semantics(&self) -> Option<Semantics> {
        recognize_semantics(&self.clauses)
    }

    /// Labels of all rules.
    pub fn labels(&self) -> BTreeSet<String> {
        self.rules.iter().map(|r| r.label.clone()).collect()
    }

    /// Variables of all rules.
    pub fn vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.rules.iter().for_each(|r| out.extend(r.vars()));
        out
    }

    /// Summary of the rules for proof output.
    pub fn summary(&self) -> String {
        if self.rules.is_empty() {
            return "∅".to_string();
        }
        let parts: Vec<String> = self.rules.iter().map(|r| r.to_string()).collect();
        format!("{{{}}}", parts.join("; "))
    }

    /// True if the rule sets coincide as multisets up to renaming and μ and clauses agree.
    pub fn same_system(&self, other: &Gtrs) -> bool {
        if self.mu != other.mu || self.rules.len() != other.rules.len() || self.clauses != other.clauses {
            return false;
        }
        let mut a: Vec<Rule> = self.rules.iter().map(Rule::canonical).collect();
        let mut b: Vec<Rule> = other.rules.iter().map(Rule::canonical).collect();
        a.sort();
        b.sort();
        a == b
    }
}

/// Determines the class of a system.
pub fn classify(g: &Gtrs) -> SystemClass {
    let top = g.mu_is_top();
    let clauses_ok = g.clauses.is_empty() || g.semantics().is_some();
    let user_preds = g.preds.iter().any(|p| matches!(p, Pred::User(_)));
    let unconditional_two = g.rules.iter().all(|r| !r.is_conditional() && rule_type(r) <= 2);
    if unconditional_two && clauses_ok && !user_preds {
        return if top { SystemClass::Trs } else { SystemClass::CsTrs };
    }
    if user_preds {
        return SystemClass::Gtrs;
    }
    let sem = match g.semantics() {
        Some(s) => s,
        None => return SystemClass::Gtrs,
    };
    let conds_ok = g.rules.iter().flat_map(|r| r.conds.iter()).all(|a| match a.pred {
        Pred::Cond => true,
        Pred::Reach => sem == Semantics::Oriented,
        _ => false,
    });
    if !conds_ok {
        return SystemClass::Gtrs;
    }
    if top {
        SystemClass::Ctrs(sem)
    } else {
        SystemClass::CsCtrs(sem)
    }
}

/// Root symbols of left-hand sides.
pub fn defined_symbols(g: &Gtrs) -> BTreeSet<Symbol> {
    g.rules.iter().filter_map(|r| r.lhs.root().cloned()).collect()
}

/// Function symbols that are not defined.
pub fn constructors(g: &Gtrs) -> BTreeSet<Symbol> {
    let d = defined_symbols(g);
    g.funcs.iter().filter(|f| !d.contains(*f)).cloned().collect()
}

/// The underlying system obtained by dropping all conditions, with duplicate
/// rules removed, predicates reduced to `→` and `→*`, and no clauses.
pub fn underlying_trs(g: &Gtrs) -> Gtrs {
    let mut rules: Vec<Rule> = Vec::new();
    for r in &g.rules {
        let u = r.unconditional();
        if !rules.iter().any(|q| q.is_variant_of(&u)) {
            rules.push(u);
        }
    }
    let mut out = Gtrs { funcs: g.funcs.clone(), preds: BTreeSet::new(), mu: g.mu.clone(), clauses: Vec::new(), rules };
    out.refresh_signature();
    out.mu = g.mu.restrict(&out.funcs);
    out
}

/// A sentence of the first-order theory of rewriting.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Sentence {
    /// `(∀x) x →* x`.
    Reflexivity,
    /// `(∀x,y,z) x → y ∧ y →* z ⇒ x →* z`.
    Compatibility,
    /// `(∀ x⃗, y) xᵢ → y ⇒ f(x⃗) → f(x⃗[y]ᵢ)` for an active argument `i` of `f`.
    Propagation(Symbol, usize),
    /// `(∀ x⃗) A ⇐ c` for a Horn clause.
    Clause(HornClause),
    /// `(∀ x⃗) ℓ → r ⇐ c` for a rewrite rule.
    RuleSentence(Rule),
}

impl fmt::Display for Sentence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sentence::Reflexivity => write!(f, "(Rf) x →* x"),
            Sentence::Compatibility => write!(f, "(Co) x → y ∧ y →* z ⇒ x →* z"),
            Sentence::Propagation(s, i) => {
                let xs: Vec<String> = (1..=s.arity()).map(|j| format!("x{j}")).collect();
                let mut ys = xs.clone();
                ys[*i - 1] = "y".to_string();
                write!(f, "(Pr) x{i} → y ⇒ {s}({}) → {s}({})", xs.join(","), ys.join(","))
            }
            Sentence::Clause(c) => write!(f, "(HC) {c}"),
            Sentence::RuleSentence(r) => write!(f, "(HC) {r}"),
        }
    }
}

/// Emits the theory of a system: reflexivity, compatibility, one propagation
/// sentence per active argument, and one sentence per clause and rule.
pub fn encode_theory(g: &Gtrs) -> Vec<Sentence> {
    let mut out = vec![Sentence::Reflexivity, Sentence::Compatibility];
    for f in &g.funcs {
        for i in g.mu.get(f) {
            out.push(Sentence::Propagation(f.clone(), i));
        }
    }
    out.extend(g.clauses.iter().cloned().map(Sentence::Clause));
    out.extend(g.rules.iter().cloned().map(Sentence::RuleSentence));
    out
}

/// Helper producing a variable term from its name.
pub fn v(name: &str) -> Term {
    Term::Var(var_name(name))
}
