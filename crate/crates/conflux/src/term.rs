//! First-order terms, positions, replacement maps, substitutions and unification.
//!
//! Terms are immutable trees.  Variables are identified by name; function
//! symbols carry their arity and a [`SymbolKind`] so that the reserved
//! grounding constants `⌞x⌟` can never collide with parsed symbols.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Arc;

use thiserror::Error;

/// Errors raised by positional operations on terms.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TermError {
    /// The position does not address a subterm of the given term.
    #[error("position {position} is not valid for term {term}")]
    InvalidPosition { position: Position, term: String },
}

/// The role a symbol plays in a signature.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SymbolKind {
    /// An ordinary function symbol.
    Function,
    /// A predicate symbol used in atoms.
    Predicate,
    /// A constant `⌞x⌟` standing for the variable `x` during grounding.
    Grounding,
}

/// A named symbol with a fixed arity.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Symbol {
    name: Arc<str>,
    arity: usize,
    kind: SymbolKind,
}

impl Symbol {
    /// Creates a function symbol.
    pub fn func(name: &str, arity: usize) -> Self {
        Symbol { name: Arc::from(name), arity, kind: SymbolKind::Function }
    }

    /// Creates a predicate symbol.
    pub fn pred(name: &str, arity: usize) -> Self {
        Symbol { name: Arc::from(name), arity, kind: SymbolKind::Predicate }
    }

    /// Creates the grounding constant associated with variable `var`.
    pub fn grounding(var: &str) -> Self {
        Symbol { name: Arc::from(var), arity: 0, kind: SymbolKind::Grounding }
    }

    /// The symbol's name (for grounding constants, the variable name).
    pub fn name(&self) -> &str {
        &self.name
    }

    /// Number of arguments.
    pub fn arity(&self) -> usize {
        self.arity
    }

    /// The symbol kind.
    pub fn kind(&self) -> SymbolKind {
        self.kind
    }

    /// True for grounding constants.
    pub fn is_grounding(&self) -> bool {
        self.kind == SymbolKind::Grounding
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            SymbolKind::Grounding => write!(f, "⌞{}⌟", self.name),
            _ => write!(f, "{}", self.name),
        }
    }
}

/// Variable names.
pub type Var = Arc<str>;

/// Makes a variable name.
pub fn var_name(name: &str) -> Var {
    Arc::from(name)
}

static FRESH_COUNTER: AtomicUsize = AtomicUsize::new(0);

/// Character reserved for internally generated variable names.  The parser
/// rejects identifiers containing it.
pub const INTERNAL_MARK: char = '⋄';

/// Returns a globally unique internal variable derived from `base`.
pub fn fresh_internal(base: &str) -> Var {
    let stem = base.split(INTERNAL_MARK).next().unwrap_or(base);
    let n = FRESH_COUNTER.fetch_add(1, Ordering::Relaxed);
    Arc::from(format!("{stem}{INTERNAL_MARK}{n}").as_str())
}

/// Returns a variable derived from `base` by appending primes until it is
/// not contained in `used`.
pub fn fresh_primed(base: &str, used: &BTreeSet<Var>) -> Var {
    let mut candidate = format!("{base}'");
    while used.contains(candidate.as_str()) {
        candidate.push('\'');
    }
    Arc::from(candidate.as_str())
}

/// A first-order term.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    /// A variable.
    Var(Var),
    /// A function application; the argument count equals the symbol arity.
    App(Symbol, Vec<Term>),
}

/// A position: a path of 1-based argument indices.  The empty path is the root.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Position(pub Vec<usize>);

impl Position {
    /// The root position Λ.
    pub fn root() -> Self {
        Position(Vec::new())
    }

    /// True for the root position.
    pub fn is_root(&self) -> bool {
        self.0.is_empty()
    }

    /// The position `self.i`.
    pub fn child(&self, i: usize) -> Self {
        let mut v = self.0.clone();
        v.push(i);
        Position(v)
    }

    /// True if `self` is a prefix of `other` (including equality).
    pub fn is_prefix_of(&self, other: &Position) -> bool {
        other.0.len() >= self.0.len() && other.0[..self.0.len()] == self.0[..]
    }
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "Λ");
        }
        let parts: Vec<String> = self.0.iter().map(|i| i.to_string()).collect();
        write!(f, "{}", parts.join("."))
    }
}

/// Which positions [`active_positions`] reports.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PositionFilter {
    /// Every active position.
    All,
    /// Active positions of non-variable subterms.
    NonVariable,
    /// Active positions holding the given variable.
    OfVariable(Var),
}

impl Term {
    /// Builds a variable term.
    pub fn var(name: &str) -> Self {
        Term::Var(Arc::from(name))
    }

    /// Builds an application; panics if the argument count mismatches the arity.
    pub fn app(sym: Symbol, args: Vec<Term>) -> Self {
        assert_eq!(sym.arity(), args.len(), "arity mismatch for {}", sym);
        Term::App(sym, args)
    }

    /// Builds a function application, creating the symbol from the argument count.
    pub fn func(name: &str, args: Vec<Term>) -> Self {
        Term::App(Symbol::func(name, args.len()), args)
    }

    /// Builds a constant.
    pub fn constant(name: &str) -> Self {
        Term::func(name, Vec::new())
    }

    /// True for variables.
    pub fn is_var(&self) -> bool {
        matches!(self, Term::Var(_))
    }

    /// The variable name, if this is a variable.
    pub fn as_var(&self) -> Option<&Var> {
        match self {
            Term::Var(v) => Some(v),
            Term::App(..) => None,
        }
    }

    /// The root symbol, if this is an application.
    pub fn root(&self) -> Option<&Symbol> {
        match self {
            Term::Var(_) => None,
            Term::App(f, _) => Some(f),
        }
    }

    /// Arguments of an application (empty for variables).
    pub fn args(&self) -> &[Term] {
        match self {
            Term::Var(_) => &[],
            Term::App(_, a) => a,
        }
    }

    /// True if the term contains no variables.
    pub fn is_ground(&self) -> bool {
        match self {
            Term::Var(_) => false,
            Term::App(_, a) => a.iter().all(Term::is_ground),
        }
    }

    /// Number of symbol and variable occurrences.
    pub fn size(&self) -> usize {
        match self {
            Term::Var(_) => 1,
            Term::App(_, a) => 1 + a.iter().map(Term::size).sum::<usize>(),
        }
    }

    /// Height of the term tree (a constant or variable has depth 0).
    pub fn depth(&self) -> usize {
        match self {
            Term::Var(_) => 0,
            Term::App(_, a) => a.iter().map(|t| t.depth() + 1).max().unwrap_or(0),
        }
    }

    /// The set of variables of the term.
    pub fn vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    /// Adds the term's variables to `out`.
    pub fn collect_vars(&self, out: &mut BTreeSet<Var>) {
        match self {
            Term::Var(v) => {
                out.insert(v.clone());
            }
            Term::App(_, a) => a.iter().for_each(|t| t.collect_vars(out)),
        }
    }

    /// Variables in left-to-right order of first occurrence.
    pub fn vars_ordered(&self) -> Vec<Var> {
        let mut out = Vec::new();
        self.collect_vars_ordered(&mut out);
        out
    }

    fn collect_vars_ordered(&self, out: &mut Vec<Var>) {
        match self {
            Term::Var(v) => {
                if !out.contains(v) {
                    out.push(v.clone());
                }
            }
            Term::App(_, a) => a.iter().for_each(|t| t.collect_vars_ordered(out)),
        }
    }

    /// Number of occurrences of variable `x`.
    pub fn occurrences(&self, x: &str) -> usize {
        match self {
            Term::Var(v) => usize::from(&**v == x),
            Term::App(_, a) => a.iter().map(|t| t.occurrences(x)).sum(),
        }
    }

    /// True if no variable occurs twice.
    pub fn is_linear(&self) -> bool {
        let mut seen = BTreeSet::new();
        self.linear_walk(&mut seen)
    }

    fn linear_walk(&self, seen: &mut BTreeSet<Var>) -> bool {
        match self {
            Term::Var(v) => seen.insert(v.clone()),
            Term::App(_, a) => a.iter().all(|t| t.linear_walk(seen)),
        }
    }

    /// Function symbols occurring in the term.
    pub fn symbols(&self) -> BTreeSet<Symbol> {
        let mut out = BTreeSet::new();
        self.collect_symbols(&mut out);
        out
    }

    /// Adds the term's function symbols to `out`.
    pub fn collect_symbols(&self, out: &mut BTreeSet<Symbol>) {
        if let Term::App(f, a) = self {
            out.insert(f.clone());
            a.iter().for_each(|t| t.collect_symbols(out));
        }
    }

    /// All positions in lexicographic order.
    pub fn positions(&self) -> Vec<Position> {
        let mut out = Vec::new();
        self.walk_positions(&mut Vec::new(), &mut out);
        out
    }

    fn walk_positions(&self, path: &mut Vec<usize>, out: &mut Vec<Position>) {
        out.push(Position(path.clone()));
        for (i, a) in self.args().iter().enumerate() {
            path.push(i + 1);
            a.walk_positions(path, out);
            path.pop();
        }
    }

    /// The subterm `t|_p`.
    pub fn subterm_at(&self, p: &Position) -> Result<&Term, TermError> {
        let mut cur = self;
        for &i in &p.0 {
            match cur {
                Term::App(_, a) if i >= 1 && i <= a.len() => cur = &a[i - 1],
                _ => {
                    return Err(TermError::InvalidPosition {
                        position: p.clone(),
                        term: self.to_string(),
                    })
                }
            }
        }
        Ok(cur)
    }

    /// The term `t[s]_p`.
    pub fn subterm_replace(&self, p: &Position, s: Term) -> Result<Term, TermError> {
        self.replace_from(&p.0, s).ok_or_else(|| TermError::InvalidPosition {
            position: p.clone(),
            term: self.to_string(),
        })
    }

    fn replace_from(&self, path: &[usize], s: Term) -> Option<Term> {
        match path.split_first() {
            None => Some(s),
            Some((&i, rest)) => match self {
                Term::App(f, a) if i >= 1 && i <= a.len() => {
                    let mut args = a.clone();
                    args[i - 1] = a[i - 1].replace_from(rest, s)?;
                    Some(Term::App(f.clone(), args))
                }
                _ => None,
            },
        }
    }

    /// All subterms paired with their positions, in lexicographic position order.
    pub fn subterms(&self) -> Vec<(Position, &Term)> {
        let mut out = Vec::new();
        self.walk_subterms(&mut Vec::new(), &mut out);
        out
    }

    fn walk_subterms<'a>(&'a self, path: &mut Vec<usize>, out: &mut Vec<(Position, &'a Term)>) {
        out.push((Position(path.clone()), self));
        for (i, a) in self.args().iter().enumerate() {
            path.push(i + 1);
            a.walk_subterms(path, out);
            path.pop();
        }
    }

    /// Renames variables through `map`, leaving unmapped variables unchanged.
    pub fn rename(&self, map: &BTreeMap<Var, Var>) -> Term {
        match self {
            Term::Var(v) => Term::Var(map.get(v).cloned().unwrap_or_else(|| v.clone())),
            Term::App(f, a) => Term::App(f.clone(), a.iter().map(|t| t.rename(map)).collect()),
        }
    }

    /// Replaces every variable `x` by its grounding constant `⌞x⌟`.
    pub fn ground_down(&self) -> Term {
        match self {
            Term::Var(v) => Term::App(Symbol::grounding(v), Vec::new()),
            Term::App(f, a) => Term::App(f.clone(), a.iter().map(Term::ground_down).collect()),
        }
    }

    /// Grounds only the variables in `which`.
    pub fn ground_vars(&self, which: &BTreeSet<Var>) -> Term {
        match self {
            Term::Var(v) if which.contains(v) => Term::App(Symbol::grounding(v), Vec::new()),
            Term::Var(_) => self.clone(),
            Term::App(f, a) => {
                Term::App(f.clone(), a.iter().map(|t| t.ground_vars(which)).collect())
            }
        }
    }

    /// Inverse of [`Term::ground_down`]: grounding constants become variables again.
    pub fn lift_grounding(&self) -> Term {
        match self {
            Term::App(f, a) if f.is_grounding() && a.is_empty() => Term::var(f.name()),
            Term::App(f, a) => Term::App(f.clone(), a.iter().map(Term::lift_grounding).collect()),
            Term::Var(_) => self.clone(),
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => write!(f, "{v}"),
            Term::App(s, a) if a.is_empty() => write!(f, "{s}"),
            Term::App(s, a) => {
                write!(f, "{s}(")?;
                for (i, t) in a.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{t}")?;
                }
                write!(f, ")")
            }
        }
    }
}

/// A replacement map: for each function symbol, the argument indices where
/// rewriting is allowed.  Symbols without an entry have no active arguments.
#[derive(Debug, Clone, PartialEq, Eq, Default, Hash, PartialOrd, Ord)]
pub struct ReplacementMap {
    entries: BTreeMap<Symbol, BTreeSet<usize>>,
}

impl ReplacementMap {
    /// The map with no active arguments anywhere (μ_⊥).
    pub fn bottom() -> Self {
        ReplacementMap::default()
    }

    /// The map activating every argument of the given symbols (μ_⊤).
    pub fn top<'a>(symbols: impl IntoIterator<Item = &'a Symbol>) -> Self {
        let mut m = ReplacementMap::default();
        for f in symbols {
            m.set(f.clone(), (1..=f.arity()).collect());
        }
        m
    }

    /// Sets μ(f), dropping indices outside `1..=arity(f)`.
    pub fn set(&mut self, f: Symbol, indices: BTreeSet<usize>) {
        let arity = f.arity();
        let filtered: BTreeSet<usize> = indices.into_iter().filter(|i| *i >= 1 && *i <= arity).collect();
        if filtered.is_empty() {
            self.entries.remove(&f);
        } else {
            self.entries.insert(f, filtered);
        }
    }

    /// Adds index `i` to μ(f).
    pub fn activate(&mut self, f: &Symbol, i: usize) {
        if i >= 1 && i <= f.arity() {
            self.entries.entry(f.clone()).or_default().insert(i);
        }
    }

    /// μ(f).
    pub fn get(&self, f: &Symbol) -> BTreeSet<usize> {
        if f.is_grounding() {
            return BTreeSet::new();
        }
        self.entries.get(f).cloned().unwrap_or_default()
    }

    /// True if argument `i` of `f` is active.
    pub fn is_active(&self, f: &Symbol, i: usize) -> bool {
        self.entries.get(f).is_some_and(|s| s.contains(&i))
    }

    /// True if every argument of every symbol in `symbols` is active.
    pub fn is_top_for<'a>(&self, symbols: impl IntoIterator<Item = &'a Symbol>) -> bool {
        symbols.into_iter().all(|f| (1..=f.arity()).all(|i| self.is_active(f, i)))
    }

    /// Symbols with at least one active argument.
    pub fn entries(&self) -> impl Iterator<Item = (&Symbol, &BTreeSet<usize>)> {
        self.entries.iter()
    }

    /// Pointwise inclusion μ ⊑ ν.
    pub fn is_below(&self, other: &ReplacementMap) -> bool {
        self.entries.iter().all(|(f, s)| s.iter().all(|i| other.is_active(f, *i)))
    }

    /// Restricts the map to the given symbols.
    pub fn restrict<'a>(&self, symbols: impl IntoIterator<Item = &'a Symbol>) -> Self {
        let keep: BTreeSet<&Symbol> = symbols.into_iter().collect();
        ReplacementMap {
            entries: self
                .entries
                .iter()
                .filter(|(f, _)| keep.contains(f))
                .map(|(f, s)| (f.clone(), s.clone()))
                .collect(),
        }
    }

    /// Total number of active argument indices, Σ |μ(f)|.
    pub fn total(&self) -> usize {
        self.entries.values().map(BTreeSet::len).sum()
    }
}

/// Active positions of `t` under `mu`, filtered by `filter`, in lexicographic order.
pub fn active_positions(t: &Term, mu: &ReplacementMap, filter: &PositionFilter) -> Vec<Position> {
    let mut out = Vec::new();
    walk_active(t, mu, filter, &mut Vec::new(), &mut out);
    out
}

fn walk_active(t: &Term, mu: &ReplacementMap, filter: &PositionFilter, path: &mut Vec<usize>, out: &mut Vec<Position>) {
    let keep = match (filter, t) {
        (PositionFilter::All, _) => true,
        (PositionFilter::NonVariable, Term::App(..)) => true,
        (PositionFilter::OfVariable(x), Term::Var(v)) => x == v,
        _ => false,
    };
    if keep {
        out.push(Position(path.clone()));
    }
    if let Term::App(f, a) = t {
        for (i, arg) in a.iter().enumerate() {
            if mu.is_active(f, i + 1) {
                path.push(i + 1);
                walk_active(arg, mu, filter, path, out);
                path.pop();
            }
        }
    }
}

/// Frozen positions of `t` under `mu`: all positions that are not active.
pub fn frozen_positions(t: &Term, mu: &ReplacementMap) -> Vec<Position> {
    let active: BTreeSet<Position> = active_positions(t, mu, &PositionFilter::All).into_iter().collect();
    t.positions().into_iter().filter(|p| !active.contains(p)).collect()
}

/// Variables occurring at active positions, Var^μ(t).
pub fn active_vars(t: &Term, mu: &ReplacementMap) -> BTreeSet<Var> {
    active_positions(t, mu, &PositionFilter::All)
        .into_iter()
        .filter_map(|p| t.subterm_at(&p).ok().and_then(|s| s.as_var().cloned()))
        .collect()
}

/// Variables occurring at frozen positions, the set written N̄Var^μ(t).
pub fn frozen_vars(t: &Term, mu: &ReplacementMap) -> BTreeSet<Var> {
    frozen_positions(t, mu)
        .into_iter()
        .filter_map(|p| t.subterm_at(&p).ok().and_then(|s| s.as_var().cloned()))
        .collect()
}

/// A finite substitution from variables to terms.
#[derive(Debug, Clone, PartialEq, Eq, Default, Hash, PartialOrd, Ord)]
pub struct Substitution {
    bindings: BTreeMap<Var, Term>,
}

impl Substitution {
    /// The identity substitution.
    pub fn new() -> Self {
        Substitution::default()
    }

    /// Builds a substitution from pairs, skipping identity bindings.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (Var, Term)>) -> Self {
        let mut s = Substitution::new();
        for (v, t) in pairs {
            s.insert(v, t);
        }
        s
    }

    /// Adds `v ↦ t` unless it is the identity binding.
    pub fn insert(&mut self, v: Var, t: Term) {
        if t.as_var() == Some(&v) {
            self.bindings.remove(&v);
        } else {
            self.bindings.insert(v, t);
        }
    }

    /// The binding of `v`, if any.
    pub fn get(&self, v: &str) -> Option<&Term> {
        self.bindings.get(v)
    }

    /// True if `v` is bound.
    pub fn binds(&self, v: &str) -> bool {
        self.bindings.contains_key(v)
    }

    /// Iterates over bindings in variable order.
    pub fn iter(&self) -> impl Iterator<Item = (&Var, &Term)> {
        self.bindings.iter()
    }

    /// Number of bindings.
    pub fn len(&self) -> usize {
        self.bindings.len()
    }

    /// True if no variable is bound.
    pub fn is_empty(&self) -> bool {
        self.bindings.is_empty()
    }

    /// The domain of the substitution.
    pub fn domain(&self) -> BTreeSet<Var> {
        self.bindings.keys().cloned().collect()
    }

    /// Applies the substitution homomorphically.
    pub fn apply(&self, t: &Term) -> Term {
        if self.bindings.is_empty() {
            return t.clone();
        }
        match t {
            Term::Var(v) => self.bindings.get(v).cloned().unwrap_or_else(|| t.clone()),
            Term::App(f, a) => Term::App(f.clone(), a.iter().map(|s| self.apply(s)).collect()),
        }
    }

    /// The composition `other ∘ self` (apply `self` first, then `other`).
    pub fn then(&self, other: &Substitution) -> Substitution {
        let mut out = Substitution::new();
        for (v, t) in &self.bindings {
            out.insert(v.clone(), other.apply(t));
        }
        for (v, t) in &other.bindings {
            if !self.bindings.contains_key(v) {
                out.insert(v.clone(), t.clone());
            }
        }
        out
    }

    /// Keeps only the bindings of the given variables.
    pub fn restrict(&self, vars: &BTreeSet<Var>) -> Substitution {
        Substitution {
            bindings: self.bindings.iter().filter(|(v, _)| vars.contains(*v)).map(|(v, t)| (v.clone(), t.clone())).collect(),
        }
    }

    /// Grounds every term in the range (the substitution written σ↓).
    pub fn ground_down(&self) -> Substitution {
        Substitution { bindings: self.bindings.iter().map(|(v, t)| (v.clone(), t.ground_down())).collect() }
    }
}

impl fmt::Display for Substitution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, (v, t)) in self.bindings.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{v} ↦ {t}")?;
        }
        write!(f, "}}")
    }
}

/// Computes an idempotent most general unifier of `s` and `t`, or `None`.
pub fn unify(s: &Term, t: &Term) -> Option<Substitution> {
    unify_with(s, t, &|_| true)
}

/// Unifies `s` and `t` binding only variables accepted by `bindable`;
/// other variables behave like constants.
pub fn unify_with(s: &Term, t: &Term, bindable: &dyn Fn(&Var) -> bool) -> Option<Substitution> {
    let mut sigma = Substitution::new();
    if unify_into(s, t, &mut sigma, bindable) {
        Some(sigma)
    } else {
        None
    }
}

/// Extends `sigma` (assumed idempotent) to unify `s` and `t`; on failure
/// `sigma` may hold partial bindings.
pub fn unify_into(s: &Term, t: &Term, sigma: &mut Substitution, bindable: &dyn Fn(&Var) -> bool) -> bool {
    let mut stack = vec![(s.clone(), t.clone())];
    while let Some((a, b)) = stack.pop() {
        let a = sigma.apply(&a);
        let b = sigma.apply(&b);
        if a == b {
            continue;
        }
        match (&a, &b) {
            (Term::Var(x), Term::Var(y)) if bindable(y) && !bindable(x) => {
                if !bind(sigma, y.clone(), a.clone()) {
                    return false;
                }
            }
            (Term::Var(x), Term::Var(y)) if bindable(x) && bindable(y) => {
                if !bind(sigma, y.clone(), Term::Var(x.clone())) {
                    return false;
                }
            }
            (Term::Var(x), _) if bindable(x) => {
                if !bind(sigma, x.clone(), b.clone()) {
                    return false;
                }
            }
            (_, Term::Var(y)) if bindable(y) => {
                if !bind(sigma, y.clone(), a.clone()) {
                    return false;
                }
            }
            (Term::App(f, xs), Term::App(g, ys)) if f == g => {
                for (x, y) in xs.iter().zip(ys.iter()).rev() {
                    stack.push((x.clone(), y.clone()));
                }
            }
            _ => return false,
        }
    }
    true
}

fn bind(sigma: &mut Substitution, x: Var, t: Term) -> bool {
    if t.vars().contains(&x) {
        return false;
    }
    let single = Substitution::from_pairs([(x.clone(), t.clone())]);
    let updated: Vec<(Var, Term)> = sigma.iter().map(|(v, u)| (v.clone(), single.apply(u))).collect();
    let mut next = Substitution::new();
    for (v, u) in updated {
        next.insert(v, u);
    }
    next.insert(x, t);
    *sigma = next;
    true
}

/// One-way matching: finds σ with σ(pattern) = target, extending `sigma`.
/// Only variables of `pattern` are bound; variables of `target` are constants.
pub fn match_into(pattern: &Term, target: &Term, sigma: &mut Substitution) -> bool {
    match (pattern, target) {
        (Term::Var(x), _) => match sigma.get(x) {
            Some(bound) => bound == target,
            None => {
                sigma.bindings.insert(x.clone(), target.clone());
                true
            }
        },
        (Term::App(f, xs), Term::App(g, ys)) if f == g => {
            xs.iter().zip(ys.iter()).all(|(x, y)| match_into(x, y, sigma))
        }
        _ => false,
    }
}

/// Matches `pattern` against `target` from scratch.
pub fn matches(pattern: &Term, target: &Term) -> Option<Substitution> {
    let mut s = Substitution::new();
    if match_into(pattern, target, &mut s) {
        s.bindings.retain(|v, t| t.as_var() != Some(v));
        Some(s)
    } else {
        None
    }
}

/// Builds a renaming that maps every variable of `vars` to a name outside `in_use`.
pub fn renaming_apart(vars: &BTreeSet<Var>, in_use: &BTreeSet<Var>) -> BTreeMap<Var, Var> {
    let mut used: BTreeSet<Var> = in_use.union(vars).cloned().collect();
    let mut map = BTreeMap::new();
    for v in vars {
        if in_use.contains(v) {
            let fresh = fresh_primed(v, &used);
            used.insert(fresh.clone());
            map.insert(v.clone(), fresh);
        }
    }
    map
}

/// True if `s` and `t` are equal up to a bijective renaming of variables.
pub fn variant(s: &Term, t: &Term) -> bool {
    let mut fw = BTreeMap::new();
    let mut bw = BTreeMap::new();
    variant_walk(s, t, &mut fw, &mut bw)
}

/// Searches a bijective renaming between the two term lists jointly.
pub fn variant_many(s: &[Term], t: &[Term]) -> bool {
    if s.len() != t.len() {
        return false;
    }
    let mut fw = BTreeMap::new();
    let mut bw = BTreeMap::new();
    s.iter().zip(t.iter()).all(|(a, b)| variant_walk(a, b, &mut fw, &mut bw))
}

fn variant_walk(s: &Term, t: &Term, fw: &mut BTreeMap<Var, Var>, bw: &mut BTreeMap<Var, Var>) -> bool {
    match (s, t) {
        (Term::Var(x), Term::Var(y)) => {
            let a = fw.entry(x.clone()).or_insert_with(|| y.clone()).clone();
            let b = bw.entry(y.clone()).or_insert_with(|| x.clone()).clone();
            &a == y && &b == x
        }
        (Term::App(f, xs), Term::App(g, ys)) if f == g => {
            xs.iter().zip(ys.iter()).all(|(a, b)| variant_walk(a, b, fw, bw))
        }
        _ => false,
    }
}

/// Renames the variables of a term list to `v0, v1, ...` in order of first occurrence.
pub fn canonical_renaming(terms: &[&Term]) -> BTreeMap<Var, Var> {
    let mut order: Vec<Var> = Vec::new();
    for t in terms {
        for v in t.vars_ordered() {
            if !order.contains(&v) {
                order.push(v);
            }
        }
    }
    order
        .into_iter()
        .enumerate()
        .map(|(i, v)| (v, Arc::from(format!("{INTERNAL_MARK}v{i}").as_str())))
        .collect()
}
