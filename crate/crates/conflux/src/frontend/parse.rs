//! Parsers for the COPS and TPDB problem formats, and their mixture.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::system::{Atom, Gtrs, HornClause, Pred, Rule, Semantics};
use crate::term::{ReplacementMap, Symbol, Term};

/// Input formats.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Format {
    /// The Confluence Competition format.
    Cops,
    /// The Termination Problem Database format.
    Tpdb,
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Cops => "COPS",
            Format::Tpdb => "TPDB",
        })
    }
}

/// A parse error with its source location (1-based).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{column}: {message}")]
pub struct ParseError {
    /// Line number.
    pub line: usize,
    /// Column number.
    pub column: usize,
    /// Description.
    pub message: String,
}

/// Guesses the format from block keywords.
pub fn detect_format(text: &str) -> Format {
    if text.contains("CONDITIONTYPE") || text.contains("REPLACEMENT-MAP") {
        Format::Cops
    } else if text.contains("STRATEGY") && text.contains("CONTEXTSENSITIVE") {
        Format::Tpdb
    } else {
        Format::Cops
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Open,
    Close,
    Comma,
    Bar,
    Arrow,
    ReachArrow,
    CondEq,
    ClauseArrow,
    Ident(String),
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Open => f.write_str("'('"),
            Tok::Close => f.write_str("')'"),
            Tok::Comma => f.write_str("','"),
            Tok::Bar => f.write_str("'|'"),
            Tok::Arrow => f.write_str("'->'"),
            Tok::ReachArrow => f.write_str("'->*'"),
            Tok::CondEq => f.write_str("'=='"),
            Tok::ClauseArrow => f.write_str("'<='"),
            Tok::Ident(s) => write!(f, "'{s}'"),
        }
    }
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

const OPERATORS: [(&str, Tok); 4] =
    [("->*", Tok::ReachArrow), ("->", Tok::Arrow), ("==", Tok::CondEq), ("<=", Tok::ClauseArrow)];

fn operator_at(chars: &[char], i: usize) -> Option<(usize, Tok)> {
    OPERATORS.iter().find_map(|(s, tok)| {
        let n = s.chars().count();
        (chars.len() >= i + n && chars[i..i + n].iter().copied().eq(s.chars())).then(|| (n, tok.clone()))
    })
}

/// A top-level `( KEYWORD ... )` block as a token range.
struct Block {
    keyword: String,
    line: usize,
    column: usize,
    body: Vec<Spanned>,
    end: (usize, usize),
}

struct Lexer {
    chars: Vec<char>,
    pos: usize,
    line: usize,
    column: usize,
}

impl Lexer {
    fn new(text: &str) -> Self {
        Lexer { chars: text.chars().collect(), pos: 0, line: 1, column: 1 }
    }

    fn bump(&mut self) -> char {
        let c = self.chars[self.pos];
        self.pos += 1;
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        c
    }

    fn err(&self, message: impl Into<String>) -> ParseError {
        ParseError { line: self.line, column: self.column, message: message.into() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.bump();
        }
    }

    fn next(&mut self) -> Option<Spanned> {
        self.skip_ws();
        if self.pos >= self.chars.len() {
            return None;
        }
        let (line, column) = (self.line, self.column);
        let tok = match self.chars[self.pos] {
            '(' => {
                self.bump();
                Tok::Open
            }
            ')' => {
                self.bump();
                Tok::Close
            }
            ',' => {
                self.bump();
                Tok::Comma
            }
            '|' => {
                self.bump();
                Tok::Bar
            }
            _ => {
                if let Some((n, tok)) = operator_at(&self.chars, self.pos) {
                    (0..n).for_each(|_| {
                        self.bump();
                    });
                    tok
                } else {
                    let mut s = String::new();
                    while self.pos < self.chars.len() {
                        let c = self.chars[self.pos];
                        if c.is_whitespace() || "(),|".contains(c) || operator_at(&self.chars, self.pos).is_some() {
                            break;
                        }
                        s.push(self.bump());
                    }
                    Tok::Ident(s)
                }
            }
        };
        Some(Spanned { tok, line, column })
    }

    /// Skips the raw text of a block whose opening parenthesis and keyword
    /// were consumed, honouring nested parentheses.
    fn skip_raw(&mut self) -> Result<(), ParseError> {
        let mut depth = 1usize;
        while self.pos < self.chars.len() {
            match self.bump() {
                '(' => depth += 1,
                ')' => {
                    depth -= 1;
                    if depth == 0 {
                        return Ok(());
                    }
                }
                _ => {}
            }
        }
        Err(self.err("unterminated block"))
    }

    fn blocks(&mut self) -> Result<(Vec<Block>, Vec<String>), ParseError> {
        let mut blocks = Vec::new();
        let mut skipped = Vec::new();
        while let Some(t) = self.next() {
            if t.tok != Tok::Open {
                return Err(ParseError { line: t.line, column: t.column, message: format!("expected '(' but found {}", t.tok) });
            }
            let kw = self.next().ok_or_else(|| self.err("unterminated block"))?;
            let Tok::Ident(keyword) = kw.tok else {
                return Err(ParseError { line: kw.line, column: kw.column, message: "expected a block keyword".into() });
            };
            if keyword == "COMMENT" {
                self.skip_raw()?;
                skipped.push(format!("{}:{}: skipped COMMENT block", t.line, t.column));
                continue;
            }
            let mut body = Vec::new();
            let mut depth = 0usize;
            let end = loop {
                let s = self.next().ok_or_else(|| self.err(format!("unterminated {keyword} block")))?;
                match s.tok {
                    Tok::Open => depth += 1,
                    Tok::Close if depth == 0 => break (s.line, s.column),
                    Tok::Close => depth -= 1,
                    _ => {}
                }
                body.push(s);
            };
            blocks.push(Block { keyword, line: t.line, column: t.column, body, end });
        }
        Ok((blocks, skipped))
    }
}

/// An atom as written, before the meaning of `==` is fixed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SurfaceAtom {
    /// `s == t`.
    Cond(Term, Term),
    /// `s ->* t`.
    Reach(Term, Term),
    /// `s -> t`.
    Step(Term, Term),
    /// A predicate application.
    User(String, Vec<Term>),
}

/// A rule as written.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurfaceRule {
    /// Left-hand side.
    pub lhs: Term,
    /// Right-hand side.
    pub rhs: Term,
    /// Conditions in order.
    pub conds: Vec<SurfaceAtom>,
    /// Line of the rule.
    pub line: usize,
    /// Column of the rule.
    pub column: usize,
}

/// A clause as written in the extended `CLAUSES` block.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurfaceClause {
    /// Head atom.
    pub head: SurfaceAtom,
    /// Body atoms.
    pub body: Vec<SurfaceAtom>,
}

/// The parsed content of a problem file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProblemFile {
    /// Detected or requested format.
    pub format: Format,
    /// The declared condition type.
    pub condition_type: Option<Semantics>,
    /// Declared replacement map entries.
    pub rmap: Option<BTreeMap<String, BTreeSet<usize>>>,
    /// Declared variables.
    pub vars: BTreeSet<String>,
    /// Declared signature entries.
    pub signature: BTreeMap<String, usize>,
    /// Rules in order.
    pub rules: Vec<SurfaceRule>,
    /// Extra Horn clauses, if a `CLAUSES` block is present.
    pub clauses: Option<Vec<SurfaceClause>>,
    /// Diagnostics about skipped blocks.
    pub diagnostics: Vec<String>,
}

struct Cursor<'a> {
    toks: &'a [Spanned],
    pos: usize,
    end: (usize, usize),
    vars: &'a BTreeSet<String>,
}

impl<'a> Cursor<'a> {
    fn peek(&self) -> Option<&'a Tok> {
        self.toks.get(self.pos).map(|s| &s.tok)
    }

    fn here(&self) -> (usize, usize) {
        self.toks.get(self.pos).map_or(self.end, |s| (s.line, s.column))
    }

    fn err(&self, message: impl Into<String>) -> ParseError {
        let (line, column) = self.here();
        ParseError { line, column, message: message.into() }
    }

    fn next(&mut self) -> Option<&'a Tok> {
        let t = self.peek();
        self.pos += 1;
        t
    }

    fn expect(&mut self, tok: Tok) -> Result<(), ParseError> {
        match self.peek() {
            Some(t) if *t == tok => {
                self.pos += 1;
                Ok(())
            }
            Some(t) => Err(self.err(format!("expected {tok} but found {t}"))),
            None => Err(self.err(format!("expected {tok} at end of block"))),
        }
    }

    fn ident(&mut self) -> Result<String, ParseError> {
        match self.peek() {
            Some(Tok::Ident(s)) => {
                self.pos += 1;
                Ok(s.clone())
            }
            Some(t) => Err(self.err(format!("expected an identifier but found {t}"))),
            None => Err(self.err("expected an identifier at end of block")),
        }
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        let name = self.ident()?;
        if self.peek() != Some(&Tok::Open) {
            return Ok(if self.vars.contains(&name) { Term::var(&name) } else { Term::constant(&name) });
        }
        self.pos += 1;
        let mut args = Vec::new();
        if self.peek() == Some(&Tok::Close) {
            self.pos += 1;
            return Ok(Term::constant(&name));
        }
        loop {
            args.push(self.term()?);
            match self.next() {
                Some(Tok::Comma) => continue,
                Some(Tok::Close) => break,
                _ => {
                    self.pos -= 1;
                    return Err(self.err("expected ',' or ')' in argument list"));
                }
            }
        }
        Ok(Term::func(&name, args))
    }

    fn atom(&mut self) -> Result<SurfaceAtom, ParseError> {
        let s = self.term()?;
        let op = self.peek().cloned();
        let make: fn(Term, Term) -> SurfaceAtom = match op {
            Some(Tok::CondEq) => SurfaceAtom::Cond,
            Some(Tok::ReachArrow) => SurfaceAtom::Reach,
            Some(Tok::Arrow) => SurfaceAtom::Step,
            _ => {
                return match s {
                    Term::App(f, args) => Ok(SurfaceAtom::User(f.name().to_string(), args)),
                    Term::Var(_) => Err(self.err("a variable is not an atom")),
                };
            }
        };
        self.pos += 1;
        let t = self.term()?;
        Ok(make(s, t))
    }

    fn atoms(&mut self) -> Result<Vec<SurfaceAtom>, ParseError> {
        let mut out = vec![self.atom()?];
        while self.peek() == Some(&Tok::Comma) {
            self.pos += 1;
            out.push(self.atom()?);
        }
        Ok(out)
    }

    fn at_end(&self) -> bool {
        self.pos >= self.toks.len()
    }
}

fn semantics_of(word: &str) -> Option<Semantics> {
    match word {
        "ORIENTED" => Some(Semantics::Oriented),
        "JOIN" => Some(Semantics::Join),
        "SEMI-EQUATIONAL" | "SEMIEQUATIONAL" => Some(Semantics::SemiEquational),
        _ => None,
    }
}

fn block_error(b: &Block, message: impl Into<String>) -> ParseError {
    ParseError { line: b.line, column: b.column, message: message.into() }
}

fn replacement_entries(toks: &[Spanned], end: (usize, usize)) -> Result<BTreeMap<String, BTreeSet<usize>>, ParseError> {
    let none = BTreeSet::new();
    let mut c = Cursor { toks, pos: 0, end, vars: &none };
    let mut out = BTreeMap::new();
    while !c.at_end() {
        c.expect(Tok::Open)?;
        let f = c.ident()?;
        let mut idx = BTreeSet::new();
        while let Some(Tok::Ident(s)) = c.peek() {
            let i: usize = s.parse().map_err(|_| c.err(format!("'{s}' is not an argument index")))?;
            idx.insert(i);
            c.pos += 1;
        }
        c.expect(Tok::Close)?;
        out.insert(f, idx);
    }
    Ok(out)
}

/// Parses a file into its surface form.
pub fn parse_file(text: &str, hint: Option<Format>) -> Result<ProblemFile, ParseError> {
    let format = hint.unwrap_or_else(|| detect_format(text));
    let (blocks, mut diagnostics) = Lexer::new(text).blocks()?;
    let mut file = ProblemFile {
        format,
        condition_type: None,
        rmap: None,
        vars: BTreeSet::new(),
        signature: BTreeMap::new(),
        rules: Vec::new(),
        clauses: None,
        diagnostics: Vec::new(),
    };
    for b in blocks.iter().filter(|b| b.keyword == "VAR") {
        for s in &b.body {
            match &s.tok {
                Tok::Ident(x) => {
                    file.vars.insert(x.clone());
                }
                t => return Err(ParseError { line: s.line, column: s.column, message: format!("unexpected {t} in VAR block") }),
            }
        }
    }
    for b in &blocks {
        match b.keyword.as_str() {
            "VAR" => {}
            "CONDITIONTYPE" => {
                let word = match b.body.as_slice() {
                    [Spanned { tok: Tok::Ident(w), .. }] => w.clone(),
                    _ => return Err(block_error(b, "CONDITIONTYPE expects one word")),
                };
                let sem = semantics_of(&word).ok_or_else(|| block_error(b, format!("unknown condition type '{word}'")))?;
                file.condition_type = Some(sem);
            }
            "REPLACEMENT-MAP" => {
                file.rmap = Some(replacement_entries(&b.body, b.end)?);
            }
            "STRATEGY" => match b.body.first().map(|s| &s.tok) {
                Some(Tok::Ident(w)) if w == "CONTEXTSENSITIVE" => {
                    file.rmap = Some(replacement_entries(&b.body[1..], b.end)?);
                }
                _ => diagnostics.push(format!("{}:{}: skipped unsupported STRATEGY block", b.line, b.column)),
            },
            "SIG" => {
                let none = BTreeSet::new();
                let mut c = Cursor { toks: &b.body, pos: 0, end: b.end, vars: &none };
                while !c.at_end() {
                    c.expect(Tok::Open)?;
                    let f = c.ident()?;
                    let n = c.ident()?;
                    let n: usize = n.parse().map_err(|_| c.err(format!("'{n}' is not an arity")))?;
                    c.expect(Tok::Close)?;
                    file.signature.insert(f, n);
                }
            }
            "RULES" => {
                let mut c = Cursor { toks: &b.body, pos: 0, end: b.end, vars: &file.vars };
                while !c.at_end() {
                    let (line, column) = c.here();
                    let lhs = c.term()?;
                    if lhs.is_var() {
                        return Err(ParseError { line, column, message: "left-hand side is a variable".into() });
                    }
                    c.expect(Tok::Arrow)?;
                    let rhs = c.term()?;
                    let conds = if c.peek() == Some(&Tok::Bar) {
                        c.pos += 1;
                        c.atoms()?
                    } else {
                        Vec::new()
                    };
                    file.rules.push(SurfaceRule { lhs, rhs, conds, line, column });
                }
            }
            "CLAUSES" => {
                let mut c = Cursor { toks: &b.body, pos: 0, end: b.end, vars: &file.vars };
                let mut clauses = Vec::new();
                while !c.at_end() {
                    let head = c.atom()?;
                    let body = if c.peek() == Some(&Tok::ClauseArrow) {
                        c.pos += 1;
                        c.atoms()?
                    } else {
                        Vec::new()
                    };
                    clauses.push(SurfaceClause { head, body });
                }
                file.clauses = Some(clauses);
            }
            other => diagnostics.push(format!("{}:{}: skipped unknown block {other}", b.line, b.column)),
        }
    }
    file.diagnostics = diagnostics;
    Ok(file)
}

struct Signature {
    arities: BTreeMap<String, usize>,
}

impl Signature {
    fn check_term(&mut self, t: &Term, line: usize, column: usize) -> Result<(), ParseError> {
        if let Term::App(f, args) = t {
            self.declare(f.name(), args.len(), line, column)?;
            for a in args {
                self.check_term(a, line, column)?;
            }
        }
        Ok(())
    }

    fn declare(&mut self, name: &str, arity: usize, line: usize, column: usize) -> Result<(), ParseError> {
        match self.arities.get(name) {
            Some(&n) if n != arity => Err(ParseError {
                line,
                column,
                message: format!("symbol '{name}' used with arity {arity} but previously with arity {n}"),
            }),
            _ => {
                self.arities.insert(name.to_string(), arity);
                Ok(())
            }
        }
    }
}

fn lower_atom(a: &SurfaceAtom, sig: &mut Signature, line: usize, column: usize) -> Result<Atom, ParseError> {
    let atom = match a {
        SurfaceAtom::Cond(s, t) => Atom::cond(s.clone(), t.clone()),
        SurfaceAtom::Reach(s, t) => Atom::reach(s.clone(), t.clone()),
        SurfaceAtom::Step(s, t) => Atom::step(s.clone(), t.clone()),
        SurfaceAtom::User(p, args) => Atom { pred: Pred::User(Symbol::pred(p, args.len())), args: args.clone() },
    };
    for t in &atom.args {
        sig.check_term(t, line, column)?;
    }
    Ok(atom)
}

impl ProblemFile {
    /// Builds the system described by the file.
    pub fn to_gtrs(&self) -> Result<Gtrs, ParseError> {
        let mut sig = Signature { arities: self.signature.clone() };
        let mut rules = Vec::new();
        for (i, r) in self.rules.iter().enumerate() {
            sig.check_term(&r.lhs, r.line, r.column)?;
            sig.check_term(&r.rhs, r.line, r.column)?;
            let conds = r.conds.iter().map(|a| lower_atom(a, &mut sig, r.line, r.column)).collect::<Result<Vec<_>, _>>()?;
            rules.push(Rule::new((i + 1).to_string(), r.lhs.clone(), r.rhs.clone(), conds));
        }
        let conditional = rules.iter().any(Rule::is_conditional);
        let mut clauses = match self.condition_type {
            Some(sem) => sem.clauses(),
            None if conditional && self.clauses.is_none() => Semantics::Oriented.clauses(),
            None => Vec::new(),
        };
        for c in self.clauses.iter().flatten() {
            let head = lower_atom(&c.head, &mut sig, 0, 0)?;
            if matches!(head.pred, Pred::Step | Pred::Reach) {
                return Err(ParseError { line: 0, column: 0, message: "clause heads may not be rewrite atoms".into() });
            }
            let body = c.body.iter().map(|a| lower_atom(a, &mut sig, 0, 0)).collect::<Result<Vec<_>, _>>()?;
            clauses.push(HornClause::new(head, body));
        }
        let extra: BTreeSet<Symbol> = self.signature.iter().map(|(f, n)| Symbol::func(f, *n)).collect();
        let mut g = Gtrs::new(rules, ReplacementMap::bottom(), clauses, extra);
        let mut mu = ReplacementMap::top(&g.funcs);
        if let Some(entries) = &self.rmap {
            for (name, idx) in entries {
                let f = g.funcs.iter().find(|f| f.name() == name).cloned().unwrap_or_else(|| {
                    Symbol::func(name, sig.arities.get(name).copied().unwrap_or(idx.iter().copied().max().unwrap_or(0)))
                });
                if let Some(bad) = idx.iter().find(|i| **i == 0 || **i > f.arity()) {
                    return Err(ParseError {
                        line: 0,
                        column: 0,
                        message: format!("replacement index {bad} out of range for '{name}' of arity {}", f.arity()),
                    });
                }
                mu.set(f, idx.clone());
            }
        }
        g.mu = mu.restrict(&g.funcs);
        Ok(g)
    }
}

/// Parses a problem into a system.
pub fn parse(text: &str, hint: Option<Format>) -> Result<Gtrs, ParseError> {
    parse_file(text, hint)?.to_gtrs()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::system::{classify, v, SystemClass};

    const COPS_R_BOT: &str = "(CONDITIONTYPE ORIENTED)\n(REPLACEMENT-MAP\n  (f )\n  (g )\n  (s )\n)\n(VAR x)\n(RULES\n  g(s(x)) -> g(x)\n  f(g(x)) -> x | x == s(0)\n)\n";
    const TPDB_R_BOT: &str = "(STRATEGY CONTEXTSENSITIVE\n  (f )\n  (g )\n  (s )\n)\n(VAR x)\n(RULES\n  g(s(x)) -> g(x)\n  f(g(x)) -> x | x ->* s(0)\n)\n";

    #[test]
    fn replacement_map_encodings() {
        assert_eq!(detect_format(COPS_R_BOT), Format::Cops);
        assert_eq!(detect_format(TPDB_R_BOT), Format::Tpdb);
        let left = parse(COPS_R_BOT, None).unwrap();
        let right = parse(TPDB_R_BOT, None).unwrap();
        assert_eq!(left.mu, ReplacementMap::bottom());
        assert_eq!(left.rules.len(), 2);
        assert_eq!(classify(&left), SystemClass::CsCtrs(Semantics::Oriented));
        assert_eq!(classify(&right), SystemClass::CsCtrs(Semantics::Oriented));
        assert_eq!(left.rules[1].conds, vec![Atom::cond(v("x"), Term::func("s", vec![Term::constant("0")]))]);
        assert_eq!(right.rules[1].conds, vec![Atom::reach(v("x"), Term::func("s", vec![Term::constant("0")]))]);
        assert_eq!(left.mu, right.mu);
        assert_eq!(left.clauses, right.clauses);
    }

    #[test]
    fn plain_trs() {
        let g = parse("(VAR x)(RULES f(x) -> x)", None).unwrap();
        assert_eq!(g.rules.len(), 1);
        assert!(g.mu_is_top());
        assert!(g.clauses.is_empty());
        assert_eq!(classify(&g), SystemClass::Trs);
        assert_eq!(g.rules[0].to_string(), "f(x) → x");
    }

    #[test]
    fn undeclared_identifiers_are_constants() {
        let g = parse("(RULES f(x) -> x)", None).unwrap();
        assert_eq!(g.rules[0].rhs, Term::constant("x"));
    }

    #[test]
    fn errors_carry_locations() {
        let e = parse("(VAR x)\n(RULES\n  f(x) -> g(x)\n  f(x,x) -> x\n)", None).unwrap_err();
        assert_eq!((e.line, e.column), (4, 3));
        assert!(e.message.contains("arity"));
        let e = parse("(VAR x)(RULES f(x) g(x))", None).unwrap_err();
        assert!(e.message.contains("'->'"), "{e}");
        assert!(parse("(VAR x)(RULES f(x) -> x", None).is_err());
        assert!(parse("(REPLACEMENT-MAP (f 3))(VAR x)(RULES f(x) -> x)", None).is_err());
    }

    #[test]
    fn defaults_and_skips() {
        let f = parse_file("(COMMENT a (nested) comment)(FOO bar)(VAR x)(RULES a -> b | b == a)", None).unwrap();
        assert_eq!(f.diagnostics.len(), 2);
        let g = f.to_gtrs().unwrap();
        assert_eq!(g.semantics(), Some(Semantics::Oriented));
        let j = parse("(CONDITIONTYPE JOIN)(RULES a -> b | b == a)", None).unwrap();
        assert_eq!(j.semantics(), Some(Semantics::Join));
        let partial = parse("(REPLACEMENT-MAP (f 1))(VAR x y)(RULES f(g(x,y)) -> x)", None).unwrap();
        let gs = Symbol::func("g", 2);
        assert!(partial.mu.is_active(&gs, 2));
        assert!(!partial.mu_is_top() || partial.mu.is_active(&Symbol::func("f", 1), 1));
    }

    #[test]
    fn compact_spelling() {
        let g = parse("(VAR x y)(RULES f(x,y)->x|g(x)->*y,y==x)", None).unwrap();
        assert_eq!(g.rules[0].conds.len(), 2);
        assert_eq!(g.rules[0].conds[0].pred, Pred::Reach);
    }

    #[test]
    fn user_clauses() {
        let g = parse("(VAR x y)(CLAUSES p(x,y) <= x ->* y)(RULES f(x) -> x | p(x,a))", None).unwrap();
        assert_eq!(g.clauses.len(), 1);
        assert_eq!(classify(&g), SystemClass::Gtrs);
    }
}
