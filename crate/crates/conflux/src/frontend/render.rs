//! Rendering of systems back to problem files and of proofs to text.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use serde::Serialize;
use thiserror::Error;

use crate::framework::{ProofTree, StepResult, Verdict};
use crate::system::{Atom, Gtrs, HornClause, Pred, Rule, Semantics};
use crate::term::{Term, Var};

/// Output formats for systems.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SystemFormat {
    /// COPS: `==` conditions under a condition type.
    Cops,
    /// TPDB: oriented `->*` conditions only.
    Tpdb,
    /// COPS syntax with `->`, `->*`, user predicates and a `CLAUSES` block.
    Extended,
}

/// A feature the requested format cannot express.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("cannot render in this format: {0}")]
pub struct RenderError(pub String);

fn atom_text(a: &Atom, oriented_reach: bool) -> String {
    match &a.pred {
        Pred::Cond if oriented_reach => format!("{} ->* {}", a.args[0], a.args[1]),
        Pred::Cond => format!("{} == {}", a.args[0], a.args[1]),
        Pred::Reach => format!("{} ->* {}", a.args[0], a.args[1]),
        Pred::Step => format!("{} -> {}", a.args[0], a.args[1]),
        Pred::User(_) => a.to_string(),
    }
}

fn rule_text(r: &Rule, oriented_reach: bool) -> String {
    let mut s = format!("{} -> {}", r.lhs, r.rhs);
    if !r.conds.is_empty() {
        let parts: Vec<String> = r.conds.iter().map(|a| atom_text(a, oriented_reach)).collect();
        write!(s, " | {}", parts.join(", ")).unwrap();
    }
    s
}

fn clause_text(c: &HornClause) -> String {
    let mut s = atom_text(&c.head, false);
    if !c.body.is_empty() {
        let parts: Vec<String> = c.body.iter().map(|a| atom_text(a, false)).collect();
        write!(s, " <= {}", parts.join(", ")).unwrap();
    }
    s
}

fn condition_word(sem: Semantics) -> &'static str {
    match sem {
        Semantics::Oriented => "ORIENTED",
        Semantics::Join => "JOIN",
        Semantics::SemiEquational => "SEMI-EQUATIONAL",
    }
}

fn declared_vars(g: &Gtrs, with_clauses: bool) -> BTreeSet<Var> {
    let mut vs = g.vars();
    for c in g.clauses.iter().filter(|_| with_clauses) {
        vs.extend(c.head.vars());
        c.body.iter().for_each(|a| vs.extend(a.vars()));
    }
    vs
}

/// Renders a system as a problem file.
pub fn render_system(g: &Gtrs, format: SystemFormat) -> Result<String, RenderError> {
    let sem = g.semantics();
    let conditional = g.is_conditional();
    let atoms = || g.rules.iter().flat_map(|r| r.conds.iter());
    match format {
        SystemFormat::Cops => {
            if !g.clauses.is_empty() && sem.is_none() {
                return Err(RenderError("user-defined Horn clauses".into()));
            }
            if conditional && g.clauses.is_empty() {
                return Err(RenderError("conditional rules without a condition type".into()));
            }
            if let Some(a) = atoms().find(|a| a.pred != Pred::Cond) {
                return Err(RenderError(format!("condition {a} is not an == condition")));
            }
        }
        SystemFormat::Tpdb => {
            if conditional && sem != Some(Semantics::Oriented) {
                return Err(RenderError("TPDB conditions are oriented".into()));
            }
            if let Some(a) = atoms().find(|a| !matches!(a.pred, Pred::Cond | Pred::Reach)) {
                return Err(RenderError(format!("condition {a} has no TPDB spelling")));
            }
            if g.rules.iter().any(|r| r.conds.iter().any(|a| a.pred == Pred::Cond))
                && g.rules.iter().any(|r| r.conds.iter().any(|a| a.pred == Pred::Reach)) {
                    return Err(RenderError("TPDB cannot distinguish == from ->* conditions".into()));
                }
        }
        SystemFormat::Extended => {}
    }
    let mut out = String::new();
    let mut clause_vars = false;
    let standard = sem.filter(|_| !g.clauses.is_empty());
    match format {
        SystemFormat::Cops => {
            if let Some(sem) = standard {
                writeln!(out, "(CONDITIONTYPE {})", condition_word(sem)).unwrap();
            }
        }
        SystemFormat::Extended => match standard {
            Some(sem) => writeln!(out, "(CONDITIONTYPE {})", condition_word(sem)).unwrap(),
            None if !g.clauses.is_empty() || conditional => {
                clause_vars = true;
                out.push_str("(CLAUSES\n");
                for c in &g.clauses {
                    writeln!(out, "  {}", clause_text(c)).unwrap();
                }
                out.push_str(")\n");
            }
            None => {}
        },
        SystemFormat::Tpdb => {}
    }
    if !g.mu_is_top() {
        out.push_str(if format == SystemFormat::Tpdb { "(STRATEGY CONTEXTSENSITIVE\n" } else { "(REPLACEMENT-MAP\n" });
        for f in g.funcs.iter().filter(|f| f.arity() > 0) {
            let idx: Vec<String> = g.mu.get(f).iter().map(|i| i.to_string()).collect();
            writeln!(out, "  ({} {})", f.name(), idx.join(" ")).unwrap();
        }
        out.push_str(")\n");
    }
    let mut occurring = BTreeSet::new();
    for r in &g.rules {
        r.lhs.collect_symbols(&mut occurring);
        r.rhs.collect_symbols(&mut occurring);
        r.conds.iter().for_each(|a| a.args.iter().for_each(|t| t.collect_symbols(&mut occurring)));
    }
    for c in &g.clauses {
        std::iter::once(&c.head).chain(&c.body).for_each(|a| a.args.iter().for_each(|t| t.collect_symbols(&mut occurring)));
    }
    let unused: Vec<String> =
        g.funcs.iter().filter(|f| !occurring.contains(*f)).map(|f| format!("({} {})", f.name(), f.arity())).collect();
    if !unused.is_empty() {
        writeln!(out, "(SIG {})", unused.join(" ")).unwrap();
    }
    let vars: Vec<String> = declared_vars(g, clause_vars).iter().map(|v| v.to_string()).collect();
    writeln!(out, "(VAR {})", vars.join(" ")).unwrap();
    out.push_str("(RULES\n");
    let tpdb_cond = format == SystemFormat::Tpdb;
    for r in &g.rules {
        writeln!(out, "  {}", rule_text(r, tpdb_cond)).unwrap();
    }
    out.push_str(")\n");
    Ok(out)
}

fn normalized(g: &Gtrs) -> Vec<Rule> {
    let oriented = g.semantics() == Some(Semantics::Oriented);
    let mut rules: Vec<Rule> = g
        .rules
        .iter()
        .map(|r| {
            let conds = r
                .conds
                .iter()
                .map(|a| match a.pred {
                    Pred::Cond if oriented => Atom::reach(a.args[0].clone(), a.args[1].clone()),
                    _ => a.clone(),
                })
                .collect();
            Rule { conds, ..r.clone() }.canonical()
        })
        .collect();
    rules.sort();
    rules
}

/// True if two systems coincide up to variable renaming, reading `≈` as `→*`
/// under the oriented semantics.
pub fn equivalent_systems(a: &Gtrs, b: &Gtrs) -> bool {
    a.mu == b.mu && a.funcs == b.funcs && a.clauses.len() == b.clauses.len()
        && a.clauses.iter().all(|c| b.clauses.iter().any(|d| c.is_variant_of(d)))
        && normalized(a) == normalized(b)
}

/// Proof output modes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ProofFormat {
    /// Indented human-readable tree.
    Text,
    /// One JSON object per node.
    Structured,
}

fn problem_line(t: &ProofTree) -> String {
    let p = t.problem();
    match &p.pair {
        Some(pi) => format!("{}: {} in {}", p.kind, pi, p.system.summary()),
        None => format!("{}: {}", p.kind, p.system.summary()),
    }
}

fn render_text(t: &ProofTree, depth: usize, out: &mut String) {
    let pad = "  ".repeat(depth);
    writeln!(out, "{pad}{}", problem_line(t)).unwrap();
    match t {
        ProofTree::Open(_) => writeln!(out, "{pad}  open").unwrap(),
        ProofTree::Node { step, result, .. } => {
            let mut head = format!("{pad}  {}", step.processor);
            if let Some(c) = step.combination {
                write!(head, " [{c}]").unwrap();
            }
            if !step.sound || !step.complete {
                let flags = match (step.sound, step.complete) {
                    (true, false) => "sound only",
                    (false, true) => "complete only",
                    _ => "neither sound nor complete",
                };
                write!(head, " ({flags})").unwrap();
            }
            writeln!(out, "{head}").unwrap();
            for n in &step.notes {
                writeln!(out, "{pad}    - {n}").unwrap();
            }
            match result {
                StepResult::Yes => writeln!(out, "{pad}    yes").unwrap(),
                StepResult::No => writeln!(out, "{pad}    no").unwrap(),
                StepResult::Children(cs) => cs.iter().for_each(|c| render_text(c, depth + 2, out)),
            }
        }
    }
}

/// Version of the structured proof schema.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Serialize)]
struct Header {
    schema: &'static str,
    version: u32,
    answer: String,
}

#[derive(Serialize)]
struct NodeLine {
    id: usize,
    parent: Option<usize>,
    kind: String,
    system: String,
    pair: Option<String>,
    processor: Option<String>,
    combination: Option<String>,
    sound: Option<bool>,
    complete: Option<bool>,
    result: &'static str,
    notes: Vec<String>,
}

fn structured_lines(t: &ProofTree, parent: Option<usize>, next: &mut usize, out: &mut Vec<NodeLine>) {
    let id = *next;
    *next += 1;
    let p = t.problem();
    let (step, result) = match t {
        ProofTree::Open(_) => (None, "open"),
        ProofTree::Node { step, result, .. } => (
            Some(step),
            match result {
                StepResult::Yes => "yes",
                StepResult::No => "no",
                StepResult::Children(_) => "children",
            },
        ),
    };
    out.push(NodeLine {
        id,
        parent,
        kind: p.kind.to_string(),
        system: p.system.summary(),
        pair: p.pair.as_ref().map(|pi| pi.to_string()),
        processor: step.map(|s| s.processor.to_string()),
        combination: step.and_then(|s| s.combination).map(|c| c.to_string()),
        sound: step.map(|s| s.sound),
        complete: step.map(|s| s.complete),
        result,
        notes: step.map(|s| s.notes.clone()).unwrap_or_default(),
    });
    for c in t.children() {
        structured_lines(c, Some(id), next, out);
    }
}

/// Renders a verdict; the first line is always `YES`, `NO` or `MAYBE`.
pub fn render_proof(v: &Verdict, mode: ProofFormat) -> String {
    let mut out = format!("{}\n", v.answer);
    match mode {
        ProofFormat::Text => render_text(&v.tree, 0, &mut out),
        ProofFormat::Structured => {
            let header = Header { schema: "conflux-proof", version: SCHEMA_VERSION, answer: v.answer.to_string() };
            writeln!(out, "{}", serde_json::to_string(&header).unwrap()).unwrap();
            let mut lines = Vec::new();
            structured_lines(&v.tree, None, &mut 0, &mut lines);
            for l in lines {
                writeln!(out, "{}", serde_json::to_string(&l).unwrap()).unwrap();
            }
        }
    }
    out
}

/// Renders a term in file syntax.
pub fn term_text(t: &Term) -> String {
    t.to_string()
}
