//! Grammar recoloring: marking exactly the satisfying nodes.
//!
//! Recoloring solves the central problem: given a family grammar and a
//! property, produce a grammar for the same family in which a rule-body
//! node carries a fresh color precisely when every generated member
//! satisfies the property at that node. For a Büchi property this reads
//! the refined grammar rule by rule: plug the rule's context class with
//! the body (all hyperedges filled by their language classes, every body
//! node kept visible) and query the saturated behaviour at each node.
//!
//! CTL* recoloring recurses over the formula: state subformulas are
//! recolored first and then treated as atomic colors; negation and
//! conjunction are per-node color operations on the rules; path formulas
//! go through the LTL route. The grammar is minimized after every LTL
//! step, where annotations are no longer needed.

use crate::behaviour::plug_into_context;
use crate::grammar::Hrg;
use crate::hypergraph::{Hypergraph, Node};
use crate::logic::{ltl_to_buchi, BuchiAutomaton, Ltl, PathFormula, StateFormula};
use crate::minimize::minimize;
use crate::refine::refine;
use crate::Symbol;
use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

/// A grammar extended with property colors, plus the registry explaining
/// which formula each introduced color stands for.
#[derive(Clone, Debug)]
pub struct RecoloredGrammar {
    pub grammar: Hrg,
    /// The color marking satisfaction of the checked (top-level) formula.
    pub color: Symbol,
    /// Introduced colors with the formulas they denote, in introduction
    /// order.
    pub registry: Vec<(Symbol, String)>,
    /// Refined-grammar rule counts per automaton-level recoloring step,
    /// recorded before minimization.
    pub refinement_log: Vec<(String, usize)>,
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum RecolorError {
    #[error("grammar is not well-formed: {0}")]
    InvalidGrammar(String),
    #[error("color `{0}` is not declared in this grammar")]
    UnknownColor(String),
}

/// Allocates reserved `@phiN` color names that cannot collide with user
/// colors.
#[derive(Default)]
struct ColorAllocator {
    next: u32,
    registry: Vec<(Symbol, String)>,
    refinement_log: Vec<(String, usize)>,
}

impl ColorAllocator {
    fn fresh(&mut self, denotes: String) -> Symbol {
        self.next += 1;
        let c = Symbol::new(&format!("@phi{}", self.next));
        self.registry.push((c, denotes.clone()));
        c
    }
}

fn ensure_valid(g: &Hrg) -> Result<(), RecolorError> {
    let violations = g.validate();
    if violations.is_empty() {
        Ok(())
    } else {
        let msgs: Vec<String> = violations.iter().map(|v| v.to_string()).collect();
        Err(RecolorError::InvalidGrammar(msgs.join("; ")))
    }
}

/// Recolors a grammar for a Büchi property: every rule-body node that
/// satisfies the property in all members (at this rule occurrence) gains
/// `color`.
pub fn recolor_buchi(
    g: &Hrg,
    m: &BuchiAutomaton,
    color: Symbol,
) -> Result<RecoloredGrammar, RecolorError> {
    ensure_valid(g)?;
    let refined = refine(g, m);
    // nodes to mark per annotated rule
    let mut marked_bodies: Vec<Hypergraph> = Vec::new();
    for rule in &refined.rules {
        let body = refined.body(rule);
        let assignment: BTreeMap<_, _> = rule
            .children
            .iter()
            .map(|(&he, child)| (he, refined.registry.get(child.language_class)))
            .collect();
        let ctx = refined
            .registry
            .get(rule.lhs.context_class.expect("fully refined rule"));
        let (behaviour, node_index) = plug_into_context(ctx, body, m, &assignment);
        let mut recolored = body.clone();
        for (&id, colors) in &mut recolored.coloring {
            if behaviour.satisfies(node_index[&Node::Concrete(id)], m) {
                colors.insert(color);
            }
        }
        marked_bodies.push(recolored);
    }

    // project onto a plain grammar over the annotated nonterminals
    let (mut plain, names) = refined.to_plain();
    for (rule, body) in refined.rules.iter().zip(marked_bodies) {
        let idx = refined
            .rules
            .iter()
            .position(|r| r == rule)
            .expect("rule of this grammar");
        let mut renamed = body;
        for (he_id, child) in &rule.children {
            renamed.hyperedges.get_mut(he_id).unwrap().label = names[child].name;
        }
        plain.rules[idx].body = renamed;
    }
    plain.colors.insert(color);
    let refined_rules = refined.rules.len();
    let mut out = RecoloredGrammar {
        grammar: plain.prune(),
        color,
        registry: Vec::new(),
        refinement_log: Vec::new(),
    };
    out.refinement_log.push((String::new(), refined_rules));
    Ok(out)
}

/// Recolors for an LTL formula: the introduced color denotes "every trace
/// from this node satisfies the formula".
pub fn recolor_ltl(g: &Hrg, phi: &Ltl, color: Symbol) -> Result<RecoloredGrammar, RecolorError> {
    // colors referenced by the formula must exist so that letters project
    // consistently even if a color never occurs in the grammar
    let m = ltl_to_buchi(phi, &[]);
    recolor_buchi(g, &m, color)
}

/// Recolors for a CTL* state formula, recursively. Returns the final
/// grammar and the color denoting the formula. Atoms are their own color;
/// boolean connectives are per-node color operations; universal path
/// formulas run the LTL pipeline on recolored subformulas and minimize
/// afterwards.
pub fn recolor_ctlstar(g: &Hrg, phi: &StateFormula) -> Result<RecoloredGrammar, RecolorError> {
    ensure_valid(g)?;
    let mut alloc = ColorAllocator::default();
    // the input may itself be a previously recolored grammar whose colors
    // already use reserved names; allocate past them
    for c in &g.colors {
        if let Some(k) = c.as_str().strip_prefix("@phi").and_then(|s| s.parse::<u32>().ok()) {
            alloc.next = alloc.next.max(k);
        }
    }
    let (grammar, color) = recolor_state(g.clone(), phi, &mut alloc)?;
    Ok(RecoloredGrammar {
        grammar,
        color,
        registry: alloc.registry,
        refinement_log: alloc.refinement_log,
    })
}

fn recolor_state(
    g: Hrg,
    phi: &StateFormula,
    alloc: &mut ColorAllocator,
) -> Result<(Hrg, Symbol), RecolorError> {
    match phi {
        StateFormula::Atom(a) => {
            if !g.colors.contains(a) {
                return Err(RecolorError::UnknownColor(a.as_str()));
            }
            Ok((g, *a))
        }
        StateFormula::True => {
            let c = alloc.fresh("true".into());
            Ok((mark_nodes(g, c, |_| true), c))
        }
        StateFormula::False => {
            let c = alloc.fresh("false".into());
            Ok((mark_nodes(g, c, |_| false), c))
        }
        StateFormula::Not(p) => {
            let (g1, c1) = recolor_state(g, p, alloc)?;
            let c = alloc.fresh(format!("!{p}"));
            Ok((mark_nodes(g1, c, |colors| !colors.contains(&c1)), c))
        }
        StateFormula::And(p, q) => {
            let (g1, c1) = recolor_state(g, p, alloc)?;
            let (g2, c2) = recolor_state(g1, q, alloc)?;
            let c = alloc.fresh(format!("({p} & {q})"));
            Ok((
                mark_nodes(g2, c, |colors| colors.contains(&c1) && colors.contains(&c2)),
                c,
            ))
        }
        StateFormula::Or(p, q) => {
            // only negation, conjunction and the universal quantifier are
            // primitive
            let desugared = StateFormula::Not(Box::new(StateFormula::And(
                Box::new(StateFormula::Not(p.clone())),
                Box::new(StateFormula::Not(q.clone())),
            )));
            let (g1, c1) = recolor_state(g, &desugared, alloc)?;
            Ok((g1, c1))
        }
        StateFormula::Exists(p) => {
            let desugared = StateFormula::Not(Box::new(StateFormula::Forall(Box::new(
                PathFormula::Not(p.clone()),
            ))));
            recolor_state(g, &desugared, alloc)
        }
        StateFormula::Forall(p) => {
            // recolor maximal non-atomic state subformulas, then treat
            // them as atoms of the path formula
            let mut subs: BTreeMap<StateFormula, Symbol> = BTreeMap::new();
            let mut g = g;
            for sub in state_subformulas(p) {
                if subs.contains_key(&sub) {
                    continue;
                }
                let (g1, c) = recolor_state(g, &sub, alloc)?;
                g = g1;
                subs.insert(sub, c);
            }
            let ltl = path_to_ltl(p, &subs);
            let c = alloc.fresh(format!("A {p}"));
            let recolored = recolor_ltl(&g, &ltl, c)?;
            let refined_rules = recolored
                .refinement_log
                .first()
                .map(|(_, n)| *n)
                .unwrap_or(recolored.grammar.rules.len());
            alloc
                .refinement_log
                .push((format!("A {p}"), refined_rules));
            // annotations are no longer needed; shrink the grammar
            Ok((minimize(&recolored.grammar), c))
        }
    }
}

/// Maximal state subformulas occurring inside a path formula, in
/// deterministic order. Atoms and constants are handled inline and not
/// listed.
fn state_subformulas(p: &PathFormula) -> Vec<StateFormula> {
    fn walk(p: &PathFormula, out: &mut Vec<StateFormula>) {
        match p {
            PathFormula::State(s) => match s.as_ref() {
                StateFormula::Atom(_) | StateFormula::True | StateFormula::False => {}
                other => {
                    if !out.contains(other) {
                        out.push(other.clone());
                    }
                }
            },
            PathFormula::Not(q)
            | PathFormula::Next(q)
            | PathFormula::Eventually(q)
            | PathFormula::Always(q) => walk(q, out),
            PathFormula::And(a, b)
            | PathFormula::Or(a, b)
            | PathFormula::Until(a, b)
            | PathFormula::Release(a, b) => {
                walk(a, out);
                walk(b, out);
            }
        }
    }
    let mut out = Vec::new();
    walk(p, &mut out);
    out
}

fn path_to_ltl(p: &PathFormula, subs: &BTreeMap<StateFormula, Symbol>) -> Ltl {
    match p {
        PathFormula::State(s) => match s.as_ref() {
            StateFormula::True => Ltl::True,
            StateFormula::False => Ltl::False,
            StateFormula::Atom(a) => Ltl::Atom(*a),
            other => Ltl::Atom(subs[other]),
        },
        PathFormula::Not(q) => Ltl::Not(Box::new(path_to_ltl(q, subs))),
        PathFormula::And(a, b) => Ltl::And(
            Box::new(path_to_ltl(a, subs)),
            Box::new(path_to_ltl(b, subs)),
        ),
        PathFormula::Or(a, b) => Ltl::Or(
            Box::new(path_to_ltl(a, subs)),
            Box::new(path_to_ltl(b, subs)),
        ),
        PathFormula::Next(q) => Ltl::Next(Box::new(path_to_ltl(q, subs))),
        PathFormula::Eventually(q) => Ltl::Eventually(Box::new(path_to_ltl(q, subs))),
        PathFormula::Always(q) => Ltl::Always(Box::new(path_to_ltl(q, subs))),
        PathFormula::Until(a, b) => Ltl::Until(
            Box::new(path_to_ltl(a, subs)),
            Box::new(path_to_ltl(b, subs)),
        ),
        PathFormula::Release(a, b) => Ltl::Release(
            Box::new(path_to_ltl(a, subs)),
            Box::new(path_to_ltl(b, subs)),
        ),
    }
}

/// Adds `color` to every rule-body node whose color set satisfies the
/// predicate.
fn mark_nodes(mut g: Hrg, color: Symbol, keep: impl Fn(&BTreeSet<Symbol>) -> bool) -> Hrg {
    for rule in &mut g.rules {
        for colors in rule.body.coloring.values_mut() {
            if keep(colors) {
                colors.insert(color);
            }
        }
    }
    g.colors.insert(color);
    g
}

/// Removes a color from every rule body.
pub fn delete_color(g: &Hrg, color: Symbol) -> Result<Hrg, RecolorError> {
    if !g.colors.contains(&color) {
        return Err(RecolorError::UnknownColor(color.as_str()));
    }
    let mut out = g.clone();
    for rule in &mut out.rules {
        for colors in rule.body.coloring.values_mut() {
            colors.remove(&color);
        }
    }
    out.colors.remove(&color);
    Ok(out)
}
