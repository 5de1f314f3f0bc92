//! Independent explicit-state checker.
//!
//! Everything here works on one finite transition system at a time and is
//! deliberately separate from the grammar pipeline: satisfaction is
//! decided by searching the system itself, not by composing behaviours.
//! The pipeline is validated against this module member by member.
//!
//! The universal Büchi check enumerates reachable effect relations: for
//! every node, the relations of all finite traces reaching it and of all
//! cycles through it. A trace lasso is rejected exactly when no initial
//! state can reach, after the prefix effect, a state that cycles through
//! acceptance; every violating trace yields such a lasso because effect
//! relations over a finite automaton repeat (Ramsey-style factorization),
//! so the search is exact.

use crate::behaviour::{clos, compose, step_summary, StepSummary};
use crate::grammar::Hrg;
use crate::hypergraph::{Hypergraph, Node, NodeId};
use crate::logic::{
    ltl_to_buchi, BuchiAutomaton, Bound, Ltl, PathFormula, Qpctl, StateFormula, StateId,
};
use crate::recolor::recolor_ctlstar;
use crate::Symbol;
use rayon::prelude::*;
use std::collections::{BTreeMap, BTreeSet, HashSet, VecDeque};
use thiserror::Error;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("graph is not a transition system (it has abstract nodes or hyperedges)")]
    NotAnLts,
    #[error("node {0:?} does not exist")]
    NodeNotFound(NodeId),
}

/// Per-node satisfaction of a state formula on one finite LTS.
pub type ExplicitResult = BTreeMap<NodeId, bool>;

fn require_lts(lts: &Hypergraph) -> Result<(), OracleError> {
    if lts.is_lts() {
        Ok(())
    } else {
        Err(OracleError::NotAnLts)
    }
}

fn letter_at(lts: &Hypergraph, m: &BuchiAutomaton, v: NodeId) -> StepSummary {
    step_summary(m, m.letter_of(lts.colors(v)))
}

/// Does some trace from the relation `g` followed by forever repeating a
/// cycle with effect `lam` get accepted from an initial state?
fn lasso_accepted(m: &BuchiAutomaton, g: &StepSummary, lam: &StepSummary) -> bool {
    let c = clos(lam);
    let n = m.state_count();
    let mut cyc: u64 = 0;
    for q in 0..n {
        if c.contains(StateId(q), StateId(q), true) {
            cyc |= 1 << q;
        }
    }
    let initial: u64 = m.initial.iter().fold(0, |acc, q| acc | 1 << q.0);
    let after_prefix = g.post(initial);
    let reach = after_prefix | c.post(after_prefix);
    reach & cyc != 0
}

/// True iff every infinite trace from `v` is accepted by `m`.
pub fn check_buchi(lts: &Hypergraph, v: NodeId, m: &BuchiAutomaton) -> Result<bool, OracleError> {
    require_lts(lts)?;
    if !lts.coloring.contains_key(&v) {
        return Err(OracleError::NodeNotFound(v));
    }
    // forward pass: all effect relations of traces v..x (both endpoint
    // colors included)
    let mut forward: BTreeMap<NodeId, HashSet<StepSummary>> = BTreeMap::new();
    let seed = letter_at(lts, m, v);
    forward.entry(v).or_default().insert(seed.clone());
    let mut queue: VecDeque<(NodeId, StepSummary)> = [(v, seed)].into_iter().collect();
    while let Some((x, g)) = queue.pop_front() {
        for succ in lts.successors(Node::Concrete(x)) {
            let Node::Concrete(y) = succ else { unreachable!("lts") };
            let g2 = compose(&g, &letter_at(lts, m, y));
            if forward.entry(y).or_default().insert(g2.clone()) {
                queue.push_back((y, g2));
            }
        }
    }

    // cycle pass per reachable node: effects of nonempty cycles x -> x,
    // covering the colors strictly after x up to and including x again
    for (&x, prefixes) in &forward {
        let mut partial: BTreeMap<NodeId, HashSet<StepSummary>> = BTreeMap::new();
        let mut queue: VecDeque<(NodeId, StepSummary)> = VecDeque::new();
        for succ in lts.successors(Node::Concrete(x)) {
            let Node::Concrete(y) = succ else { unreachable!("lts") };
            let g = letter_at(lts, m, y);
            if partial.entry(y).or_default().insert(g.clone()) {
                queue.push_back((y, g));
            }
        }
        let mut cycles: HashSet<StepSummary> = BTreeSet::new().into_iter().collect();
        while let Some((y, g)) = queue.pop_front() {
            if y == x {
                cycles.insert(g.clone());
                continue; // longer cycles through x are compositions
            }
            for succ in lts.successors(Node::Concrete(y)) {
                let Node::Concrete(z) = succ else { unreachable!("lts") };
                let g2 = compose(&g, &letter_at(lts, m, z));
                if partial.entry(z).or_default().insert(g2.clone()) {
                    queue.push_back((z, g2));
                }
            }
        }
        for lam in &cycles {
            for g in prefixes {
                if !lasso_accepted(m, g, lam) {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// Labels every node with its satisfaction of a CTL* state formula.
/// Path quantification ranges over infinite traces; a node without any
/// infinite trace satisfies every universal path formula.
pub fn label_ctlstar(lts: &Hypergraph, phi: &StateFormula) -> Result<ExplicitResult, OracleError> {
    require_lts(lts)?;
    let mut fresh = 0u32;
    label_state(lts, phi, &mut fresh)
}

pub fn check_ctlstar(
    lts: &Hypergraph,
    v: NodeId,
    phi: &StateFormula,
) -> Result<bool, OracleError> {
    let labels = label_ctlstar(lts, phi)?;
    labels.get(&v).copied().ok_or(OracleError::NodeNotFound(v))
}

fn label_state(
    lts: &Hypergraph,
    phi: &StateFormula,
    fresh: &mut u32,
) -> Result<ExplicitResult, OracleError> {
    let nodes: Vec<NodeId> = lts.coloring.keys().copied().collect();
    let constant = |b: bool| -> ExplicitResult { nodes.iter().map(|&v| (v, b)).collect() };
    match phi {
        StateFormula::True => Ok(constant(true)),
        StateFormula::False => Ok(constant(false)),
        StateFormula::Atom(a) => Ok(nodes
            .iter()
            .map(|&v| (v, lts.colors(v).contains(a)))
            .collect()),
        StateFormula::Not(p) => {
            let inner = label_state(lts, p, fresh)?;
            Ok(inner.into_iter().map(|(v, b)| (v, !b)).collect())
        }
        StateFormula::And(p, q) => {
            let a = label_state(lts, p, fresh)?;
            let b = label_state(lts, q, fresh)?;
            Ok(nodes.iter().map(|&v| (v, a[&v] && b[&v])).collect())
        }
        StateFormula::Or(p, q) => {
            let a = label_state(lts, p, fresh)?;
            let b = label_state(lts, q, fresh)?;
            Ok(nodes.iter().map(|&v| (v, a[&v] || b[&v])).collect())
        }
        StateFormula::Exists(p) => {
            let dual = StateFormula::Not(Box::new(StateFormula::Forall(Box::new(
                PathFormula::Not(p.clone()),
            ))));
            label_state(lts, &dual, fresh)
        }
        StateFormula::Forall(p) => {
            // label the maximal state subformulas, bake each labeling into
            // a fresh color, then run the universal Büchi check
            let mut extended = lts.clone();
            let mut subs: BTreeMap<StateFormula, Symbol> = BTreeMap::new();
            for sub in path_state_subformulas(p) {
                if subs.contains_key(&sub) {
                    continue;
                }
                let labels = label_state(lts, &sub, fresh)?;
                *fresh += 1;
                let color = Symbol::new(&format!("@sub{fresh}"));
                for (&v, &holds) in &labels {
                    if holds {
                        extended.coloring.get_mut(&v).unwrap().insert(color);
                    }
                }
                subs.insert(sub, color);
            }
            let ltl = path_formula_to_ltl(p, &subs);
            let m = ltl_to_buchi(&ltl, &[]);
            let mut out = BTreeMap::new();
            for &v in &nodes {
                out.insert(v, check_buchi(&extended, v, &m)?);
            }
            Ok(out)
        }
    }
}

fn path_state_subformulas(p: &PathFormula) -> Vec<StateFormula> {
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

fn path_formula_to_ltl(p: &PathFormula, subs: &BTreeMap<StateFormula, Symbol>) -> Ltl {
    match p {
        PathFormula::State(s) => match s.as_ref() {
            StateFormula::True => Ltl::True,
            StateFormula::False => Ltl::False,
            StateFormula::Atom(a) => Ltl::Atom(*a),
            other => Ltl::Atom(subs[other]),
        },
        PathFormula::Not(q) => Ltl::Not(Box::new(path_formula_to_ltl(q, subs))),
        PathFormula::And(a, b) => Ltl::And(
            Box::new(path_formula_to_ltl(a, subs)),
            Box::new(path_formula_to_ltl(b, subs)),
        ),
        PathFormula::Or(a, b) => Ltl::Or(
            Box::new(path_formula_to_ltl(a, subs)),
            Box::new(path_formula_to_ltl(b, subs)),
        ),
        PathFormula::Next(q) => Ltl::Next(Box::new(path_formula_to_ltl(q, subs))),
        PathFormula::Eventually(q) => Ltl::Eventually(Box::new(path_formula_to_ltl(q, subs))),
        PathFormula::Always(q) => Ltl::Always(Box::new(path_formula_to_ltl(q, subs))),
        PathFormula::Until(a, b) => Ltl::Until(
            Box::new(path_formula_to_ltl(a, subs)),
            Box::new(path_formula_to_ltl(b, subs)),
        ),
        PathFormula::Release(a, b) => Ltl::Release(
            Box::new(path_formula_to_ltl(a, subs)),
            Box::new(path_formula_to_ltl(b, subs)),
        ),
    }
}

// ---------------------------------------------------------------------------
// Qualitative probabilistic checking
// ---------------------------------------------------------------------------

/// Labels every node with its satisfaction of a qualitative PCTL formula,
/// reading the LTS as a Markov chain with uniform positive probabilities
/// on existing edges. Requires a total transition relation to be
/// meaningful.
pub fn label_qpctl(lts: &Hypergraph, phi: &Qpctl) -> Result<ExplicitResult, OracleError> {
    require_lts(lts)?;
    let nodes: Vec<NodeId> = lts.coloring.keys().copied().collect();
    let constant = |b: bool| -> ExplicitResult { nodes.iter().map(|&v| (v, b)).collect() };
    let succs = |v: NodeId| -> Vec<NodeId> {
        lts.successors(Node::Concrete(v))
            .into_iter()
            .map(|n| match n {
                Node::Concrete(id) => id,
                Node::Abstract(_) => unreachable!("lts"),
            })
            .collect()
    };
    // nodes from which `target` is reachable through `through` nodes,
    // where the first step's source need not be in `through`... the region
    // condition applies to every node strictly before the target.
    let reach_through = |through: &dyn Fn(NodeId) -> bool,
                         target: &dyn Fn(NodeId) -> bool|
     -> BTreeSet<NodeId> {
        let mut sat: BTreeSet<NodeId> = nodes.iter().copied().filter(|&v| target(v)).collect();
        loop {
            let mut changed = false;
            for &v in &nodes {
                if sat.contains(&v) || !through(v) {
                    continue;
                }
                if succs(v).iter().any(|s| sat.contains(s)) {
                    sat.insert(v);
                    changed = true;
                }
            }
            if !changed {
                return sat;
            }
        }
    };
    // all nodes reachable from v (including v)
    let reach_set = |v: NodeId| -> BTreeSet<NodeId> {
        let mut out: BTreeSet<NodeId> = [v].into_iter().collect();
        let mut queue = vec![v];
        while let Some(x) = queue.pop() {
            for s in succs(x) {
                if out.insert(s) {
                    queue.push(s);
                }
            }
        }
        out
    };

    match phi {
        Qpctl::True => Ok(constant(true)),
        Qpctl::False => Ok(constant(false)),
        Qpctl::Atom(a) => Ok(nodes
            .iter()
            .map(|&v| (v, lts.colors(v).contains(a)))
            .collect()),
        Qpctl::Not(p) => {
            let inner = label_qpctl(lts, p)?;
            Ok(inner.into_iter().map(|(v, b)| (v, !b)).collect())
        }
        Qpctl::And(p, q) => {
            let a = label_qpctl(lts, p)?;
            let b = label_qpctl(lts, q)?;
            Ok(nodes.iter().map(|&v| (v, a[&v] && b[&v])).collect())
        }
        Qpctl::Or(p, q) => {
            let a = label_qpctl(lts, p)?;
            let b = label_qpctl(lts, q)?;
            Ok(nodes.iter().map(|&v| (v, a[&v] || b[&v])).collect())
        }
        Qpctl::Next(bound, p) => {
            let inner = label_qpctl(lts, p)?;
            Ok(nodes
                .iter()
                .map(|&v| {
                    let ss = succs(v);
                    let holds = match bound {
                        Bound::Positive => ss.iter().any(|s| inner[s]),
                        Bound::AlmostSure => ss.iter().all(|s| inner[s]),
                    };
                    (v, holds)
                })
                .collect())
        }
        // eventually is until with a trivial waiting condition: for the
        // almost-sure bound this works out to "no p-free path reaches a
        // node from which p is unreachable"
        Qpctl::Eventually(bound, p) => label_qpctl(
            lts,
            &Qpctl::Until(*bound, Box::new(Qpctl::True), p.clone()),
        ),
        Qpctl::Until(Bound::Positive, p, q) => {
            let a = label_qpctl(lts, p)?;
            let b = label_qpctl(lts, q)?;
            let sat = reach_through(&|v| a[&v], &|v| b[&v]);
            Ok(nodes.iter().map(|&v| (v, sat.contains(&v))).collect())
        }
        Qpctl::Always(Bound::AlmostSure, p) => {
            // almost surely always p: no reachable violation
            let a = label_qpctl(lts, p)?;
            Ok(nodes
                .iter()
                .map(|&v| (v, reach_set(v).iter().all(|w| a[w])))
                .collect())
        }
        Qpctl::Always(Bound::Positive, p) => {
            // reach, through p, a node trapped in p
            let a = label_qpctl(lts, p)?;
            let trapped: BTreeSet<NodeId> = nodes
                .iter()
                .copied()
                .filter(|&v| a[&v] && reach_set(v).iter().all(|w| a[w]))
                .collect();
            let sat = reach_through(&|v| a[&v], &|v| trapped.contains(&v));
            Ok(nodes.iter().map(|&v| (v, sat.contains(&v))).collect())
        }
        Qpctl::Until(Bound::AlmostSure, p, q) => {
            let a = label_qpctl(lts, p)?;
            let b = label_qpctl(lts, q)?;
            let wait = |v: NodeId| a[&v] && !b[&v];
            let broken = |v: NodeId| !a[&v] && !b[&v];
            // positive probability of violating: leave the waiting region
            // through a broken node, or get trapped waiting forever
            let escape = reach_through(&wait, &broken);
            let trapped_wait: BTreeSet<NodeId> = nodes
                .iter()
                .copied()
                .filter(|&v| wait(v) && reach_set(v).iter().all(|&w| wait(w)))
                .collect();
            let stuck = reach_through(&wait, &|v| trapped_wait.contains(&v));
            Ok(nodes
                .iter()
                .map(|&v| (v, !escape.contains(&v) && !stuck.contains(&v)))
                .collect())
        }
    }
}

pub fn check_qpctl(lts: &Hypergraph, v: NodeId, phi: &Qpctl) -> Result<bool, OracleError> {
    let labels = label_qpctl(lts, phi)?;
    labels.get(&v).copied().ok_or(OracleError::NodeNotFound(v))
}

// ---------------------------------------------------------------------------
// Differential testing of the recoloring pipeline
// ---------------------------------------------------------------------------

/// One disagreement between the recolored grammar and the explicit check.
#[derive(Clone, Debug)]
pub struct Mismatch {
    pub member_index: usize,
    pub node: NodeId,
    pub grammar_says: bool,
    pub oracle_says: bool,
}

#[derive(Clone, Debug)]
pub struct DifferentialReport {
    pub members_checked: usize,
    pub mismatches: Vec<Mismatch>,
}

impl DifferentialReport {
    pub fn render(&self) -> String {
        format!(
            "{} mismatches, {} members checked",
            self.mismatches.len(),
            self.members_checked
        )
    }
}

pub const DIFFERENTIAL_MEMBER_CAP: usize = 10_000;

/// Recolors the grammar for the formula, enumerates members up to the
/// given derivation depth (capped), and compares the introduced coloring
/// node by node against explicit-state checking of the same member.
pub fn differential(
    g: &Hrg,
    phi: &StateFormula,
    depth: usize,
) -> Result<DifferentialReport, crate::recolor::RecolorError> {
    let recolored = recolor_ctlstar(g, phi)?;
    let color = recolored.color;
    // exactly the colors this run introduced (for a plain atom nothing is
    // introduced); the input grammar may carry reserved-looking colors of
    // its own that the formula refers to
    let introduced: BTreeSet<Symbol> = recolored.registry.iter().map(|(c, _)| *c).collect();
    let members = recolored
        .grammar
        .enumerate_members(depth, DIFFERENTIAL_MEMBER_CAP);
    let mismatches: Vec<Mismatch> = members
        .par_iter()
        .enumerate()
        .flat_map(|(idx, (_, marked))| {
            // strip the introduced colors before handing the member to the
            // oracle
            let mut plain = marked.clone();
            for colors in plain.coloring.values_mut() {
                colors.retain(|c| !introduced.contains(c));
            }
            let labels = label_ctlstar(&plain, phi).expect("members are LTSs");
            let mut out = Vec::new();
            for (&v, colors) in &marked.coloring {
                let grammar_says = colors.contains(&color);
                let oracle_says = labels[&v];
                if grammar_says != oracle_says {
                    out.push(Mismatch {
                        member_index: idx,
                        node: v,
                        grammar_says,
                        oracle_says,
                    });
                }
            }
            out
        })
        .collect();
    Ok(DifferentialReport {
        members_checked: members.len(),
        mismatches,
    })
}
