//! Hyperedge replacement grammars and derivation trees.
//!
//! A grammar has nonterminals with arities, start symbols, and rules whose
//! bodies are hypergraphs. A rule for `A` must have exactly `ar(A)`
//! abstract nodes, and every hyperedge label in a body must be a
//! nonterminal with matching attachment length. Start symbols used for
//! generating transition systems have arity 0, so every generated member
//! is an ordinary LTS.

use crate::hypergraph::{Hypergraph, HyperedgeId};
use crate::Symbol;
use std::collections::{BTreeMap, BTreeSet};

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Nonterminal {
    pub name: Symbol,
    pub arity: u32,
}

/// Identifier of a rule within one grammar (index into `rules`).
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct RuleId(pub usize);

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Rule {
    pub name: Symbol,
    pub lhs: Nonterminal,
    pub body: Hypergraph,
}

#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Hrg {
    pub nonterminals: BTreeSet<Nonterminal>,
    pub starts: BTreeSet<Nonterminal>,
    pub rules: Vec<Rule>,
    /// Colors declared for this grammar's family.
    pub colors: BTreeSet<Symbol>,
    /// Edge actions declared for this grammar's family.
    pub actions: BTreeSet<Symbol>,
}

/// A derivation tree: either a premature stop at a nonterminal, or a rule
/// application with one subtree per hyperedge of the body.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum DerivationTree {
    Leaf(Nonterminal),
    Node(RuleId, BTreeMap<HyperedgeId, DerivationTree>),
}

impl DerivationTree {
    pub fn is_complete(&self) -> bool {
        match self {
            DerivationTree::Leaf(_) => false,
            DerivationTree::Node(_, children) => children.values().all(|t| t.is_complete()),
        }
    }

    /// Height counts rule applications; a leaf has height 0.
    pub fn height(&self) -> usize {
        match self {
            DerivationTree::Leaf(_) => 0,
            DerivationTree::Node(_, children) => {
                1 + children.values().map(|t| t.height()).max().unwrap_or(0)
            }
        }
    }

    pub fn leaves(&self) -> Vec<Nonterminal> {
        match self {
            DerivationTree::Leaf(n) => vec![*n],
            DerivationTree::Node(_, children) => {
                children.values().flat_map(|t| t.leaves()).collect()
            }
        }
    }

    /// Rules used anywhere in the tree.
    pub fn rules_used(&self) -> BTreeSet<RuleId> {
        let mut out = BTreeSet::new();
        self.collect_rules(&mut out);
        out
    }

    fn collect_rules(&self, out: &mut BTreeSet<RuleId>) {
        if let DerivationTree::Node(r, children) = self {
            out.insert(*r);
            for t in children.values() {
                t.collect_rules(out);
            }
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Violation {
    ArityMismatch { rule: Symbol, expected: u32, found: u32 },
    UnknownLabel { rule: Symbol, label: Symbol },
    AttachmentLength { rule: Symbol, label: Symbol, expected: u32, found: usize },
    StartArity { nonterminal: Symbol, arity: u32 },
    UndeclaredColor { rule: Symbol, color: Symbol },
    UndeclaredAction { rule: Symbol, action: Symbol },
    UnknownLhs { rule: Symbol },
    UnknownNode { rule: Symbol, node: String },
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Violation::ArityMismatch { rule, expected, found } => write!(
                f,
                "rule {rule}: lhs arity {expected} but body has {found} abstract nodes"
            ),
            Violation::UnknownLabel { rule, label } => {
                write!(f, "rule {rule}: hyperedge label {label} is not a nonterminal")
            }
            Violation::AttachmentLength { rule, label, expected, found } => write!(
                f,
                "rule {rule}: hyperedge {label} attaches {found} nodes but ar({label}) = {expected}"
            ),
            Violation::StartArity { nonterminal, arity } => {
                write!(f, "start symbol {nonterminal} has arity {arity}, expected 0")
            }
            Violation::UndeclaredColor { rule, color } => {
                write!(f, "rule {rule}: color {color} is not declared")
            }
            Violation::UndeclaredAction { rule, action } => {
                write!(f, "rule {rule}: action {action} is not declared")
            }
            Violation::UnknownLhs { rule } => {
                write!(f, "rule {rule}: lhs is not among the declared nonterminals")
            }
            Violation::UnknownNode { rule, node } => {
                write!(f, "rule {rule}: reference to unknown node {node}")
            }
        }
    }
}

/// Three-way classification of how many derivation trees exist.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Count {
    Zero,
    Finite(u64),
    /// Finite, but larger than the configured cap.
    AboveCap,
    Infinite,
}

impl std::fmt::Display for Count {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Count::Zero => write!(f, "0"),
            Count::Finite(n) => write!(f, "{n}"),
            Count::AboveCap => write!(f, ">cap"),
            Count::Infinite => write!(f, "INF"),
        }
    }
}

pub const COUNT_CAP: u64 = 1_000_000;

impl Hrg {
    pub fn nonterminal(&self, name: Symbol) -> Option<Nonterminal> {
        self.nonterminals.iter().find(|n| n.name == name).copied()
    }

    pub fn rules_for(&self, nt: Nonterminal) -> impl Iterator<Item = (RuleId, &Rule)> {
        self.rules
            .iter()
            .enumerate()
            .filter(move |(_, r)| r.lhs == nt)
            .map(|(i, r)| (RuleId(i), r))
    }

    /// Checks the grammar's well-formedness conditions. Returns all
    /// violations instead of failing on the first.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        for s in &self.starts {
            if s.arity != 0 {
                out.push(Violation::StartArity {
                    nonterminal: s.name,
                    arity: s.arity,
                });
            }
        }
        for rule in &self.rules {
            if !self.nonterminals.contains(&rule.lhs) {
                out.push(Violation::UnknownLhs { rule: rule.name });
            }
            if rule.lhs.arity != rule.body.abstract_count {
                out.push(Violation::ArityMismatch {
                    rule: rule.name,
                    expected: rule.lhs.arity,
                    found: rule.body.abstract_count,
                });
            }
            for he in rule.body.hyperedges.values() {
                match self.nonterminal(he.label) {
                    None => out.push(Violation::UnknownLabel {
                        rule: rule.name,
                        label: he.label,
                    }),
                    Some(nt) => {
                        if nt.arity as usize != he.attachment.len() {
                            out.push(Violation::AttachmentLength {
                                rule: rule.name,
                                label: he.label,
                                expected: nt.arity,
                                found: he.attachment.len(),
                            });
                        }
                    }
                }
            }
            for colors in rule.body.coloring.values() {
                for c in colors {
                    if !self.colors.contains(c) {
                        out.push(Violation::UndeclaredColor {
                            rule: rule.name,
                            color: *c,
                        });
                    }
                }
            }
            for (_, a, _) in &rule.body.edges {
                if !self.actions.contains(a) {
                    out.push(Violation::UndeclaredAction {
                        rule: rule.name,
                        action: *a,
                    });
                }
            }
            // every node referenced by an edge or attachment must exist:
            // a concrete node of the body or an abstract node in range
            let check_node = |n: &crate::hypergraph::Node, out: &mut Vec<Violation>| {
                if !rule.body.contains(*n) {
                    out.push(Violation::UnknownNode {
                        rule: rule.name,
                        node: format!("{n:?}"),
                    });
                }
            };
            for (u, _, v) in &rule.body.edges {
                check_node(u, &mut out);
                check_node(v, &mut out);
            }
            for he in rule.body.hyperedges.values() {
                for w in &he.attachment {
                    check_node(w, &mut out);
                }
            }
        }
        out
    }

    /// Assembles the hypergraph of a derivation tree: a leaf becomes the
    /// handle of its nonterminal, a rule application plugs the assembled
    /// children into the body.
    pub fn assemble(&self, tree: &DerivationTree) -> Hypergraph {
        match tree {
            DerivationTree::Leaf(nt) => Hypergraph::handle(nt.name, nt.arity),
            DerivationTree::Node(rule, children) => {
                let body = &self.rules[rule.0].body;
                let assembled: BTreeMap<HyperedgeId, Hypergraph> = children
                    .iter()
                    .map(|(&he, t)| (he, self.assemble(t)))
                    .collect();
                let refs: BTreeMap<HyperedgeId, &Hypergraph> =
                    assembled.iter().map(|(&he, g)| (he, g)).collect();
                body.replace(&refs)
                    .expect("derivation tree children match body hyperedges")
            }
        }
    }

    /// All complete derivation trees of `nt` with height at most
    /// `max_depth`, in deterministic order (rule index, then child
    /// assignments in hyperedge order).
    pub fn complete_trees(&self, nt: Nonterminal, max_depth: usize) -> Vec<DerivationTree> {
        self.complete_trees_capped(nt, max_depth, usize::MAX)
    }

    /// Like [`complete_trees`](Self::complete_trees), generating at most
    /// `cap` trees. The result is a deterministic prefix for a fixed cap,
    /// and generation stops early instead of materializing every
    /// combination first.
    pub fn complete_trees_capped(
        &self,
        nt: Nonterminal,
        max_depth: usize,
        cap: usize,
    ) -> Vec<DerivationTree> {
        if max_depth == 0 || cap == 0 {
            return Vec::new();
        }
        let mut out = Vec::new();
        for (rid, rule) in self.rules_for(nt) {
            if out.len() >= cap {
                break;
            }
            let budget = cap - out.len();
            let hes: Vec<HyperedgeId> = rule.body.hyperedges.keys().copied().collect();
            let mut options: Vec<Vec<DerivationTree>> = Vec::new();
            let mut ok = true;
            for he in &hes {
                let label = rule.body.hyperedges[he].label;
                let Some(child_nt) = self.nonterminal(label) else {
                    ok = false;
                    break;
                };
                let opts = self.complete_trees_capped(child_nt, max_depth - 1, budget);
                if opts.is_empty() {
                    ok = false;
                    break;
                }
                options.push(opts);
            }
            if !ok {
                continue;
            }
            let mut combos: Vec<BTreeMap<HyperedgeId, DerivationTree>> = vec![BTreeMap::new()];
            for (he, opts) in hes.iter().zip(&options) {
                let mut next = Vec::new();
                'fill: for combo in &combos {
                    for t in opts {
                        let mut c = combo.clone();
                        c.insert(*he, t.clone());
                        next.push(c);
                        if next.len() >= budget {
                            break 'fill;
                        }
                    }
                }
                combos = next;
            }
            for c in combos.into_iter().take(budget) {
                out.push(DerivationTree::Node(rid, c));
            }
        }
        out
    }

    /// All (tree, assembled member) pairs for complete derivations of the
    /// start symbols up to the given height, capped at `cap` members.
    pub fn enumerate_members(
        &self,
        max_depth: usize,
        cap: usize,
    ) -> Vec<(DerivationTree, Hypergraph)> {
        let mut out = Vec::new();
        for start in &self.starts {
            for tree in self.complete_trees_capped(*start, max_depth, cap - out.len()) {
                if out.len() >= cap {
                    return out;
                }
                let g = self.assemble(&tree);
                out.push((tree, g));
            }
        }
        out
    }

    /// Nonterminals that derive at least one complete tree.
    pub fn productive(&self, allowed: &BTreeSet<RuleId>) -> BTreeSet<Nonterminal> {
        let mut prod: BTreeSet<Nonterminal> = BTreeSet::new();
        loop {
            let mut changed = false;
            for (rid, rule) in self.rules.iter().enumerate() {
                if !allowed.contains(&RuleId(rid)) || prod.contains(&rule.lhs) {
                    continue;
                }
                let all_children = rule.body.hyperedges.values().all(|he| {
                    self.nonterminal(he.label)
                        .is_some_and(|nt| prod.contains(&nt))
                });
                if all_children {
                    prod.insert(rule.lhs);
                    changed = true;
                }
            }
            if !changed {
                return prod;
            }
        }
    }

    /// Nonterminals reachable from the start symbols through allowed rules.
    pub fn reachable(&self, allowed: &BTreeSet<RuleId>) -> BTreeSet<Nonterminal> {
        let mut reach = self.starts.clone();
        loop {
            let mut changed = false;
            for (rid, rule) in self.rules.iter().enumerate() {
                if !allowed.contains(&RuleId(rid)) || !reach.contains(&rule.lhs) {
                    continue;
                }
                for he in rule.body.hyperedges.values() {
                    if let Some(nt) = self.nonterminal(he.label) {
                        if reach.insert(nt) {
                            changed = true;
                        }
                    }
                }
            }
            if !changed {
                return reach;
            }
        }
    }

    /// Removes rules and nonterminals that are unproductive or unreachable
    /// from the start symbols. The generated language is unchanged.
    pub fn prune(&self) -> Hrg {
        let all: BTreeSet<RuleId> = (0..self.rules.len()).map(RuleId).collect();
        let prod = self.productive(&all);
        // A rule with an unproductive child can never occur in a complete
        // tree, so reachability is computed over the useful rules only.
        let useful: BTreeSet<RuleId> = self
            .rules
            .iter()
            .enumerate()
            .filter(|(_, r)| {
                prod.contains(&r.lhs)
                    && r.body.hyperedges.values().all(|he| {
                        self.nonterminal(he.label)
                            .is_some_and(|nt| prod.contains(&nt))
                    })
            })
            .map(|(i, _)| RuleId(i))
            .collect();
        let reach = self.reachable(&useful);
        let keep: Vec<Rule> = self
            .rules
            .iter()
            .enumerate()
            .filter(|(i, r)| useful.contains(&RuleId(*i)) && reach.contains(&r.lhs))
            .map(|(_, r)| r.clone())
            .collect();
        let kept_nts: BTreeSet<Nonterminal> = self
            .nonterminals
            .iter()
            .filter(|nt| reach.contains(nt) && prod.contains(nt))
            .copied()
            .collect();
        Hrg {
            nonterminals: kept_nts.clone(),
            starts: self
                .starts
                .iter()
                .filter(|s| kept_nts.contains(s))
                .copied()
                .collect(),
            rules: keep,
            colors: self.colors.clone(),
            actions: self.actions.clone(),
        }
    }

    /// Classifies the number of complete derivation trees of start symbols
    /// that use only `allowed` rules.
    pub fn count_trees(&self, allowed: &BTreeSet<RuleId>) -> Count {
        let prod = self.productive(allowed);
        let useful: BTreeSet<RuleId> = allowed
            .iter()
            .filter(|rid| {
                let r = &self.rules[rid.0];
                prod.contains(&r.lhs)
                    && r.body.hyperedges.values().all(|he| {
                        self.nonterminal(he.label)
                            .is_some_and(|nt| prod.contains(&nt))
                    })
            })
            .copied()
            .collect();
        let reach = self.reachable(&useful);
        let live: BTreeSet<Nonterminal> = prod.intersection(&reach).copied().collect();
        if !self.starts.iter().any(|s| live.contains(s)) {
            return Count::Zero;
        }

        // Infinite iff some live nonterminal is derivable from itself.
        let mut deps: BTreeMap<Nonterminal, BTreeSet<Nonterminal>> = BTreeMap::new();
        for rid in &useful {
            let rule = &self.rules[rid.0];
            if !live.contains(&rule.lhs) {
                continue;
            }
            for he in rule.body.hyperedges.values() {
                if let Some(nt) = self.nonterminal(he.label) {
                    if live.contains(&nt) {
                        deps.entry(rule.lhs).or_default().insert(nt);
                    }
                }
            }
        }
        loop {
            let mut changed = false;
            let keys: Vec<Nonterminal> = deps.keys().copied().collect();
            for k in keys {
                let direct: Vec<Nonterminal> = deps[&k].iter().copied().collect();
                for d in direct {
                    let extra: Vec<Nonterminal> = deps
                        .get(&d)
                        .map(|s| s.iter().copied().collect())
                        .unwrap_or_default();
                    for e in extra {
                        if deps.get_mut(&k).unwrap().insert(e) {
                            changed = true;
                        }
                    }
                }
            }
            if !changed {
                break;
            }
        }
        for (nt, succ) in &deps {
            if succ.contains(nt) {
                return Count::Infinite;
            }
        }

        // Finite: exact count by memoized DP with cap.
        fn count_nt(
            g: &Hrg,
            useful: &BTreeSet<RuleId>,
            nt: Nonterminal,
            memo: &mut BTreeMap<Nonterminal, u64>,
        ) -> u64 {
            if let Some(&c) = memo.get(&nt) {
                return c;
            }
            let mut total: u64 = 0;
            for (rid, rule) in g.rules_for(nt) {
                if !useful.contains(&rid) {
                    continue;
                }
                let mut prod: u64 = 1;
                for he in rule.body.hyperedges.values() {
                    let child = g.nonterminal(he.label).unwrap();
                    prod = prod.saturating_mul(count_nt(g, useful, child, memo));
                }
                total = total.saturating_add(prod);
            }
            let total = total.min(COUNT_CAP + 1);
            memo.insert(nt, total);
            total
        }
        let mut memo: BTreeMap<Nonterminal, u64> = BTreeMap::new();
        let mut total: u64 = 0;
        for s in &self.starts {
            if live.contains(s) {
                total = total.saturating_add(count_nt(self, &useful, *s, &mut memo));
            }
        }
        if total == 0 {
            Count::Zero
        } else if total > COUNT_CAP {
            Count::AboveCap
        } else {
            Count::Finite(total)
        }
    }
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;
    use crate::hypergraph::Node;

    /// The doubly-linked-list grammar: S generates red lists ending in a
    /// blue node, A generates inner segments.
    pub fn dll_grammar() -> Hrg {
        let red = Symbol::new("red");
        let blue = Symbol::new("blue");
        let a = Symbol::new("a");
        let s_nt = Nonterminal { name: Symbol::new("S"), arity: 0 };
        let a_nt = Nonterminal { name: Symbol::new("A"), arity: 2 };

        let mut top = Hypergraph::new(0);
        let u = top.add_node(0, &[red]);
        let v = top.add_node(1, &[red]);
        let w = top.add_node(2, &[blue]);
        top.add_edge(v, a, w);
        top.add_edge(w, a, v);
        top.add_hyperedge(0, a_nt.name, vec![u, v]);

        let mut mid = Hypergraph::new(2);
        let x = mid.add_node(0, &[red]);
        mid.add_edge(Node::Abstract(1), a, x);
        mid.add_edge(x, a, Node::Abstract(1));
        mid.add_hyperedge(0, a_nt.name, vec![x, Node::Abstract(2)]);

        let mut base = Hypergraph::new(2);
        base.add_edge(Node::Abstract(1), a, Node::Abstract(2));
        base.add_edge(Node::Abstract(2), a, Node::Abstract(1));

        Hrg {
            nonterminals: [s_nt, a_nt].into_iter().collect(),
            starts: [s_nt].into_iter().collect(),
            rules: vec![
                Rule { name: Symbol::new("R3"), lhs: s_nt, body: top },
                Rule { name: Symbol::new("R2"), lhs: a_nt, body: mid },
                Rule { name: Symbol::new("R1"), lhs: a_nt, body: base },
            ],
            colors: [red, blue].into_iter().collect(),
            actions: [a].into_iter().collect(),
        }
    }
}
