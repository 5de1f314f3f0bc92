//! Family-level verdicts from a recolored grammar.
//!
//! A member satisfies the checked property when every node marked as
//! initial also carries the property color. Because the recolored grammar
//! marks nodes rule-locally, this is a condition on the rules used by the
//! member's derivation tree: call a rule good when each of its
//! initial-colored body nodes carries the property color (vacuously good
//! without initial nodes). A member satisfies iff its tree uses only good
//! rules, so the three-way counts reduce to counting derivation trees.

use crate::grammar::{Count, DerivationTree, Hrg, Nonterminal, Rule, RuleId};
use crate::hypergraph::HyperedgeId;
use crate::Symbol;
use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

/// How many members satisfy (`sat`) and falsify (`fal`) the property,
/// with example derivation trees when they exist.
#[derive(Clone, Debug)]
pub struct Verdict {
    pub sat: Count,
    pub fal: Count,
    pub witness_sat: Option<DerivationTree>,
    pub witness_fal: Option<DerivationTree>,
}

impl Verdict {
    pub fn holds_for_all(&self) -> bool {
        matches!(self.fal, Count::Zero)
    }

    pub fn exists_member(&self) -> bool {
        !matches!(self.sat, Count::Zero)
    }

    pub fn finitely_many_violations(&self) -> bool {
        !matches!(self.fal, Count::Infinite)
    }

    pub fn render(&self) -> String {
        format!("sat={} fal={}", self.sat, self.fal)
    }
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum DecideError {
    #[error("color `{0}` is not declared in this grammar")]
    UnknownColor(String),
}

/// Classifies how many members of the recolored grammar satisfy the
/// property at all their initial nodes.
pub fn classify(
    g: &Hrg,
    init_color: Symbol,
    formula_color: Symbol,
) -> Result<Verdict, DecideError> {
    if !g.colors.contains(&init_color) {
        return Err(DecideError::UnknownColor(init_color.as_str()));
    }
    if !g.colors.contains(&formula_color) {
        return Err(DecideError::UnknownColor(formula_color.as_str()));
    }
    let good: BTreeSet<RuleId> = g
        .rules
        .iter()
        .enumerate()
        .filter(|(_, r)| rule_is_good(r, init_color, formula_color))
        .map(|(i, _)| RuleId(i))
        .collect();
    let all: BTreeSet<RuleId> = (0..g.rules.len()).map(RuleId).collect();

    let sat = g.count_trees(&good);
    let fal = count_with_bad_rule(g, &good);

    let witness_sat = smallest_tree_over(g, &good);
    let witness_fal = smallest_tree_with_bad(g, &good, &all);

    Ok(Verdict {
        sat,
        fal,
        witness_sat,
        witness_fal,
    })
}

fn rule_is_good(rule: &Rule, init_color: Symbol, formula_color: Symbol) -> bool {
    rule.body
        .coloring
        .values()
        .all(|colors| !colors.contains(&init_color) || colors.contains(&formula_color))
}

/// Counts complete trees that use at least one bad rule, via the product
/// grammar tracking a "seen a bad rule" flag bottom-up.
fn count_with_bad_rule(g: &Hrg, good: &BTreeSet<RuleId>) -> Count {
    let flagged = |nt: Nonterminal, bad: bool| -> Nonterminal {
        Nonterminal {
            name: Symbol::new(&format!("{}%{}", nt.name, if bad { "b" } else { "g" })),
            arity: nt.arity,
        }
    };
    let mut product = Hrg {
        nonterminals: BTreeSet::new(),
        starts: BTreeSet::new(),
        rules: Vec::new(),
        colors: g.colors.clone(),
        actions: g.actions.clone(),
    };
    for nt in &g.nonterminals {
        product.nonterminals.insert(flagged(*nt, false));
        product.nonterminals.insert(flagged(*nt, true));
    }
    for s in &g.starts {
        product.starts.insert(flagged(*s, true));
    }
    for (rid, rule) in g.rules.iter().enumerate() {
        let rule_bad = !good.contains(&RuleId(rid));
        let hes: Vec<HyperedgeId> = rule.body.hyperedges.keys().copied().collect();
        for mask in 0u32..(1 << hes.len()) {
            let child_bad: BTreeMap<HyperedgeId, bool> = hes
                .iter()
                .enumerate()
                .map(|(i, &he)| (he, mask & (1 << i) != 0))
                .collect();
            let lhs_bad = rule_bad || child_bad.values().any(|&b| b);
            let mut body = rule.body.clone();
            for (&he, &bad) in &child_bad {
                let child = g
                    .nonterminal(body.hyperedges[&he].label)
                    .expect("validated grammar");
                body.hyperedges.get_mut(&he).unwrap().label = flagged(child, bad).name;
            }
            product.rules.push(Rule {
                name: rule.name,
                lhs: flagged(rule.lhs, lhs_bad),
                body,
            });
        }
    }
    let all: BTreeSet<RuleId> = (0..product.rules.len()).map(RuleId).collect();
    product.count_trees(&all)
}

/// The smallest complete tree of any start symbol using only `allowed`
/// rules.
fn smallest_tree_over(g: &Hrg, allowed: &BTreeSet<RuleId>) -> Option<DerivationTree> {
    let mut best: BTreeMap<Nonterminal, DerivationTree> = BTreeMap::new();
    // enough rounds for every derivable nonterminal to stabilize
    for _ in 0..=g.nonterminals.len() {
        let mut changed = false;
        for (rid, rule) in g.rules.iter().enumerate() {
            if !allowed.contains(&RuleId(rid)) || best.contains_key(&rule.lhs) {
                continue;
            }
            let mut children = BTreeMap::new();
            let mut ok = true;
            for (he_id, he) in &rule.body.hyperedges {
                let child = g.nonterminal(he.label).expect("validated grammar");
                match best.get(&child) {
                    Some(t) => {
                        children.insert(*he_id, t.clone());
                    }
                    None => {
                        ok = false;
                        break;
                    }
                }
            }
            if ok {
                best.insert(rule.lhs, DerivationTree::Node(RuleId(rid), children));
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    g.starts.iter().find_map(|s| best.get(s).cloned())
}

/// The smallest complete tree of a start symbol using at least one rule
/// outside `good`.
fn smallest_tree_with_bad(
    g: &Hrg,
    good: &BTreeSet<RuleId>,
    all: &BTreeSet<RuleId>,
) -> Option<DerivationTree> {
    // any[nt]: smallest complete tree; bad[nt]: smallest containing a bad
    // rule
    let mut any: BTreeMap<Nonterminal, DerivationTree> = BTreeMap::new();
    let mut bad: BTreeMap<Nonterminal, DerivationTree> = BTreeMap::new();
    for _ in 0..=2 * g.nonterminals.len() + 1 {
        let mut changed = false;
        for (rid, rule) in g.rules.iter().enumerate() {
            if !all.contains(&RuleId(rid)) {
                continue;
            }
            let rule_bad = !good.contains(&RuleId(rid));
            let hes: Vec<HyperedgeId> = rule.body.hyperedges.keys().copied().collect();
            let child_nts: Vec<Nonterminal> = hes
                .iter()
                .map(|he| g.nonterminal(rule.body.hyperedges[he].label).unwrap())
                .collect();
            // all children complete somehow
            if !any.contains_key(&rule.lhs) && child_nts.iter().all(|nt| any.contains_key(nt)) {
                let children: BTreeMap<HyperedgeId, DerivationTree> = hes
                    .iter()
                    .zip(&child_nts)
                    .map(|(&he, nt)| (he, any[nt].clone()))
                    .collect();
                any.insert(rule.lhs, DerivationTree::Node(RuleId(rid), children));
                changed = true;
            }
            if !bad.contains_key(&rule.lhs) && child_nts.iter().all(|nt| any.contains_key(nt)) {
                if rule_bad {
                    let children: BTreeMap<HyperedgeId, DerivationTree> = hes
                        .iter()
                        .zip(&child_nts)
                        .map(|(&he, nt)| (he, any[nt].clone()))
                        .collect();
                    bad.insert(rule.lhs, DerivationTree::Node(RuleId(rid), children));
                    changed = true;
                } else if let Some(pos) = child_nts.iter().position(|nt| bad.contains_key(nt)) {
                    let children: BTreeMap<HyperedgeId, DerivationTree> = hes
                        .iter()
                        .zip(&child_nts)
                        .enumerate()
                        .map(|(i, (&he, nt))| {
                            let t = if i == pos { bad[nt].clone() } else { any[nt].clone() };
                            (he, t)
                        })
                        .collect();
                    bad.insert(rule.lhs, DerivationTree::Node(RuleId(rid), children));
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    g.starts.iter().find_map(|s| bad.get(s).cloned())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grammar::fixtures::dll_grammar;
    use crate::logic::fixtures::{eventually_blue_automaton, until_automaton};
    use crate::recolor::recolor_buchi;

    fn sym(s: &str) -> Symbol {
        Symbol::new(s)
    }

    /// The list grammar with the inner segment node additionally marked
    /// initial.
    fn dll_with_init() -> Hrg {
        let mut g = dll_grammar();
        g.colors.insert(sym("init"));
        for rule in &mut g.rules {
            if rule.name == sym("R2") {
                for colors in rule.body.coloring.values_mut() {
                    colors.insert(sym("init"));
                }
            }
        }
        g
    }

    #[test]
    fn until_property_fails_on_all_extended_lists() {
        let g = dll_with_init();
        let m = until_automaton();
        let recolored = recolor_buchi(&g, &m, sym("@sat")).unwrap();
        let verdict = classify(&recolored.grammar, sym("init"), sym("@sat")).unwrap();
        // the only member without initial nodes is the two-rule list; all
        // longer lists have an unmarked initial node
        assert_eq!(verdict.sat, Count::Finite(1));
        assert_eq!(verdict.fal, Count::Infinite);
        assert!(!verdict.holds_for_all());
        assert!(verdict.exists_member());
        assert!(!verdict.finitely_many_violations());
        // witnesses assemble to members with/without a violation
        assert!(verdict.witness_sat.is_some());
        assert!(verdict.witness_fal.is_some());
    }

    #[test]
    fn eventually_blue_holds_for_all_members() {
        // mark the blue node initial instead: every trace from it starts
        // blue
        let mut g = dll_grammar();
        g.colors.insert(sym("init"));
        for rule in &mut g.rules {
            if rule.name == sym("R3") {
                for colors in rule.body.coloring.values_mut() {
                    if colors.contains(&sym("blue")) {
                        colors.insert(sym("init"));
                    }
                }
            }
        }
        let m = eventually_blue_automaton();
        let recolored = recolor_buchi(&g, &m, sym("@sat")).unwrap();
        let verdict = classify(&recolored.grammar, sym("init"), sym("@sat")).unwrap();
        assert_eq!(verdict.fal, Count::Zero);
        assert_eq!(verdict.sat, Count::Infinite);
        assert!(verdict.holds_for_all());
    }

    #[test]
    fn witnesses_are_confirmed_by_the_explicit_checker() {
        use crate::logic::{PathFormula, StateFormula};
        let g = dll_with_init();
        let m = until_automaton();
        let recolored = recolor_buchi(&g, &m, sym("@sat")).unwrap();
        let verdict = classify(&recolored.grammar, sym("init"), sym("@sat")).unwrap();
        let phi = StateFormula::Forall(Box::new(PathFormula::Until(
            Box::new(PathFormula::State(Box::new(StateFormula::Atom(sym("red"))))),
            Box::new(PathFormula::State(Box::new(StateFormula::Atom(sym("blue"))))),
        )));
        let check = |tree: &crate::grammar::DerivationTree, expect: bool| {
            let mut member = recolored.grammar.assemble(tree);
            for colors in member.coloring.values_mut() {
                colors.retain(|c| !c.as_str().starts_with('@'));
            }
            for (&v, colors) in &member.coloring.clone() {
                if colors.contains(&sym("init")) {
                    let holds = crate::oracle::check_ctlstar(&member, v, &phi).unwrap();
                    assert_eq!(holds, expect, "witness node {v:?}");
                }
            }
        };
        check(verdict.witness_sat.as_ref().unwrap(), true);
        check(verdict.witness_fal.as_ref().unwrap(), false);
    }

    #[test]
    fn classifications_survive_minimization_and_match_enumeration() {
        let g = dll_with_init();
        let m = until_automaton();
        let recolored = recolor_buchi(&g, &m, sym("@sat")).unwrap();
        let verdict = classify(&recolored.grammar, sym("init"), sym("@sat")).unwrap();
        let small = crate::minimize::minimize(&recolored.grammar);
        let after = classify(&small, sym("init"), sym("@sat")).unwrap();
        assert_eq!(verdict.sat, after.sat);
        assert_eq!(verdict.fal, after.fal);
        // the finite satisfying count matches direct enumeration well past
        // the grammar's pumping height
        let satisfying = recolored
            .grammar
            .enumerate_members(7, 10_000)
            .into_iter()
            .filter(|(_, h)| {
                h.coloring
                    .values()
                    .all(|c| !c.contains(&sym("init")) || c.contains(&sym("@sat")))
            })
            .count() as u64;
        assert_eq!(verdict.sat, Count::Finite(satisfying));
    }

    #[test]
    fn empty_grammar_yields_zero_zero() {
        let mut g = dll_grammar();
        g.rules.clear();
        g.colors.insert(sym("init"));
        g.colors.insert(sym("@sat"));
        let verdict = classify(&g, sym("init"), sym("@sat")).unwrap();
        assert_eq!(verdict.sat, Count::Zero);
        assert_eq!(verdict.fal, Count::Zero);
        assert!(verdict.witness_sat.is_none());
        assert!(verdict.witness_fal.is_none());
    }

    #[test]
    fn unknown_colors_are_rejected() {
        let g = dll_grammar();
        assert!(matches!(
            classify(&g, sym("init"), sym("blue")),
            Err(DecideError::UnknownColor(_))
        ));
    }
}
