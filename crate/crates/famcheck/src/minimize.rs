//! Grammar shrinking: pruning plus nonterminal merging.
//!
//! Refinement multiplies nonterminals; once a grammar has been recolored
//! the class annotations carry no further information and many of the
//! split nonterminals generate identical languages. Minimization prunes
//! dead rules and then merges nonterminals by partition refinement: two
//! nonterminals of equal arity end up merged when their rule sets become
//! identical once hyperedge labels are read up to the current partition
//! (bodies compared up to isomorphism with pinned abstract nodes). Merging
//! such nonterminals preserves the language because they derive exactly
//! the same graphs.

use crate::grammar::{Hrg, Nonterminal, Rule};
use crate::Symbol;
use std::collections::{BTreeMap, BTreeSet};

/// Canonical key of a body with hyperedge labels mapped through the
/// current partition.
fn body_key(rule: &Rule, block_of: &BTreeMap<Nonterminal, usize>, g: &Hrg) -> String {
    let mut relabeled = rule.body.clone();
    for he in relabeled.hyperedges.values_mut() {
        let nt = g.nonterminal(he.label).expect("validated grammar");
        he.label = Symbol::new(&format!("#blk{}", block_of[&nt]));
    }
    relabeled.canonical_key()
}

/// Prunes and merges. The result generates the same language; rule and
/// nonterminal counts never grow. Idempotent.
pub fn minimize(g: &Hrg) -> Hrg {
    let g = g.prune();
    if g.rules.is_empty() {
        return g;
    }

    // initial partition: by arity
    let nts: Vec<Nonterminal> = g.nonterminals.iter().copied().collect();
    let mut block_of: BTreeMap<Nonterminal, usize> = BTreeMap::new();
    {
        let mut by_arity: BTreeMap<u32, usize> = BTreeMap::new();
        let mut next = 0;
        for nt in &nts {
            let id = *by_arity.entry(nt.arity).or_insert_with(|| {
                next += 1;
                next - 1
            });
            block_of.insert(*nt, id);
        }
    }

    loop {
        // signature: the rule-body keys of each nonterminal under the
        // current partition
        let mut signatures: BTreeMap<Nonterminal, BTreeSet<String>> = BTreeMap::new();
        for rule in &g.rules {
            signatures
                .entry(rule.lhs)
                .or_default()
                .insert(body_key(rule, &block_of, &g));
        }
        let mut groups: BTreeMap<(usize, BTreeSet<String>), Vec<Nonterminal>> = BTreeMap::new();
        for nt in &nts {
            let key = (
                block_of[nt],
                signatures.get(nt).cloned().unwrap_or_default(),
            );
            groups.entry(key).or_default().push(*nt);
        }
        if groups.len() == block_of.values().collect::<BTreeSet<_>>().len() {
            break;
        }
        block_of = groups
            .into_values()
            .enumerate()
            .flat_map(|(id, members)| members.into_iter().map(move |nt| (nt, id)))
            .collect();
    }

    // representative per block: the lexicographically smallest name
    let mut representative: BTreeMap<usize, Nonterminal> = BTreeMap::new();
    for nt in &nts {
        let entry = representative.entry(block_of[nt]).or_insert(*nt);
        if nt.name.as_str() < entry.name.as_str() {
            *entry = *nt;
        }
    }
    let rep = |nt: Nonterminal| representative[&block_of[&nt]];

    let mut seen: BTreeSet<(Nonterminal, String)> = BTreeSet::new();
    let mut rules = Vec::new();
    for rule in &g.rules {
        let lhs = rep(rule.lhs);
        let key = (lhs, body_key(rule, &block_of, &g));
        if !seen.insert(key) {
            continue;
        }
        let mut body = rule.body.clone();
        for he in body.hyperedges.values_mut() {
            let nt = g.nonterminal(he.label).unwrap();
            he.label = rep(nt).name;
        }
        rules.push(Rule {
            name: rule.name,
            lhs,
            body,
        });
    }
    Hrg {
        nonterminals: representative.values().copied().collect(),
        starts: g.starts.iter().map(|&s| rep(s)).collect(),
        rules,
        colors: g.colors.clone(),
        actions: g.actions.clone(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grammar::fixtures::dll_grammar;
    use crate::logic::fixtures::eventually_blue_automaton;
    use crate::recolor::recolor_buchi;

    fn member_keys(g: &Hrg, depth: usize) -> BTreeSet<String> {
        g.enumerate_members(depth, 10_000)
            .into_iter()
            .map(|(_, h)| h.canonical_key())
            .collect()
    }

    #[test]
    fn already_minimal_grammar_is_unchanged() {
        let g = dll_grammar();
        let m = minimize(&g);
        assert_eq!(m.rules.len(), g.rules.len());
        assert_eq!(m.nonterminals.len(), g.nonterminals.len());
        assert_eq!(member_keys(&m, 5), member_keys(&g, 5));
    }

    #[test]
    fn refined_grammar_shrinks_and_keeps_language() {
        let g = dll_grammar();
        let m = eventually_blue_automaton();
        let recolored = recolor_buchi(&g, &m, crate::Symbol::new("@sat")).unwrap();
        let before = recolored.grammar.clone();
        let after = minimize(&before);
        assert!(after.rules.len() <= before.rules.len());
        assert!(after.nonterminals.len() <= before.nonterminals.len());
        assert!(after.rules.len() < 11, "recolored list grammar must shrink");
        assert_eq!(member_keys(&after, 6), member_keys(&before, 6));
        // idempotent
        let again = minimize(&after);
        assert_eq!(again.rules.len(), after.rules.len());
        assert_eq!(member_keys(&again, 5), member_keys(&after, 5));
    }
}
