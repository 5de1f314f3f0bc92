//! Grammar refinement: annotating nonterminals with equivalence classes.
//!
//! Two fixpoint passes enrich every nonterminal with behaviour classes.
//! The first runs bottom-up and assigns language classes: the class of
//! every graph a nonterminal can generate, computed by plugging already
//! derived child classes into rule bodies. The second runs top-down and
//! assigns context classes: the class of every environment a nonterminal
//! occurrence can appear in, seeded with the bare-handle context of the
//! start symbols. Both terminate because classes live in a finite lattice.
//!
//! The refined grammar generates exactly the original family, but each
//! annotated rule knows the behaviour of everything around it, which is
//! what recoloring needs to decide satisfaction rule-locally.

use crate::behaviour::{
    language_interface, plug_body, plug_into_context, ClassId, ClassRegistry, InterfaceBehaviour,
};
use crate::grammar::{Hrg, Nonterminal, Rule, RuleId};
use crate::hypergraph::{Hypergraph, HyperedgeId};
use crate::logic::BuchiAutomaton;
use std::collections::{BTreeMap, BTreeSet};

/// A nonterminal enriched with its language class and, after the second
/// pass, its context class.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct AnnotatedNonterminal {
    pub base: Nonterminal,
    pub language_class: ClassId,
    pub context_class: Option<ClassId>,
}

/// A rule of the annotated grammar: the base rule, the annotation of its
/// left-hand side, and the annotation assigned to each hyperedge.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct AnnotatedRule {
    pub base: RuleId,
    pub lhs: AnnotatedNonterminal,
    pub children: BTreeMap<HyperedgeId, AnnotatedNonterminal>,
}

/// An HRG over annotated nonterminals, sharing rule bodies with the base
/// grammar.
#[derive(Clone, Debug)]
pub struct AnnotatedGrammar {
    pub base: Hrg,
    pub rules: Vec<AnnotatedRule>,
    pub starts: BTreeSet<AnnotatedNonterminal>,
    pub registry: ClassRegistry,
}

impl AnnotatedGrammar {
    pub fn nonterminals(&self) -> BTreeSet<AnnotatedNonterminal> {
        let mut out: BTreeSet<AnnotatedNonterminal> = self.starts.clone();
        for rule in &self.rules {
            out.insert(rule.lhs);
            out.extend(rule.children.values().copied());
        }
        out
    }

    pub fn body(&self, rule: &AnnotatedRule) -> &Hypergraph {
        &self.base.rules[rule.base.0].body
    }

    /// Projects the annotated grammar back onto a plain HRG whose
    /// nonterminals are the annotated ones, renamed `name_k`. Used by
    /// verdict counting and minimization, which care about derivation
    /// trees rather than classes.
    pub fn to_plain(&self) -> (Hrg, BTreeMap<AnnotatedNonterminal, Nonterminal>) {
        let mut names: BTreeMap<AnnotatedNonterminal, Nonterminal> = BTreeMap::new();
        // Generated names must not collide with each other; `A_1` built
        // from base `A` must also not capture a base nonterminal that was
        // itself called `A_1` by an earlier round.
        let mut taken: BTreeSet<String> = self
            .base
            .nonterminals
            .iter()
            .map(|nt| nt.name.as_str())
            .collect();
        let annotated = self.nonterminals();
        for ant in &annotated {
            let base = ant.base.name.as_str();
            let mut candidate = base.clone();
            let mut k = 0u32;
            while names
                .values()
                .any(|n: &Nonterminal| n.name.as_str() == candidate)
                || (candidate != base && taken.contains(&candidate))
            {
                k += 1;
                candidate = format!("{base}_{k}");
            }
            taken.insert(candidate.clone());
            names.insert(
                *ant,
                Nonterminal {
                    name: crate::Symbol::new(&candidate),
                    arity: ant.base.arity,
                },
            );
        }
        let mut rules = Vec::new();
        for rule in &self.rules {
            let base_rule = &self.base.rules[rule.base.0];
            let mut body = base_rule.body.clone();
            for (he_id, child) in &rule.children {
                body.hyperedges.get_mut(he_id).unwrap().label = names[child].name;
            }
            rules.push(Rule {
                name: base_rule.name,
                lhs: names[&rule.lhs],
                body,
            });
        }
        let g = Hrg {
            nonterminals: names.values().copied().collect(),
            starts: self.starts.iter().map(|s| names[s]).collect(),
            rules,
            colors: self.base.colors.clone(),
            actions: self.base.actions.clone(),
        };
        (g, names)
    }
}

/// Bottom-up pass: derives all (nonterminal, language class) pairs and the
/// annotated rules connecting them. A rule instance is added once each of
/// its hyperedges can be assigned an already derived pair; its own class
/// is the restricted behaviour of the body with those classes plugged in.
pub fn annotate_language(g: &Hrg, m: &BuchiAutomaton) -> AnnotatedGrammar {
    let mut registry = ClassRegistry::new();
    let mut derived: BTreeMap<Nonterminal, BTreeSet<ClassId>> = BTreeMap::new();
    let mut rules: BTreeSet<AnnotatedRule> = BTreeSet::new();

    loop {
        let mut changed = false;
        for (rid, rule) in g.rules.iter().enumerate() {
            let hes: Vec<HyperedgeId> = rule.body.hyperedges.keys().copied().collect();
            // candidate class assignments for each hyperedge
            let mut option_sets: Vec<Vec<ClassId>> = Vec::new();
            let mut feasible = true;
            for he in &hes {
                let label = rule.body.hyperedges[he].label;
                let nt = g.nonterminal(label).expect("validated grammar");
                match derived.get(&nt) {
                    Some(set) if !set.is_empty() => {
                        option_sets.push(set.iter().copied().collect())
                    }
                    _ => {
                        feasible = false;
                        break;
                    }
                }
            }
            if !feasible {
                continue;
            }
            let mut assignments: Vec<BTreeMap<HyperedgeId, ClassId>> = vec![BTreeMap::new()];
            for (he, opts) in hes.iter().zip(&option_sets) {
                let mut next = Vec::new();
                for partial in &assignments {
                    for &c in opts {
                        let mut p = partial.clone();
                        p.insert(*he, c);
                        next.push(p);
                    }
                }
                assignments = next;
            }
            for assignment in assignments {
                let plugged: BTreeMap<HyperedgeId, &InterfaceBehaviour> = assignment
                    .iter()
                    .map(|(&he, &c)| (he, registry.get(c)))
                    .collect();
                // split borrow: compute before mutating the registry
                let (behaviour, node_index) = plug_body(&rule.body, m, &plugged);
                let ports = language_interface(&node_index, rule.body.abstract_count);
                let class = registry.intern(behaviour.restrict(&ports));
                if derived.entry(rule.lhs).or_default().insert(class) {
                    changed = true;
                }
                let lhs = AnnotatedNonterminal {
                    base: rule.lhs,
                    language_class: class,
                    context_class: None,
                };
                let children: BTreeMap<HyperedgeId, AnnotatedNonterminal> = assignment
                    .iter()
                    .map(|(&he, &c)| {
                        let label = rule.body.hyperedges[&he].label;
                        (
                            he,
                            AnnotatedNonterminal {
                                base: g.nonterminal(label).unwrap(),
                                language_class: c,
                                context_class: None,
                            },
                        )
                    })
                    .collect();
                if rules.insert(AnnotatedRule {
                    base: RuleId(rid),
                    lhs,
                    children,
                }) {
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }

    let starts: BTreeSet<AnnotatedNonterminal> = g
        .starts
        .iter()
        .flat_map(|s| {
            derived
                .get(s)
                .cloned()
                .unwrap_or_default()
                .into_iter()
                .map(|c| AnnotatedNonterminal {
                    base: *s,
                    language_class: c,
                    context_class: None,
                })
        })
        .collect();

    AnnotatedGrammar {
        base: g.clone(),
        rules: rules.into_iter().collect(),
        starts,
        registry,
    }
}

/// Top-down pass: derives context classes. The start symbols' context is
/// the class of their bare handle; a rule with known left-hand-side
/// context propagates to each hyperedge the class of "the context plugged
/// with the rule body, all sibling hyperedges filled with their language
/// classes, and a hole at this hyperedge".
pub fn annotate_context(g1: &AnnotatedGrammar, m: &BuchiAutomaton) -> AnnotatedGrammar {
    let mut registry = g1.registry.clone();
    let base = g1.base.clone();

    let mut derived: BTreeMap<(Nonterminal, ClassId), BTreeSet<ClassId>> = BTreeMap::new();
    let mut starts: BTreeSet<AnnotatedNonterminal> = BTreeSet::new();
    for s in &g1.starts {
        let handle_ctx = registry.intern(InterfaceBehaviour::of_handle(s.base.arity));
        derived
            .entry((s.base, s.language_class))
            .or_default()
            .insert(handle_ctx);
        starts.insert(AnnotatedNonterminal {
            base: s.base,
            language_class: s.language_class,
            context_class: Some(handle_ctx),
        });
    }

    let mut rules: BTreeSet<AnnotatedRule> = BTreeSet::new();
    loop {
        let mut changed = false;
        for rule in &g1.rules {
            let body = &base.rules[rule.base.0].body;
            let contexts: Vec<ClassId> = derived
                .get(&(rule.lhs.base, rule.lhs.language_class))
                .map(|s| s.iter().copied().collect())
                .unwrap_or_default();
            for ctx in contexts {
                // hole context per hyperedge: plug every sibling, leave the
                // hyperedge itself open, then wrap in the rule's context
                let mut children: BTreeMap<HyperedgeId, AnnotatedNonterminal> = BTreeMap::new();
                for (&he, child) in &rule.children {
                    let assignment: BTreeMap<HyperedgeId, &InterfaceBehaviour> = rule
                        .children
                        .iter()
                        .filter(|(&other, _)| other != he)
                        .map(|(&other, ant)| (other, registry.get(ant.language_class)))
                        .collect();
                    let ctx_behaviour = registry.get(ctx).clone();
                    let (behaviour, node_index) =
                        plug_into_context(&ctx_behaviour, body, m, &assignment);
                    let ports: Vec<_> = {
                        let mut seen = BTreeSet::new();
                        let mut out = Vec::new();
                        for w in &body.hyperedges[&he].attachment {
                            let idx = node_index[w];
                            if seen.insert(idx) {
                                out.push(idx);
                            }
                        }
                        out
                    };
                    let hole_class = registry.intern(behaviour.restrict(&ports));
                    if derived
                        .entry((child.base, child.language_class))
                        .or_default()
                        .insert(hole_class)
                    {
                        changed = true;
                    }
                    children.insert(
                        he,
                        AnnotatedNonterminal {
                            base: child.base,
                            language_class: child.language_class,
                            context_class: Some(hole_class),
                        },
                    );
                }
                let full = AnnotatedRule {
                    base: rule.base,
                    lhs: AnnotatedNonterminal {
                        base: rule.lhs.base,
                        language_class: rule.lhs.language_class,
                        context_class: Some(ctx),
                    },
                    children,
                };
                if rules.insert(full) {
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }

    AnnotatedGrammar {
        base,
        rules: rules.into_iter().collect(),
        starts,
        registry,
    }
}

/// Both passes in sequence: the fully refined grammar.
pub fn refine(g: &Hrg, m: &BuchiAutomaton) -> AnnotatedGrammar {
    annotate_context(&annotate_language(g, m), m)
}
