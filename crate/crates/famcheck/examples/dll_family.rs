//! The doubly-linked-list family, built in code: enumerate members,
//! refine against an eventually-blue property, and recolor.
//!
//! Run with `cargo run --example dll_family`.

use famcheck::grammar::{Hrg, Nonterminal, Rule};
use famcheck::hypergraph::{Hypergraph, Node};
use famcheck::logic::{ltl_to_buchi, Ltl};
use famcheck::recolor::recolor_buchi;
use famcheck::refine::refine;
use famcheck::Symbol;

fn list_grammar() -> Hrg {
    let red = Symbol::new("red");
    let blue = Symbol::new("blue");
    let a = Symbol::new("a");
    let s_nt = Nonterminal { name: Symbol::new("S"), arity: 0 };
    let seg = Nonterminal { name: Symbol::new("A"), arity: 2 };

    // S: a red head, a red anchor, and a blue tail; the segment hyperedge
    // spans head and anchor.
    let mut top = Hypergraph::new(0);
    let u = top.add_node(0, &[red]);
    let v = top.add_node(1, &[red]);
    let w = top.add_node(2, &[blue]);
    top.add_edge(v, a, w);
    top.add_edge(w, a, v);
    top.add_hyperedge(0, seg.name, vec![u, v]);

    // A: either one more red node ...
    let mut grow = Hypergraph::new(2);
    let x = grow.add_node(0, &[red]);
    grow.add_edge(Node::Abstract(1), a, x);
    grow.add_edge(x, a, Node::Abstract(1));
    grow.add_hyperedge(0, seg.name, vec![x, Node::Abstract(2)]);

    // ... or the direct link.
    let mut close = Hypergraph::new(2);
    close.add_edge(Node::Abstract(1), a, Node::Abstract(2));
    close.add_edge(Node::Abstract(2), a, Node::Abstract(1));

    Hrg {
        nonterminals: [s_nt, seg].into_iter().collect(),
        starts: [s_nt].into_iter().collect(),
        rules: vec![
            Rule { name: Symbol::new("R3"), lhs: s_nt, body: top },
            Rule { name: Symbol::new("R2"), lhs: seg, body: grow },
            Rule { name: Symbol::new("R1"), lhs: seg, body: close },
        ],
        colors: [red, blue].into_iter().collect(),
        actions: [a].into_iter().collect(),
    }
}

fn main() {
    let g = list_grammar();
    println!("grammar: {} rules over {} nonterminals", g.rules.len(), g.nonterminals.len());

    println!("\nsmallest members:");
    for (tree, lts) in g.enumerate_members(4, 10) {
        println!(
            "  {} nodes, derivation height {}",
            lts.coloring.len(),
            tree.height()
        );
    }

    // eventually-blue as a Büchi automaton, via the tableau translation
    let phi = Ltl::Eventually(Box::new(Ltl::Atom(Symbol::new("blue"))));
    let m = ltl_to_buchi(&phi, &[]);
    println!("\nautomaton for `{phi}`: {} states", m.state_count());

    let refined = refine(&g, &m);
    println!("refined grammar: {} rules", refined.rules.len());

    let recolored = recolor_buchi(&g, &m, Symbol::new("@sat")).unwrap();
    println!("\nmarked rule-body nodes (every trace eventually sees blue):");
    for rule in &recolored.grammar.rules {
        for (id, colors) in &rule.body.coloring {
            if colors.contains(&Symbol::new("@sat")) {
                let base: Vec<String> = colors
                    .iter()
                    .filter(|c| !c.as_str().starts_with('@'))
                    .map(|c| c.as_str())
                    .collect();
                println!("  rule {} node n{} {:?}", rule.name, id.0, base);
            }
        }
    }
    println!("(only the closing blue node qualifies: red nodes can oscillate forever)");
}
