//! The summary algebra up close: two list-shaped graphs with different
//! left flanks are indistinguishable by a red-until-blue automaton — their
//! behaviours restrict to the same interface summaries, which is exactly
//! why one can replace the other inside any family.
//!
//! Run with `cargo run --example behaviour_summaries`.

use famcheck::behaviour::{
    behaviour_of, format_omega, format_step, view_interface,
};
use famcheck::hypergraph::Hypergraph;
use famcheck::logic::{BuchiAutomaton, StateId};
use famcheck::Symbol;
use std::collections::BTreeSet;

/// p loops on red, blue leads to the accepting sink q, green to the
/// rejecting sink r.
fn until_automaton() -> BuchiAutomaton {
    let (p, q, r) = (StateId(0), StateId(1), StateId(2));
    let mut transitions = BTreeSet::new();
    transitions.insert((p, 0b001, p));
    transitions.insert((p, 0b010, q));
    transitions.insert((p, 0b100, r));
    for letter in 0..8u32 {
        transitions.insert((q, letter, q));
        transitions.insert((r, letter, r));
    }
    BuchiAutomaton {
        colors: vec![Symbol::new("red"), Symbol::new("blue"), Symbol::new("green")],
        state_names: vec!["p".into(), "q".into(), "r".into()],
        transitions,
        initial: [p].into_iter().collect(),
        accepting: [q].into_iter().collect(),
    }
}

/// green flank (one or two nodes) — red — [hyperedge] — red — blue
fn flank_graph(long: bool) -> Hypergraph {
    let a = Symbol::new("a");
    let mut g = Hypergraph::new(0);
    let mut id = 0;
    let mut node = |g: &mut Hypergraph, color: &str| {
        let n = g.add_node(id, &[Symbol::new(color)]);
        id += 1;
        n
    };
    let first = node(&mut g, "green");
    let left = if long {
        let second = node(&mut g, "green");
        g.add_edge(first, a, second);
        g.add_edge(second, a, first);
        second
    } else {
        first
    };
    let v1 = node(&mut g, "red");
    let v2 = node(&mut g, "red");
    let b = node(&mut g, "blue");
    g.add_edge(left, a, v1);
    g.add_edge(v1, a, left);
    g.add_edge(v2, a, b);
    g.add_edge(b, a, v2);
    g.add_hyperedge(0, Symbol::new("A"), vec![v1, v2]);
    g
}

fn main() {
    let m = until_automaton();
    let long = flank_graph(true);
    let short = flank_graph(false);

    let (bl, il) = behaviour_of(&long, &m);
    let ports = view_interface(&long, &BTreeSet::new(), &il);
    println!("interface of the long graph: the two attached nodes\n");
    println!("summaries between/at the attached nodes:");
    for (i, &u) in ports.iter().enumerate() {
        for (j, &v) in ports.iter().enumerate() {
            for s in bl.steps_between(u, v) {
                println!("  port{} ~> port{}: {}", i + 1, j + 1, format_step(&m, &s));
            }
        }
        for h in bl.omegas_at(u) {
            println!("  port{} ~> sink: {}", i + 1, format_omega(&m, h));
        }
    }

    let (bs, is) = behaviour_of(&short, &m);
    let ports_s = view_interface(&short, &BTreeSet::new(), &is);
    let equal = bl.restrict(&ports) == bs.restrict(&ports_s);
    println!("\nrestrictions equal: {equal}");
    println!(
        "so the long and short flanks are interchangeable in any rule body, \
         as far as this automaton can observe"
    );
}
