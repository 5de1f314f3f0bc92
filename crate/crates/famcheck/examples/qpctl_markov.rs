//! Qualitative probabilistic properties: the family members read as
//! Markov chains with uniform positive probabilities. Almost-sure
//! reachability is weaker than universal reachability, and the embedding
//! into branching-time logic agrees with direct graph analysis.
//!
//! Run with `cargo run --example qpctl_markov`.

use famcheck::hypergraph::{Hypergraph, Node};
use famcheck::io::parse_grammar;
use famcheck::logic::{qpctl_to_ctlstar, Bound, PathFormula, Qpctl, StateFormula};
use famcheck::oracle::{check_ctlstar, check_qpctl, label_ctlstar, label_qpctl};
use famcheck::Symbol;

fn main() {
    // the canonical separation: x loops and may move on to the blue sink
    let a = Symbol::new("a");
    let mut g = Hypergraph::new(0);
    let x = g.add_node(0, &[Symbol::new("red")]);
    let y = g.add_node(1, &[Symbol::new("blue")]);
    g.add_edge(x, a, x);
    g.add_edge(x, a, y);
    g.add_edge(y, a, y);
    let Node::Concrete(xv) = x else { unreachable!() };

    let almost_sure = Qpctl::Eventually(
        Bound::AlmostSure,
        Box::new(Qpctl::Atom(Symbol::new("blue"))),
    );
    let universal = StateFormula::Forall(Box::new(PathFormula::Eventually(Box::new(
        PathFormula::State(Box::new(StateFormula::Atom(Symbol::new("blue")))),
    ))));
    println!(
        "self-loop with escape: almost-surely-eventually-blue = {}, \
         universally-eventually-blue = {}",
        check_qpctl(&g, xv, &almost_sure).unwrap(),
        check_ctlstar(&g, xv, &universal).unwrap(),
    );
    println!("(the all-red run has measure zero but it is still a run)\n");

    // embedding vs direct analysis on real family members
    let path = format!("{}/benchmarks/ipv4.hrg", env!("CARGO_MANIFEST_DIR"));
    let fam = parse_grammar(&std::fs::read_to_string(path).unwrap()).unwrap();
    let phi = Qpctl::Always(
        Bound::AlmostSure,
        Box::new(Qpctl::Eventually(
            Bound::Positive,
            Box::new(Qpctl::Atom(Symbol::new("red"))),
        )),
    );
    let embedded = qpctl_to_ctlstar(&phi);
    println!("embedding of the almost-sure-globally / positively-eventually property:");
    println!("  {embedded}");
    let mut members = 0;
    for (_, lts) in fam.enumerate_members(5, 100) {
        assert_eq!(
            label_qpctl(&lts, &phi).unwrap(),
            label_ctlstar(&lts, &embedded).unwrap(),
        );
        members += 1;
    }
    println!("direct and embedded checks agree on all {members} members at depth 5");
}
