//! Branching-time recursion on the tree family: negations and
//! conjunctions of path-quantified formulas recolor the grammar in
//! stages, one fresh color per subformula.
//!
//! Run with `cargo run --example trees_ctlstar`.

use famcheck::decide::classify;
use famcheck::io::parse_grammar;
use famcheck::logic::{parse_formula, Formula};
use famcheck::recolor::recolor_ctlstar;
use famcheck::Symbol;

fn main() {
    let path = format!("{}/benchmarks/trees.hrg", env!("CARGO_MANIFEST_DIR"));
    let g = parse_grammar(&std::fs::read_to_string(path).unwrap()).unwrap();

    let text = "!(E F blue) & (A G (red | !blue)) & (A G !red)";
    let Formula::CtlStar(phi) = parse_formula(text, None).unwrap() else {
        unreachable!()
    };
    let recolored = recolor_ctlstar(&g, &phi).unwrap();

    println!("checked:  {text}");
    println!("colors introduced while recursing over the formula:");
    for (color, denotes) in &recolored.registry {
        println!("  {color:<8} := {denotes}");
    }
    let verdict = classify(&recolored.grammar, Symbol::new("init"), recolored.color).unwrap();
    println!("\n{}", verdict.render());
    println!(
        "single-colored trees make the three conjuncts unsatisfiable together: \
         every node is red or blue, so `no reachable blue` plus `no red` is impossible"
    );
    if let Some(witness) = verdict.witness_fal {
        let member = recolored.grammar.assemble(&witness);
        println!(
            "smallest falsifying member: {} nodes (derivation height {})",
            member.coloring.len(),
            witness.height()
        );
    }
}
