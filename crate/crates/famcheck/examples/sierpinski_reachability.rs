//! Nested path quantifiers on the subdividing-triangle family: from the
//! red corner, the blue corner stays reachable everywhere, at every
//! subdivision depth.
//!
//! Run with `cargo run --example sierpinski_reachability`.

use famcheck::decide::classify;
use famcheck::io::parse_grammar;
use famcheck::logic::{parse_formula, Formula};
use famcheck::recolor::recolor_ctlstar;
use famcheck::Symbol;

fn main() {
    let path = format!("{}/benchmarks/sierpinski.hrg", env!("CARGO_MANIFEST_DIR"));
    let g = parse_grammar(&std::fs::read_to_string(path).unwrap()).unwrap();

    println!("family sizes by derivation depth:");
    for depth in 1..=4 {
        let members = g.enumerate_members(depth, 10_000);
        let largest = members
            .iter()
            .map(|(_, h)| h.coloring.len())
            .max()
            .unwrap_or(0);
        println!(
            "  depth {depth}: {} members, largest has {largest} nodes",
            members.len()
        );
    }

    for text in ["E F blue", "A G (E F blue)", "E F (E G blue)"] {
        let Formula::CtlStar(phi) = parse_formula(text, None).unwrap() else {
            unreachable!()
        };
        let recolored = recolor_ctlstar(&g, &phi).unwrap();
        let verdict = classify(&recolored.grammar, Symbol::new("init"), recolored.color).unwrap();
        println!(
            "\n{text}\n  {}  -> holds for {} members",
            verdict.render(),
            if verdict.holds_for_all() { "all" } else { "not all" }
        );
    }
}
