//! The validation loop: recolor a family, enumerate members, and compare
//! the recoloring node-by-node against explicit-state checking — then
//! corrupt one mark and watch the comparison catch it.
//!
//! Run with `cargo run --example oracle_differential`.

use famcheck::io::parse_grammar;
use famcheck::logic::{parse_formula, Formula};
use famcheck::oracle::{differential, label_ctlstar};
use famcheck::recolor::recolor_ctlstar;

fn main() {
    let path = format!("{}/benchmarks/dll.hrg", env!("CARGO_MANIFEST_DIR"));
    let g = parse_grammar(&std::fs::read_to_string(path).unwrap()).unwrap();
    let Formula::CtlStar(phi) = parse_formula("A (red U blue)", None).unwrap() else {
        unreachable!()
    };

    let report = differential(&g, &phi, 6).unwrap();
    println!("healthy pipeline: {}", report.render());

    // now flip one mark in the recolored grammar
    let recolored = recolor_ctlstar(&g, &phi).unwrap();
    let mut broken = recolored.grammar.clone();
    let first = broken
        .rules
        .iter_mut()
        .flat_map(|rule| rule.body.coloring.values_mut())
        .next()
        .expect("some rule body has a node");
    if !first.remove(&recolored.color) {
        first.insert(recolored.color);
    }
    let mut mismatches = 0;
    let mut members = 0;
    for (_, marked) in broken.enumerate_members(6, 1000) {
        members += 1;
        let mut plain = marked.clone();
        for colors in plain.coloring.values_mut() {
            colors.retain(|c| !c.as_str().starts_with("@phi"));
        }
        let labels = label_ctlstar(&plain, &phi).unwrap();
        for (&v, colors) in &marked.coloring {
            if colors.contains(&recolored.color) != labels[&v] {
                mismatches += 1;
            }
        }
    }
    println!("after flipping one mark: {mismatches} mismatches across {members} members");
    assert!(mismatches > 0);
}
