//! Series-parallel graphs: verdicts plus witness extraction. The family
//! runs from a red source to a looping blue sink, so safety properties
//! phrased over colors fail with concrete, checkable witnesses.
//!
//! Run with `cargo run --example spg_family`.

use famcheck::decide::classify;
use famcheck::io::parse_grammar;
use famcheck::logic::{parse_formula, Formula, StateFormula};
use famcheck::oracle::check_ctlstar;
use famcheck::recolor::recolor_ctlstar;
use famcheck::Symbol;

fn state(text: &str) -> StateFormula {
    match parse_formula(text, None).unwrap() {
        Formula::CtlStar(s) => s,
        _ => unreachable!(),
    }
}

fn main() {
    let path = format!("{}/benchmarks/spg.hrg", env!("CARGO_MANIFEST_DIR"));
    let g = parse_grammar(&std::fs::read_to_string(path).unwrap()).unwrap();

    let text = "A G (red | !blue)";
    let recolored = recolor_ctlstar(&g, &state(text)).unwrap();
    let verdict = classify(&recolored.grammar, Symbol::new("init"), recolored.color).unwrap();
    println!("property: {text}");
    println!("{}", verdict.render());

    // pull out the smallest falsifying member and double-check it
    // explicitly
    let witness = verdict.witness_fal.expect("every member falsifies");
    let marked = recolored.grammar.assemble(&witness);
    let mut member = marked.clone();
    for colors in member.coloring.values_mut() {
        colors.retain(|c| !c.as_str().starts_with("@phi"));
    }
    println!(
        "\nsmallest falsifying member: {} nodes, {} edges",
        member.coloring.len(),
        member.edges.len()
    );
    for (&id, colors) in &member.coloring {
        if colors.contains(&Symbol::new("init")) {
            let holds = check_ctlstar(&member, id, &state(text)).unwrap();
            println!("explicit check at the initial node: {holds}");
            assert!(!holds, "witness must falsify");
        }
    }
    println!("(the blue sink is reachable from the source in every member)");
}
