//! Family-level verdicts on the address-probing protocol family: how many
//! members satisfy each property at their initial state — none, finitely
//! many, or infinitely many.
//!
//! Run with `cargo run --example ipv4_protocol`.

use famcheck::decide::classify;
use famcheck::io::parse_grammar;
use famcheck::logic::{parse_formula, qpctl_to_ctlstar, Formula};
use famcheck::recolor::recolor_ctlstar;
use famcheck::Symbol;

fn main() {
    let path = format!("{}/benchmarks/ipv4.hrg", env!("CARGO_MANIFEST_DIR"));
    let g = parse_grammar(&std::fs::read_to_string(path).unwrap()).unwrap();

    let properties = [
        "E X red",
        "E F red",
        "(A F G blue) | (A G (E F red))",
        "P>0[X P>0[X P>0[X blue]]]",
        "P=1[G P>0[F red]]",
    ];
    println!("{:<34} {:>8} {:>8}  verdict", "property", "sat", "fal");
    for text in properties {
        let phi = match parse_formula(text, None).unwrap() {
            Formula::CtlStar(s) => s,
            Formula::Qpctl(q) => qpctl_to_ctlstar(&q),
        };
        let recolored = recolor_ctlstar(&g, &phi).unwrap();
        let verdict = classify(&recolored.grammar, Symbol::new("init"), recolored.color).unwrap();
        let summary = if verdict.holds_for_all() {
            "holds for every member"
        } else if !verdict.exists_member() {
            "fails for every member"
        } else if verdict.finitely_many_violations() {
            "fails for finitely many members"
        } else {
            "fails for infinitely many members"
        };
        println!(
            "{:<34} {:>8} {:>8}  {}",
            text,
            verdict.sat.to_string(),
            verdict.fal.to_string(),
            summary
        );
    }
}
