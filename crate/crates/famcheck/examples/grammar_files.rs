//! The file formats: text grammars round-trip, mirror into JSON, and
//! render to DOT (plain rules, rule-body behaviours, and the refined
//! grammar in state/transition style).
//!
//! Run with `cargo run --example grammar_files`.

use famcheck::io;
use famcheck::logic::{ltl_to_buchi, Ltl};
use famcheck::refine::refine;
use famcheck::Symbol;

fn main() {
    let path = format!("{}/benchmarks/dll.hrg", env!("CARGO_MANIFEST_DIR"));
    let text = std::fs::read_to_string(path).unwrap();
    let g = io::parse_grammar(&text).unwrap();

    let canonical = io::serialize_grammar(&g);
    println!("canonical text form:\n{canonical}");
    assert_eq!(
        io::serialize_grammar(&io::parse_grammar(&canonical).unwrap()),
        canonical,
        "round trip is stable"
    );

    let json = io::grammar_to_json(&g);
    let back = io::grammar_from_json(&json).unwrap();
    assert_eq!(io::serialize_grammar(&back), canonical);
    println!("JSON mirror round-trips ({} bytes)", json.len());

    let out = std::env::temp_dir();
    std::fs::write(out.join("dll_grammar.dot"), io::grammar_to_dot(&g)).unwrap();
    let m = ltl_to_buchi(&Ltl::Eventually(Box::new(Ltl::Atom(Symbol::new("blue")))), &[]);
    std::fs::write(
        out.join("dll_behaviours.dot"),
        io::behaviours_to_dot(&g, &m),
    )
    .unwrap();
    std::fs::write(
        out.join("dll_refined.dot"),
        io::refined_to_dot(&refine(&g, &m), &m),
    )
    .unwrap();
    println!(
        "DOT files written to {} (dll_grammar.dot, dll_behaviours.dot, dll_refined.dot)",
        out.display()
    );
}
