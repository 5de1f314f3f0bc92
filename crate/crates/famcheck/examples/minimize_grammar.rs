//! Refinement multiplies rules; minimization merges them back once the
//! class annotations have served their purpose. The language never
//! changes.
//!
//! Run with `cargo run --example minimize_grammar`.

use famcheck::io::parse_grammar;
use famcheck::logic::{ltl_to_buchi, Ltl};
use famcheck::minimize::minimize;
use famcheck::recolor::recolor_buchi;
use famcheck::refine::refine;
use famcheck::Symbol;
use std::collections::BTreeSet;

fn keys(g: &famcheck::grammar::Hrg, depth: usize) -> BTreeSet<String> {
    g.enumerate_members(depth, 10_000)
        .into_iter()
        .map(|(_, h)| h.canonical_key())
        .collect()
}

fn main() {
    let path = format!("{}/benchmarks/dll.hrg", env!("CARGO_MANIFEST_DIR"));
    let g = parse_grammar(&std::fs::read_to_string(path).unwrap()).unwrap();
    let m = ltl_to_buchi(&Ltl::Eventually(Box::new(Ltl::Atom(Symbol::new("blue")))), &[]);

    let refined = refine(&g, &m);
    let recolored = recolor_buchi(&g, &m, Symbol::new("@sat")).unwrap();
    let small = minimize(&recolored.grammar);

    println!("original grammar:   {} rules", g.rules.len());
    println!("refined grammar:    {} rules", refined.rules.len());
    println!("recolored grammar:  {} rules", recolored.grammar.rules.len());
    println!("after minimization: {} rules", small.rules.len());

    assert_eq!(
        keys(&recolored.grammar, 6),
        keys(&small, 6),
        "minimization preserves the members"
    );
    assert_eq!(minimize(&small).rules.len(), small.rules.len());
    println!("\nmembers up to depth 6 are identical before and after; minimize is idempotent");
}
