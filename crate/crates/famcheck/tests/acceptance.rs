//! Acceptance suite: one test per criterion, each printing a pass/fail
//! line. Run with `cargo test --test acceptance -- --nocapture`.

use famcheck::behaviour::{
    behaviour_of, context_interface, language_interface, omega_from_states, plug_body,
    step_from_triples, step_summary, view_interface, InterfaceBehaviour,
};
use famcheck::decide::classify;
use famcheck::grammar::{Count, DerivationTree, Hrg, Nonterminal, Rule, RuleId};
use famcheck::hypergraph::{Hypergraph, HyperedgeId, Node};
use famcheck::io::parse_grammar;
use famcheck::logic::{
    parse_formula, qpctl_to_ctlstar, Bound, BuchiAutomaton, Formula, Qpctl, StateFormula, StateId,
};
use famcheck::minimize::minimize;
use famcheck::oracle::{differential, label_ctlstar, label_qpctl};
use famcheck::recolor::{delete_color, recolor_ctlstar};
use famcheck::refine::refine;
use famcheck::Symbol;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use std::collections::{BTreeMap, BTreeSet};
use std::time::Instant;

fn benchmark(name: &str) -> Hrg {
    let path = format!("{}/benchmarks/{name}.hrg", env!("CARGO_MANIFEST_DIR"));
    let g = parse_grammar(&std::fs::read_to_string(&path).expect("benchmark file")).unwrap();
    assert!(g.validate().is_empty(), "{name} must validate");
    g
}

fn formula(text: &str) -> StateFormula {
    match parse_formula(text, None).unwrap() {
        Formula::CtlStar(s) => s,
        Formula::Qpctl(q) => qpctl_to_ctlstar(&q),
    }
}

fn report(name: &str, outcome: Result<String, String>) {
    match outcome {
        Ok(detail) => println!("acceptance {name}: PASS ({detail})"),
        Err(why) => {
            println!("acceptance {name}: FAIL ({why})");
            panic!("acceptance {name} failed: {why}");
        }
    }
}

/// Criterion 1: on every shipped family and at least three formulas each,
/// the recolored grammar agrees with explicit-state checking on every node
/// of every member up to derivation depth 5. Exact, under 60 seconds.
#[test]
fn acceptance_1_recoloring_matches_explicit_checking() {
    let started = Instant::now();
    let suites: Vec<(&str, Vec<&str>)> = vec![
        ("dll", vec!["A F blue", "A (red U blue)", "A G red", "E F blue"]),
        ("ipv4", vec!["E X red", "E F red", "P=1[G P>0[F red]]"]),
        ("trees", vec!["!(E (blue U !blue))", "A G (red | !blue)", "E F blue"]),
        ("spg", vec!["!(E (blue U !blue))", "A G (red | !blue)", "E F blue"]),
        ("sierpinski", vec!["E F blue", "A G (E F blue)", "E F (E G blue)"]),
    ];
    let mut runs = 0;
    let mut members = 0;
    for (name, formulas) in suites {
        let g = benchmark(name);
        for f in formulas {
            let rep = differential(&g, &formula(f), 5).unwrap();
            if !rep.mismatches.is_empty() {
                let m = &rep.mismatches[0];
                report(
                    "1 (recoloring vs explicit checking)",
                    Err(format!(
                        "{name} `{f}`: member {} node n{} grammar={} oracle={}",
                        m.member_index, m.node.0, m.grammar_says, m.oracle_says
                    )),
                );
            }
            runs += 1;
            members += rep.members_checked;
        }
    }
    let elapsed = started.elapsed();
    let outcome = if elapsed.as_secs() < 60 {
        Ok(format!(
            "{runs} grammar/formula pairs, {members} members, zero mismatches, {elapsed:?}"
        ))
    } else {
        Err(format!("took {elapsed:?}, budget is 60 s"))
    };
    report("1 (recoloring vs explicit checking)", outcome);
}

/// Criterion 2: the family-level verdicts reproduce the expected
/// three-way classifications for all fourteen reference rows.
#[test]
fn acceptance_2_verdict_classifications() {
    #[derive(PartialEq, Clone, Copy, Debug)]
    enum C {
        Zero,
        Fin,
        Inf,
    }
    fn class_of(c: Count) -> C {
        match c {
            Count::Zero => C::Zero,
            Count::Finite(_) | Count::AboveCap => C::Fin,
            Count::Infinite => C::Inf,
        }
    }
    let rows: Vec<(&str, &str, C, C)> = vec![
        ("ipv4", "E X red", C::Zero, C::Inf),
        ("ipv4", "E F red", C::Inf, C::Zero),
        ("ipv4", "(A F G blue) | (A G (E F red))", C::Inf, C::Zero),
        ("ipv4", "P>0[X P>0[X P>0[X blue]]]", C::Fin, C::Inf),
        ("ipv4", "P=1[G P>0[F red]]", C::Inf, C::Zero),
        ("trees", "!(E (blue U !blue))", C::Inf, C::Inf),
        ("trees", "A G (red | !blue)", C::Inf, C::Inf),
        (
            "trees",
            "!(E F blue) & (A G (red | !blue)) & (A G !red)",
            C::Zero,
            C::Inf,
        ),
        ("spg", "!(E (blue U !blue))", C::Zero, C::Inf),
        ("spg", "A G (red | !blue)", C::Zero, C::Inf),
        (
            "spg",
            "!(E F blue) & (A G (red | !blue)) & (A G !red)",
            C::Zero,
            C::Inf,
        ),
        ("sierpinski", "E F blue", C::Inf, C::Zero),
        ("sierpinski", "A G (E F blue)", C::Inf, C::Zero),
        ("sierpinski", "E F (E G blue)", C::Inf, C::Zero),
    ];
    let started = Instant::now();
    let mut failures = Vec::new();
    for (name, f, want_sat, want_fal) in &rows {
        let g = benchmark(name);
        let row_started = Instant::now();
        let recolored = recolor_ctlstar(&g, &formula(f)).unwrap();
        let verdict = classify(&recolored.grammar, Symbol::new("init"), recolored.color).unwrap();
        let row_elapsed = row_started.elapsed();
        let got = (class_of(verdict.sat), class_of(verdict.fal));
        if got != (*want_sat, *want_fal) {
            failures.push(format!(
                "{name} `{f}`: got ({:?},{:?}), want ({want_sat:?},{want_fal:?})",
                got.0, got.1
            ));
        }
        // the reference tool solves these rows in 0.35-1.5 s; allow 10x
        if row_elapsed.as_secs_f64() > 15.0 {
            failures.push(format!("{name} `{f}`: row took {row_elapsed:?}"));
        }
    }
    let outcome = if failures.is_empty() {
        Ok(format!("{} rows, {:?}", rows.len(), started.elapsed()))
    } else {
        Err(failures.join("; "))
    };
    report("2 (verdict table rows)", outcome);
}

/// The complete reference verdict table, beyond the rows required by
/// criterion 2. Slow (tens of seconds); run on demand with
/// `cargo test --test acceptance -- --ignored --nocapture`.
#[test]
#[ignore]
fn extended_verdict_table() {
    #[derive(PartialEq, Clone, Copy, Debug)]
    enum C {
        Zero,
        Fin,
        Inf,
    }
    fn class_of(c: Count) -> C {
        match c {
            Count::Zero => C::Zero,
            Count::Finite(_) | Count::AboveCap => C::Fin,
            Count::Infinite => C::Inf,
        }
    }
    let rows: Vec<(&str, &str, C, C)> = vec![
        ("ipv4", "A G (E X red)", C::Zero, C::Inf),
        ("ipv4", "E X blue", C::Fin, C::Inf),
        ("ipv4", "A G (E X blue)", C::Zero, C::Inf),
        ("ipv4", "E F G blue", C::Inf, C::Zero),
        ("ipv4", "A F G blue", C::Zero, C::Inf),
        ("ipv4", "P>0[G blue]", C::Zero, C::Inf),
        ("ipv4", "P>0[F P>0[G blue]]", C::Zero, C::Inf),
        ("ipv4", "P>0[F red]", C::Inf, C::Zero),
        ("ipv4", "P>0[G !red]", C::Zero, C::Inf),
        ("ipv4", "P>0[F blue]", C::Inf, C::Zero),
        ("ipv4", "P>0[G P>0[F blue]]", C::Inf, C::Zero),
        ("ipv4", "P>0[X blue]", C::Fin, C::Inf),
        ("ipv4", "P>0[X P>0[X blue]]", C::Fin, C::Inf),
        ("ipv4", "P=1[X (red | blue)]", C::Fin, C::Inf),
        ("ipv4", "P>0[X (!blue & P>0[F blue])]", C::Inf, C::Fin),
        (
            "ipv4",
            "P>0[F (P=1[X (red | blue)] & P>0[X (!blue & P>0[F blue])])]",
            C::Zero,
            C::Inf,
        ),
        (
            "ipv4",
            "P=1[G P>0[F (P=1[X (red | blue)] & P>0[X (!blue & P>0[F blue])])]]",
            C::Zero,
            C::Inf,
        ),
        ("trees", "E F blue", C::Inf, C::Inf),
        ("trees", "E X !blue", C::Inf, C::Inf),
        ("trees", "E F blue & E X !blue", C::Inf, C::Inf),
        ("trees", "!(A G (E F blue & E X !blue))", C::Inf, C::Zero),
        ("trees", "!(E F blue)", C::Inf, C::Inf),
        ("trees", "A G !red", C::Inf, C::Inf),
        ("spg", "E F blue", C::Inf, C::Zero),
        ("spg", "E X !blue", C::Inf, C::Inf),
        ("spg", "E F blue & E X !blue", C::Inf, C::Inf),
        ("spg", "!(A G (E F blue & E X !blue))", C::Inf, C::Zero),
        ("spg", "!(E F blue)", C::Zero, C::Inf),
        ("spg", "A G !red", C::Zero, C::Inf),
        ("sierpinski", "E F green", C::Inf, C::Zero),
        ("sierpinski", "A G (E F green)", C::Zero, C::Inf),
        ("sierpinski", "E G blue", C::Zero, C::Inf),
        ("sierpinski", "E X blue", C::Fin, C::Inf),
        ("sierpinski", "E X green", C::Fin, C::Inf),
        ("sierpinski", "E X blue & E X green", C::Fin, C::Inf),
    ];
    let started = Instant::now();
    let mut failures = Vec::new();
    for (name, f, want_sat, want_fal) in &rows {
        let g = benchmark(name);
        let recolored = recolor_ctlstar(&g, &formula(f)).unwrap();
        let verdict = classify(&recolored.grammar, Symbol::new("init"), recolored.color).unwrap();
        let got = (class_of(verdict.sat), class_of(verdict.fal));
        if got != (*want_sat, *want_fal) {
            failures.push(format!(
                "{name} `{f}`: got ({:?},{:?}), want ({want_sat:?},{want_fal:?})",
                got.0, got.1
            ));
        }
    }
    let outcome = if failures.is_empty() {
        Ok(format!("{} rows, {:?}", rows.len(), started.elapsed()))
    } else {
        Err(failures.join("; "))
    };
    report("extended verdict table", outcome);
}

/// Criterion 3: refining the list family against the minimal two-state
/// eventually-blue automaton yields exactly eleven rules. The tableau
/// route is covered separately by criterion 1 on the same instance.
#[test]
fn acceptance_3_refined_size_regression() {
    let g = benchmark("dll");
    let m = fixture_eventually_blue();
    let refined = refine(&g, &m);
    let outcome = if refined.rules.len() == 11 {
        Ok("11 rules with the two-state automaton".into())
    } else {
        Err(format!("{} rules, expected 11", refined.rules.len()))
    };
    report("3 (refined grammar size)", outcome);
}

/// Criterion 4: the two list-shaped graphs that differ only in their
/// left flank restrict to equal interface behaviours under the
/// red-until-blue automaton, and the printed summary sets appear exactly.
#[test]
fn acceptance_4_interface_behaviour_regression() {
    let m = fixture_until();
    let long = fixture_flank(true);
    let short = fixture_flank(false);
    let (bl, il) = behaviour_of(&long, &m);
    let (bs, is) = behaviour_of(&short, &m);
    let ports_l = view_interface(&long, &BTreeSet::new(), &il);
    let ports_s = view_interface(&short, &BTreeSet::new(), &is);
    let mut failures = Vec::new();
    if bl.restrict(&ports_l) != bs.restrict(&ports_s) {
        failures.push("restricted behaviours differ".to_string());
    }
    // the one-step annotations: green steps and blue steps
    let green = step_summary(&m, famcheck::behaviour::letter_of_colors(&m, &["green"]));
    if green != step_from_triples(&m, &[("p", "r", false), ("q", "q", true), ("r", "r", false)]) {
        failures.push("green step summary differs from the documented set".into());
    }
    let blue = step_summary(&m, famcheck::behaviour::letter_of_colors(&m, &["blue"]));
    if blue != step_from_triples(&m, &[("p", "q", true), ("q", "q", true), ("r", "r", false)]) {
        failures.push("blue step summary differs from the documented set".into());
    }
    // the sink labels at the right attached node
    let expect = [omega_from_states(&m, &["p", "q"])].into_iter().collect::<BTreeSet<_>>();
    if bl.omegas_at(ports_l[1]) != expect || bs.omegas_at(ports_s[1]) != expect {
        failures.push("sink labels at the right attached node are not {p,q}".into());
    }
    let outcome = if failures.is_empty() {
        Ok("equal restrictions; annotations match exactly".into())
    } else {
        Err(failures.join("; "))
    };
    report("4 (interface behaviour regression)", outcome);
}

// ---------------------------------------------------------------------------
// Criterion 5: randomized property suites
// ---------------------------------------------------------------------------

fn sym(s: &str) -> Symbol {
    Symbol::new(s)
}

/// Random hypergraph with the given abstract count; hyperedges as listed
/// (label, arity).
fn random_graph(
    rng: &mut StdRng,
    arity: u32,
    max_nodes: u32,
    hyperedges: &[(Symbol, u32)],
) -> Hypergraph {
    let palette = [sym("red"), sym("blue"), sym("green")];
    let mut g = Hypergraph::new(arity);
    let n = rng.gen_range(1..=max_nodes);
    for i in 0..n {
        let mut colors = Vec::new();
        for c in palette {
            if rng.gen_bool(0.4) {
                colors.push(c);
            }
        }
        g.add_node(i, &colors);
    }
    let all: Vec<Node> = g.nodes().collect();
    let edges = rng.gen_range(0..=2 * all.len());
    for _ in 0..edges {
        let u = all[rng.gen_range(0..all.len())];
        let v = all[rng.gen_range(0..all.len())];
        g.add_edge(u, sym("a"), v);
    }
    let concrete: Vec<Node> = all.iter().copied().filter(|n| n.is_concrete()).collect();
    for (k, (label, ar)) in hyperedges.iter().enumerate() {
        let attachment: Vec<Node> = (0..*ar)
            .map(|_| {
                // prefer concrete nodes as attachment points
                if rng.gen_bool(0.8) || arity == 0 {
                    concrete[rng.gen_range(0..concrete.len())]
                } else {
                    Node::Abstract(rng.gen_range(1..=arity))
                }
            })
            .collect();
        g.add_hyperedge(k as u32, *label, attachment);
    }
    g
}

/// Criterion 5a: replacement is associative on randomly generated graphs.
#[test]
fn acceptance_5a_replacement_associativity() {
    let started = Instant::now();
    let mut rng = StdRng::seed_from_u64(0x5a);
    let cases = 1000;
    for case in 0..cases {
        let inner_arity = rng.gen_range(0..=2);
        let outer_arity = rng.gen_range(1..=3);
        // host with exactly one hyperedge
        let host_arity = rng.gen_range(0..=2);
        let host = random_graph(&mut rng, host_arity, 4, &[(sym("X"), outer_arity)]);
        let middle = random_graph(
            &mut rng,
            outer_arity,
            3,
            &[(sym("Y"), inner_arity)],
        );
        let plug = random_graph(&mut rng, inner_arity, 3, &[]);

        let host_he = *host.hyperedges.keys().next().unwrap();
        let middle_he = *middle.hyperedges.keys().next().unwrap();
        let inner_first = middle
            .replace(&[(middle_he, &plug)].into_iter().collect())
            .unwrap();
        let left = host
            .replace(&[(host_he, &inner_first)].into_iter().collect())
            .unwrap();
        let outer_first = host
            .replace(&[(host_he, &middle)].into_iter().collect())
            .unwrap();
        let remaining = *outer_first.hyperedges.keys().next().unwrap();
        let right = outer_first
            .replace(&[(remaining, &plug)].into_iter().collect())
            .unwrap();
        if left.canonical_key() != right.canonical_key() {
            report(
                "5a (replacement associativity)",
                Err(format!("case {case}: association orders differ")),
            );
        }
    }
    report(
        "5a (replacement associativity)",
        Ok(format!("{cases} cases, {:?}", started.elapsed())),
    );
}

/// Criterion 5b: in a replacement result, no edge connects concrete nodes
/// that came from two different plugged graphs.
#[test]
fn acceptance_5b_replacement_boundary() {
    let started = Instant::now();
    let mut rng = StdRng::seed_from_u64(0x5b);
    let cases = 1000;
    for case in 0..cases {
        let a1 = rng.gen_range(0..=2);
        let a2 = rng.gen_range(0..=2);
        let host = random_graph(
            &mut rng,
            0,
            4,
            &[(sym("X"), a1), (sym("Y"), a2)],
        );
        let p1 = random_graph(&mut rng, a1, 3, &[]);
        let p2 = random_graph(&mut rng, a2, 3, &[]);
        let hes: Vec<HyperedgeId> = host.hyperedges.keys().copied().collect();
        let assignment: BTreeMap<HyperedgeId, &Hypergraph> =
            [(hes[0], &p1), (hes[1], &p2)].into_iter().collect();
        let (result, traces) = host.replace_traced(&assignment).unwrap();
        let host_nodes: BTreeSet<Node> =
            host.coloring.keys().map(|&n| Node::Concrete(n)).collect();
        let fresh_of = |he: HyperedgeId| -> BTreeSet<Node> {
            traces[&he]
                .values()
                .copied()
                .filter(|n| n.is_concrete() && !host_nodes.contains(n))
                .collect()
        };
        let f1 = fresh_of(hes[0]);
        let f2 = fresh_of(hes[1]);
        for (u, _, v) in &result.edges {
            if (f1.contains(u) && f2.contains(v)) || (f2.contains(u) && f1.contains(v)) {
                report(
                    "5b (replacement boundary)",
                    Err(format!("case {case}: edge crosses plugged graphs")),
                );
            }
        }
    }
    report(
        "5b (replacement boundary)",
        Ok(format!("{cases} cases, {:?}", started.elapsed())),
    );
}

/// Criterion 5c: plugging is compositional on classes — the class of a
/// composed graph equals the class computed from the parts' classes, so
/// the result never depends on which representative of a class is
/// plugged.
#[test]
fn acceptance_5c_plug_congruence() {
    let started = Instant::now();
    let m = fixture_until();
    let mut rng = StdRng::seed_from_u64(0x5c);
    let cases = 1000;
    let mut by_class: BTreeMap<InterfaceBehaviour, Hypergraph> = BTreeMap::new();
    let mut representative_checks = 0;
    for case in 0..cases {
        let plug_arity = rng.gen_range(1..=2);
        let host_arity = rng.gen_range(1..=2);
        let host = random_graph(&mut rng, host_arity, 3, &[(sym("X"), plug_arity)]);
        let plug = random_graph(&mut rng, plug_arity, 3, &[]);
        let he = *host.hyperedges.keys().next().unwrap();

        // class of the plugged part
        let (pb, pidx) = behaviour_of(&plug, &m);
        let plug_class = pb.restrict(&language_interface(&pidx, plug_arity));

        // composed through classes
        let (through, tidx) = plug_body(&host, &m, &[(he, &plug_class)].into_iter().collect());
        let through_class = through.restrict(&language_interface(&tidx, host_arity));

        // composed directly
        let direct = host.replace(&[(he, &plug)].into_iter().collect()).unwrap();
        let (db, didx) = behaviour_of(&direct, &m);
        let direct_class = db.restrict(&language_interface(&didx, host_arity));

        if through_class != direct_class {
            report(
                "5c (plug congruence)",
                Err(format!("case {case}: class composition is not exact")),
            );
        }

        // representative independence: same plug class, same outcome
        if let Some(other) = by_class.get(&plug_class) {
            let direct2 = host.replace(&[(he, other)].into_iter().collect()).unwrap();
            let (db2, didx2) = behaviour_of(&direct2, &m);
            if db2.restrict(&language_interface(&didx2, host_arity)) != direct_class {
                report(
                    "5c (plug congruence)",
                    Err(format!("case {case}: representatives disagree")),
                );
            }
            representative_checks += 1;
        } else {
            by_class.insert(plug_class, plug);
        }
    }
    report(
        "5c (plug congruence)",
        Ok(format!(
            "{cases} compositions, {representative_checks} representative swaps, {:?}",
            started.elapsed()
        )),
    );
}

/// All positions of rule applications in a derivation tree.
fn tree_positions(tree: &DerivationTree) -> Vec<Vec<HyperedgeId>> {
    let mut out = vec![Vec::new()];
    if let DerivationTree::Node(_, children) = tree {
        for (he, child) in children {
            for mut pos in tree_positions(child) {
                pos.insert(0, *he);
                out.push(pos.clone());
            }
        }
    }
    out
}

fn subtree_at<'t>(tree: &'t DerivationTree, pos: &[HyperedgeId]) -> &'t DerivationTree {
    match pos.split_first() {
        None => tree,
        Some((he, rest)) => match tree {
            DerivationTree::Node(_, children) => subtree_at(&children[he], rest),
            DerivationTree::Leaf(_) => unreachable!("position inside a leaf"),
        },
    }
}

fn replace_with_leaf(
    tree: &DerivationTree,
    pos: &[HyperedgeId],
    leaf: Nonterminal,
) -> DerivationTree {
    match pos.split_first() {
        None => DerivationTree::Leaf(leaf),
        Some((he, rest)) => match tree {
            DerivationTree::Node(rule, children) => {
                let mut out = children.clone();
                let inner = replace_with_leaf(&children[he], rest, leaf);
                out.insert(*he, inner);
                DerivationTree::Node(*rule, out)
            }
            DerivationTree::Leaf(_) => unreachable!("position inside a leaf"),
        },
    }
}

/// Criterion 5d: every decomposition of every enumerated member matches an
/// annotated rule of the refined grammar — the occurrence's context falls
/// in the rule's context class, the occurrence's subtrees in its language
/// classes.
#[test]
fn acceptance_5d_refined_decompositions() {
    let started = Instant::now();
    let m = fixture_eventually_blue();
    let mut checks = 0;
    for name in ["dll", "ipv4", "trees", "spg"] {
        let g = benchmark(name);
        let refined = refine(&g, &m);
        let mut registry = refined.registry.clone();

        // annotated rules as (base, lhs-lang, lhs-ctx, child-langs)
        let mut valid: BTreeSet<(RuleId, u32, u32, Vec<u32>)> = BTreeSet::new();
        for rule in &refined.rules {
            let childs: Vec<u32> = rule
                .children
                .values()
                .map(|c| c.language_class.0)
                .collect();
            valid.insert((
                rule.base,
                rule.lhs.language_class.0,
                rule.lhs.context_class.unwrap().0,
                childs,
            ));
        }

        for (tree, _) in g.enumerate_members(5, 300) {
            for pos in tree_positions(&tree) {
                if checks >= 1500 {
                    break;
                }
                let node = subtree_at(&tree, &pos);
                let DerivationTree::Node(rid, children) = node else {
                    continue;
                };
                let lhs_nt = g.rules[rid.0].lhs;

                // language class of this occurrence
                let sub_graph = g.assemble(node);
                let (sb, sidx) = behaviour_of(&sub_graph, &m);
                let lang = registry
                    .intern(sb.restrict(&language_interface(&sidx, lhs_nt.arity)));

                // context class of this occurrence
                let ctx_tree = replace_with_leaf(&tree, &pos, lhs_nt);
                let ctx_graph = g.assemble(&ctx_tree);
                let (cb, cidx) = behaviour_of(&ctx_graph, &m);
                let ctx =
                    registry.intern(cb.restrict(&context_interface(&ctx_graph, &cidx)));

                // children's language classes
                let childs: Vec<u32> = children
                    .values()
                    .map(|child| {
                        let child_graph = g.assemble(child);
                        let label = match child {
                            DerivationTree::Node(crid, _) => g.rules[crid.0].lhs,
                            DerivationTree::Leaf(nt) => *nt,
                        };
                        let (cbb, cbi) = behaviour_of(&child_graph, &m);
                        registry
                            .intern(cbb.restrict(&language_interface(&cbi, label.arity)))
                            .0
                    })
                    .collect();

                if !valid.contains(&(*rid, lang.0, ctx.0, childs)) {
                    report(
                        "5d (refined decompositions)",
                        Err(format!(
                            "{name}: occurrence at {pos:?} not covered by an annotated rule"
                        )),
                    );
                }
                checks += 1;
            }
        }
    }
    let outcome = if checks >= 1000 {
        Ok(format!("{checks} decompositions, {:?}", started.elapsed()))
    } else {
        Err(format!("only {checks} decompositions exercised"))
    };
    report("5d (refined decompositions)", outcome);
}

/// Random small grammar over one or two nonterminals.
fn random_grammar(rng: &mut StdRng) -> Hrg {
    let s_nt = Nonterminal { name: sym("S"), arity: 0 };
    let x_arity = rng.gen_range(0..=2);
    let x_nt = Nonterminal { name: sym("Xg"), arity: x_arity };
    let mut rules = Vec::new();
    let s_rules = rng.gen_range(1..=2);
    for i in 0..s_rules {
        let with_he = rng.gen_bool(0.7);
        let hes = [(sym("Xg"), x_arity)];
        let body = random_graph(rng, 0, 3, if with_he { &hes } else { &[] });
        rules.push(Rule {
            name: Symbol::new(&format!("S{i}")),
            lhs: s_nt,
            body,
        });
    }
    let x_rules = rng.gen_range(0..=2);
    for i in 0..x_rules {
        let recursive = rng.gen_bool(0.4);
        let hes = [(sym("Xg"), x_arity)];
        let body = random_graph(rng, x_arity, 3, if recursive { &hes } else { &[] });
        rules.push(Rule {
            name: Symbol::new(&format!("X{i}")),
            lhs: x_nt,
            body,
        });
    }
    Hrg {
        nonterminals: [s_nt, x_nt].into_iter().collect(),
        starts: [s_nt].into_iter().collect(),
        rules,
        colors: [sym("red"), sym("blue"), sym("green")].into_iter().collect(),
        actions: [sym("a")].into_iter().collect(),
    }
}

fn member_keys(g: &Hrg, depth: usize) -> BTreeSet<String> {
    g.enumerate_members(depth, 3000)
        .into_iter()
        .map(|(_, h)| h.canonical_key())
        .collect()
}

/// Criterion 5e: pruning and minimization preserve the language of random
/// grammars, and recoloring plus color deletion restores the original
/// language of the shipped families.
#[test]
fn acceptance_5e_language_preservation() {
    let started = Instant::now();
    let mut rng = StdRng::seed_from_u64(0x5e);
    let cases = 1000;
    for case in 0..cases {
        let g = random_grammar(&mut rng);
        let before = member_keys(&g, 4);
        let pruned = g.prune();
        if member_keys(&pruned, 4) != before {
            report(
                "5e (language preservation)",
                Err(format!("case {case}: pruning changed the language")),
            );
        }
        if pruned.prune() != pruned {
            report(
                "5e (language preservation)",
                Err(format!("case {case}: pruning is not idempotent")),
            );
        }
        let small = minimize(&g);
        if member_keys(&small, 4) != before {
            report(
                "5e (language preservation)",
                Err(format!("case {case}: minimization changed the language")),
            );
        }
        if small.rules.len() > g.rules.len() || small.nonterminals.len() > g.nonterminals.len() {
            report(
                "5e (language preservation)",
                Err(format!("case {case}: minimization grew the grammar")),
            );
        }
    }
    // recolor + delete on the shipped families
    for name in ["dll", "ipv4", "trees", "spg", "sierpinski"] {
        let g = benchmark(name);
        let recolored = recolor_ctlstar(&g, &formula("A F blue")).unwrap();
        let restored = delete_color(&recolored.grammar, recolored.color).unwrap();
        let mut cleaned = BTreeSet::new();
        for (_, mut h) in restored.enumerate_members(4, 3000) {
            for colors in h.coloring.values_mut() {
                colors.retain(|c| !c.as_str().starts_with("@phi"));
            }
            cleaned.insert(h.canonical_key());
        }
        if cleaned != member_keys(&g, 4) {
            report(
                "5e (language preservation)",
                Err(format!("{name}: recolor/delete changed the language")),
            );
        }
    }
    report(
        "5e (language preservation)",
        Ok(format!("{cases} random grammars + 5 families, {:?}", started.elapsed())),
    );
}

/// Random total LTS: every node has at least one successor.
fn random_total_lts(rng: &mut StdRng) -> Hypergraph {
    let mut g = random_graph(rng, 0, 5, &[]);
    let nodes: Vec<Node> = g.nodes().collect();
    for &u in &nodes {
        if g.successors(u).is_empty() {
            let v = nodes[rng.gen_range(0..nodes.len())];
            g.add_edge(u, sym("a"), v);
        }
    }
    g
}

fn random_qpctl(rng: &mut StdRng, depth: usize) -> Qpctl {
    let atom = |rng: &mut StdRng| {
        Qpctl::Atom([sym("red"), sym("blue"), sym("green")][rng.gen_range(0..3)])
    };
    if depth == 0 {
        return atom(rng);
    }
    let bound = if rng.gen_bool(0.5) {
        Bound::Positive
    } else {
        Bound::AlmostSure
    };
    match rng.gen_range(0..8) {
        0 => atom(rng),
        1 => Qpctl::Not(Box::new(random_qpctl(rng, depth - 1))),
        2 => Qpctl::And(
            Box::new(random_qpctl(rng, depth - 1)),
            Box::new(random_qpctl(rng, depth - 1)),
        ),
        3 => Qpctl::Or(
            Box::new(random_qpctl(rng, depth - 1)),
            Box::new(random_qpctl(rng, depth - 1)),
        ),
        4 => Qpctl::Next(bound, Box::new(random_qpctl(rng, depth - 1))),
        5 => Qpctl::Eventually(bound, Box::new(random_qpctl(rng, depth - 1))),
        6 => Qpctl::Always(bound, Box::new(random_qpctl(rng, depth - 1))),
        _ => Qpctl::Until(
            bound,
            Box::new(random_qpctl(rng, depth - 1)),
            Box::new(random_qpctl(rng, depth - 1)),
        ),
    }
}

/// Criterion 5f: the qualitative-PCTL embedding agrees with the direct
/// graph-based checker on random total systems.
#[test]
fn acceptance_5f_qpctl_embedding() {
    let started = Instant::now();
    let mut rng = StdRng::seed_from_u64(0x5f);
    let cases = 1000;
    for case in 0..cases {
        let lts = random_total_lts(&mut rng);
        let phi = random_qpctl(&mut rng, 2);
        let direct = label_qpctl(&lts, &phi).unwrap();
        let embedded = label_ctlstar(&lts, &qpctl_to_ctlstar(&phi)).unwrap();
        if direct != embedded {
            report(
                "5f (qualitative embedding)",
                Err(format!("case {case}: embedding disagrees for {phi:?}")),
            );
        }
    }
    report(
        "5f (qualitative embedding)",
        Ok(format!("{cases} cases, {:?}", started.elapsed())),
    );
}

// ---------------------------------------------------------------------------
// Hand-coded automata fixtures
// ---------------------------------------------------------------------------

/// Two states: waiting, accepting sink reached on any blue letter.
fn fixture_eventually_blue() -> BuchiAutomaton {
    let s0 = StateId(0);
    let s1 = StateId(1);
    let mut transitions = BTreeSet::new();
    transitions.insert((s0, 0b0, s0));
    transitions.insert((s0, 0b1, s1));
    transitions.insert((s1, 0b0, s1));
    transitions.insert((s1, 0b1, s1));
    BuchiAutomaton {
        colors: vec![sym("blue")],
        state_names: vec!["s0".into(), "s1".into()],
        transitions,
        initial: [s0].into_iter().collect(),
        accepting: [s1].into_iter().collect(),
    }
}

/// Three states for red-until-blue: p loops on red, q is the accepting
/// sink after blue, r the rejecting sink after green.
fn fixture_until() -> BuchiAutomaton {
    let p = StateId(0);
    let q = StateId(1);
    let r = StateId(2);
    let mut transitions = BTreeSet::new();
    transitions.insert((p, 0b001, p));
    transitions.insert((p, 0b010, q));
    transitions.insert((p, 0b100, r));
    for letter in 0..8u32 {
        transitions.insert((q, letter, q));
        transitions.insert((r, letter, r));
    }
    BuchiAutomaton {
        colors: vec![sym("red"), sym("blue"), sym("green")],
        state_names: vec!["p".into(), "q".into(), "r".into()],
        transitions,
        initial: [p].into_iter().collect(),
        accepting: [q].into_iter().collect(),
    }
}

/// A list-shaped graph with a hyperedge in the middle: the left flank has
/// one or two green nodes, then red attached nodes around the hyperedge,
/// then a blue node on the right.
fn fixture_flank(long: bool) -> Hypergraph {
    let a = sym("a");
    let mut g = Hypergraph::new(0);
    let mut next = 0;
    let mut node = |g: &mut Hypergraph, colors: &[Symbol]| {
        let n = g.add_node(next, colors);
        next += 1;
        n
    };
    let first = node(&mut g, &[sym("green")]);
    let left = if long {
        let second = node(&mut g, &[sym("green")]);
        g.add_edge(first, a, second);
        g.add_edge(second, a, first);
        second
    } else {
        first
    };
    let v1 = node(&mut g, &[sym("red")]);
    let v2 = node(&mut g, &[sym("red")]);
    let b = node(&mut g, &[sym("blue")]);
    g.add_edge(left, a, v1);
    g.add_edge(v1, a, left);
    g.add_edge(v2, a, b);
    g.add_edge(b, a, v2);
    g.add_hyperedge(0, sym("A"), vec![v1, v2]);
    g
}
