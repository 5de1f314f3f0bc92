//! Grammar file formats and DOT export.
//!
//! The text format is line-oriented with `;`-terminated statements and
//! `#` line comments:
//!
//! ```text
//! colors red blue init; actions a;
//! nt S/0; nt A/2;
//! start S;
//! rule R3 : S { node u {red}; node v {red}; node w {blue};
//!               he e1 = A(u, v); edge v -a-> w; edge w -a-> v; }
//! ```
//!
//! Abstract nodes are written `$1..$n` inside rule bodies, where `n` is
//! the arity of the rule's left-hand side. A JSON mirror of the same
//! structure is provided for machine consumption.

use crate::behaviour::{behaviour_of, format_omega, format_step};
use crate::grammar::{Hrg, Nonterminal, Rule};
use crate::hypergraph::{Hypergraph, Node, NodeId};
use crate::logic::BuchiAutomaton;
use crate::refine::AnnotatedGrammar;
use crate::Symbol;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum FormatError {
    #[error("line {0}: {1}")]
    Parse(usize, String),
    #[error("json: {0}")]
    Json(String),
}

// ---------------------------------------------------------------------------
// Text format
// ---------------------------------------------------------------------------

pub fn parse_grammar(text: &str) -> Result<Hrg, FormatError> {
    // strip comments, keep line numbers per statement start
    let mut cleaned = String::new();
    for line in text.lines() {
        let without = match line.find('#') {
            Some(i) => &line[..i],
            None => line,
        };
        cleaned.push_str(without);
        cleaned.push('\n');
    }

    let mut g = Hrg::default();
    let mut pos = 0usize;
    let bytes = cleaned.as_bytes();
    let line_of = |at: usize| cleaned[..at].matches('\n').count() + 1;

    while pos < bytes.len() {
        while pos < bytes.len() && bytes[pos].is_ascii_whitespace() {
            pos += 1;
        }
        if pos >= bytes.len() {
            break;
        }
        let start = pos;
        let word = read_word(&cleaned, &mut pos);
        let err = |msg: &str| FormatError::Parse(line_of(start), msg.to_string());
        match word.as_str() {
            "colors" => {
                for name in read_until_semi(&cleaned, &mut pos)?.split_whitespace() {
                    g.colors.insert(Symbol::new(name));
                }
            }
            "actions" => {
                for name in read_until_semi(&cleaned, &mut pos)?.split_whitespace() {
                    g.actions.insert(Symbol::new(name));
                }
            }
            "nt" => {
                let decl = read_until_semi(&cleaned, &mut pos)?;
                let (name, arity) = decl
                    .split_once('/')
                    .ok_or_else(|| err("expected `nt NAME/ARITY;`"))?;
                let arity: u32 = arity
                    .trim()
                    .parse()
                    .map_err(|_| err("arity is not a number"))?;
                g.nonterminals.insert(Nonterminal {
                    name: Symbol::new(name.trim()),
                    arity,
                });
            }
            "start" => {
                let name = read_until_semi(&cleaned, &mut pos)?;
                let nt = g
                    .nonterminal(Symbol::new(name.trim()))
                    .ok_or_else(|| err("start symbol is not a declared nonterminal"))?;
                g.starts.insert(nt);
            }
            "rule" => {
                let header = read_until(&cleaned, &mut pos, '{')?;
                let (rule_name, lhs_name) = header
                    .split_once(':')
                    .ok_or_else(|| err("expected `rule NAME : NT { ... }`"))?;
                let lhs = g
                    .nonterminal(Symbol::new(lhs_name.trim()))
                    .ok_or_else(|| err("rule lhs is not a declared nonterminal"))?;
                let body_text = read_balanced(&cleaned, &mut pos)
                    .ok_or_else(|| err("unterminated rule body"))?;
                let body = parse_body(&body_text, lhs.arity, line_of(start))?;
                g.rules.push(Rule {
                    name: Symbol::new(rule_name.trim()),
                    lhs,
                    body,
                });
            }
            other => {
                return Err(err(&format!("unknown statement `{other}`")));
            }
        }
    }
    Ok(g)
}

fn read_word(text: &str, pos: &mut usize) -> String {
    let bytes = text.as_bytes();
    let start = *pos;
    while *pos < bytes.len() && !bytes[*pos].is_ascii_whitespace() {
        *pos += 1;
    }
    text[start..*pos].to_string()
}

fn read_until_semi(text: &str, pos: &mut usize) -> Result<String, FormatError> {
    read_until(text, pos, ';')
}

/// Reads up to the `}` matching an already consumed `{`, tracking nesting.
fn read_balanced(text: &str, pos: &mut usize) -> Option<String> {
    let mut depth = 1usize;
    let start = *pos;
    for (i, c) in text[start..].char_indices() {
        match c {
            '{' => depth += 1,
            '}' => {
                depth -= 1;
                if depth == 0 {
                    *pos = start + i + 1;
                    return Some(text[start..start + i].to_string());
                }
            }
            _ => {}
        }
    }
    None
}

fn read_until(text: &str, pos: &mut usize, stop: char) -> Result<String, FormatError> {
    let rest = &text[*pos..];
    match rest.find(stop) {
        Some(i) => {
            let out = rest[..i].to_string();
            *pos += i + 1;
            Ok(out)
        }
        None => Err(FormatError::Parse(
            text[..*pos].matches('\n').count() + 1,
            format!("expected `{stop}`"),
        )),
    }
}

fn parse_body(text: &str, arity: u32, line: usize) -> Result<Hypergraph, FormatError> {
    let err = |msg: String| FormatError::Parse(line, msg);
    let mut body = Hypergraph::new(arity);
    let mut node_names: BTreeMap<String, Node> = BTreeMap::new();
    let mut next_node = 0u32;
    let mut next_he = 0u32;
    let resolve = |names: &BTreeMap<String, Node>, token: &str| -> Result<Node, FormatError> {
        let token = token.trim();
        if let Some(num) = token.strip_prefix('$') {
            let k: u32 = num
                .parse()
                .map_err(|_| err(format!("bad abstract node `{token}`")))?;
            if k == 0 || k > arity {
                return Err(err(format!(
                    "abstract node `{token}` out of range 1..{arity}"
                )));
            }
            return Ok(Node::Abstract(k));
        }
        names
            .get(token)
            .copied()
            .ok_or_else(|| err(format!("unknown node `{token}`")))
    };

    for stmt in text.split(';') {
        let stmt = stmt.trim();
        if stmt.is_empty() {
            continue;
        }
        if let Some(rest) = stmt.strip_prefix("node") {
            let rest = rest.trim();
            let (name, colors) = match rest.find('{') {
                Some(i) => {
                    let name = rest[..i].trim();
                    let close = rest
                        .rfind('}')
                        .ok_or_else(|| err("missing `}` in node colors".into()))?;
                    (name, rest[i + 1..close].trim())
                }
                None => (rest, ""),
            };
            let color_syms: Vec<Symbol> = colors
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|s| !s.is_empty())
                .map(Symbol::new)
                .collect();
            let node = body.add_node(next_node, &color_syms);
            next_node += 1;
            node_names.insert(name.to_string(), node);
        } else if let Some(rest) = stmt.strip_prefix("edge") {
            // edge U -a-> V
            let parts: Vec<&str> = rest.split_whitespace().collect();
            if parts.len() != 3 {
                return Err(err(format!("expected `edge U -a-> V`, got `{stmt}`")));
            }
            let action = parts[1]
                .strip_prefix('-')
                .and_then(|s| s.strip_suffix("->"))
                .ok_or_else(|| err(format!("bad edge arrow `{}`", parts[1])))?;
            let from = resolve(&node_names, parts[0])?;
            let to = resolve(&node_names, parts[2])?;
            body.add_edge(from, Symbol::new(action), to);
        } else if let Some(rest) = stmt.strip_prefix("he") {
            // he NAME = LABEL(a, b, ...)
            let (_, rhs) = rest
                .split_once('=')
                .ok_or_else(|| err(format!("expected `he NAME = LABEL(...)`, got `{stmt}`")))?;
            let open = rhs
                .find('(')
                .ok_or_else(|| err("missing `(` in hyperedge".into()))?;
            let close = rhs
                .rfind(')')
                .ok_or_else(|| err("missing `)` in hyperedge".into()))?;
            let label = Symbol::new(rhs[..open].trim());
            let attachment: Vec<Node> = rhs[open + 1..close]
                .split(',')
                .filter(|s| !s.trim().is_empty())
                .map(|tok| resolve(&node_names, tok))
                .collect::<Result<_, _>>()?;
            body.add_hyperedge(next_he, label, attachment);
            next_he += 1;
        } else {
            return Err(err(format!("unknown body statement `{stmt}`")));
        }
    }
    Ok(body)
}

pub fn serialize_grammar(g: &Hrg) -> String {
    let mut out = String::new();
    let join = |syms: &std::collections::BTreeSet<Symbol>| -> String {
        syms.iter()
            .map(|s| s.as_str())
            .collect::<Vec<_>>()
            .join(" ")
    };
    out.push_str(&format!("colors {};\n", join(&g.colors)));
    out.push_str(&format!("actions {};\n", join(&g.actions)));
    for nt in &g.nonterminals {
        out.push_str(&format!("nt {}/{};\n", nt.name, nt.arity));
    }
    for s in &g.starts {
        out.push_str(&format!("start {};\n", s.name));
    }
    for rule in &g.rules {
        out.push_str(&format!("rule {} : {} {{", rule.name, rule.lhs.name));
        let name_of = |n: &Node| -> String {
            match n {
                Node::Abstract(i) => format!("${i}"),
                Node::Concrete(NodeId(i)) => format!("n{i}"),
            }
        };
        for (id, colors) in &rule.body.coloring {
            let cols = colors
                .iter()
                .map(|c| c.as_str())
                .collect::<Vec<_>>()
                .join(" ");
            out.push_str(&format!(" node n{} {{{cols}}};", id.0));
        }
        for he in rule.body.hyperedges.values() {
            let att = he
                .attachment
                .iter()
                .map(name_of)
                .collect::<Vec<_>>()
                .join(", ");
            out.push_str(&format!(" he e = {}({att});", he.label));
        }
        for (u, a, v) in &rule.body.edges {
            out.push_str(&format!(" edge {} -{a}-> {};", name_of(u), name_of(v)));
        }
        out.push_str(" }\n");
    }
    out
}

// ---------------------------------------------------------------------------
// JSON mirror
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
pub struct GrammarJson {
    pub colors: Vec<String>,
    pub actions: Vec<String>,
    pub nonterminals: Vec<NonterminalJson>,
    pub starts: Vec<String>,
    pub rules: Vec<RuleJson>,
}

#[derive(Serialize, Deserialize)]
pub struct NonterminalJson {
    pub name: String,
    pub arity: u32,
}

#[derive(Serialize, Deserialize)]
pub struct RuleJson {
    pub name: String,
    pub lhs: String,
    pub nodes: Vec<NodeJson>,
    pub edges: Vec<[String; 3]>,
    pub hyperedges: Vec<HyperedgeJson>,
}

#[derive(Serialize, Deserialize)]
pub struct NodeJson {
    pub id: String,
    pub colors: Vec<String>,
}

#[derive(Serialize, Deserialize)]
pub struct HyperedgeJson {
    pub label: String,
    pub attach: Vec<String>,
}

pub fn grammar_to_json(g: &Hrg) -> String {
    let name_of = |n: &Node| -> String {
        match n {
            Node::Abstract(i) => format!("${i}"),
            Node::Concrete(NodeId(i)) => format!("n{i}"),
        }
    };
    let mirror = GrammarJson {
        colors: g.colors.iter().map(|c| c.as_str()).collect(),
        actions: g.actions.iter().map(|c| c.as_str()).collect(),
        nonterminals: g
            .nonterminals
            .iter()
            .map(|nt| NonterminalJson {
                name: nt.name.as_str(),
                arity: nt.arity,
            })
            .collect(),
        starts: g.starts.iter().map(|s| s.name.as_str()).collect(),
        rules: g
            .rules
            .iter()
            .map(|r| RuleJson {
                name: r.name.as_str(),
                lhs: r.lhs.name.as_str(),
                nodes: r
                    .body
                    .coloring
                    .iter()
                    .map(|(id, colors)| NodeJson {
                        id: format!("n{}", id.0),
                        colors: colors.iter().map(|c| c.as_str()).collect(),
                    })
                    .collect(),
                edges: r
                    .body
                    .edges
                    .iter()
                    .map(|(u, a, v)| [name_of(u), a.as_str(), name_of(v)])
                    .collect(),
                hyperedges: r
                    .body
                    .hyperedges
                    .values()
                    .map(|he| HyperedgeJson {
                        label: he.label.as_str(),
                        attach: he.attachment.iter().map(name_of).collect(),
                    })
                    .collect(),
            })
            .collect(),
    };
    serde_json::to_string_pretty(&mirror).expect("serializable mirror")
}

pub fn grammar_from_json(text: &str) -> Result<Hrg, FormatError> {
    let mirror: GrammarJson =
        serde_json::from_str(text).map_err(|e| FormatError::Json(e.to_string()))?;
    let mut g = Hrg::default();
    for c in &mirror.colors {
        g.colors.insert(Symbol::new(c));
    }
    for a in &mirror.actions {
        g.actions.insert(Symbol::new(a));
    }
    for nt in &mirror.nonterminals {
        g.nonterminals.insert(Nonterminal {
            name: Symbol::new(&nt.name),
            arity: nt.arity,
        });
    }
    for s in &mirror.starts {
        let nt = g
            .nonterminal(Symbol::new(s))
            .ok_or_else(|| FormatError::Json(format!("unknown start `{s}`")))?;
        g.starts.insert(nt);
    }
    for r in &mirror.rules {
        let lhs = g
            .nonterminal(Symbol::new(&r.lhs))
            .ok_or_else(|| FormatError::Json(format!("unknown lhs `{}`", r.lhs)))?;
        let mut body = Hypergraph::new(lhs.arity);
        let mut names: BTreeMap<String, Node> = BTreeMap::new();
        for (i, node) in r.nodes.iter().enumerate() {
            let colors: Vec<Symbol> = node.colors.iter().map(|c| Symbol::new(c)).collect();
            names.insert(node.id.clone(), body.add_node(i as u32, &colors));
        }
        let resolve = |tok: &str| -> Result<Node, FormatError> {
            if let Some(num) = tok.strip_prefix('$') {
                let k: u32 = num
                    .parse()
                    .map_err(|_| FormatError::Json(format!("bad abstract `{tok}`")))?;
                Ok(Node::Abstract(k))
            } else {
                names
                    .get(tok)
                    .copied()
                    .ok_or_else(|| FormatError::Json(format!("unknown node `{tok}`")))
            }
        };
        for [u, a, v] in &r.edges {
            body.add_edge(resolve(u)?, Symbol::new(a), resolve(v)?);
        }
        for (i, he) in r.hyperedges.iter().enumerate() {
            let attachment: Vec<Node> = he
                .attach
                .iter()
                .map(|t| resolve(t))
                .collect::<Result<_, _>>()?;
            body.add_hyperedge(i as u32, Symbol::new(&he.label), attachment);
        }
        g.rules.push(Rule {
            name: Symbol::new(&r.name),
            lhs,
            body,
        });
    }
    Ok(g)
}

/// JSON rendering of a single transition system (used for witness
/// members).
pub fn lts_to_json(h: &Hypergraph) -> serde_json::Value {
    let nodes: Vec<serde_json::Value> = h
        .coloring
        .iter()
        .map(|(id, colors)| {
            serde_json::json!({
                "id": format!("n{}", id.0),
                "colors": colors.iter().map(|c| c.as_str()).collect::<Vec<_>>(),
            })
        })
        .collect();
    let edges: Vec<serde_json::Value> = h
        .edges
        .iter()
        .map(|(u, a, v)| {
            let name = |n: &Node| match n {
                Node::Concrete(NodeId(i)) => format!("n{i}"),
                Node::Abstract(i) => format!("${i}"),
            };
            serde_json::json!([name(u), a.as_str(), name(v)])
        })
        .collect();
    serde_json::json!({ "nodes": nodes, "edges": edges })
}

// ---------------------------------------------------------------------------
// DOT export
// ---------------------------------------------------------------------------

fn dot_escape(s: &str) -> String {
    s.replace('"', "\\\"")
}

/// One box per rule, showing the body graph.
pub fn grammar_to_dot(g: &Hrg) -> String {
    let mut out = String::from("digraph grammar {\n  compound=true;\n");
    for (ri, rule) in g.rules.iter().enumerate() {
        out.push_str(&format!(
            "  subgraph cluster_{ri} {{\n    label=\"{} : {} ({} -> ...)\";\n",
            dot_escape(&rule.name.as_str()),
            dot_escape(&rule.lhs.name.as_str()),
            rule.lhs.arity,
        ));
        let node_id = |n: &Node| -> String {
            match n {
                Node::Concrete(NodeId(i)) => format!("r{ri}_n{i}"),
                Node::Abstract(i) => format!("r{ri}_a{i}"),
            }
        };
        for (id, colors) in &rule.body.coloring {
            let label = colors
                .iter()
                .map(|c| c.as_str())
                .collect::<Vec<_>>()
                .join(",");
            out.push_str(&format!(
                "    r{ri}_n{} [shape=circle label=\"{}\"];\n",
                id.0,
                dot_escape(&label)
            ));
        }
        for i in 1..=rule.body.abstract_count {
            out.push_str(&format!("    r{ri}_a{i} [shape=square label=\"{i}\"];\n"));
        }
        for (hi, he) in rule.body.hyperedges.values().enumerate() {
            let box_id = format!("r{ri}_h{hi}");
            out.push_str(&format!(
                "    {box_id} [shape=box style=dashed label=\"{}\"];\n",
                dot_escape(&he.label.as_str())
            ));
            for (k, w) in he.attachment.iter().enumerate() {
                out.push_str(&format!(
                    "    {box_id} -> {} [style=dotted label=\"{}\" arrowhead=none];\n",
                    node_id(w),
                    k + 1
                ));
            }
        }
        for (u, a, v) in &rule.body.edges {
            out.push_str(&format!(
                "    {} -> {} [label=\"{}\"];\n",
                node_id(u),
                node_id(v),
                dot_escape(&a.as_str())
            ));
        }
        out.push_str("  }\n");
    }
    out.push_str("}\n");
    out
}

/// Behaviours of every rule body under the automaton: one cluster per
/// rule, a node per body node plus the sink, edges labeled with summary
/// sets.
pub fn behaviours_to_dot(g: &Hrg, m: &BuchiAutomaton) -> String {
    let mut out = String::from("digraph behaviours {\n");
    for (ri, rule) in g.rules.iter().enumerate() {
        let (behaviour, index) = behaviour_of(&rule.body, m);
        out.push_str(&format!(
            "  subgraph cluster_{ri} {{\n    label=\"{}\";\n",
            dot_escape(&rule.name.as_str())
        ));
        let node_dot = |n: &Node| -> String {
            match n {
                Node::Concrete(NodeId(i)) => format!("b{ri}_n{i}"),
                Node::Abstract(i) => format!("b{ri}_a{i}"),
            }
        };
        for n in rule.body.nodes() {
            let shape = if n.is_concrete() { "circle" } else { "square" };
            out.push_str(&format!("    {} [shape={shape}];\n", node_dot(&n)));
        }
        out.push_str(&format!("    b{ri}_star [label=\"*\" shape=plaintext];\n"));
        for u in rule.body.nodes() {
            for v in rule.body.nodes() {
                for s in behaviour.steps_between(index[&u], index[&v]) {
                    out.push_str(&format!(
                        "    {} -> {} [label=\"{}\"];\n",
                        node_dot(&u),
                        node_dot(&v),
                        dot_escape(&format_step(m, &s))
                    ));
                }
            }
            for h in behaviour.omegas_at(index[&u]) {
                out.push_str(&format!(
                    "    {} -> b{ri}_star [label=\"{}\" style=dashed];\n",
                    node_dot(&u),
                    dot_escape(&format_omega(m, h))
                ));
            }
        }
        out.push_str("  }\n");
    }
    out.push_str("}\n");
    out
}

/// The refined grammar in tree-automaton style: annotated nonterminals are
/// states (showing their language and context classes), rules are
/// transition boxes from the child states to the parent state.
pub fn refined_to_dot(g: &AnnotatedGrammar, m: &BuchiAutomaton) -> String {
    let mut out = String::from("digraph refined {\n  rankdir=BT;\n");
    let nts: Vec<_> = g.nonterminals().into_iter().collect();
    let class_label = |id: crate::behaviour::ClassId| -> String {
        let b = g.registry.get(id);
        let mut parts = Vec::new();
        for (&(i, j), summaries) in &b.steps {
            for s in summaries {
                parts.push(format!("{}->{}:{}", i, j, format_step(m, s)));
            }
        }
        for (i, omegas) in b.omegas.iter().enumerate() {
            for &h in omegas {
                parts.push(format!("{}->*:{}", i, format_omega(m, h)));
            }
        }
        if parts.is_empty() {
            "(empty)".into()
        } else {
            parts.join("\\n")
        }
    };
    let nt_id = |nt: &crate::refine::AnnotatedNonterminal| -> String {
        format!(
            "s_{}_{}_{}",
            nt.base.name,
            nt.language_class.0,
            nt.context_class.map(|c| c.0).unwrap_or(u32::MAX)
        )
    };
    for nt in &nts {
        let lang = class_label(nt.language_class);
        let ctx = nt
            .context_class
            .map(class_label)
            .unwrap_or_else(|| "?".into());
        out.push_str(&format!(
            "  {} [shape=box style=filled fillcolor=pink label=\"{}\\nlang: {}\\nctx: {}\"];\n",
            nt_id(nt),
            dot_escape(&nt.base.name.as_str()),
            dot_escape(&lang),
            dot_escape(&ctx)
        ));
    }
    for (ri, rule) in g.rules.iter().enumerate() {
        let box_id = format!("rule_{ri}");
        let base = &g.base.rules[rule.base.0];
        out.push_str(&format!(
            "  {box_id} [shape=box style=filled fillcolor=lightyellow label=\"{}\"];\n",
            dot_escape(&base.name.as_str())
        ));
        out.push_str(&format!("  {box_id} -> {};\n", nt_id(&rule.lhs)));
        for child in rule.children.values() {
            out.push_str(&format!("  {} -> {box_id};\n", nt_id(child)));
        }
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const LIST_GRAMMAR: &str = r#"
# chains of red nodes closed by a blue node
colors red blue init; actions a;
nt S/0; nt A/2;
start S;
rule R3 : S { node u {red}; node v {red}; node w {blue}; he e1 = A(u, v); edge v -a-> w; edge w -a-> v; }
rule R2 : A { node x {red init}; edge $1 -a-> x; edge x -a-> $1; he e1 = A(x, $2); }
rule R1 : A { edge $1 -a-> $2; edge $2 -a-> $1; }
"#;

    #[test]
    fn parses_and_validates_list_grammar() {
        let g = parse_grammar(LIST_GRAMMAR).unwrap();
        assert!(g.validate().is_empty());
        assert_eq!(g.rules.len(), 3);
        assert_eq!(g.nonterminals.len(), 2);
        let members = g.enumerate_members(2, 10);
        assert_eq!(members.len(), 1);
        assert_eq!(members[0].1.coloring.len(), 3);
    }

    #[test]
    fn text_round_trip_is_stable() {
        let g = parse_grammar(LIST_GRAMMAR).unwrap();
        let once = serialize_grammar(&g);
        let again = serialize_grammar(&parse_grammar(&once).unwrap());
        assert_eq!(once, again);
    }

    #[test]
    fn json_round_trip_preserves_grammar() {
        let g = parse_grammar(LIST_GRAMMAR).unwrap();
        let json = grammar_to_json(&g);
        let back = grammar_from_json(&json).unwrap();
        assert_eq!(serialize_grammar(&g), serialize_grammar(&back));
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let bad = "colors red;\nactions a;\nnt S/zero;\n";
        match parse_grammar(bad) {
            Err(FormatError::Parse(line, _)) => assert_eq!(line, 3),
            other => panic!("expected parse error, got {other:?}"),
        }
        let unknown = "colors red;\nwobble;\n";
        assert!(parse_grammar(unknown).is_err());
    }

    #[test]
    fn rejects_out_of_range_abstract_nodes() {
        let bad = "colors red; actions a; nt S/0; start S;\nrule R : S { edge $1 -a-> $1; }\n";
        assert!(parse_grammar(bad).is_err());
    }

    #[test]
    fn dot_outputs_mention_all_rules() {
        let g = parse_grammar(LIST_GRAMMAR).unwrap();
        let dot = grammar_to_dot(&g);
        for rule in &g.rules {
            assert!(dot.contains(&rule.name.as_str()));
        }
        let m = crate::logic::ltl_to_buchi(
            &crate::logic::Ltl::Eventually(Box::new(crate::logic::Ltl::Atom(Symbol::new(
                "blue",
            )))),
            &[],
        );
        let dot = behaviours_to_dot(&g, &m);
        assert!(dot.contains("star"));
        let refined = crate::refine::refine(&g, &m);
        let dot = refined_to_dot(&refined, &m);
        assert!(dot.contains("lang:"));
    }
}
