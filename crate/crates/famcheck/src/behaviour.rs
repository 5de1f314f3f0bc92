//! Trace summaries and behaviour graphs.
//!
//! Fix a Büchi automaton M. The behaviour of a hypergraph abstracts every
//! finite trace between two nodes by its effect on M — the set of
//! (state, state, saw-accepting) triples — and every infinite trace from a
//! node by the set of states from which M accepts it. Behaviours are
//! computed by saturating a summary-labeled graph under a small set of
//! closure rules, and two graphs are interchangeable in any family exactly
//! when their behaviours agree on the interface nodes.
//!
//! Summary convention: a step summary on an edge `u → v` covers the colors
//! strictly after `u` up to and including `v` (when `v` carries a color);
//! omega summaries cover the tail strictly after their source. Queries
//! prepend the source's own one-letter effect. This keeps composition free
//! of double counting when graphs are glued at shared nodes: the shared
//! node's color is contributed exactly once, by whichever side owns it.

use crate::hypergraph::{Hypergraph, HyperedgeId, Node, NodeId};
use crate::logic::{BuchiAutomaton, Letter, StateId};
use crate::Symbol;
use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet, VecDeque};

/// The effect of a finite color word on the automaton: for every pair of
/// states (p, q), whether q is reachable from p reading the word, split by
/// whether an accepting state was entered on the way.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct StepSummary {
    /// rows[p] bit q set: p reaches q without entering an accepting state
    plain: Vec<u64>,
    /// rows[p] bit q set: p reaches q entering an accepting state
    marked: Vec<u64>,
}

/// The set of automaton states from which some infinite trace is accepted.
pub type OmegaSummary = u64;

impl StepSummary {
    pub fn identity(n: usize) -> StepSummary {
        StepSummary {
            plain: (0..n).map(|p| 1u64 << p).collect(),
            marked: vec![0; n],
        }
    }

    pub fn empty(n: usize) -> StepSummary {
        StepSummary {
            plain: vec![0; n],
            marked: vec![0; n],
        }
    }

    pub fn states(&self) -> usize {
        self.plain.len()
    }

    pub fn is_identity(&self) -> bool {
        self.plain
            .iter()
            .enumerate()
            .all(|(p, &row)| row == 1u64 << p)
            && self.marked.iter().all(|&row| row == 0)
    }

    pub fn insert(&mut self, p: StateId, q: StateId, saw_accepting: bool) {
        if saw_accepting {
            self.marked[p.0] |= 1 << q.0;
        } else {
            self.plain[p.0] |= 1 << q.0;
        }
    }

    pub fn contains(&self, p: StateId, q: StateId, saw_accepting: bool) -> bool {
        let rows = if saw_accepting { &self.marked } else { &self.plain };
        rows[p.0] & (1 << q.0) != 0
    }

    /// All (p, q, flag) triples, for display and tests.
    pub fn triples(&self) -> Vec<(StateId, StateId, bool)> {
        let mut out = Vec::new();
        for p in 0..self.states() {
            for q in 0..self.states() {
                if self.plain[p] & (1 << q) != 0 {
                    out.push((StateId(p), StateId(q), false));
                }
                if self.marked[p] & (1 << q) != 0 {
                    out.push((StateId(p), StateId(q), true));
                }
            }
        }
        out
    }

    /// States reachable from `sources` regardless of the flag.
    pub fn post(&self, sources: u64) -> u64 {
        let mut out = 0;
        for p in 0..self.states() {
            if sources & (1 << p) != 0 {
                out |= self.plain[p] | self.marked[p];
            }
        }
        out
    }
}

/// The one-letter effect: (p, q, q is accepting) for every transition on
/// the letter.
pub fn step_summary(m: &BuchiAutomaton, letter: Letter) -> StepSummary {
    let n = m.state_count();
    let mut s = StepSummary::empty(n);
    for &(p, l, q) in &m.transitions {
        if l == letter {
            s.insert(p, q, m.accepting.contains(&q));
        }
    }
    s
}

/// Relational composition with flag disjunction.
pub fn compose(f: &StepSummary, g: &StepSummary) -> StepSummary {
    let n = f.states();
    let mut out = StepSummary::empty(n);
    for p in 0..n {
        let mut plain = 0u64;
        let mut marked = 0u64;
        for q in 0..n {
            if f.plain[p] & (1 << q) != 0 {
                plain |= g.plain[q];
                marked |= g.marked[q];
            }
            if f.marked[p] & (1 << q) != 0 {
                marked |= g.plain[q] | g.marked[q];
            }
        }
        out.plain[p] = plain;
        out.marked[p] = marked;
    }
    out
}

fn union(f: &StepSummary, g: &StepSummary) -> StepSummary {
    let n = f.states();
    let mut out = f.clone();
    for p in 0..n {
        out.plain[p] |= g.plain[p];
        out.marked[p] |= g.marked[p];
    }
    out
}

/// Transitive closure under composition: the effects of all nonzero powers.
pub fn clos(f: &StepSummary) -> StepSummary {
    let mut acc = f.clone();
    loop {
        let next = union(&acc, &compose(&acc, &acc));
        if next == acc {
            return acc;
        }
        acc = next;
    }
}

/// Prepends a finite summary to an omega summary: states that reach,
/// through `f`, a state accepting the tail.
pub fn omega_extend(f: &StepSummary, tail: OmegaSummary) -> OmegaSummary {
    let mut out = 0;
    for p in 0..f.states() {
        if (f.plain[p] | f.marked[p]) & tail != 0 {
            out |= 1 << p;
        }
    }
    out
}

/// The omega summary of repeating a cycle with effect `g` forever: states
/// that can reach (in any number of iterations, including zero) a state
/// that returns to itself with an accepting visit.
pub fn loop_omega(g: &StepSummary) -> OmegaSummary {
    let c = clos(g);
    let n = g.states();
    let mut cyc = 0u64;
    for q in 0..n {
        if c.marked[q] & (1 << q) != 0 {
            cyc |= 1 << q;
        }
    }
    let mut out = cyc;
    for p in 0..n {
        if (c.plain[p] | c.marked[p]) & cyc != 0 {
            out |= 1 << p;
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Summary graphs and saturation
// ---------------------------------------------------------------------------

/// Node index inside one summary graph.
pub type SgNode = usize;

#[derive(Clone, Debug)]
struct SgNodeData {
    /// One-letter effect of this node's own color; `None` for abstract
    /// nodes, which carry no color.
    effect: Option<StepSummary>,
    /// Whether paths may pass through this node (true for every node that
    /// stands for a concrete node of the underlying graph).
    passable: bool,
}

/// A graph whose edges carry step summaries, ready for saturation.
/// Ordinary hypergraph edges contribute the one-letter effect of their
/// target; interface behaviours of plugged parts contribute their exported
/// summaries.
#[derive(Clone, Debug, Default)]
pub struct SummaryGraph {
    nodes: Vec<SgNodeData>,
    edges: Vec<(SgNode, StepSummary, SgNode)>,
    omegas: Vec<(SgNode, OmegaSummary)>,
    /// Attachment patterns of hyperedges left unplugged (contexts' holes).
    holes: Vec<Vec<SgNode>>,
}

impl SummaryGraph {
    pub fn new() -> SummaryGraph {
        SummaryGraph::default()
    }

    pub fn add_concrete(&mut self, effect: StepSummary) -> SgNode {
        self.nodes.push(SgNodeData {
            effect: Some(effect),
            passable: true,
        });
        self.nodes.len() - 1
    }

    pub fn add_abstract(&mut self) -> SgNode {
        self.nodes.push(SgNodeData {
            effect: None,
            passable: false,
        });
        self.nodes.len() - 1
    }

    fn target_effect(&self, v: SgNode, n: usize) -> StepSummary {
        self.nodes[v]
            .effect
            .clone()
            .unwrap_or_else(|| StepSummary::identity(n))
    }

    /// An ordinary edge of the underlying graph: its summary is the
    /// target's one-letter effect.
    pub fn add_graph_edge(&mut self, u: SgNode, v: SgNode, n: usize) {
        let label = self.target_effect(v, n);
        self.edges.push((u, label, v));
    }

    pub fn add_hole(&mut self, attachment: Vec<SgNode>) {
        self.holes.push(attachment);
    }

    /// Splices an interface behaviour into this graph, identifying its
    /// ports with the given nodes. Exported summaries whose target port is
    /// abstract inside the class get the merged node's own effect
    /// appended, so the junction's color is counted exactly once.
    pub fn instantiate(&mut self, class: &InterfaceBehaviour, ports: &[SgNode], n: usize) {
        self.splice(class, ports, n, true);
    }

    /// Like [`instantiate`](Self::instantiate), but drops the class's own
    /// hole: used when a graph is being plugged into that hole, which
    /// fills it.
    pub fn instantiate_filling_hole(
        &mut self,
        class: &InterfaceBehaviour,
        ports: &[SgNode],
        n: usize,
    ) {
        self.splice(class, ports, n, false);
    }

    fn splice(&mut self, class: &InterfaceBehaviour, ports: &[SgNode], n: usize, keep_holes: bool) {
        assert_eq!(class.port_count(), ports.len(), "arity mismatch");
        for (&(i, j), summaries) in &class.steps {
            for g in summaries {
                let label = if class.port_effects[j].is_some() {
                    g.clone()
                } else {
                    compose(g, &self.target_effect(ports[j], n))
                };
                self.edges.push((ports[i], label, ports[j]));
            }
        }
        for (i, omegas) in class.omegas.iter().enumerate() {
            for &h in omegas {
                self.omegas.push((ports[i], h));
            }
        }
        if keep_holes {
            for hole in &class.holes {
                self.holes.push(hole.iter().map(|&i| ports[i]).collect());
            }
        }
    }

    /// Least fixpoint of the closure rules. Summaries live in a finite
    /// lattice, so the worklist terminates.
    pub fn saturate(self) -> Behaviour {
        #[derive(Clone, PartialEq, Eq, Hash, Debug)]
        enum Item {
            Step(SgNode, SgNode, StepSummary),
            Omega(SgNode, OmegaSummary),
        }

        let mut steps: HashMap<(SgNode, SgNode), HashSet<StepSummary>> = HashMap::new();
        let mut omegas: HashMap<SgNode, HashSet<OmegaSummary>> = HashMap::new();
        let mut by_target: HashMap<SgNode, Vec<(SgNode, StepSummary)>> = HashMap::new();
        let mut out_edges: HashMap<SgNode, Vec<(StepSummary, SgNode)>> = HashMap::new();
        for (u, g, v) in &self.edges {
            out_edges.entry(*u).or_default().push((g.clone(), *v));
        }

        let mut queue: VecDeque<Item> = VecDeque::new();
        let push_step =
            |u: SgNode,
             v: SgNode,
             f: StepSummary,
             steps: &mut HashMap<(SgNode, SgNode), HashSet<StepSummary>>,
             by_target: &mut HashMap<SgNode, Vec<(SgNode, StepSummary)>>,
             queue: &mut VecDeque<Item>| {
                if steps.entry((u, v)).or_default().insert(f.clone()) {
                    by_target.entry(v).or_default().push((u, f.clone()));
                    queue.push_back(Item::Step(u, v, f));
                }
            };
        fn push_omega(
            u: SgNode,
            h: OmegaSummary,
            omegas: &mut HashMap<SgNode, HashSet<OmegaSummary>>,
            queue: &mut VecDeque<Item>,
        ) {
            if omegas.entry(u).or_default().insert(h) {
                queue.push_back(Item::Omega(u, h));
            }
        }

        // Seed: every base edge (the summaries of single-edge paths) and
        // every base omega edge. Empty paths are never stored; their
        // effect is the identity and is applied implicitly wherever a
        // composition would need it.
        for (u, g, v) in &self.edges {
            push_step(*u, *v, g.clone(), &mut steps, &mut by_target, &mut queue);
        }
        for &(u, h) in &self.omegas {
            push_omega(u, h, &mut omegas, &mut queue);
        }

        while let Some(item) = queue.pop_front() {
            match item {
                Item::Step(u, v, f) => {
                    // a nonempty path back to a passable start is a cycle
                    // and spawns a lasso
                    if v == u && self.nodes[u].passable {
                        push_omega(u, loop_omega(&f), &mut omegas, &mut queue);
                    }
                    if self.nodes[v].passable {
                        // extend the path by one edge
                        if let Some(outs) = out_edges.get(&v) {
                            for (g, w) in outs.clone() {
                                let fg = compose(&f, &g);
                                push_step(u, w, fg, &mut steps, &mut by_target, &mut queue);
                            }
                        }
                        // append a known infinite tail at v
                        if let Some(tails) = omegas.get(&v) {
                            for h in tails.clone() {
                                push_omega(u, omega_extend(&f, h), &mut omegas, &mut queue);
                            }
                        }
                    }
                }
                Item::Omega(w, h) => {
                    if self.nodes[w].passable {
                        if let Some(prefixes) = by_target.get(&w) {
                            for (u, f) in prefixes.clone() {
                                push_omega(u, omega_extend(&f, h), &mut omegas, &mut queue);
                            }
                        }
                    }
                }
            }
        }

        let step_sets: BTreeMap<(SgNode, SgNode), BTreeSet<StepSummary>> = steps
            .into_iter()
            .map(|(k, v)| (k, v.into_iter().collect()))
            .collect();
        let omega_sets: BTreeMap<SgNode, BTreeSet<OmegaSummary>> = omegas
            .into_iter()
            .map(|(k, v)| (k, v.into_iter().collect()))
            .collect();
        Behaviour {
            effects: self.nodes.iter().map(|d| d.effect.clone()).collect(),
            step_sets,
            omega_sets,
            holes: self.holes,
        }
    }
}

/// The saturated behaviour of a (possibly composed) graph: all realized
/// step summaries between node pairs and all realized omega summaries per
/// node.
#[derive(Clone, Debug)]
pub struct Behaviour {
    effects: Vec<Option<StepSummary>>,
    step_sets: BTreeMap<(SgNode, SgNode), BTreeSet<StepSummary>>,
    omega_sets: BTreeMap<SgNode, BTreeSet<OmegaSummary>>,
    holes: Vec<Vec<SgNode>>,
}

impl Behaviour {
    pub fn node_count(&self) -> usize {
        self.effects.len()
    }

    pub fn steps_between(&self, u: SgNode, v: SgNode) -> BTreeSet<StepSummary> {
        self.step_sets.get(&(u, v)).cloned().unwrap_or_default()
    }

    pub fn omegas_at(&self, u: SgNode) -> BTreeSet<OmegaSummary> {
        self.omega_sets.get(&u).cloned().unwrap_or_default()
    }

    pub fn effect_of(&self, u: SgNode) -> Option<&StepSummary> {
        self.effects[u].as_ref()
    }

    /// True iff every infinite trace from `v` is accepted: for each omega
    /// summary, some initial state must accept after reading v's own
    /// color. Nodes without infinite traces satisfy vacuously.
    pub fn satisfies(&self, v: SgNode, m: &BuchiAutomaton) -> bool {
        let initial: u64 = m.initial.iter().fold(0, |acc, q| acc | 1 << q.0);
        let effect = self.effects[v]
            .as_ref()
            .expect("satisfaction queries address concrete nodes");
        let start = effect.post(initial);
        self.omegas_at(v).iter().all(|&h| start & h != 0)
    }

    /// Restricts the behaviour to the given interface nodes, producing the
    /// canonical representative of the graph's equivalence class. Stored
    /// summaries cover nonempty paths only, so a real identity-effect
    /// self-loop stays distinguishable from the absence of one.
    pub fn restrict(&self, ports: &[SgNode]) -> InterfaceBehaviour {
        let index: BTreeMap<SgNode, usize> =
            ports.iter().enumerate().map(|(i, &p)| (p, i)).collect();
        let mut steps: BTreeMap<(usize, usize), BTreeSet<StepSummary>> = BTreeMap::new();
        for (&(u, v), summaries) in &self.step_sets {
            let (Some(&i), Some(&j)) = (index.get(&u), index.get(&v)) else {
                continue;
            };
            for s in summaries {
                steps.entry((i, j)).or_default().insert(s.clone());
            }
        }
        let omegas: Vec<BTreeSet<OmegaSummary>> =
            ports.iter().map(|&p| self.omegas_at(p)).collect();
        let port_effects: Vec<Option<StepSummary>> =
            ports.iter().map(|&p| self.effects[p].clone()).collect();
        let holes: BTreeSet<Vec<usize>> = self
            .holes
            .iter()
            .map(|att| {
                att.iter()
                    .map(|p| *index.get(p).expect("hole ports are interface nodes"))
                    .collect()
            })
            .collect();
        InterfaceBehaviour {
            port_effects,
            steps,
            omegas,
            holes,
        }
    }
}

/// A behaviour restricted to interface nodes, in canonical port order.
/// Two graphs have equal interface behaviours exactly when they are
/// interchangeable with respect to the automaton under the positional
/// pinning of their interfaces.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct InterfaceBehaviour {
    /// Per port: the one-letter effect of the port's own color, or `None`
    /// when the port is an abstract node inside this graph.
    pub port_effects: Vec<Option<StepSummary>>,
    /// Exported step summaries between ports (no trivial self entries).
    pub steps: BTreeMap<(usize, usize), BTreeSet<StepSummary>>,
    /// Exported omega summaries per port.
    pub omegas: Vec<BTreeSet<OmegaSummary>>,
    /// Attachment patterns of unplugged hyperedges over the ports.
    pub holes: BTreeSet<Vec<usize>>,
}

impl InterfaceBehaviour {
    pub fn port_count(&self) -> usize {
        self.port_effects.len()
    }

    /// The class of the handle: `arity` abstract ports, no edges, one hole
    /// attached to all ports in order.
    pub fn of_handle(arity: u32) -> InterfaceBehaviour {
        InterfaceBehaviour {
            port_effects: vec![None; arity as usize],
            steps: BTreeMap::new(),
            omegas: vec![BTreeSet::new(); arity as usize],
            holes: [(0..arity as usize).collect::<Vec<_>>()].into_iter().collect(),
        }
    }
}

/// Interned interface behaviours; equality on classes becomes id equality.
#[derive(Clone, Debug, Default)]
pub struct ClassRegistry {
    classes: Vec<InterfaceBehaviour>,
    index: HashMap<InterfaceBehaviour, ClassId>,
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct ClassId(pub u32);

impl ClassRegistry {
    pub fn new() -> ClassRegistry {
        ClassRegistry::default()
    }

    pub fn intern(&mut self, b: InterfaceBehaviour) -> ClassId {
        if let Some(&id) = self.index.get(&b) {
            return id;
        }
        let id = ClassId(self.classes.len() as u32);
        self.classes.push(b.clone());
        self.index.insert(b, id);
        id
    }

    pub fn get(&self, id: ClassId) -> &InterfaceBehaviour {
        &self.classes[id.0 as usize]
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }
}

// ---------------------------------------------------------------------------
// Building summary graphs from hypergraphs
// ---------------------------------------------------------------------------

/// Index map produced when lowering a hypergraph into a summary graph.
pub struct Lowered {
    pub graph: SummaryGraph,
    pub node_index: BTreeMap<Node, SgNode>,
}

/// Lowers a hypergraph: concrete nodes become passable nodes carrying the
/// one-letter effect of their (projected) color set, abstract nodes become
/// non-passable uncolored nodes, ordinary edges become one-step summary
/// edges. Hyperedges in `plug` are spliced as interface behaviours; the
/// rest are recorded as holes.
pub fn lower(
    g: &Hypergraph,
    m: &BuchiAutomaton,
    plug: &BTreeMap<HyperedgeId, &InterfaceBehaviour>,
) -> Lowered {
    let n = m.state_count();
    let mut sg = SummaryGraph::new();
    let mut node_index: BTreeMap<Node, SgNode> = BTreeMap::new();
    for (&id, colors) in &g.coloring {
        let letter = m.letter_of(colors);
        node_index.insert(Node::Concrete(id), sg.add_concrete(step_summary(m, letter)));
    }
    for i in 1..=g.abstract_count {
        node_index.insert(Node::Abstract(i), sg.add_abstract());
    }
    for &(u, _, v) in &g.edges {
        sg.add_graph_edge(node_index[&u], node_index[&v], n);
    }
    for (he_id, he) in &g.hyperedges {
        let ports: Vec<SgNode> = he.attachment.iter().map(|w| node_index[w]).collect();
        match plug.get(he_id) {
            Some(class) => sg.instantiate(class, &ports, n),
            None => sg.add_hole(ports),
        }
    }
    Lowered {
        graph: sg,
        node_index,
    }
}

/// The behaviour of a plain hypergraph (no plugging).
pub fn behaviour_of(g: &Hypergraph, m: &BuchiAutomaton) -> (Behaviour, BTreeMap<Node, SgNode>) {
    let lowered = lower(g, m, &BTreeMap::new());
    (lowered.graph.saturate(), lowered.node_index)
}

/// Plugs interface behaviours into a body's hyperedges and saturates. The
/// resulting behaviour stands for the whole class of graphs obtained by
/// substituting any members of the plugged classes.
pub fn plug_body(
    body: &Hypergraph,
    m: &BuchiAutomaton,
    assignment: &BTreeMap<HyperedgeId, &InterfaceBehaviour>,
) -> (Behaviour, BTreeMap<Node, SgNode>) {
    let lowered = lower(body, m, assignment);
    (lowered.graph.saturate(), lowered.node_index)
}

/// Plugs a body (with its hyperedges already assigned) into a context
/// class: the body's abstract nodes are identified with the context's hole
/// ports and take over their colors. Returns the saturated behaviour and
/// the body-node index map.
pub fn plug_into_context(
    context: &InterfaceBehaviour,
    body: &Hypergraph,
    m: &BuchiAutomaton,
    assignment: &BTreeMap<HyperedgeId, &InterfaceBehaviour>,
) -> (Behaviour, BTreeMap<Node, SgNode>) {
    let n = m.state_count();
    assert_eq!(context.holes.len(), 1, "a context class has exactly one hole");
    // The hole's attachment pattern maps the body's abstract nodes onto
    // the context's ports; a port attached several times merges the
    // corresponding abstract nodes.
    let pattern = context.holes.iter().next().unwrap().clone();
    assert_eq!(
        pattern.len(),
        body.abstract_count as usize,
        "context hole arity must match the body's abstract count"
    );
    let mut sg = SummaryGraph::new();
    let mut node_index: BTreeMap<Node, SgNode> = BTreeMap::new();
    for (&id, colors) in &body.coloring {
        let letter = m.letter_of(colors);
        node_index.insert(Node::Concrete(id), sg.add_concrete(step_summary(m, letter)));
    }
    // junction nodes: one per context port, concrete on the context side
    let junctions: Vec<SgNode> = (0..context.port_count())
        .map(|p| {
            let effect = context.port_effects[p]
                .clone()
                .expect("context hole ports are concrete in the context");
            sg.add_concrete(effect)
        })
        .collect();
    for i in 1..=body.abstract_count {
        node_index.insert(Node::Abstract(i), junctions[pattern[(i - 1) as usize]]);
    }
    for &(u, _, v) in &body.edges {
        sg.add_graph_edge(node_index[&u], node_index[&v], n);
    }
    for (he_id, he) in &body.hyperedges {
        let ports: Vec<SgNode> = he.attachment.iter().map(|w| node_index[w]).collect();
        match assignment.get(he_id) {
            Some(class) => sg.instantiate(class, &ports, n),
            None => sg.add_hole(ports),
        }
    }
    sg.instantiate_filling_hole(context, &junctions, n);
    (sg.saturate(), node_index)
}

/// Canonical interface of a graph with no unplugged hyperedges: its
/// abstract nodes in numeric order.
pub fn language_interface(node_index: &BTreeMap<Node, SgNode>, arity: u32) -> Vec<SgNode> {
    (1..=arity).map(|i| node_index[&Node::Abstract(i)]).collect()
}

/// Canonical interface of a context: the hole's attached nodes in
/// attachment order, deduplicated.
pub fn context_interface(g: &Hypergraph, node_index: &BTreeMap<Node, SgNode>) -> Vec<SgNode> {
    let mut seen = BTreeSet::new();
    let mut ports = Vec::new();
    for he in g.hyperedges.values() {
        for w in &he.attachment {
            let idx = node_index[w];
            if seen.insert(idx) {
                ports.push(idx);
            }
        }
    }
    ports
}

/// Deduplicated interface ports of a graph view: abstract nodes by number,
/// then attached nodes in attachment order, then view nodes by id.
pub fn view_interface(
    g: &Hypergraph,
    view: &BTreeSet<NodeId>,
    node_index: &BTreeMap<Node, SgNode>,
) -> Vec<SgNode> {
    let mut seen = BTreeSet::new();
    let mut ports = Vec::new();
    for i in 1..=g.abstract_count {
        let idx = node_index[&Node::Abstract(i)];
        if seen.insert(idx) {
            ports.push(idx);
        }
    }
    for he in g.hyperedges.values() {
        for w in &he.attachment {
            let idx = node_index[w];
            if seen.insert(idx) {
                ports.push(idx);
            }
        }
    }
    for v in view {
        let idx = node_index[&Node::Concrete(*v)];
        if seen.insert(idx) {
            ports.push(idx);
        }
    }
    ports
}

// ---------------------------------------------------------------------------
// Rendering summaries (shared by DOT export and debugging)
// ---------------------------------------------------------------------------

pub fn format_step(m: &BuchiAutomaton, s: &StepSummary) -> String {
    let parts: Vec<String> = s
        .triples()
        .iter()
        .map(|(p, q, b)| {
            format!(
                "({},{},{})",
                m.state_names[p.0],
                m.state_names[q.0],
                if *b { "T" } else { "F" }
            )
        })
        .collect();
    format!("{{{}}}", parts.join(","))
}

pub fn format_omega(m: &BuchiAutomaton, h: OmegaSummary) -> String {
    let parts: Vec<String> = (0..m.state_count())
        .filter(|q| h & (1 << q) != 0)
        .map(|q| m.state_names[q].clone())
        .collect();
    format!("{{{}}}", parts.join(","))
}

/// Parses a set literal like `{(p,q,T),(r,r,F)}` against the automaton's
/// state names; used by tests asserting printed annotations.
pub fn step_from_triples(m: &BuchiAutomaton, triples: &[(&str, &str, bool)]) -> StepSummary {
    let mut s = StepSummary::empty(m.state_count());
    let id_of = |name: &str| {
        StateId(
            m.state_names
                .iter()
                .position(|n| n == name)
                .expect("known state name"),
        )
    };
    for (p, q, b) in triples {
        s.insert(id_of(p), id_of(q), *b);
    }
    s
}

pub fn omega_from_states(m: &BuchiAutomaton, states: &[&str]) -> OmegaSummary {
    let mut h = 0;
    for name in states {
        let q = m
            .state_names
            .iter()
            .position(|n| n == name)
            .expect("known state name");
        h |= 1 << q;
    }
    h
}

pub fn letter_of_colors(m: &BuchiAutomaton, colors: &[&str]) -> Letter {
    let set: BTreeSet<Symbol> = colors.iter().map(|c| Symbol::new(c)).collect();
    m.letter_of(&set)
}

// ---------------------------------------------------------------------------
// Tests
// ---------------------------------------------------------------------------
