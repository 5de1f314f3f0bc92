//! Temporal formulas and Büchi automata.
//!
//! The property alphabet is `2^C` for a finite set `C` of relevant colors:
//! a letter is the set of relevant colors a node carries. Automata store
//! explicit letters; formulas mentioning `k` colors yield automata over
//! `2^k` letters, with irrelevant colors projected away before the
//! automaton ever sees a trace.

use crate::Symbol;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use thiserror::Error;

/// Automaton state index.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct StateId(pub usize);

/// A letter: a set of relevant colors, encoded as a bitmask over the
/// automaton's color universe.
pub type Letter = u32;

/// A nondeterministic Büchi automaton over color-set letters.
#[derive(Clone, Debug)]
pub struct BuchiAutomaton {
    /// The relevant colors; bit `i` of a letter refers to `colors[i]`.
    pub colors: Vec<Symbol>,
    pub state_names: Vec<String>,
    pub transitions: BTreeSet<(StateId, Letter, StateId)>,
    pub initial: BTreeSet<StateId>,
    pub accepting: BTreeSet<StateId>,
}

impl BuchiAutomaton {
    pub fn state_count(&self) -> usize {
        self.state_names.len()
    }

    pub fn letter_of(&self, node_colors: &BTreeSet<Symbol>) -> Letter {
        let mut l = 0;
        for (i, c) in self.colors.iter().enumerate() {
            if node_colors.contains(c) {
                l |= 1 << i;
            }
        }
        l
    }

    pub fn letters(&self) -> impl Iterator<Item = Letter> {
        0..(1u32 << self.colors.len())
    }

    pub fn successors(&self, q: StateId, letter: Letter) -> impl Iterator<Item = StateId> + '_ {
        self.transitions
            .range((q, letter, StateId(0))..=(q, letter, StateId(usize::MAX)))
            .map(|&(_, _, t)| t)
    }

    /// Accepts the ultimately periodic word `prefix · cycle^ω`. The cycle
    /// must be nonempty. Decided on the effect relation of the two word
    /// segments: some initial state must reach, after the prefix and any
    /// number of cycle repetitions, a state that revisits itself through
    /// an accepting state.
    pub fn accepts_lasso(&self, prefix: &[Letter], cycle: &[Letter]) -> bool {
        assert!(!cycle.is_empty(), "lasso cycle must be nonempty");
        let n = self.state_count();
        let word_post = |word: &[Letter], from: &BTreeSet<StateId>| -> BTreeSet<StateId> {
            let mut cur = from.clone();
            for &l in word {
                let mut next = BTreeSet::new();
                for &q in &cur {
                    next.extend(self.successors(q, l));
                }
                cur = next;
            }
            cur
        };
        // (p, q, visited-accepting) relation of one cycle iteration; the
        // flag covers the states entered while reading the cycle.
        let mut step: BTreeSet<(StateId, StateId, bool)> = (0..n)
            .map(|q| (StateId(q), StateId(q), false))
            .collect();
        for &l in cycle {
            let mut next = BTreeSet::new();
            for &(p, q, b) in &step {
                for t in self.successors(q, l) {
                    next.insert((p, t, b || self.accepting.contains(&t)));
                }
            }
            step = next;
        }
        // transitive closure of the cycle relation
        let mut clos = step.clone();
        loop {
            let mut grew = false;
            let snapshot: Vec<_> = clos.iter().copied().collect();
            for &(p, q, b1) in &snapshot {
                for &(q2, r, b2) in &snapshot {
                    if q == q2 && clos.insert((p, r, b1 || b2)) {
                        grew = true;
                    }
                }
            }
            if !grew {
                break;
            }
        }
        let after_prefix = word_post(prefix, &self.initial);
        // states reachable after the prefix plus any number of whole cycles
        let mut candidates = after_prefix.clone();
        loop {
            let mut next = candidates.clone();
            for &(p, q, _) in &clos {
                if candidates.contains(&p) {
                    next.insert(q);
                }
            }
            if next == candidates {
                break;
            }
            candidates = next;
        }
        candidates.iter().any(|&q| clos.contains(&(q, q, true)))
    }
}

/// Linear temporal logic over color atoms.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub enum Ltl {
    True,
    False,
    Atom(Symbol),
    Not(Box<Ltl>),
    And(Box<Ltl>, Box<Ltl>),
    Or(Box<Ltl>, Box<Ltl>),
    Next(Box<Ltl>),
    Eventually(Box<Ltl>),
    Always(Box<Ltl>),
    Until(Box<Ltl>, Box<Ltl>),
    Release(Box<Ltl>, Box<Ltl>),
}

/// CTL* state formulas; path formulas live in [`PathFormula`].
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub enum StateFormula {
    True,
    False,
    Atom(Symbol),
    Not(Box<StateFormula>),
    And(Box<StateFormula>, Box<StateFormula>),
    Or(Box<StateFormula>, Box<StateFormula>),
    Forall(Box<PathFormula>),
    Exists(Box<PathFormula>),
}

/// CTL* path formulas: state formulas plus temporal operators.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub enum PathFormula {
    State(Box<StateFormula>),
    Not(Box<PathFormula>),
    And(Box<PathFormula>, Box<PathFormula>),
    Or(Box<PathFormula>, Box<PathFormula>),
    Next(Box<PathFormula>),
    Eventually(Box<PathFormula>),
    Always(Box<PathFormula>),
    Until(Box<PathFormula>, Box<PathFormula>),
    Release(Box<PathFormula>, Box<PathFormula>),
}

/// Qualitative PCTL: probability bounds restricted to `>0` and `=1`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub enum Qpctl {
    True,
    False,
    Atom(Symbol),
    Not(Box<Qpctl>),
    And(Box<Qpctl>, Box<Qpctl>),
    Or(Box<Qpctl>, Box<Qpctl>),
    /// P_{bound}[X φ]
    Next(Bound, Box<Qpctl>),
    /// P_{bound}[φ U ψ]
    Until(Bound, Box<Qpctl>, Box<Qpctl>),
    /// P_{bound}[F φ]
    Eventually(Bound, Box<Qpctl>),
    /// P_{bound}[G φ]
    Always(Bound, Box<Qpctl>),
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub enum Bound {
    Positive,
    AlmostSure,
}

/// Either flavor of input formula, as produced by the parser.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Formula {
    CtlStar(StateFormula),
    Qpctl(Qpctl),
}

impl fmt::Display for Ltl {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ltl::True => write!(f, "true"),
            Ltl::False => write!(f, "false"),
            Ltl::Atom(c) => write!(f, "{c}"),
            Ltl::Not(p) => write!(f, "!{p}"),
            Ltl::And(p, q) => write!(f, "({p} & {q})"),
            Ltl::Or(p, q) => write!(f, "({p} | {q})"),
            Ltl::Next(p) => write!(f, "X {p}"),
            Ltl::Eventually(p) => write!(f, "F {p}"),
            Ltl::Always(p) => write!(f, "G {p}"),
            Ltl::Until(p, q) => write!(f, "({p} U {q})"),
            Ltl::Release(p, q) => write!(f, "({p} R {q})"),
        }
    }
}

impl fmt::Display for StateFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StateFormula::True => write!(f, "true"),
            StateFormula::False => write!(f, "false"),
            StateFormula::Atom(c) => write!(f, "{c}"),
            StateFormula::Not(p) => write!(f, "!{p}"),
            StateFormula::And(p, q) => write!(f, "({p} & {q})"),
            StateFormula::Or(p, q) => write!(f, "({p} | {q})"),
            StateFormula::Forall(p) => write!(f, "A {p}"),
            StateFormula::Exists(p) => write!(f, "E {p}"),
        }
    }
}

impl fmt::Display for PathFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PathFormula::State(s) => write!(f, "{s}"),
            PathFormula::Not(p) => write!(f, "!{p}"),
            PathFormula::And(p, q) => write!(f, "({p} & {q})"),
            PathFormula::Or(p, q) => write!(f, "({p} | {q})"),
            PathFormula::Next(p) => write!(f, "X {p}"),
            PathFormula::Eventually(p) => write!(f, "F {p}"),
            PathFormula::Always(p) => write!(f, "G {p}"),
            PathFormula::Until(p, q) => write!(f, "({p} U {q})"),
            PathFormula::Release(p, q) => write!(f, "({p} R {q})"),
        }
    }
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum FormulaError {
    #[error("syntax error at position {0}: {1}")]
    Syntax(usize, String),
    #[error("atom `{0}` is not a declared color")]
    UndeclaredAtom(String),
    #[error("probability bound is not qualitative (only >0 and =1 are supported)")]
    UnsupportedBound,
    #[error("path operators cannot be mixed with probability operators")]
    MixedQuantifiers,
}

// ---------------------------------------------------------------------------
// Parsing
// ---------------------------------------------------------------------------

struct Parser<'a> {
    text: &'a [u8],
    pos: usize,
    atoms: Option<&'a BTreeSet<Symbol>>,
}

/// Parses the shared concrete syntax:
/// atoms are identifiers; operators `! & | -> X F G U R A E P>0[..] P=1[..]`;
/// parentheses; precedence: unary > U/R > & > | > ->.
///
/// If any `P`-operator occurs, the result is a qualitative PCTL formula,
/// otherwise a CTL* state formula. A bare path formula at the top level is
/// wrapped in the universal quantifier.
pub fn parse_formula(
    text: &str,
    color_universe: Option<&BTreeSet<Symbol>>,
) -> Result<Formula, FormulaError> {
    let mut p = Parser {
        text: text.as_bytes(),
        pos: 0,
        atoms: color_universe,
    };
    let path = p.parse_implies()?;
    p.skip_ws();
    if p.pos != p.text.len() {
        return Err(FormulaError::Syntax(p.pos, "unexpected trailing input".into()));
    }
    if contains_prob(&path) {
        Ok(Formula::Qpctl(path_to_qpctl(&path)?))
    } else {
        Ok(Formula::CtlStar(close_path(path)))
    }
}

/// Raw parse tree before sorting into CTL* vs qPCTL.
#[derive(Clone, Debug)]
enum Raw {
    True,
    False,
    Atom(Symbol),
    Not(Box<Raw>),
    And(Box<Raw>, Box<Raw>),
    Or(Box<Raw>, Box<Raw>),
    Next(Box<Raw>),
    Eventually(Box<Raw>),
    Always(Box<Raw>),
    Until(Box<Raw>, Box<Raw>),
    Release(Box<Raw>, Box<Raw>),
    Forall(Box<Raw>),
    Exists(Box<Raw>),
    Prob(Bound, Box<Raw>),
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.text.len() && self.text[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.text.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<(), FormulaError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(FormulaError::Syntax(
                self.pos,
                format!("expected `{}`", c as char),
            ))
        }
    }

    fn ident(&mut self) -> Option<String> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.text.len()
            && (self.text[self.pos].is_ascii_alphanumeric()
                || self.text[self.pos] == b'_'
                || self.text[self.pos] == b'@')
        {
            self.pos += 1;
        }
        if self.pos > start {
            Some(String::from_utf8_lossy(&self.text[start..self.pos]).into_owned())
        } else {
            None
        }
    }

    fn parse_implies(&mut self) -> Result<Raw, FormulaError> {
        let lhs = self.parse_or()?;
        self.skip_ws();
        if self.text[self.pos..].starts_with(b"->") {
            self.pos += 2;
            let rhs = self.parse_implies()?;
            return Ok(Raw::Or(Box::new(Raw::Not(Box::new(lhs))), Box::new(rhs)));
        }
        Ok(lhs)
    }

    fn parse_or(&mut self) -> Result<Raw, FormulaError> {
        let mut lhs = self.parse_and()?;
        while self.peek() == Some(b'|') {
            self.pos += 1;
            let rhs = self.parse_and()?;
            lhs = Raw::Or(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn parse_and(&mut self) -> Result<Raw, FormulaError> {
        let mut lhs = self.parse_until()?;
        while self.peek() == Some(b'&') {
            self.pos += 1;
            let rhs = self.parse_until()?;
            lhs = Raw::And(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn parse_until(&mut self) -> Result<Raw, FormulaError> {
        let mut lhs = self.parse_unary()?;
        loop {
            self.skip_ws();
            let rest = &self.text[self.pos..];
            if rest.starts_with(b"U") && !ident_continues(rest.get(1)) {
                self.pos += 1;
                let rhs = self.parse_unary()?;
                lhs = Raw::Until(Box::new(lhs), Box::new(rhs));
            } else if rest.starts_with(b"R") && !ident_continues(rest.get(1)) {
                self.pos += 1;
                let rhs = self.parse_unary()?;
                lhs = Raw::Release(Box::new(lhs), Box::new(rhs));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn parse_unary(&mut self) -> Result<Raw, FormulaError> {
        self.skip_ws();
        if self.pos >= self.text.len() {
            return Err(FormulaError::Syntax(self.pos, "unexpected end of input".into()));
        }
        let rest = &self.text[self.pos..];
        if rest.starts_with(b"!") {
            self.pos += 1;
            return Ok(Raw::Not(Box::new(self.parse_unary()?)));
        }
        if rest.starts_with(b"P>0[") || rest.starts_with(b"P=1[") {
            let bound = if rest[1] == b'>' {
                Bound::Positive
            } else {
                Bound::AlmostSure
            };
            self.pos += 4;
            let inner = self.parse_implies()?;
            self.expect(b']')?;
            return Ok(Raw::Prob(bound, Box::new(inner)));
        }
        if rest.starts_with(b"P") && (rest.get(1) == Some(&b'>') || rest.get(1) == Some(&b'=')) {
            return Err(FormulaError::UnsupportedBound);
        }
        for (op, tag) in [(b'X', 0u8), (b'F', 1), (b'G', 2), (b'A', 3), (b'E', 4)] {
            if rest.starts_with(&[op]) && !ident_continues(rest.get(1)) {
                self.pos += 1;
                let inner = self.parse_unary()?;
                return Ok(match tag {
                    0 => Raw::Next(Box::new(inner)),
                    1 => Raw::Eventually(Box::new(inner)),
                    2 => Raw::Always(Box::new(inner)),
                    3 => Raw::Forall(Box::new(inner)),
                    _ => Raw::Exists(Box::new(inner)),
                });
            }
        }
        if self.eat(b'(') {
            let inner = self.parse_implies()?;
            self.expect(b')')?;
            return Ok(inner);
        }
        let at = self.pos;
        match self.ident() {
            Some(name) if name == "true" => Ok(Raw::True),
            Some(name) if name == "false" => Ok(Raw::False),
            Some(name) => {
                let sym = Symbol::new(&name);
                if let Some(universe) = self.atoms {
                    if !universe.contains(&sym) {
                        return Err(FormulaError::UndeclaredAtom(name));
                    }
                }
                Ok(Raw::Atom(sym))
            }
            None => Err(FormulaError::Syntax(at, "expected a formula".into())),
        }
    }
}

fn ident_continues(c: Option<&u8>) -> bool {
    matches!(c, Some(&c) if c.is_ascii_alphanumeric() || c == b'_')
}

fn contains_prob(r: &Raw) -> bool {
    match r {
        Raw::Prob(..) => true,
        Raw::True | Raw::False | Raw::Atom(_) => false,
        Raw::Not(p) | Raw::Next(p) | Raw::Eventually(p) | Raw::Always(p) | Raw::Forall(p)
        | Raw::Exists(p) => contains_prob(p),
        Raw::And(p, q) | Raw::Or(p, q) | Raw::Until(p, q) | Raw::Release(p, q) => {
            contains_prob(p) || contains_prob(q)
        }
    }
}

fn path_to_qpctl(r: &Raw) -> Result<Qpctl, FormulaError> {
    match r {
        Raw::True => Ok(Qpctl::True),
        Raw::False => Ok(Qpctl::False),
        Raw::Atom(a) => Ok(Qpctl::Atom(*a)),
        Raw::Not(p) => Ok(Qpctl::Not(Box::new(path_to_qpctl(p)?))),
        Raw::And(p, q) => Ok(Qpctl::And(
            Box::new(path_to_qpctl(p)?),
            Box::new(path_to_qpctl(q)?),
        )),
        Raw::Or(p, q) => Ok(Qpctl::Or(
            Box::new(path_to_qpctl(p)?),
            Box::new(path_to_qpctl(q)?),
        )),
        Raw::Prob(bound, inner) => match inner.as_ref() {
            Raw::Next(p) => Ok(Qpctl::Next(*bound, Box::new(path_to_qpctl(p)?))),
            Raw::Eventually(p) => Ok(Qpctl::Eventually(*bound, Box::new(path_to_qpctl(p)?))),
            Raw::Always(p) => Ok(Qpctl::Always(*bound, Box::new(path_to_qpctl(p)?))),
            Raw::Until(p, q) => Ok(Qpctl::Until(
                *bound,
                Box::new(path_to_qpctl(p)?),
                Box::new(path_to_qpctl(q)?),
            )),
            _ => Err(FormulaError::MixedQuantifiers),
        },
        Raw::Forall(_) | Raw::Exists(_) | Raw::Next(_) | Raw::Eventually(_) | Raw::Always(_)
        | Raw::Until(..) | Raw::Release(..) => Err(FormulaError::MixedQuantifiers),
    }
}

/// Converts a raw tree to a CTL* state formula, wrapping any bare path
/// operators at the outermost level in a universal quantifier.
fn close_path(r: Raw) -> StateFormula {
    match to_state(&r) {
        Some(s) => s,
        None => StateFormula::Forall(Box::new(to_path(&r))),
    }
}

fn to_state(r: &Raw) -> Option<StateFormula> {
    match r {
        Raw::True => Some(StateFormula::True),
        Raw::False => Some(StateFormula::False),
        Raw::Atom(a) => Some(StateFormula::Atom(*a)),
        Raw::Not(p) => Some(StateFormula::Not(Box::new(to_state(p)?))),
        Raw::And(p, q) => Some(StateFormula::And(
            Box::new(to_state(p)?),
            Box::new(to_state(q)?),
        )),
        Raw::Or(p, q) => Some(StateFormula::Or(
            Box::new(to_state(p)?),
            Box::new(to_state(q)?),
        )),
        Raw::Forall(p) => Some(StateFormula::Forall(Box::new(to_path(p)))),
        Raw::Exists(p) => Some(StateFormula::Exists(Box::new(to_path(p)))),
        Raw::Next(_) | Raw::Eventually(_) | Raw::Always(_) | Raw::Until(..) | Raw::Release(..) => {
            None
        }
        Raw::Prob(..) => unreachable!("probability operators handled before"),
    }
}

fn to_path(r: &Raw) -> PathFormula {
    if let Some(s) = to_state(r) {
        return PathFormula::State(Box::new(s));
    }
    match r {
        Raw::Not(p) => PathFormula::Not(Box::new(to_path(p))),
        Raw::And(p, q) => PathFormula::And(Box::new(to_path(p)), Box::new(to_path(q))),
        Raw::Or(p, q) => PathFormula::Or(Box::new(to_path(p)), Box::new(to_path(q))),
        Raw::Next(p) => PathFormula::Next(Box::new(to_path(p))),
        Raw::Eventually(p) => PathFormula::Eventually(Box::new(to_path(p))),
        Raw::Always(p) => PathFormula::Always(Box::new(to_path(p))),
        Raw::Until(p, q) => PathFormula::Until(Box::new(to_path(p)), Box::new(to_path(q))),
        Raw::Release(p, q) => PathFormula::Release(Box::new(to_path(p)), Box::new(to_path(q))),
        _ => unreachable!("state cases covered by to_state"),
    }
}

// ---------------------------------------------------------------------------
// Qualitative PCTL embedding into CTL*
// ---------------------------------------------------------------------------

/// Embeds a qualitative PCTL formula into CTL*, valid over finite Markov
/// chains whose underlying graph is the LTS (uniform positive transition
/// probabilities). The almost-sure and positive cases reduce to
/// reachability: staying in a region forever with positive probability
/// means reaching a state from which the region cannot be left.
pub fn qpctl_to_ctlstar(phi: &Qpctl) -> StateFormula {
    use StateFormula as S;
    fn ex(p: PathFormula) -> S {
        S::Exists(Box::new(p))
    }
    fn fa(p: PathFormula) -> S {
        S::Forall(Box::new(p))
    }
    fn st(s: S) -> PathFormula {
        PathFormula::State(Box::new(s))
    }
    fn not(s: S) -> S {
        S::Not(Box::new(s))
    }
    fn and(a: S, b: S) -> S {
        S::And(Box::new(a), Box::new(b))
    }
    fn eu(a: S, b: S) -> S {
        ex(PathFormula::Until(Box::new(st(a)), Box::new(st(b))))
    }
    // a state all of whose reachable states satisfy φ
    fn trapped(phi: S) -> S {
        not(eu(S::True, not(phi)))
    }
    match phi {
        Qpctl::True => S::True,
        Qpctl::False => S::False,
        Qpctl::Atom(a) => S::Atom(*a),
        Qpctl::Not(p) => not(qpctl_to_ctlstar(p)),
        Qpctl::And(p, q) => and(qpctl_to_ctlstar(p), qpctl_to_ctlstar(q)),
        Qpctl::Or(p, q) => S::Or(
            Box::new(qpctl_to_ctlstar(p)),
            Box::new(qpctl_to_ctlstar(q)),
        ),
        Qpctl::Next(Bound::Positive, p) => {
            ex(PathFormula::Next(Box::new(st(qpctl_to_ctlstar(p)))))
        }
        Qpctl::Next(Bound::AlmostSure, p) => {
            fa(PathFormula::Next(Box::new(st(qpctl_to_ctlstar(p)))))
        }
        Qpctl::Eventually(Bound::Positive, p) => eu(S::True, qpctl_to_ctlstar(p)),
        Qpctl::Until(Bound::Positive, p, q) => eu(qpctl_to_ctlstar(p), qpctl_to_ctlstar(q)),
        Qpctl::Always(Bound::AlmostSure, p) => {
            // a finite violating path would have positive probability
            fa(PathFormula::Always(Box::new(st(qpctl_to_ctlstar(p)))))
        }
        Qpctl::Always(Bound::Positive, p) => {
            // reach, through the region, a state trapped in the region
            let f = qpctl_to_ctlstar(p);
            eu(f.clone(), and(f.clone(), trapped(f)))
        }
        Qpctl::Eventually(Bound::AlmostSure, p) => {
            // fails iff a φ-free path reaches a state from which φ is
            // unreachable
            let f = qpctl_to_ctlstar(p);
            not(eu(
                not(f.clone()),
                and(not(f.clone()), not(eu(S::True, f))),
            ))
        }
        Qpctl::Until(Bound::AlmostSure, p, q) => {
            // fails iff with positive probability the until is violated:
            // either the waiting region p∧¬q is left through ¬p∧¬q, or the
            // run gets trapped waiting forever
            let fp = qpctl_to_ctlstar(p);
            let fq = qpctl_to_ctlstar(q);
            let wait = and(fp.clone(), not(fq.clone()));
            let broken = and(not(fp), not(fq.clone()));
            let escape = eu(wait.clone(), broken);
            let stuck = eu(wait.clone(), and(wait.clone(), trapped(wait)));
            and(not(escape), not(stuck))
        }
    }
}

// ---------------------------------------------------------------------------
// LTL to Büchi translation (tableau construction)
// ---------------------------------------------------------------------------

/// Negation normal form with F/G rewritten into U/R.
fn nnf(phi: &Ltl, negated: bool) -> Ltl {
    match (phi, negated) {
        (Ltl::True, false) | (Ltl::False, true) => Ltl::True,
        (Ltl::True, true) | (Ltl::False, false) => Ltl::False,
        (Ltl::Atom(a), false) => Ltl::Atom(*a),
        (Ltl::Atom(a), true) => Ltl::Not(Box::new(Ltl::Atom(*a))),
        (Ltl::Not(p), n) => nnf(p, !n),
        (Ltl::And(p, q), false) => Ltl::And(Box::new(nnf(p, false)), Box::new(nnf(q, false))),
        (Ltl::And(p, q), true) => Ltl::Or(Box::new(nnf(p, true)), Box::new(nnf(q, true))),
        (Ltl::Or(p, q), false) => Ltl::Or(Box::new(nnf(p, false)), Box::new(nnf(q, false))),
        (Ltl::Or(p, q), true) => Ltl::And(Box::new(nnf(p, true)), Box::new(nnf(q, true))),
        (Ltl::Next(p), n) => Ltl::Next(Box::new(nnf(p, n))),
        (Ltl::Eventually(p), false) => Ltl::Until(Box::new(Ltl::True), Box::new(nnf(p, false))),
        (Ltl::Eventually(p), true) => Ltl::Release(Box::new(Ltl::False), Box::new(nnf(p, true))),
        (Ltl::Always(p), false) => Ltl::Release(Box::new(Ltl::False), Box::new(nnf(p, false))),
        (Ltl::Always(p), true) => Ltl::Until(Box::new(Ltl::True), Box::new(nnf(p, true))),
        (Ltl::Until(p, q), false) => Ltl::Until(Box::new(nnf(p, false)), Box::new(nnf(q, false))),
        (Ltl::Until(p, q), true) => Ltl::Release(Box::new(nnf(p, true)), Box::new(nnf(q, true))),
        (Ltl::Release(p, q), false) => {
            Ltl::Release(Box::new(nnf(p, false)), Box::new(nnf(q, false)))
        }
        (Ltl::Release(p, q), true) => Ltl::Until(Box::new(nnf(p, true)), Box::new(nnf(q, true))),
    }
}

fn collect_atoms(phi: &Ltl, out: &mut BTreeSet<Symbol>) {
    match phi {
        Ltl::Atom(a) => {
            out.insert(*a);
        }
        Ltl::True | Ltl::False => {}
        Ltl::Not(p) | Ltl::Next(p) | Ltl::Eventually(p) | Ltl::Always(p) => collect_atoms(p, out),
        Ltl::And(p, q) | Ltl::Or(p, q) | Ltl::Until(p, q) | Ltl::Release(p, q) => {
            collect_atoms(p, out);
            collect_atoms(q, out);
        }
    }
}

/// One disjunct of the tableau expansion: literal constraints on the
/// current letter, obligations for the next position, and until-formulas
/// fulfilled here.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
struct Expansion {
    pos: BTreeSet<Symbol>,
    neg: BTreeSet<Symbol>,
    next: BTreeSet<Ltl>,
    fulfilled: BTreeSet<Ltl>,
}

fn expand(obligations: &BTreeSet<Ltl>) -> Vec<Expansion> {
    let mut results = Vec::new();
    let mut work = vec![(
        obligations.iter().cloned().collect::<Vec<_>>(),
        Expansion {
            pos: BTreeSet::new(),
            neg: BTreeSet::new(),
            next: BTreeSet::new(),
            fulfilled: BTreeSet::new(),
        },
    )];
    while let Some((mut todo, mut exp)) = work.pop() {
        let Some(f) = todo.pop() else {
            results.push(exp);
            continue;
        };
        match f {
            Ltl::True => work.push((todo, exp)),
            Ltl::False => {} // inconsistent branch
            Ltl::Atom(a) => {
                if exp.neg.contains(&a) {
                    continue;
                }
                exp.pos.insert(a);
                work.push((todo, exp));
            }
            Ltl::Not(inner) => {
                let Ltl::Atom(a) = *inner else {
                    unreachable!("input is in negation normal form")
                };
                if exp.pos.contains(&a) {
                    continue;
                }
                exp.neg.insert(a);
                work.push((todo, exp));
            }
            Ltl::And(p, q) => {
                todo.push(*p);
                todo.push(*q);
                work.push((todo, exp));
            }
            Ltl::Or(p, q) => {
                let mut t2 = todo.clone();
                t2.push(*p);
                work.push((t2, exp.clone()));
                todo.push(*q);
                work.push((todo, exp));
            }
            Ltl::Next(p) => {
                exp.next.insert(*p);
                work.push((todo, exp));
            }
            Ltl::Until(p, q) => {
                let u = Ltl::Until(p.clone(), q.clone());
                // fulfil now ...
                let mut t2 = todo.clone();
                t2.push((*q).clone());
                let mut e2 = exp.clone();
                e2.fulfilled.insert(u.clone());
                work.push((t2, e2));
                // ... or wait
                todo.push(*p);
                exp.next.insert(u);
                work.push((todo, exp));
            }
            Ltl::Release(p, q) => {
                // release now ...
                let r = Ltl::Release(p.clone(), q.clone());
                let mut t2 = todo.clone();
                t2.push((*q).clone());
                t2.push((*p).clone());
                work.push((t2, exp.clone()));
                // ... or keep the obligation open
                todo.push(*q);
                exp.next.insert(r);
                work.push((todo, exp));
            }
            Ltl::Eventually(_) | Ltl::Always(_) => unreachable!("rewritten during nnf"),
        }
    }
    results.sort();
    results.dedup();
    results
}

/// Translates an LTL formula into a Büchi automaton whose language is the
/// set of infinite color-set words satisfying it. The alphabet covers
/// exactly the colors mentioned by the formula plus `extra_colors`, so
/// that several automata can share a universe.
pub fn ltl_to_buchi(phi: &Ltl, extra_colors: &[Symbol]) -> BuchiAutomaton {
    let phi = nnf(phi, false);
    let mut colors = BTreeSet::new();
    collect_atoms(&phi, &mut colors);
    colors.extend(extra_colors.iter().copied());
    let colors: Vec<Symbol> = colors.into_iter().collect();
    assert!(
        colors.len() <= 16,
        "a formula over {} distinct colors needs 2^{} explicit letters",
        colors.len(),
        colors.len()
    );
    let color_index: BTreeMap<Symbol, usize> =
        colors.iter().enumerate().map(|(i, &c)| (c, i)).collect();

    fn untils(phi: &Ltl, out: &mut BTreeSet<Ltl>) {
        match phi {
            Ltl::Until(p, q) => {
                out.insert(phi.clone());
                untils(p, out);
                untils(q, out);
            }
            Ltl::Not(p) | Ltl::Next(p) | Ltl::Eventually(p) | Ltl::Always(p) => untils(p, out),
            Ltl::And(p, q) | Ltl::Or(p, q) | Ltl::Release(p, q) => {
                untils(p, out);
                untils(q, out);
            }
            _ => {}
        }
    }
    let mut until_set = BTreeSet::new();
    untils(&phi, &mut until_set);
    let until_list: Vec<Ltl> = until_set.into_iter().collect();
    let k = until_list.len();

    // States: (obligation set, round-robin counter 0..=k). Counter k means
    // every until was seen fulfilled since the last reset.
    type Obl = BTreeSet<Ltl>;
    let start: Obl = [phi.clone()].into_iter().collect();
    let mut state_ids: BTreeMap<(Obl, usize), StateId> = BTreeMap::new();
    let mut states: Vec<(Obl, usize)> = Vec::new();
    let mut transitions = BTreeSet::new();

    fn intern(
        s: (BTreeSet<Ltl>, usize),
        states: &mut Vec<(BTreeSet<Ltl>, usize)>,
        ids: &mut BTreeMap<(BTreeSet<Ltl>, usize), StateId>,
    ) -> StateId {
        if let Some(&id) = ids.get(&s) {
            return id;
        }
        let id = StateId(states.len());
        states.push(s.clone());
        ids.insert(s, id);
        id
    }

    let init = intern((start, 0), &mut states, &mut state_ids);
    let mut frontier = vec![init];
    let letter_count = 1u32 << colors.len();
    while let Some(sid) = frontier.pop() {
        let (obl, counter) = states[sid.0].clone();
        for exp in expand(&obl) {
            for letter in 0..letter_count {
                let ok_pos = exp.pos.iter().all(|a| letter & (1 << color_index[a]) != 0);
                let ok_neg = exp.neg.iter().all(|a| letter & (1 << color_index[a]) == 0);
                if !ok_pos || !ok_neg {
                    continue;
                }
                // advance the counter over fulfilled untils; an until not
                // currently owed counts as fulfilled
                let mut c = if counter == k { 0 } else { counter };
                while c < k
                    && (exp.fulfilled.contains(&until_list[c]) || !obl.contains(&until_list[c]))
                {
                    c += 1;
                }
                let target = (exp.next.clone(), c);
                let existed = state_ids.contains_key(&target);
                let tid = intern(target, &mut states, &mut state_ids);
                if !existed {
                    frontier.push(tid);
                }
                transitions.insert((sid, letter, tid));
            }
        }
    }

    let accepting: BTreeSet<StateId> = states
        .iter()
        .enumerate()
        .filter(|(_, (_, c))| *c == k)
        .map(|(i, _)| StateId(i))
        .collect();
    BuchiAutomaton {
        colors,
        state_names: (0..states.len()).map(|i| format!("q{i}")).collect(),
        transitions,
        initial: [init].into_iter().collect(),
        accepting,
    }
}

// ---------------------------------------------------------------------------
// Tests
// ---------------------------------------------------------------------------
