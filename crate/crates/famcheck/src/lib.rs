//! Model checking for infinite families of finite-state labeled transition systems.
//!
//! A family is described by a hyperedge replacement grammar (HRG): every
//! complete derivation of a start symbol assembles one finite transition
//! system, and the grammar as a whole stands for the (usually infinite) set
//! of all of them. Properties are ω-regular (given as Büchi automata or LTL
//! formulas), CTL*, or qualitative PCTL.
//!
//! The library answers family-level questions — does every member satisfy
//! the property? some member? finitely or infinitely many? — without
//! enumerating members. It recolors the grammar: each rule-body node gains
//! a fresh color exactly when every member puts that node in a satisfying
//! position. Verdicts then reduce to counting derivation trees over the
//! rules whose initial nodes carry the new color.
//!
//! The crate is organized around the pipeline stages:
//!
//! * [`hypergraph`] — hypergraphs, views, couplings, hyperedge replacement.
//! * [`grammar`] — HRGs, derivation trees, enumeration, pruning, counting.
//! * [`logic`] — formulas, parsing, LTL→Büchi translation, lasso acceptance.
//! * [`behaviour`] — trace summaries, saturation, interface behaviours.
//! * [`refine`] — the two annotation fixpoints (language and context classes).
//! * [`recolor`] — grammar recoloring for Büchi/LTL/CTL* properties.
//! * [`minimize`] — pruning plus nonterminal merging.
//! * [`decide`] — family-level verdicts and witnesses.
//! * [`oracle`] — independent explicit-state checker used for validation.
//! * [`io`] — grammar file formats (text and JSON) and DOT export.
//!
//! Each major capability has a runnable example under `examples/`; start
//! with `cargo run --example dll_family`.

pub mod behaviour;
pub mod decide;
pub mod grammar;
pub mod hypergraph;
pub mod io;
pub mod logic;
pub mod minimize;
pub mod oracle;
pub mod recolor;
pub mod refine;
mod symbol;

pub use symbol::Symbol;
