//! Compilation of expressions to automata.
//!
//! [`register_nfa`] flattens an expression into a position automaton whose
//! transitions carry guards and store actions; the evaluation engines run
//! it. [`hier_automaton`] builds the generalized automaton of an expression
//! at its own level of the hierarchy, with whole lower-level blocks as
//! transition labels. [`classical`] holds the binding-free regular
//! expression toolkit (subset construction, complement, state elimination).
//!
//! All constructions are Glushkov position automata, so sizes are
//! deterministic: one state per symbol occurrence plus an initial state.

pub mod classical;
pub(crate) mod glushkov;
mod hier;
mod register;

pub use hier::{automaton_size, automaton_size_at, hier_automaton, HierAutomaton, MetaLabel};
pub(crate) use hier::{decompose, Piece, View};
pub(crate) use register::{Interner, Machine, Regs};
pub use register::{register_nfa, RegTransition, RegisterNfa};
