//! Regular expressions with binding (REWBs) over data words and data graphs.
//!
//! The crate covers parsing and printing ([`syntax`]), structural analysis
//! and the level hierarchy ([`ast`]), compilation to automata
//! ([`automata`]), membership and path-query evaluation with three
//! independent engines ([`eval`]), the hierarchy witnesses ([`witness`]) and
//! the reduction gadgets ([`gadgets`]).
//!
//! ```
//! use rewb::{classify, member, parse_expr, parse_word, Valuation};
//!
//! let e = parse_expr("(a@x(b[x=]))*").unwrap();
//! let w = parse_word("a:1 b:1 a:2 b:2").unwrap();
//! assert!(member(&e, &w, &Valuation::new()).unwrap());
//! assert_eq!(classify(&e).to_string(), "F-level: 1  E-level: 2");
//! ```

pub mod ast;
pub mod automata;
mod error;
pub mod eval;
pub mod gadgets;
pub mod random;
pub mod selftest;
pub mod syntax;
pub mod witness;

pub use ast::{
    alpha_rename, classify, free_vars, indistinguishable_sampled, is_alpha_renamed, to_unf, Condition, DataValue,
    Letter, Level, Rewb, Valuation, Var,
};
pub use automata::{automaton_size, hier_automaton, register_nfa, HierAutomaton, MetaLabel, RegisterNfa};
pub use error::{Error, Result, SourceError};
pub use eval::{
    eval_any, eval_flat, eval_oracle, eval_stratified, member, member_any, witness_path, DataGraph, DataWord, Edge,
    NodeId, PairSet,
};
pub use syntax::{
    parse_expr, parse_graph, parse_valuation, parse_word, print_expr, print_graph, print_valuation, print_word,
};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    struct Introduction;
    #[doc = include_str!("../../../book/src/expressions.md")]
    struct Expressions;
    #[doc = include_str!("../../../book/src/hierarchy.md")]
    struct Hierarchy;
    #[doc = include_str!("../../../book/src/automata.md")]
    struct Automata;
    #[doc = include_str!("../../../book/src/evaluation.md")]
    struct Evaluation;
    #[doc = include_str!("../../../book/src/witnesses.md")]
    struct Witnesses;
    #[doc = include_str!("../../../book/src/gadgets.md")]
    struct Gadgets;
    #[doc = include_str!("../../../book/src/cli.md")]
    struct Cli;
}
