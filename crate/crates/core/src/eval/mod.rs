//! Membership of data words and evaluation of regular data path queries.
//!
//! Three engines compute the same answer set and are used to cross-check
//! each other:
//!
//! * [`eval_flat`]: reachability over configurations `(node, state,
//!   registers)` of the register NFA;
//! * [`eval_stratified`]: evaluation level by level, using the
//!   hierarchical automaton of each block and recursing into lower-level
//!   blocks;
//! * [`eval_oracle`]: breadth-first exploration of data paths up to a
//!   length bound, running the word automaton on each path.

mod any;
mod data;
mod flat;
mod oracle;
mod semantics;
mod stratified;

pub use any::{candidate_valuations, eval_any, eval_any_distinct_fresh, fresh_value, member_any, member_any_distinct_fresh, valuations};
pub use data::{print_pairs, DataGraph, DataWord, Edge, NodeId, PairSet};
pub use flat::{connected, eval_flat, witness_path};
pub use oracle::{default_max_len, eval_oracle, eval_oracle_with_budget, DEFAULT_PATH_BUDGET};
pub use semantics::member_by_semantics;
pub use stratified::eval_stratified;

use crate::ast::{alpha_rename, Rewb, Valuation};
use crate::automata::{register_nfa, Interner, Machine};
use crate::error::Result;

/// Decides `w ∈ L(e, nu)`. `nu` must give a value to every free variable
/// of `e`; extra entries are ignored.
pub fn member(e: &Rewb, w: &DataWord, nu: &Valuation) -> Result<bool> {
    nu.check_compatible(e)?;
    let nfa = register_nfa(&alpha_rename(e))?;
    let m = Machine::new(&nfa);
    let mut values = Interner::default();
    let regs = m.initial_regs(nu, &mut values);
    let word: Vec<(u32, u32)> = w.iter().map(|(a, d)| (m.letter_id(a), values.intern(d))).collect();
    m.accepts(&word, regs)
}
