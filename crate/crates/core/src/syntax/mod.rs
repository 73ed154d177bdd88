//! Concrete text syntax for expressions and the on-disk formats for data
//! words, data graphs and valuations.

mod expr;
mod formats;

pub use expr::{parse_expr, print_expr, print_condition};
pub use formats::{parse_graph, parse_valuation, parse_word, print_graph, print_valuation, print_word};
