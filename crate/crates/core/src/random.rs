//! Seeded generators for expressions, words, graphs and valuations, used by
//! the self-test and the property tests.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::ast::{Condition, DataValue, Letter, Rewb, Valuation, Var};
use crate::eval::{DataGraph, DataWord, Edge, NodeId};

/// The pools the generators draw names from.
#[derive(Clone, Debug)]
pub struct GenConfig {
    /// Upper bound on the number of expression nodes.
    pub max_size: usize,
    pub letters: Vec<Letter>,
    pub vars: Vec<Var>,
    pub values: Vec<DataValue>,
}

impl GenConfig {
    pub fn new(max_size: usize, letters: &[&str], vars: &[&str], values: &[&str]) -> Self {
        GenConfig {
            max_size,
            letters: letters.iter().map(|a| Letter::lit(a)).collect(),
            vars: vars.iter().map(|x| Var::lit(x)).collect(),
            values: values.iter().map(|d| DataValue::lit(d)).collect(),
        }
    }

    /// Expressions of at most 8 nodes over `a, b`, variables `x, y` and
    /// values `1, 2, 3`.
    pub fn small() -> Self {
        GenConfig::new(8, &["a", "b"], &["x", "y"], &["1", "2", "3"])
    }
}

/// A random expression with between 1 and `cfg.max_size` nodes.
pub fn random_expr(rng: &mut impl Rng, cfg: &GenConfig) -> Rewb {
    let size = rng.gen_range(1..=cfg.max_size.max(1));
    expr_of_size(rng, cfg, size)
}

/// A random expression with exactly `size` nodes.
pub fn expr_of_size(rng: &mut impl Rng, cfg: &GenConfig, size: usize) -> Rewb {
    let letter = |rng: &mut _| cfg.letters.choose(rng).expect("letters").as_str().to_owned();
    match size {
        0 | 1 => match rng.gen_range(0..6) {
            0 => Rewb::Eps,
            1 | 2 if !cfg.vars.is_empty() => Rewb::test(&letter(rng), random_condition(rng, &cfg.vars, 2)),
            _ => Rewb::atom(&letter(rng)),
        },
        2 => {
            let body = expr_of_size(rng, cfg, 1);
            unary(rng, cfg, body)
        }
        _ => {
            if rng.gen_bool(0.3) {
                let body = expr_of_size(rng, cfg, size - 1);
                unary(rng, cfg, body)
            } else {
                let left = rng.gen_range(1..size - 1);
                let (l, r) = (expr_of_size(rng, cfg, left), expr_of_size(rng, cfg, size - 1 - left));
                if rng.gen_bool(0.5) {
                    l.union(r)
                } else {
                    l.concat(r)
                }
            }
        }
    }
}

fn unary(rng: &mut impl Rng, cfg: &GenConfig, body: Rewb) -> Rewb {
    match cfg.vars.choose(rng) {
        Some(x) if rng.gen_bool(0.5) => {
            let a = cfg.letters.choose(rng).expect("letters");
            Rewb::Bind(a.clone(), x.clone(), Box::new(body))
        }
        _ => body.star(),
    }
}

/// A random condition of nesting depth at most `depth` over `vars`.
pub fn random_condition(rng: &mut impl Rng, vars: &[Var], depth: usize) -> Condition {
    let pick = |rng: &mut dyn rand::RngCore| vars.choose(rng).expect("variables").clone();
    let choice = if depth == 0 { rng.gen_range(0..2) } else { rng.gen_range(0..5) };
    match choice {
        0 => Condition::Eq(pick(rng)),
        1 => Condition::Neq(pick(rng)),
        2 => random_condition(rng, vars, depth - 1).not(),
        3 => random_condition(rng, vars, depth - 1).and(random_condition(rng, vars, depth - 1)),
        _ => random_condition(rng, vars, depth - 1).or(random_condition(rng, vars, depth - 1)),
    }
}

/// A random word of length `0..=max_len`.
pub fn random_word(rng: &mut impl Rng, cfg: &GenConfig, max_len: usize) -> DataWord {
    let len = rng.gen_range(0..=max_len);
    let mut w = DataWord::new();
    for _ in 0..len {
        w.push(cfg.letters.choose(rng).expect("letters").clone(), cfg.values.choose(rng).expect("values").clone());
    }
    w
}

/// A random graph on nodes `n0 … n{nodes-1}` with up to `max_edges` edges.
pub fn random_graph(rng: &mut impl Rng, cfg: &GenConfig, nodes: usize, max_edges: usize) -> DataGraph {
    let mut g = DataGraph::new();
    let names: Vec<NodeId> = (0..nodes).map(|i| NodeId::lit(&format!("n{i}"))).collect();
    for n in &names {
        g.add_node(n.clone());
    }
    if nodes == 0 {
        return g;
    }
    for _ in 0..rng.gen_range(0..=max_edges) {
        g.add_edge(Edge {
            src: names.choose(rng).expect("nodes").clone(),
            letter: cfg.letters.choose(rng).expect("letters").clone(),
            value: cfg.values.choose(rng).expect("values").clone(),
            dst: names.choose(rng).expect("nodes").clone(),
        });
    }
    g
}

/// Assigns each of `vars` a value from the pool.
pub fn random_valuation<'a>(rng: &mut impl Rng, cfg: &GenConfig, vars: impl IntoIterator<Item = &'a Var>) -> Valuation {
    vars.into_iter().map(|x| (x.clone(), cfg.values.choose(rng).expect("values").clone())).collect()
}
