use std::collections::{BTreeSet, HashSet};

use super::flat::FlatRun;
use super::{DataGraph, PairSet};
use crate::ast::{alpha_rename, classify, Rewb, Valuation};
use crate::automata::{automaton_size, Regs};
use crate::error::{Error, Result};

/// Default cap on the number of distinct path classes explored by
/// [`eval_oracle`].
pub const DEFAULT_PATH_BUDGET: usize = 1_000_000;

/// The short-witness bound `(k^2 n)^i`: `k` is the largest automaton size
/// over sub-expressions of the alpha-renamed `e`, `n` the number of nodes
/// and `i` the E-level of `e`. Saturates at `usize::MAX`.
pub fn default_max_len(e: &Rewb, g: &DataGraph) -> usize {
    let renamed = alpha_rename(e);
    let k = renamed.subexpressions().into_iter().map(automaton_size).max().unwrap_or(1);
    let base = k.saturating_mul(k).saturating_mul(g.node_count());
    let i = classify(e).e_level;
    (0..i).fold(1usize, |acc, _| acc.saturating_mul(base))
}

/// Pairs joined by a data path of length at most `max_len` (default
/// [`default_max_len`]) whose label is in `L(e, nu)`.
///
/// Paths are explored breadth-first from every node. Two path prefixes
/// that end in the same node with the same set of automaton
/// configurations have the same future, so only one representative per
/// such class is extended; the answer equals the one obtained by testing
/// every path separately. Exceeding [`DEFAULT_PATH_BUDGET`] classes is an
/// error.
pub fn eval_oracle(e: &Rewb, g: &DataGraph, nu: &Valuation, max_len: Option<usize>) -> Result<PairSet> {
    eval_oracle_with_budget(e, g, nu, max_len, DEFAULT_PATH_BUDGET)
}

pub fn eval_oracle_with_budget(
    e: &Rewb,
    g: &DataGraph,
    nu: &Valuation,
    max_len: Option<usize>,
    budget: usize,
) -> Result<PairSet> {
    let run = FlatRun::new(e, g, nu)?;
    let max_len = max_len.unwrap_or_else(|| default_max_len(e, g));
    let mut explored = 0usize;
    let mut reach = Vec::new();
    for u in 0..run.nodes.len() {
        type Class = (usize, Vec<(usize, Regs)>);
        let start: Class = (u, vec![(0, run.regs0.clone())]);
        let mut seen: HashSet<Class> = HashSet::from([start.clone()]);
        let mut layer = vec![start];
        let mut found = BTreeSet::new();
        let mut len = 0;
        loop {
            for (v, configs) in &layer {
                if configs.iter().any(|(q, _)| run.m.is_final(*q)) {
                    found.insert(*v);
                }
            }
            if len == max_len || layer.is_empty() {
                break;
            }
            len += 1;
            let mut next = Vec::new();
            for (w, configs) in &layer {
                for &(a, d, v, _) in &run.out[*w] {
                    let mut step = BTreeSet::new();
                    for (q, regs) in configs {
                        run.m.step(*q, regs, a, d, |q2, r2| {
                            step.insert((q2, r2));
                        })?;
                    }
                    if step.is_empty() {
                        continue;
                    }
                    let class: Class = (v, step.into_iter().collect());
                    if !seen.contains(&class) {
                        explored += 1;
                        if explored > budget {
                            return Err(Error::Budget(format!("path exploration exceeded {budget} path classes")));
                        }
                        seen.insert(class.clone());
                        next.push(class);
                    }
                }
            }
            layer = next;
        }
        reach.push((u, found));
    }
    Ok(run.pairs(reach.into_iter()))
}
