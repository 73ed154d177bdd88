//! Reduction gadgets: formula graphs and the evaluation query, the SAT
//! reduction, existential and universal compositions, the weighted
//! quantified satisfiability reduction, and the PCP expression `Δ` with
//! its word encodings.

mod formula;
mod pcp;
mod quant;

use std::collections::BTreeSet;

pub use formula::{brute_formula, eval_expr, formula_graph, parse_nnf, sat_reduction, NnfFormula, STAR};
pub use pcp::{
    pcp_check_solution, pcp_delta, pcp_delta_with_budget, pcp_encode, pcp_encode_unchecked, pcp_mutate, PcpInstance,
    PcpMutation, DEFAULT_COMPLEMENT_STATES,
};
pub use quant::{brute_wqsat, exists_compose, exists_compose_trusted, forall_compose, wqsat_reduction, Quantifier, WqsatInstance};

use crate::ast::{free_vars, DataValue, Letter, Rewb, Valuation, Var};
use crate::error::{Error, Result};
use crate::eval::{connected, DataGraph, Edge, NodeId};

/// A reduction's output: a graph with designated source and sink, and the
/// query whose source–sink connectivity encodes the reduced problem.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GadgetOutput {
    pub graph: DataGraph,
    pub expr: Rewb,
    pub free_vars: Vec<Var>,
}

impl GadgetOutput {
    pub fn new(graph: DataGraph, expr: Rewb) -> Result<Self> {
        if graph.source.is_none() || graph.sink.is_none() {
            return Err(Error::invalid("gadget graphs need a source and a sink"));
        }
        let free_vars = free_vars(&expr).into_iter().collect();
        Ok(GadgetOutput { graph, expr, free_vars })
    }

    pub fn source(&self) -> &NodeId {
        self.graph.source.as_ref().expect("checked on construction")
    }

    pub fn sink(&self) -> &NodeId {
        self.graph.sink.as_ref().expect("checked on construction")
    }

    /// Whether some path from source to sink spells a word of `L(expr, nu)`.
    pub fn connected(&self, nu: &Valuation) -> Result<bool> {
        connected(&self.expr, &self.graph, nu, self.source(), self.sink())
    }

    /// `source <id> / sink <id> / free-vars <x,…>`
    pub fn manifest(&self) -> String {
        let vars: Vec<&str> = self.free_vars.iter().map(Var::as_str).collect();
        format!("source {} / sink {} / free-vars {}", self.source(), self.sink(), vars.join(","))
    }
}

/// Hands out node names `<prefix>0`, `<prefix>1`, … and adds edges.
pub(crate) struct NodeNamer {
    prefix: String,
    next: usize,
}

impl NodeNamer {
    pub(crate) fn new(prefix: &str) -> Self {
        NodeNamer { prefix: prefix.to_owned(), next: 0 }
    }

    pub(crate) fn fresh(&mut self) -> NodeId {
        let n = NodeId::lit(&format!("{}{}", self.prefix, self.next));
        self.next += 1;
        n
    }

    pub(crate) fn edge(&self, g: &mut DataGraph, src: &NodeId, letter: &str, value: &str, dst: &NodeId) {
        g.add_edge(Edge { src: src.clone(), letter: Letter::lit(letter), value: DataValue::lit(value), dst: dst.clone() });
    }
}

/// Fails unless none of `letters` occurs in `g` or `e`.
pub(crate) fn check_fresh_letters(letters: &[String], g: &DataGraph, e: &Rewb) -> Result<()> {
    let used: BTreeSet<String> =
        g.letters().into_iter().map(|l| l.to_string()).chain(e.letters().into_iter().map(|l| l.to_string())).collect();
    match letters.iter().find(|l| used.contains(*l)) {
        Some(l) => Err(Error::invalid(format!("letter `{l}` is already used by the graph or the expression"))),
        None => Ok(()),
    }
}

/// Fails if any of `vars` is bound inside `e`.
pub(crate) fn check_unbound(vars: &[String], e: &Rewb) -> Result<()> {
    match e.binders().into_iter().find(|x| vars.iter().any(|v| v == x.as_str())) {
        Some(x) => Err(Error::invalid(format!("variable `{x}` is bound inside the expression"))),
        None => Ok(()),
    }
}

/// Fails if any of the names is already a node of `g`.
pub(crate) fn check_fresh_nodes<'a>(names: impl IntoIterator<Item = &'a NodeId>, g: &DataGraph) -> Result<()> {
    match names.into_iter().find(|n| g.contains(n)) {
        Some(n) => Err(Error::invalid(format!("node `{n}` already exists in the graph"))),
        None => Ok(()),
    }
}
