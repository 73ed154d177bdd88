//! Randomized agreement check between the three graph engines.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::ast::{classify, free_vars, Rewb, Valuation};
use crate::error::Result;
use crate::eval::{eval_flat, eval_oracle, eval_stratified, print_pairs, DataGraph, PairSet};
use crate::random::{random_expr, random_graph, random_valuation, GenConfig};
use crate::syntax::{print_expr, print_graph, print_valuation};

/// An engine under test.
pub type Engine = fn(&Rewb, &DataGraph, &Valuation) -> Result<PairSet>;

fn oracle_default(e: &Rewb, g: &DataGraph, nu: &Valuation) -> Result<PairSet> {
    eval_oracle(e, g, nu, None)
}

/// The flat, stratified and oracle engines, in that order.
pub fn default_engines() -> Vec<(&'static str, Engine)> {
    vec![("flat", eval_flat as Engine), ("stratified", eval_stratified), ("oracle", oracle_default)]
}

/// One query instance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Case {
    pub expr: Rewb,
    pub graph: DataGraph,
    pub valuation: Valuation,
}

impl fmt::Display for Case {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "expr: {}", print_expr(&self.expr))?;
        writeln!(f, "valuation: {}", print_valuation(&self.valuation))?;
        write!(f, "graph:\n{}", print_graph(&self.graph))
    }
}

/// `count` instances with graphs of at most 5 nodes, 10 edges and 3
/// values, and expressions of at most 8 nodes over 2 variables with
/// E-level at most 2. The same seed gives the same cases.
pub fn generate_cases(seed: u64, count: usize) -> Vec<Case> {
    let cfg = GenConfig::small();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let expr = random_expr(&mut rng, &cfg);
        if classify(&expr).e_level > 2 {
            continue;
        }
        let nodes = rng.gen_range(1..=5);
        let graph = random_graph(&mut rng, &cfg, nodes, 10);
        let valuation = random_valuation(&mut rng, &cfg, &free_vars(&expr));
        out.push(Case { expr, graph, valuation });
    }
    out
}

/// The engines' answers on a case where they differ.
#[derive(Debug)]
pub struct Disagreement {
    pub index: usize,
    pub case: Case,
    pub outputs: Vec<(&'static str, String)>,
}

impl fmt::Display for Disagreement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "case {} disagrees", self.index)?;
        write!(f, "{}", self.case)?;
        for (name, out) in &self.outputs {
            writeln!(f, "{name}:")?;
            writeln!(f, "{out}")?;
        }
        Ok(())
    }
}

#[derive(Debug)]
pub struct SelftestReport {
    pub cases: usize,
    pub disagreement: Option<Disagreement>,
}

impl SelftestReport {
    pub fn passed(&self) -> bool {
        self.disagreement.is_none()
    }
}

impl fmt::Display for SelftestReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.disagreement {
            None => write!(f, "OK: {} cases", self.cases),
            Some(d) => write!(f, "FAILED: {d}"),
        }
    }
}

/// Runs [`default_engines`] on [`generate_cases`].
pub fn selftest(seed: u64, cases: usize) -> SelftestReport {
    selftest_with(seed, cases, &default_engines())
}

/// Runs `engines` on each case and stops at the first case where their
/// results (answers or errors) differ.
pub fn selftest_with(seed: u64, cases: usize, engines: &[(&'static str, Engine)]) -> SelftestReport {
    for (index, case) in generate_cases(seed, cases).into_iter().enumerate() {
        let outputs: Vec<(&'static str, String)> = engines
            .iter()
            .map(|(name, run)| {
                let text = match run(&case.expr, &case.graph, &case.valuation) {
                    Ok(pairs) => print_pairs(&pairs),
                    Err(e) => format!("error: {e}"),
                };
                (*name, text)
            })
            .collect();
        if outputs.windows(2).any(|w| w[0].1 != w[1].1) {
            return SelftestReport { cases: index + 1, disagreement: Some(Disagreement { index, case, outputs }) };
        }
    }
    SelftestReport { cases, disagreement: None }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn broken(e: &Rewb, g: &DataGraph, nu: &Valuation) -> Result<PairSet> {
        let mut pairs = eval_flat(e, g, nu)?;
        pairs.pop_first();
        Ok(pairs)
    }

    #[test]
    fn engines_agree() {
        let report = selftest(0, 40);
        assert!(report.passed(), "{report}");
        assert_eq!(report.to_string(), "OK: 40 cases");
    }

    #[test]
    fn injected_fault_is_reported() {
        let engines = [("flat", eval_flat as Engine), ("broken", broken)];
        let report = selftest_with(1, 50, &engines);
        let d = report.disagreement.expect("the broken engine drops a pair");
        assert!(d.to_string().contains("expr: "));
    }

    #[test]
    fn cases_are_reproducible() {
        assert_eq!(generate_cases(5, 10), generate_cases(5, 10));
        assert!(generate_cases(5, 30).iter().all(|c| c.graph.node_count() <= 5 && c.expr.size() <= 8));
    }
}
