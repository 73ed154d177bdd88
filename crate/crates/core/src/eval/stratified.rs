use std::collections::{BTreeSet, HashMap, HashSet};
use std::rc::Rc;

use super::{DataGraph, Edge, NodeId, PairSet};
use crate::ast::{alpha_rename, classify, free_vars, Rewb, Valuation, Var};
use crate::automata::glushkov::Glushkov;
use crate::automata::{decompose, Piece, View};
use crate::error::Result;

/// Same answer as [`super::eval_flat`], computed level by level.
///
/// Each block is evaluated with its own hierarchical automaton. Sub-expression
/// labels are replaced by the pair sets of the sub-expressions, computed
/// recursively under the current valuation and memoized on the block and
/// the valuation restricted to the block's free variables. At an F-level
/// block the valuation is fixed and the automaton runs as a classical
/// product with the graph extended by these meta-edges; at an E-level
/// block the automaton is acyclic and bindings pick their value from the
/// edge they read.
pub fn eval_stratified(e: &Rewb, g: &DataGraph, nu: &Valuation) -> Result<PairSet> {
    nu.check_compatible(e)?;
    let e = alpha_rename(e);
    let nodes: Vec<&NodeId> = g.nodes().iter().collect();
    let index: HashMap<&NodeId, usize> = nodes.iter().enumerate().map(|(i, n)| (*n, i)).collect();
    let mut out = vec![Vec::new(); nodes.len()];
    for edge in g.edges() {
        out[index[&edge.src]].push((edge, index[&edge.dst]));
    }
    let mut ctx = Ctx { out, blocks: HashMap::new(), memo: HashMap::new() };
    let reach = ctx.pairs(&e, &nu.restrict(&free_vars(&e)))?;
    Ok(reach
        .iter()
        .enumerate()
        .flat_map(|(u, vs)| vs.iter().map(move |&v| (u, v)))
        .map(|(u, v)| (nodes[u].clone(), nodes[v].clone()))
        .collect())
}

type Reach = Rc<Vec<BTreeSet<usize>>>;

struct Block<'e> {
    free: BTreeSet<Var>,
    aut: Glushkov<Piece<'e>>,
}

struct Ctx<'e, 'g> {
    out: Vec<Vec<(&'g Edge, usize)>>,
    blocks: HashMap<*const Rewb, Rc<Block<'e>>>,
    memo: HashMap<(*const Rewb, Valuation), Reach>,
}

impl<'e> Ctx<'e, '_> {
    fn block(&mut self, e: &'e Rewb) -> Rc<Block<'e>> {
        self.blocks
            .entry(e as *const Rewb)
            .or_insert_with(|| {
                let aut = Glushkov::new(decompose(e, View::of(classify(e))));
                Rc::new(Block { free: free_vars(e), aut })
            })
            .clone()
    }

    /// For each node `u`, the nodes `v` with a path from `u` to `v` in
    /// `L(e, nu)`. `nu` is already restricted to the free variables of `e`.
    fn pairs(&mut self, e: &'e Rewb, nu: &Valuation) -> Result<Reach> {
        let key = (e as *const Rewb, nu.clone());
        if let Some(r) = self.memo.get(&key) {
            return Ok(r.clone());
        }
        let block = self.block(e);
        let n = self.out.len();
        let mut reach = vec![BTreeSet::new(); n];
        for (u, found) in reach.iter_mut().enumerate() {
            let start = (u, 0usize, nu.clone());
            let mut seen: HashSet<(usize, usize, Valuation)> = HashSet::from([start.clone()]);
            let mut todo = vec![start];
            while let Some((w, q, val)) = todo.pop() {
                if block.aut.finals[q] {
                    found.insert(w);
                }
                for &q2 in &block.aut.succ[q] {
                    let mut next = Vec::new();
                    match *block.aut.label(q2) {
                        Piece::Read(a, c) => {
                            for &(edge, v) in &self.out[w] {
                                if &edge.letter == a && c.map_or(Ok(true), |c| c.holds(&edge.value, &val))? {
                                    next.push((v, val.clone()));
                                }
                            }
                        }
                        Piece::BindRead(a, x) => {
                            for &(edge, v) in &self.out[w] {
                                if &edge.letter == a {
                                    next.push((v, val.with(x.clone(), edge.value.clone())));
                                }
                            }
                        }
                        Piece::Sub(s) => {
                            let free = self.block(s).free.clone();
                            let sub = self.pairs(s, &val.restrict(&free))?;
                            next.extend(sub[w].iter().map(|&v| (v, val.clone())));
                        }
                    }
                    for (v, val2) in next {
                        let c = (v, q2, val2);
                        if !seen.contains(&c) {
                            seen.insert(c.clone());
                            todo.push(c);
                        }
                    }
                }
            }
        }
        let reach = Rc::new(reach);
        self.memo.insert(key, reach.clone());
        Ok(reach)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eval::eval_flat;
    use crate::syntax::{parse_expr, parse_graph, parse_valuation};

    fn both(e: &str, g: &str, nu: &str) -> PairSet {
        let (e, g, nu) = (parse_expr(e).unwrap(), parse_graph(g).unwrap(), parse_valuation(nu).unwrap());
        let s = eval_stratified(&e, &g, &nu).unwrap();
        assert_eq!(s, eval_flat(&e, &g, &nu).unwrap());
        s
    }

    #[test]
    fn agrees_on_flat_examples() {
        both("a", "edge u a 5 v", "");
        both("a[x=]", "edge u a 5 v", "x=7");
        let r = both("a@x(b[x=])", "edge u a 5 v\nedge v b 5 w\nedge v b 7 w2\n", "");
        assert_eq!(r.len(), 1);
    }

    #[test]
    fn alternating_cycle() {
        let g = "edge n0 a 1 n1\nedge n1 b 1 n2\nedge n2 a 2 n3\nedge n3 b 2 n0\n";
        let r = both("(a@x(b[x=]))*", g, "");
        let pairs: Vec<String> = r.iter().map(|(u, v)| format!("{u}{v}")).collect();
        assert_eq!(pairs, vec!["n0n0", "n0n2", "n1n1", "n2n0", "n2n2", "n3n3"]);
    }

    #[test]
    fn nested_levels() {
        let g = "edge n0 c 9 n1\nedge n1 a 1 n2\nedge n2 b 1 n3\nedge n3 d 9 n4\nedge n3 d 8 n4\n";
        both("c@y((a@x(b[x=]))*.d[y=])", g, "");
        both("(c@y((a@x(b[x=]))*.d[y!=]))*", g, "");
    }
}
