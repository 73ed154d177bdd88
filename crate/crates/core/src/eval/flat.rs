use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};

use super::{DataGraph, Edge, NodeId, PairSet};
use crate::ast::{alpha_rename, Rewb, Valuation};
use crate::automata::{register_nfa, Interner, Machine, Regs};
use crate::error::Result;

/// A register NFA together with a graph whose letters and values are
/// resolved to the NFA's ids.
pub(crate) struct FlatRun<'g> {
    pub m: Machine,
    pub nodes: Vec<&'g NodeId>,
    /// `out[u]` lists `(letter id, value id, target, edge)`.
    pub out: Vec<Vec<(u32, u32, usize, &'g Edge)>>,
    pub regs0: Regs,
}

impl<'g> FlatRun<'g> {
    pub(crate) fn new(e: &Rewb, g: &'g DataGraph, nu: &Valuation) -> Result<Self> {
        nu.check_compatible(e)?;
        let m = Machine::new(&register_nfa(&alpha_rename(e))?);
        let mut values = Interner::default();
        let regs0 = m.initial_regs(nu, &mut values);
        let nodes: Vec<&NodeId> = g.nodes().iter().collect();
        let index: HashMap<&NodeId, usize> = nodes.iter().enumerate().map(|(i, n)| (*n, i)).collect();
        let mut out = vec![Vec::new(); nodes.len()];
        for e in g.edges() {
            out[index[&e.src]].push((m.letter_id(&e.letter), values.intern(&e.value), index[&e.dst], e));
        }
        Ok(FlatRun { m, nodes, out, regs0 })
    }

    pub(crate) fn index_of(&self, n: &NodeId) -> Option<usize> {
        self.nodes.binary_search(&n).ok()
    }

    /// Calls `f` with every configuration one edge away from
    /// `(u, q, regs)`, together with the edge taken.
    pub(crate) fn successors(
        &self,
        u: usize,
        q: usize,
        regs: &Regs,
        mut f: impl FnMut(usize, usize, Regs, &'g Edge),
    ) -> Result<()> {
        for &(a, d, v, edge) in &self.out[u] {
            self.m.step(q, regs, a, d, |q2, r2| f(v, q2, r2, edge))?;
        }
        Ok(())
    }

    /// Nodes `v` such that some path from `u` to `v` is accepted.
    pub(crate) fn reach_from(&self, u: usize) -> Result<BTreeSet<usize>> {
        let mut seen: HashSet<(usize, usize, Regs)> = HashSet::new();
        let mut todo = vec![(u, 0usize, self.regs0.clone())];
        seen.insert(todo[0].clone());
        let mut found = BTreeSet::new();
        while let Some((w, q, regs)) = todo.pop() {
            if self.m.is_final(q) {
                found.insert(w);
            }
            self.successors(w, q, &regs, |v, q2, r2, _| {
                let c = (v, q2, r2);
                if !seen.contains(&c) {
                    seen.insert(c.clone());
                    todo.push(c);
                }
            })?;
        }
        Ok(found)
    }

    pub(crate) fn pairs(&self, reach: impl Iterator<Item = (usize, BTreeSet<usize>)>) -> PairSet {
        reach.flat_map(|(u, vs)| vs.into_iter().map(move |v| (u, v))).map(|(u, v)| (self.nodes[u].clone(), self.nodes[v].clone())).collect()
    }
}

/// All pairs `(u, v)` joined by a data path whose label is in `L(e, nu)`.
pub fn eval_flat(e: &Rewb, g: &DataGraph, nu: &Valuation) -> Result<PairSet> {
    let run = FlatRun::new(e, g, nu)?;
    let mut reach = Vec::new();
    for u in 0..run.nodes.len() {
        reach.push((u, run.reach_from(u)?));
    }
    Ok(run.pairs(reach.into_iter()))
}

/// One shortest path from `u` to `v` whose label is in `L(e, nu)`, or
/// `None` if there is none. Unknown node names are an error.
pub fn witness_path(e: &Rewb, g: &DataGraph, nu: &Valuation, u: &NodeId, v: &NodeId) -> Result<Option<Vec<Edge>>> {
    let run = FlatRun::new(e, g, nu)?;
    let s = run.index_of(&g.node(u.as_str())?).expect("declared node");
    let t = run.index_of(&g.node(v.as_str())?).expect("declared node");
    type Config = (usize, usize, Regs);
    let start: Config = (s, 0, run.regs0.clone());
    let mut parent: HashMap<Config, Option<(Config, &Edge)>> = HashMap::new();
    parent.insert(start.clone(), None);
    let mut queue = VecDeque::from([start]);
    while let Some(c) = queue.pop_front() {
        if c.0 == t && run.m.is_final(c.1) {
            let mut path = Vec::new();
            let mut cur = &c;
            while let Some(Some((prev, edge))) = parent.get(cur) {
                path.push((*edge).clone());
                cur = prev;
            }
            path.reverse();
            return Ok(Some(path));
        }
        let mut next = Vec::new();
        run.successors(c.0, c.1, &c.2, |w, q, r, edge| next.push(((w, q, r), edge)))?;
        for (n, edge) in next {
            if !parent.contains_key(&n) {
                parent.insert(n.clone(), Some((c.clone(), edge)));
                queue.push_back(n);
            }
        }
    }
    Ok(None)
}

/// Whether some path from `u` to `v` has its label in `L(e, nu)`.
pub fn connected(e: &Rewb, g: &DataGraph, nu: &Valuation, u: &NodeId, v: &NodeId) -> Result<bool> {
    let run = FlatRun::new(e, g, nu)?;
    let s = run.index_of(&g.node(u.as_str())?).expect("declared node");
    let t = run.index_of(&g.node(v.as_str())?).expect("declared node");
    Ok(run.reach_from(s)?.contains(&t))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_expr, parse_graph, parse_valuation};

    fn flat(e: &str, g: &str, nu: &str) -> Vec<(String, String)> {
        let g = parse_graph(g).unwrap();
        eval_flat(&parse_expr(e).unwrap(), &g, &parse_valuation(nu).unwrap())
            .unwrap()
            .into_iter()
            .map(|(u, v)| (u.to_string(), v.to_string()))
            .collect()
    }

    fn p(u: &str, v: &str) -> (String, String) {
        (u.to_owned(), v.to_owned())
    }

    const BRANCH: &str = "edge u a 5 v\nedge v b 5 w\nedge v b 7 w2\n";

    #[test]
    fn examples() {
        assert_eq!(flat("a", "edge u a 5 v", ""), vec![p("u", "v")]);
        assert!(flat("a[x=]", "edge u a 5 v", "x=7").is_empty());
        assert_eq!(flat("a@x(b[x=])", BRANCH, ""), vec![p("u", "w")]);
    }

    #[test]
    fn empty_word_gives_loops() {
        assert_eq!(flat("a*", "edge u b 1 v", ""), vec![p("u", "u"), p("v", "v")]);
    }

    #[test]
    fn witnesses() {
        let g = parse_graph(BRANCH).unwrap();
        let e = parse_expr("a@x(b[x=])").unwrap();
        let nu = Valuation::new();
        let path = witness_path(&e, &g, &nu, &NodeId::lit("u"), &NodeId::lit("w")).unwrap().unwrap();
        assert_eq!(path, vec![Edge::new("u", "a", "5", "v"), Edge::new("v", "b", "5", "w")]);
        assert_eq!(witness_path(&e, &g, &nu, &NodeId::lit("u"), &NodeId::lit("w2")).unwrap(), None);
        assert!(witness_path(&e, &g, &nu, &NodeId::lit("u"), &NodeId::lit("nope")).is_err());
        assert!(connected(&e, &g, &nu, &NodeId::lit("u"), &NodeId::lit("w")).unwrap());
    }
}
