use std::collections::BTreeSet;
use std::fmt;

use super::formula::{check_atom, check_atoms_in};
use super::{check_fresh_letters, check_fresh_nodes, check_unbound, eval_expr, formula_graph, GadgetOutput, NodeNamer, NnfFormula, STAR};
use crate::ast::{free_vars, indistinguishable_sampled, Condition, Rewb, Var};
use crate::error::{Error, Result, SourceError};
use crate::eval::{DataGraph, NodeId};

fn var(i: usize) -> String {
    format!("x_{i}")
}

fn endpoints(g: &DataGraph) -> Result<(NodeId, NodeId)> {
    match (&g.source, &g.sink) {
        (Some(s), Some(t)) => Ok((s.clone(), t.clone())),
        _ => Err(Error::invalid("the inner graph needs a source and a sink")),
    }
}

/// `G[∃k/PR] ∘ G` and `e[∃k] ∘ e`: a chain `(letter, pr_1) … (letter, pr_n)`
/// in front of `g`, and binders for `x_{off+1} … x_{off+k}` separated by
/// `letter*`. Choosing `k` chain edges in order picks `k` distinct atoms.
fn exists_gadget(k: usize, pr: &[String], g: &DataGraph, e: &Rewb, letter: &str, off: usize, tag: &str) -> Result<(DataGraph, Rewb)> {
    let (source, _) = endpoints(g)?;
    let mut out = g.clone();
    let mut names = NodeNamer::new(tag);
    let chain: Vec<NodeId> = (0..pr.len()).map(|_| names.fresh()).collect();
    check_fresh_nodes(&chain, g)?;
    for (m, atom) in pr.iter().enumerate() {
        let dst = chain.get(m + 1).unwrap_or(&source).clone();
        names.edge(&mut out, &chain[m], letter, atom, &dst);
    }
    if let Some(first) = chain.first() {
        out.source = Some(first.clone());
    }
    let filler = || Rewb::atom(letter).star();
    let mut expr = filler().concat(e.clone());
    for j in (1..=k).rev() {
        expr = filler().concat(Rewb::bind(letter, &var(off + j), expr));
    }
    Ok((out, expr))
}

/// Letters used by one universal block: `a_i, b_i, c_i` for each of its
/// variables (indexed globally) plus one `skip` letter.
struct ForallLetters {
    skip: String,
    abc: Vec<[String; 3]>,
}

impl ForallLetters {
    fn new(skip: String, first: usize, k: usize) -> Self {
        let abc = (first..first + k).map(|m| [format!("a{m}"), format!("b{m}"), format!("c{m}")]).collect();
        ForallLetters { skip, abc }
    }

    fn all(&self) -> Vec<String> {
        std::iter::once(self.skip.clone()).chain(self.abc.iter().flatten().cloned()).collect()
    }
}

/// The universal gadgets `G_0 … G_k` and queries `e^0 … e^k`. Level `i`
/// walks through `G_{i-1}` once per atom, in order, rebinding `x_i` each
/// time; the `skip` edges let non-injective valuations through for free.
fn forall_gadget(
    k: usize,
    pr: &[String],
    g: &DataGraph,
    e: &Rewb,
    letters: &ForallLetters,
    off: usize,
    tag: &str,
) -> Result<(DataGraph, Rewb)> {
    let (mut source, mut sink) = endpoints(g)?;
    if pr.is_empty() {
        return Err(Error::invalid("a universal block needs at least one atom"));
    }
    let mut out = g.clone();
    let mut names = NodeNamer::new(tag);
    for atom in pr {
        names.edge(&mut out, &source, &letters.skip, atom, &sink);
    }
    let mut expr = e.clone();
    for i in 1..=k {
        for j in i + 1..=k {
            let both = Condition::eq(&var(off + i)).and(Condition::eq(&var(off + j)));
            expr = expr.union(Rewb::test(&letters.skip, both));
        }
    }
    for i in 1..=k {
        let [a, b, c] = &letters.abc[i - 1];
        let n = pr.len();
        let src = names.fresh();
        let ins: Vec<NodeId> = (0..n).map(|_| names.fresh()).collect();
        let outs: Vec<NodeId> = (0..n).map(|_| names.fresh()).collect();
        let snk = names.fresh();
        check_fresh_nodes(ins.iter().chain(&outs).chain([&src, &snk]), g)?;
        names.edge(&mut out, &src, b, STAR, &ins[0]);
        for (m, atom) in pr.iter().enumerate() {
            names.edge(&mut out, &ins[m], a, atom, &source);
            names.edge(&mut out, &sink, a, atom, &outs[m]);
            let next = ins.get(m + 1).unwrap_or(&snk);
            names.edge(&mut out, &outs[m], c, STAR, next);
        }
        let x = var(off + i);
        let round = Rewb::bind(a, &x, expr.concat(Rewb::test(a, Condition::eq(&x)))).concat(Rewb::atom(c));
        expr = Rewb::atom(b).concat(round.star());
        source = src;
        sink = snk;
    }
    out.source = Some(source);
    out.sink = Some(sink);
    Ok((out, expr))
}

fn check_inner(k: usize, g: &DataGraph, e: &Rewb, letters: &[String]) -> Result<Vec<String>> {
    endpoints(g)?;
    check_fresh_letters(letters, g, e)?;
    let vars: Vec<String> = (1..=k).map(var).collect();
    check_unbound(&vars, e)?;
    Ok(vars)
}

/// Existential composition with chain letter `a1` and variables
/// `x_1 … x_k`. Source and sink are connected under `ν` iff some injective
/// choice of `x_1 … x_k` in `pr` connects `g`'s source and sink in `L(e)`.
///
/// The variables that are free in `e` are checked for indistinguishability
/// by sampling; [`exists_compose_trusted`] skips that check.
pub fn exists_compose(k: usize, pr: &[String], g: &DataGraph, e: &Rewb) -> Result<GadgetOutput> {
    let vars = check_inner(k, g, e, &["a1".to_owned()])?;
    let fv = free_vars(e);
    let free: Vec<Var> = vars.iter().map(|v| Var::lit(v)).filter(|v| fv.contains(v)).collect();
    if free.len() >= 2 && !indistinguishable_sampled(e, &free, 200, 0)? {
        return Err(Error::invalid("the composed variables are distinguishable in the inner expression"));
    }
    exists_compose_trusted(k, pr, g, e)
}

/// [`exists_compose`] without the indistinguishability check.
pub fn exists_compose_trusted(k: usize, pr: &[String], g: &DataGraph, e: &Rewb) -> Result<GadgetOutput> {
    check_inner(k, g, e, &["a1".to_owned()])?;
    pr.iter().try_for_each(|a| check_atom(a))?;
    let (g, e) = exists_gadget(k, pr, g, e, "a1", 0, "ex")?;
    GadgetOutput::new(g, e)
}

/// Universal composition with letters `skip, a_i, b_i, c_i` and variables
/// `x_1 … x_k`. Source and sink are connected under `ν` iff every injective
/// choice of `x_1 … x_k` in `pr` connects `g`'s source and sink in `L(e)`.
pub fn forall_compose(k: usize, pr: &[String], g: &DataGraph, e: &Rewb) -> Result<GadgetOutput> {
    let letters = ForallLetters::new("skip".to_owned(), 1, k);
    check_inner(k, g, e, &letters.all())?;
    pr.iter().try_for_each(|a| check_atom(a))?;
    let (g, e) = forall_gadget(k, pr, g, e, &letters, 0, "fa")?;
    GadgetOutput::new(g, e)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Quantifier {
    Exists,
    Forall,
}

/// `Q_1^{k_1} PR_1 … Q_ℓ^{k_ℓ} PR_ℓ. φ`, quantifiers alternating from `∃`,
/// where `∃^k PR` ranges over the assignments making exactly `k` atoms of
/// `PR` true.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WqsatInstance {
    formula: NnfFormula,
    blocks: Vec<Vec<String>>,
    weights: Vec<usize>,
}

impl WqsatInstance {
    pub fn new(formula: NnfFormula, blocks: Vec<Vec<String>>, weights: Vec<usize>) -> Result<Self> {
        if blocks.is_empty() || blocks.len() != weights.len() {
            return Err(Error::invalid("need at least one block and exactly one weight per block"));
        }
        let mut seen = BTreeSet::new();
        for (block, &k) in blocks.iter().zip(&weights) {
            if block.is_empty() {
                return Err(Error::invalid("blocks must be nonempty"));
            }
            if k > block.len() {
                return Err(Error::invalid(format!("weight {k} exceeds the block size {}", block.len())));
            }
            for a in block {
                if !seen.insert(a.clone()) {
                    return Err(Error::invalid(format!("atom `{a}` occurs in more than one block")));
                }
            }
        }
        let all: Vec<String> = seen.into_iter().collect();
        check_atoms_in(&formula, &all)?;
        if weights.iter().sum::<usize>() == 0 {
            return Err(Error::invalid("the total weight must be at least 1"));
        }
        Ok(WqsatInstance { formula, blocks, weights })
    }

    /// Parses blocks written `E1:pr1,pr2;A1:pr3,pr4`: a quantifier letter
    /// (`E` or `A`, alternating from `E`), the weight, and the atoms.
    pub fn parse(formula: &str, blocks: &str) -> Result<Self> {
        let formula = super::parse_nnf(formula)?;
        let mut bs = Vec::new();
        let mut ws = Vec::new();
        let mut offset = 0;
        for (j, part) in blocks.split(';').enumerate() {
            let col = offset + 1;
            offset += part.len() + 1;
            let err = |m: String| Error::Parse(SourceError::new(m, 1, col));
            let (head, atoms) = part.trim().split_once(':').ok_or_else(|| err(format!("expected `E<k>:atoms`, found `{part}`")))?;
            let expected = if j % 2 == 0 { 'E' } else { 'A' };
            let weight = head.strip_prefix(expected).ok_or_else(|| err(format!("block {} must start with `{expected}`", j + 1)))?;
            ws.push(weight.parse().map_err(|_| err(format!("bad weight `{weight}`")))?);
            bs.push(atoms.split(',').map(|a| a.trim().to_owned()).filter(|a| !a.is_empty()).collect());
        }
        WqsatInstance::new(formula, bs, ws)
    }

    pub fn formula(&self) -> &NnfFormula {
        &self.formula
    }

    pub fn blocks(&self) -> &[Vec<String>] {
        &self.blocks
    }

    pub fn weights(&self) -> &[usize] {
        &self.weights
    }

    pub fn quantifier(&self, j: usize) -> Quantifier {
        if j % 2 == 0 {
            Quantifier::Exists
        } else {
            Quantifier::Forall
        }
    }
}

impl fmt::Display for WqsatInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (j, (block, k)) in self.blocks.iter().zip(&self.weights).enumerate() {
            let q = if self.quantifier(j) == Quantifier::Exists { 'E' } else { 'A' };
            write!(f, "{}{q}{k}:{}", if j > 0 { ";" } else { "" }, block.join(","))?;
        }
        write!(f, " . {}", self.formula)
    }
}

/// Every `k`-element subset of `items`, in lexicographic order.
pub(crate) fn subsets<T: Clone>(items: &[T], k: usize) -> Vec<Vec<T>> {
    if k == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for (i, first) in items.iter().enumerate() {
        for mut rest in subsets(&items[i + 1..], k - 1) {
            rest.insert(0, first.clone());
            out.push(rest);
        }
    }
    out
}

/// Expands the quantifier prefix by enumeration.
pub fn brute_wqsat(inst: &WqsatInstance) -> bool {
    fn go(inst: &WqsatInstance, j: usize, truth: &mut BTreeSet<String>) -> bool {
        if j == inst.blocks.len() {
            return super::brute_formula(&inst.formula, truth);
        }
        let mut results = subsets(&inst.blocks[j], inst.weights[j]).into_iter().map(|chosen| {
            let mut t = truth.clone();
            t.extend(chosen);
            go(inst, j + 1, &mut t)
        });
        match inst.quantifier(j) {
            Quantifier::Exists => results.any(|r| r),
            Quantifier::Forall => results.all(|r| r),
        }
    }
    go(inst, 0, &mut BTreeSet::new())
}

/// Composes the gadgets right to left over the formula graph and the
/// evaluation query for `k_1 + … + k_ℓ` variables. Block `j` owns the
/// variables after those of earlier blocks and its own letters
/// (`ex<j>` for an existential chain, `a<m>, b<m>, c<m>, skip<j>` for a
/// universal block), so the levels never share a letter.
pub fn wqsat_reduction(inst: &WqsatInstance) -> Result<GadgetOutput> {
    let all: Vec<String> = inst.blocks.iter().flatten().cloned().collect();
    let total: usize = inst.weights.iter().sum();
    let mut g = formula_graph(&inst.formula, &all)?;
    let mut e = eval_expr(total)?;
    for j in (0..inst.blocks.len()).rev() {
        let off: usize = inst.weights[..j].iter().sum();
        let (k, pr, tag) = (inst.weights[j], &inst.blocks[j], format!("q{}_", j + 1));
        (g, e) = match inst.quantifier(j) {
            Quantifier::Exists => {
                let letter = format!("ex{}", j + 1);
                check_fresh_letters(std::slice::from_ref(&letter), &g, &e)?;
                exists_gadget(k, pr, &g, &e, &letter, off, &tag)?
            }
            Quantifier::Forall => {
                let letters = ForallLetters::new(format!("skip{}", j + 1), off + 1, k);
                check_fresh_letters(&letters.all(), &g, &e)?;
                forall_gadget(k, pr, &g, &e, &letters, off, &tag)?
            }
        };
    }
    GadgetOutput::new(g, e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ast::{classify, DataValue, Valuation};
    use crate::eval::connected;

    fn atoms(names: &[&str]) -> Vec<String> {
        names.iter().map(|s| s.to_string()).collect()
    }

    fn inner(phi: &str, pr: &[&str]) -> DataGraph {
        formula_graph(&super::super::parse_nnf(phi).unwrap(), &atoms(pr)).unwrap()
    }

    /// Connectivity of the inner gadget under every injective choice.
    fn injective_outcomes(k: usize, pr: &[String], g: &DataGraph, e: &Rewb) -> Vec<bool> {
        let mut out = Vec::new();
        let mut choice = Vec::new();
        fn rec(k: usize, pr: &[String], g: &DataGraph, e: &Rewb, choice: &mut Vec<String>, out: &mut Vec<bool>) {
            if choice.len() == k {
                let nu: Valuation = choice.iter().enumerate().map(|(i, d)| (Var::lit(&var(i + 1)), DataValue::lit(d))).collect();
                out.push(connected(e, g, &nu, g.source.as_ref().unwrap(), g.sink.as_ref().unwrap()).unwrap());
                return;
            }
            for d in pr {
                if !choice.contains(d) {
                    choice.push(d.clone());
                    rec(k, pr, g, e, choice, out);
                    choice.pop();
                }
            }
        }
        rec(k, pr, g, e, &mut choice, &mut out);
        out
    }

    #[test]
    fn exists_examples() {
        let pr = atoms(&["pr1", "pr2"]);
        let g = inner("pr2", &["pr1", "pr2"]);
        let e = eval_expr(1).unwrap();
        let out = exists_compose(1, &pr, &g, &e).unwrap();
        assert!(out.connected(&Valuation::new()).unwrap());
        assert!(out.free_vars.is_empty());
        assert_eq!(injective_outcomes(1, &pr, &g, &e), vec![false, true]);

        let g1 = inner("pr1", &["pr1"]);
        let out = exists_compose(2, &atoms(&["pr1"]), &g1, &eval_expr(2).unwrap()).unwrap();
        assert!(!out.connected(&Valuation::new()).unwrap());
    }

    #[test]
    fn exists_size_independent_of_atoms() {
        let e = eval_expr(2).unwrap();
        let g = inner("pr1", &["pr1"]);
        let small = exists_compose(2, &atoms(&["pr1", "pr2"]), &g, &e).unwrap();
        let large = exists_compose(2, &atoms(&["pr1", "pr2", "pr3", "pr4", "pr5"]), &g, &e).unwrap();
        assert_eq!(small.expr.size(), large.expr.size());
    }

    #[test]
    fn forall_examples() {
        let pr = atoms(&["pr1", "pr2"]);
        let e = eval_expr(1).unwrap();
        let both = forall_compose(1, &pr, &inner("pr1 | pr2", &["pr1", "pr2"]), &e).unwrap();
        assert!(both.connected(&Valuation::new()).unwrap());
        let one = forall_compose(1, &pr, &inner("pr1", &["pr1", "pr2"]), &e).unwrap();
        assert!(!one.connected(&Valuation::new()).unwrap());
    }

    #[test]
    fn forall_level() {
        for k in 1..=3 {
            let pr: Vec<String> = (1..=k).map(|i| format!("pr{i}")).collect();
            let g = formula_graph(&NnfFormula::pos("pr1"), &pr).unwrap();
            let out = forall_compose(k, &pr, &g, &eval_expr(k).unwrap()).unwrap();
            assert_eq!(classify(&out.expr).f_level, k);
        }
    }

    #[test]
    fn forall_node_growth() {
        let pr = atoms(&["pr1", "pr2", "pr3"]);
        let g = inner("pr1", &["pr1", "pr2", "pr3"]);
        let out = forall_compose(2, &pr, &g, &eval_expr(2).unwrap()).unwrap();
        assert_eq!(out.graph.node_count(), g.node_count() + 2 * (2 * 3 + 2));
    }

    #[test]
    fn forall_two_matches_enumeration() {
        let pr = atoms(&["pr1", "pr2", "pr3"]);
        let g = inner("!pr1 | !pr2", &["pr1", "pr2", "pr3"]);
        let e = eval_expr(2).unwrap();
        let expected = injective_outcomes(2, &pr, &g, &e).into_iter().all(|b| b);
        let out = forall_compose(2, &pr, &g, &e).unwrap();
        assert_eq!(out.connected(&Valuation::new()).unwrap(), expected);
        assert!(!expected);
    }

    #[test]
    fn freshness_is_checked() {
        let g = inner("pr1", &["pr1"]);
        let e = Rewb::atom("a1").concat(eval_expr(1).unwrap());
        assert!(exists_compose(1, &atoms(&["pr1"]), &g, &e).is_err());
        assert!(forall_compose(1, &atoms(&["pr1"]), &g, &e).is_err());
        let bound = Rewb::bind("a", "x_1", Rewb::Eps);
        assert!(exists_compose(1, &atoms(&["pr1"]), &g, &bound).is_err());
    }

    #[test]
    fn wqsat_examples() {
        let cases = [
            ("pr1", "E1:pr1,pr2", true),
            ("pr1 & (pr3 | pr4)", "E1:pr1,pr2;A1:pr3,pr4", true),
            ("pr1 & pr2", "E1:pr1;A1:pr2,pr3", false),
        ];
        for (phi, blocks, yes) in cases {
            let inst = WqsatInstance::parse(phi, blocks).unwrap();
            assert_eq!(brute_wqsat(&inst), yes, "{inst}");
            let out = wqsat_reduction(&inst).unwrap();
            assert_eq!(out.connected(&Valuation::new()).unwrap(), yes, "{inst}");
            let universal: usize = inst.weights().iter().skip(1).step_by(2).sum();
            assert_eq!(classify(&out.expr).f_level, 1 + universal);
        }
    }

    #[test]
    fn brute_examples() {
        let inst = WqsatInstance::parse("p | q", "E0:r;A1:p,q").unwrap();
        assert!(brute_wqsat(&inst));
        assert!(WqsatInstance::parse("p", "E2:p").is_err());
        assert!(WqsatInstance::parse("p", "A1:p").is_err());
        assert!(WqsatInstance::parse("p", "E1:p;A1:p").is_err());
        assert!(WqsatInstance::parse("z", "E1:p").is_err());
    }

    #[test]
    fn subset_enumeration() {
        assert_eq!(subsets(&[1, 2, 3], 2), vec![vec![1, 2], vec![1, 3], vec![2, 3]]);
        assert_eq!(subsets(&[1], 2), Vec::<Vec<i32>>::new());
    }
}
