use std::collections::BTreeSet;
use std::fmt;

use super::{GadgetOutput, NodeNamer};
use crate::ast::{Condition, DataValue, Rewb};
use crate::error::{Error, Result, SourceError};
use crate::eval::DataGraph;

/// The reserved data value playing the role of an "arbitrary other value".
///
/// One value serves every such occurrence: conditions only ever compare it
/// for equality with variables holding atom names, `po` or `ne`, so a
/// shared token never creates a spurious match.
pub const STAR: &str = "star";

/// A Boolean formula in negation normal form.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum NnfFormula {
    Pos(String),
    Neg(String),
    And(Vec<NnfFormula>),
    Or(Vec<NnfFormula>),
}

impl NnfFormula {
    pub fn pos(atom: &str) -> Self {
        NnfFormula::Pos(atom.to_owned())
    }

    pub fn neg(atom: &str) -> Self {
        NnfFormula::Neg(atom.to_owned())
    }

    pub fn atoms(&self) -> BTreeSet<&str> {
        match self {
            NnfFormula::Pos(a) | NnfFormula::Neg(a) => [a.as_str()].into(),
            NnfFormula::And(fs) | NnfFormula::Or(fs) => fs.iter().flat_map(NnfFormula::atoms).collect(),
        }
    }

    /// Number of literal occurrences.
    pub fn literal_count(&self) -> usize {
        match self {
            NnfFormula::Pos(_) | NnfFormula::Neg(_) => 1,
            NnfFormula::And(fs) | NnfFormula::Or(fs) => fs.iter().map(NnfFormula::literal_count).sum(),
        }
    }

    fn validate(&self) -> Result<()> {
        match self {
            NnfFormula::Pos(a) | NnfFormula::Neg(a) => check_atom(a),
            NnfFormula::And(fs) | NnfFormula::Or(fs) if fs.is_empty() => {
                Err(Error::invalid("conjunctions and disjunctions need at least one operand"))
            }
            NnfFormula::And(fs) | NnfFormula::Or(fs) => fs.iter().try_for_each(NnfFormula::validate),
        }
    }
}

impl fmt::Display for NnfFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |f: &mut fmt::Formatter<'_>, fs: &[NnfFormula], op: &str| {
            write!(f, "(")?;
            for (i, g) in fs.iter().enumerate() {
                if i > 0 {
                    write!(f, " {op} ")?;
                }
                write!(f, "{g}")?;
            }
            write!(f, ")")
        };
        match self {
            NnfFormula::Pos(a) => write!(f, "{a}"),
            NnfFormula::Neg(a) => write!(f, "!{a}"),
            NnfFormula::And(fs) => join(f, fs, "&"),
            NnfFormula::Or(fs) => join(f, fs, "|"),
        }
    }
}

/// Atom names double as data values and must not collide with the
/// reserved values.
pub(crate) fn check_atom(a: &str) -> Result<()> {
    DataValue::new(a)?;
    if [STAR, "po", "ne"].contains(&a) {
        return Err(Error::invalid(format!("`{a}` is a reserved value and cannot name an atom")));
    }
    Ok(())
}

/// Parses the formula syntax `pr1 & (!pr2 | pr3)`: atoms are identifiers,
/// `!` negates an atom, `&` binds tighter than `|`.
pub fn parse_nnf(text: &str) -> Result<NnfFormula, SourceError> {
    struct P<'a> {
        chars: Vec<(usize, char)>,
        text: &'a str,
        i: usize,
    }
    impl P<'_> {
        fn skip_ws(&mut self) {
            while self.i < self.chars.len() && self.chars[self.i].1.is_whitespace() {
                self.i += 1;
            }
        }
        fn col(&self) -> usize {
            self.chars.get(self.i).map_or(self.text.chars().count(), |(k, _)| *k) + 1
        }
        fn err(&self, m: &str) -> SourceError {
            SourceError::new(m, 1, self.col())
        }
        fn peek(&mut self) -> Option<char> {
            self.skip_ws();
            self.chars.get(self.i).map(|c| c.1)
        }
        fn list(&mut self, op: char, item: fn(&mut Self) -> Result<NnfFormula, SourceError>) -> Result<Vec<NnfFormula>, SourceError> {
            let mut out = vec![item(self)?];
            while self.peek() == Some(op) {
                self.i += 1;
                out.push(item(self)?);
            }
            Ok(out)
        }
        fn or(&mut self) -> Result<NnfFormula, SourceError> {
            let mut fs = self.list('|', Self::and)?;
            Ok(if fs.len() == 1 { fs.pop().unwrap() } else { NnfFormula::Or(fs) })
        }
        fn and(&mut self) -> Result<NnfFormula, SourceError> {
            let mut fs = self.list('&', Self::lit)?;
            Ok(if fs.len() == 1 { fs.pop().unwrap() } else { NnfFormula::And(fs) })
        }
        fn lit(&mut self) -> Result<NnfFormula, SourceError> {
            match self.peek() {
                Some('(') => {
                    self.i += 1;
                    let f = self.or()?;
                    if self.peek() != Some(')') {
                        return Err(self.err("expected `)`"));
                    }
                    self.i += 1;
                    Ok(f)
                }
                Some('!') => {
                    self.i += 1;
                    self.peek();
                    Ok(NnfFormula::Neg(self.atom()?))
                }
                _ => Ok(NnfFormula::Pos(self.atom()?)),
            }
        }
        fn atom(&mut self) -> Result<String, SourceError> {
            let start = self.i;
            while self.i < self.chars.len() && (self.chars[self.i].1.is_ascii_alphanumeric() || self.chars[self.i].1 == '_') {
                self.i += 1;
            }
            if start == self.i {
                return Err(self.err("expected an atom"));
            }
            let name: String = self.chars[start..self.i].iter().map(|c| c.1).collect();
            check_atom(&name).map_err(|e| SourceError::new(e.to_string(), 1, self.chars[start].0 + 1))?;
            Ok(name)
        }
    }
    let mut p = P { chars: text.chars().enumerate().collect(), text, i: 0 };
    let f = p.or()?;
    if p.peek().is_some() {
        return Err(p.err("unexpected input after formula"));
    }
    Ok(f)
}

/// Evaluates `phi` under the assignment making exactly `true_atoms` true.
pub fn brute_formula(phi: &NnfFormula, true_atoms: &BTreeSet<String>) -> bool {
    match phi {
        NnfFormula::Pos(a) => true_atoms.contains(a),
        NnfFormula::Neg(a) => !true_atoms.contains(a),
        NnfFormula::And(fs) => fs.iter().all(|f| brute_formula(f, true_atoms)),
        NnfFormula::Or(fs) => fs.iter().any(|f| brute_formula(f, true_atoms)),
    }
}

pub(crate) fn check_atoms_in(phi: &NnfFormula, pr: &[String]) -> Result<()> {
    phi.validate()?;
    pr.iter().try_for_each(|a| check_atom(a))?;
    match phi.atoms().into_iter().find(|a| !pr.iter().any(|p| p == a)) {
        Some(a) => Err(Error::invalid(format!("atom `{a}` is not among the declared atoms"))),
        None => Ok(()),
    }
}

/// The series-parallel graph of `phi`: each literal is a chain
/// `b/star, pn/(po|ne), pa/atom, e/star`; conjunction composes serially,
/// disjunction in parallel, and the chain `a/po, a/ne` leads into the
/// formula's source.
pub fn formula_graph(phi: &NnfFormula, pr: &[String]) -> Result<DataGraph> {
    check_atoms_in(phi, pr)?;
    let mut g = DataGraph::new();
    let mut names = NodeNamer::new("f");
    let start = names.fresh();
    let mid = names.fresh();
    let src = names.fresh();
    names.edge(&mut g, &start, "a", "po", &mid);
    names.edge(&mut g, &mid, "a", "ne", &src);
    let sink = build(phi, &mut g, &mut names, src, None);
    g.source = Some(start);
    g.sink = Some(sink);
    Ok(g)
}

fn build(
    phi: &NnfFormula,
    g: &mut DataGraph,
    names: &mut NodeNamer,
    src: crate::eval::NodeId,
    sink: Option<crate::eval::NodeId>,
) -> crate::eval::NodeId {
    match phi {
        NnfFormula::Pos(a) | NnfFormula::Neg(a) => {
            let sign = if matches!(phi, NnfFormula::Pos(_)) { "po" } else { "ne" };
            let n1 = names.fresh();
            let n2 = names.fresh();
            let n3 = names.fresh();
            let n4 = sink.unwrap_or_else(|| names.fresh());
            names.edge(g, &src, "b", STAR, &n1);
            names.edge(g, &n1, "pn", sign, &n2);
            names.edge(g, &n2, "pa", a, &n3);
            names.edge(g, &n3, "e", STAR, &n4);
            n4
        }
        NnfFormula::And(fs) => {
            let mut cur = src;
            for (i, f) in fs.iter().enumerate() {
                let last = i + 1 == fs.len();
                cur = build(f, g, names, cur, if last { sink.clone() } else { None });
            }
            cur
        }
        NnfFormula::Or(fs) => {
            let mut sink = sink;
            for f in fs {
                sink = Some(build(f, g, names, src.clone(), sink));
            }
            sink.expect("nonempty disjunction")
        }
    }
}

/// `a@x_po(a@x_ne((b.(pn[x_po=].pa[x_1= | … | x_k=]
///   + pn[x_ne=].pa[x_1!= & … & x_k!=]).e)*))`
pub fn eval_expr(k: usize) -> Result<Rewb> {
    if k == 0 {
        return Err(Error::invalid("the evaluation query needs k >= 1 variables"));
    }
    let vars: Vec<String> = (1..=k).map(|i| format!("x_{i}")).collect();
    let some = Condition::any(vars.iter().map(|x| Condition::eq(x))).expect("k >= 1");
    let none = Condition::all(vars.iter().map(|x| Condition::neq(x))).expect("k >= 1");
    let pos = Rewb::test("pn", Condition::eq("x_po")).concat(Rewb::test("pa", some));
    let neg = Rewb::test("pn", Condition::eq("x_ne")).concat(Rewb::test("pa", none));
    let body = Rewb::atom("b").concat(pos.union(neg)).concat(Rewb::atom("e")).star();
    Ok(Rewb::bind("a", "x_po", Rewb::bind("a", "x_ne", body)))
}

/// The NP-hardness reduction: a chain of parallel edge pairs
/// `(a, pr_j) | (a, star)` in front of the formula graph, queried with
/// `a@x_1(… a@x_n(eval_expr(n)) …)`. The source reaches the sink iff `phi`
/// is satisfiable.
pub fn sat_reduction(phi: &NnfFormula, pr: &[String]) -> Result<GadgetOutput> {
    let mut g = formula_graph(phi, pr)?;
    let n = pr.len();
    let mut names = NodeNamer::new("s");
    let chain: Vec<_> = (0..n).map(|_| names.fresh()).collect();
    let formula_source = g.source.clone().expect("formula graphs have a source");
    for (j, atom) in pr.iter().enumerate() {
        let dst = chain.get(j + 1).unwrap_or(&formula_source).clone();
        names.edge(&mut g, &chain[j], "a", atom, &dst);
        names.edge(&mut g, &chain[j], "a", STAR, &dst);
    }
    if let Some(first) = chain.first() {
        g.source = Some(first.clone());
    }
    let mut e = eval_expr(n.max(1))?;
    for j in (1..=n).rev() {
        e = Rewb::bind("a", &format!("x_{j}"), e);
    }
    GadgetOutput::new(g, e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ast::{classify, free_vars, Valuation, Var};
    use crate::syntax::print_expr;

    fn atoms(names: &[&str]) -> Vec<String> {
        names.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn single_literal_graph() {
        let g = formula_graph(&NnfFormula::pos("pr1"), &atoms(&["pr1"])).unwrap();
        assert_eq!(g.node_count(), 7);
        let labels: BTreeSet<(String, String)> =
            g.edges().iter().map(|e| (e.letter.to_string(), e.value.to_string())).collect();
        let expected: BTreeSet<(String, String)> =
            [("a", "po"), ("a", "ne"), ("b", "star"), ("pn", "po"), ("pa", "pr1"), ("e", "star")]
                .iter()
                .map(|(a, d)| (a.to_string(), d.to_string()))
                .collect();
        assert_eq!(labels, expected);
    }

    #[test]
    fn node_counts() {
        let pr = atoms(&["pr1", "pr2", "pr3", "pr4"]);
        let twice = NnfFormula::And(vec![NnfFormula::pos("pr1"), NnfFormula::pos("pr1")]);
        assert_eq!(formula_graph(&twice, &pr).unwrap().node_count(), 11);
        let figure = parse_nnf("(pr1 | !pr2) & ((pr2 & pr3) | (!pr1 & pr4))").unwrap();
        assert_eq!(formula_graph(&figure, &pr).unwrap().node_count(), 25);
    }

    #[test]
    fn unknown_atom() {
        assert!(formula_graph(&NnfFormula::pos("pr9"), &atoms(&["pr1"])).is_err());
    }

    #[test]
    fn evaluation_query() {
        let e = eval_expr(2).unwrap();
        assert_eq!(free_vars(&e), [Var::lit("x_1"), Var::lit("x_2")].into());
        let l = classify(&eval_expr(3).unwrap());
        assert_eq!((l.f_level, l.e_level), (1, 1));
        assert_eq!(
            print_expr(&eval_expr(2).unwrap()),
            "a@x_po(a@x_ne((b.(pn[x_po=].pa[x_1=|x_2=]+pn[x_ne=].pa[x_1!=&x_2!=]).e)*))"
        );
        assert!(eval_expr(0).is_err());
    }

    #[test]
    fn single_atom_assignments() {
        let g = formula_graph(&NnfFormula::pos("pr1"), &atoms(&["pr1"])).unwrap();
        let out = GadgetOutput::new(g, eval_expr(1).unwrap()).unwrap();
        let nu = |d: &str| -> Valuation { [(Var::lit("x_1"), DataValue::lit(d))].into_iter().collect() };
        assert!(out.connected(&nu("pr1")).unwrap());
        assert!(!out.connected(&nu(STAR)).unwrap());
    }

    #[test]
    fn sat_examples() {
        let pr = atoms(&["pr1", "pr2"]);
        let sat = |f: &str| sat_reduction(&parse_nnf(f).unwrap(), &pr).unwrap().connected(&Valuation::new()).unwrap();
        assert!(sat("pr1"));
        assert!(!sat("pr1 & !pr1"));
        assert!(sat("pr1 & !pr2"));
    }

    #[test]
    fn brute_force() {
        let t: BTreeSet<String> = ["pr1".to_owned()].into();
        assert!(brute_formula(&NnfFormula::pos("pr1"), &t));
        assert!(!brute_formula(&NnfFormula::neg("pr1"), &t));
    }

    #[test]
    fn parsing() {
        let f = parse_nnf("pr1 & (pr3|pr4)").unwrap();
        assert_eq!(
            f,
            NnfFormula::And(vec![NnfFormula::pos("pr1"), NnfFormula::Or(vec![NnfFormula::pos("pr3"), NnfFormula::pos("pr4")])])
        );
        assert_eq!(parse_nnf(" !pr2 ").unwrap(), NnfFormula::neg("pr2"));
        assert_eq!(parse_nnf("a | b & c").unwrap().to_string(), "(a | (b & c))");
        assert!(parse_nnf("!(a)").is_err());
        assert!(parse_nnf("a &").is_err());
        assert!(parse_nnf("star").is_err());
    }
}
