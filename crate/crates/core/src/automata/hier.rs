use std::collections::BTreeSet;
use std::fmt;

use super::glushkov::{Glushkov, MetaRe};
use crate::ast::rename::first_clash;
use crate::ast::{classify, Condition, Letter, Level, Rewb, Var};
use crate::error::{Error, Result};
use crate::syntax::{print_condition, print_expr};

/// Label of a transition in a hierarchical automaton.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MetaLabel {
    /// Consume any data path in the language of a lower-level block.
    SubExpr(Rewb),
    /// Read one letter and store its data value.
    BindRead(Letter, Var),
    /// Read one letter whose data value satisfies the optional condition.
    Read(Letter, Option<Condition>),
}

impl fmt::Display for MetaLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MetaLabel::SubExpr(e) => write!(f, "sub {}", print_expr(e)),
            MetaLabel::BindRead(a, x) => write!(f, "bind {a}@{x}"),
            MetaLabel::Read(a, None) => write!(f, "read {a}"),
            MetaLabel::Read(a, Some(c)) => write!(f, "read {a}[{}]", print_condition(c)),
        }
    }
}

/// How an expression is cut into meta-letters.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum View {
    /// Binding-free: one `Read` per letter occurrence.
    Read,
    /// F-shaped at level `i`: maximal blocks with E-level at most `i`.
    F(usize),
    /// E-shaped at level `i`: `BindRead` for bindings outside blocks and
    /// maximal blocks with F-level at most `i - 1`.
    E(usize),
}

impl View {
    pub(crate) fn of(level: Level) -> View {
        if level.f_level == 0 {
            View::Read
        } else if level.is_e_shaped() {
            View::E(level.f_level)
        } else {
            View::F(level.f_level)
        }
    }

    fn is_block(self, e: &Rewb) -> bool {
        match self {
            View::Read => false,
            View::F(i) => classify(e).e_level <= i,
            View::E(i) => classify(e).f_level < i,
        }
    }
}

/// A meta-letter pointing into the expression it was cut from.
#[derive(Clone, Copy, Debug)]
pub(crate) enum Piece<'a> {
    Read(&'a Letter, Option<&'a Condition>),
    BindRead(&'a Letter, &'a Var),
    Sub(&'a Rewb),
}

impl Piece<'_> {
    fn to_label(self) -> MetaLabel {
        match self {
            Piece::Read(a, c) => MetaLabel::Read(a.clone(), c.cloned()),
            Piece::BindRead(a, x) => MetaLabel::BindRead(a.clone(), x.clone()),
            Piece::Sub(e) => MetaLabel::SubExpr(e.clone()),
        }
    }
}

pub(crate) fn decompose(e: &Rewb, view: View) -> MetaRe<Piece<'_>> {
    if matches!(e, Rewb::Eps) {
        return MetaRe::Eps;
    }
    if view.is_block(e) {
        return MetaRe::Sym(Piece::Sub(e));
    }
    match e {
        Rewb::Eps => MetaRe::Eps,
        Rewb::Atom(a) => MetaRe::Sym(Piece::Read(a, None)),
        Rewb::Test(a, c) => MetaRe::Sym(Piece::Read(a, Some(c))),
        Rewb::Union(l, r) => decompose(l, view).union(decompose(r, view)),
        Rewb::Concat(l, r) => decompose(l, view).concat(decompose(r, view)),
        Rewb::Star(b) => decompose(b, view).star(),
        Rewb::Bind(a, x, b) => MetaRe::Sym(Piece::BindRead(a, x)).concat(decompose(b, view)),
    }
}

/// Generalized position automaton of an expression at its own level.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HierAutomaton {
    pub level: Level,
    /// States are `0..state_count`; state 0 is the only initial state.
    pub state_count: usize,
    pub finals: BTreeSet<usize>,
    pub transitions: Vec<(usize, MetaLabel, usize)>,
}

impl HierAutomaton {
    pub fn states(&self) -> std::ops::Range<usize> {
        0..self.state_count
    }

    pub fn initials(&self) -> BTreeSet<usize> {
        [0].into()
    }

    pub fn is_acyclic(&self) -> bool {
        let mut indeg = vec![0usize; self.state_count];
        for (_, _, q) in &self.transitions {
            indeg[*q] += 1;
        }
        let mut stack: Vec<usize> = self.states().filter(|&q| indeg[q] == 0).collect();
        let mut seen = 0;
        while let Some(p) = stack.pop() {
            seen += 1;
            for (_, _, q) in self.transitions.iter().filter(|(s, _, _)| *s == p) {
                indeg[*q] -= 1;
                if indeg[*q] == 0 {
                    stack.push(*q);
                }
            }
        }
        seen == self.state_count
    }

    /// One line per transition, then the initial and final states.
    pub fn dump(&self) -> String {
        let mut out = format!("states {}\ninitial 0\n", self.state_count);
        out.push_str("final");
        for q in &self.finals {
            out.push_str(&format!(" {q}"));
        }
        out.push('\n');
        for (p, label, q) in &self.transitions {
            out.push_str(&format!("{p} -> {q} : {label}\n"));
        }
        out
    }
}

/// Builds the hierarchical automaton of an alpha-renamed expression.
pub fn hier_automaton(e: &Rewb) -> Result<HierAutomaton> {
    if let Some(x) = first_clash(e) {
        return Err(Error::NotAlphaRenamed(x));
    }
    let level = classify(e);
    let g = Glushkov::new(decompose(e, View::of(level)));
    let transitions = g.edges().map(|(p, q)| (p, g.label(q).to_label(), q)).collect();
    let finals = (0..g.state_count()).filter(|&q| g.finals[q]).collect();
    Ok(HierAutomaton { level, state_count: g.state_count(), finals, transitions })
}

/// Number of states of [`hier_automaton`]: meta-letter occurrences plus one.
pub fn automaton_size(e: &Rewb) -> usize {
    automaton_size_at(e, classify(e))
}

/// State count when `e` is cut into meta-letters as if it had `level`.
///
/// An expression in a lower level also belongs to every higher one, so
/// this is meaningful whenever `classify(e)` is componentwise at most
/// `level`. Comparing a union-normal-form part against its original uses
/// the original's level.
pub fn automaton_size_at(e: &Rewb, level: Level) -> usize {
    fn count(re: &MetaRe<Piece<'_>>) -> usize {
        match re {
            MetaRe::Eps => 0,
            MetaRe::Sym(_) => 1,
            MetaRe::Union(l, r) | MetaRe::Concat(l, r) => count(l) + count(r),
            MetaRe::Star(b) => count(b),
        }
    }
    count(&decompose(e, View::of(level))) + 1
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_expr;

    fn aut(s: &str) -> HierAutomaton {
        hier_automaton(&parse_expr(s).unwrap()).unwrap()
    }

    #[test]
    fn read_labels_at_level_zero() {
        let h = aut("a.b");
        assert_eq!(h.state_count, 3);
        assert_eq!(
            h.transitions,
            vec![
                (0, MetaLabel::Read(Letter::lit("a"), None), 1),
                (1, MetaLabel::Read(Letter::lit("b"), None), 2),
            ]
        );
        assert_eq!(h.finals, [2].into());
    }

    #[test]
    fn e_shaped_binding() {
        let h = aut("a@x(b[x=])");
        assert_eq!(
            h.transitions,
            vec![
                (0, MetaLabel::BindRead(Letter::lit("a"), Var::lit("x")), 1),
                (1, MetaLabel::SubExpr(parse_expr("b[x=]").unwrap()), 2),
            ]
        );
        assert!(h.is_acyclic());
    }

    #[test]
    fn f_shaped_star() {
        let h = aut("(a@x(b[x=]))*");
        let s = MetaLabel::SubExpr(parse_expr("a@x(b[x=])").unwrap());
        assert_eq!(h.transitions, vec![(0, s.clone(), 1), (1, s, 1)]);
        assert_eq!(h.finals, [0, 1].into());
        assert!(!h.is_acyclic());
    }

    #[test]
    fn sizes() {
        let size = |s: &str| automaton_size(&parse_expr(s).unwrap());
        assert_eq!(size("a.b"), 3);
        assert_eq!(size("eps"), 1);
        assert_eq!(size("(a@x(b[x=]))*"), 2);
    }

    #[test]
    fn requires_alpha_renaming() {
        let e = parse_expr("a@x(b[x=]).c@x(d[x=])").unwrap();
        assert!(matches!(hier_automaton(&e), Err(Error::NotAlphaRenamed(_))));
    }

    #[test]
    fn lower_level_blocks_stay_whole() {
        // the whole body is an F_0 block of an E_1 expression
        let h = aut("a@x((b.c)*.d[x=])");
        assert_eq!(h.state_count, 3);
        assert_eq!(h.transitions[1].1, MetaLabel::SubExpr(parse_expr("(b.c)*.d[x=]").unwrap()));
        assert!(h.is_acyclic());
    }
}
