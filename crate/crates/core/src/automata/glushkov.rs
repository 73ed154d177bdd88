//! Position (Glushkov) automata over an arbitrary symbol type.
//!
//! Every construction in the crate goes through this one builder: the
//! register NFA uses letter occurrences as symbols, the hierarchical
//! automata use meta-letters, and the classical complement construction uses
//! plain letters.

use std::collections::BTreeSet;

/// A regular expression over symbols of type `S`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum MetaRe<S> {
    Eps,
    Sym(S),
    Union(Box<MetaRe<S>>, Box<MetaRe<S>>),
    Concat(Box<MetaRe<S>>, Box<MetaRe<S>>),
    Star(Box<MetaRe<S>>),
}

impl<S> MetaRe<S> {
    pub(crate) fn union(self, other: Self) -> Self {
        MetaRe::Union(Box::new(self), Box::new(other))
    }

    pub(crate) fn concat(self, other: Self) -> Self {
        MetaRe::Concat(Box::new(self), Box::new(other))
    }

    pub(crate) fn star(self) -> Self {
        MetaRe::Star(Box::new(self))
    }
}

/// The position automaton of a [`MetaRe`].
///
/// State 0 is the initial state; state `p >= 1` is the `p`-th symbol
/// occurrence in left-to-right order. Every transition into `p` reads
/// `symbols[p - 1]`, so transitions are stored as successor lists.
#[derive(Clone, Debug)]
pub(crate) struct Glushkov<S> {
    pub symbols: Vec<S>,
    pub succ: Vec<Vec<usize>>,
    pub finals: Vec<bool>,
}

impl<S> Glushkov<S> {
    pub(crate) fn new(re: MetaRe<S>) -> Self {
        let mut symbols = Vec::new();
        let mut follow: Vec<BTreeSet<usize>> = vec![BTreeSet::new()];
        let info = build(re, &mut symbols, &mut follow);
        let mut succ: Vec<Vec<usize>> = follow.into_iter().map(|s| s.into_iter().collect()).collect();
        succ[0] = info.first.iter().copied().collect();
        let mut finals = vec![false; symbols.len() + 1];
        finals[0] = info.nullable;
        for p in info.last {
            finals[p] = true;
        }
        Glushkov { symbols, succ, finals }
    }

    pub(crate) fn state_count(&self) -> usize {
        self.symbols.len() + 1
    }

    /// The symbol read when entering state `q >= 1`.
    pub(crate) fn label(&self, q: usize) -> &S {
        &self.symbols[q - 1]
    }

    /// All transitions `(p, q)` in lexicographic order.
    pub(crate) fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.succ.iter().enumerate().flat_map(|(p, qs)| qs.iter().map(move |&q| (p, q)))
    }

    #[cfg(test)]
    pub(crate) fn is_acyclic(&self) -> bool {
        // Kahn's algorithm
        let n = self.state_count();
        let mut indeg = vec![0usize; n];
        for (_, q) in self.edges() {
            indeg[q] += 1;
        }
        let mut queue: Vec<usize> = (0..n).filter(|&q| indeg[q] == 0).collect();
        let mut seen = 0;
        while let Some(p) = queue.pop() {
            seen += 1;
            for &q in &self.succ[p] {
                indeg[q] -= 1;
                if indeg[q] == 0 {
                    queue.push(q);
                }
            }
        }
        seen == n
    }
}

struct Info {
    nullable: bool,
    first: BTreeSet<usize>,
    last: BTreeSet<usize>,
}

fn build<S>(re: MetaRe<S>, symbols: &mut Vec<S>, follow: &mut Vec<BTreeSet<usize>>) -> Info {
    match re {
        MetaRe::Eps => Info { nullable: true, first: BTreeSet::new(), last: BTreeSet::new() },
        MetaRe::Sym(s) => {
            symbols.push(s);
            follow.push(BTreeSet::new());
            let p = symbols.len();
            Info { nullable: false, first: [p].into(), last: [p].into() }
        }
        MetaRe::Union(l, r) => {
            let l = build(*l, symbols, follow);
            let r = build(*r, symbols, follow);
            Info {
                nullable: l.nullable || r.nullable,
                first: &l.first | &r.first,
                last: &l.last | &r.last,
            }
        }
        MetaRe::Concat(l, r) => {
            let l = build(*l, symbols, follow);
            let r = build(*r, symbols, follow);
            for &p in &l.last {
                follow[p].extend(r.first.iter().copied());
            }
            Info {
                nullable: l.nullable && r.nullable,
                first: if l.nullable { &l.first | &r.first } else { l.first },
                last: if r.nullable { &l.last | &r.last } else { r.last },
            }
        }
        MetaRe::Star(b) => {
            let b = build(*b, symbols, follow);
            for &p in &b.last {
                follow[p].extend(b.first.iter().copied());
            }
            Info { nullable: true, first: b.first, last: b.last }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sym(c: char) -> MetaRe<char> {
        MetaRe::Sym(c)
    }

    fn accepts(g: &Glushkov<char>, w: &str) -> bool {
        let mut cur: BTreeSet<usize> = [0].into();
        for c in w.chars() {
            cur = cur.iter().flat_map(|&p| g.succ[p].iter().copied()).filter(|&q| *g.label(q) == c).collect();
        }
        cur.iter().any(|&q| g.finals[q])
    }

    #[test]
    fn concatenation() {
        let g = Glushkov::new(sym('a').concat(sym('b')));
        assert_eq!(g.state_count(), 3);
        assert_eq!(g.edges().collect::<Vec<_>>(), vec![(0, 1), (1, 2)]);
        assert!(accepts(&g, "ab"));
        assert!(!accepts(&g, "a"));
        assert!(g.is_acyclic());
    }

    #[test]
    fn star_loops() {
        let g = Glushkov::new(sym('a').union(sym('b')).star().concat(sym('c')));
        assert!(accepts(&g, "c"));
        assert!(accepts(&g, "abbac"));
        assert!(!accepts(&g, "ca"));
        assert!(!g.is_acyclic());
    }

    #[test]
    fn epsilon_only() {
        let g: Glushkov<char> = Glushkov::new(MetaRe::Eps);
        assert_eq!(g.state_count(), 1);
        assert!(g.finals[0]);
    }
}
