//! Classical regular expressions: binding-free, test-free expressions over
//! a finite alphabet, with determinization, complement and conversion back
//! to an expression by state elimination.

use std::collections::{BTreeMap, BTreeSet};

use super::glushkov::{Glushkov, MetaRe};
use crate::ast::{Letter, Rewb};
use crate::error::{Error, Result};

/// A complete DFA over `alphabet`; state 0 is initial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dfa {
    pub alphabet: Vec<Letter>,
    /// `delta[q][k]` is the successor of `q` on `alphabet[k]`.
    pub delta: Vec<Vec<usize>>,
    pub finals: Vec<bool>,
}

fn to_meta(e: &Rewb) -> Result<MetaRe<&Letter>> {
    Ok(match e {
        Rewb::Eps => MetaRe::Eps,
        Rewb::Atom(a) => MetaRe::Sym(a),
        Rewb::Union(l, r) => to_meta(l)?.union(to_meta(r)?),
        Rewb::Concat(l, r) => to_meta(l)?.concat(to_meta(r)?),
        Rewb::Star(b) => to_meta(b)?.star(),
        Rewb::Test(..) | Rewb::Bind(..) => {
            return Err(Error::invalid("classical constructions need an expression without tests or bindings"))
        }
    })
}

impl Dfa {
    /// Subset construction on the position automaton of `e`. Letters of
    /// `e` outside `alphabet` are an error. Fails with [`Error::Budget`]
    /// once more than `max_states` subsets are discovered.
    pub fn from_rewb(e: &Rewb, alphabet: &[Letter], max_states: usize) -> Result<Dfa> {
        if let Some(a) = e.letters().into_iter().find(|a| !alphabet.contains(a)) {
            return Err(Error::invalid(format!("letter `{a}` is not in the alphabet")));
        }
        let g = Glushkov::new(to_meta(e)?);
        let mut ids: BTreeMap<BTreeSet<usize>, usize> = BTreeMap::new();
        let mut subsets: Vec<BTreeSet<usize>> = Vec::new();
        let mut delta: Vec<Vec<usize>> = Vec::new();
        let start: BTreeSet<usize> = [0].into();
        ids.insert(start.clone(), 0);
        subsets.push(start);
        let mut next = 0;
        while next < subsets.len() {
            let mut row = Vec::with_capacity(alphabet.len());
            for a in alphabet {
                let target: BTreeSet<usize> = subsets[next]
                    .iter()
                    .flat_map(|&p| g.succ[p].iter().copied())
                    .filter(|&q| *g.label(q) == a)
                    .collect();
                let id = match ids.get(&target) {
                    Some(&id) => id,
                    None => {
                        if subsets.len() >= max_states {
                            return Err(Error::Budget(format!("subset construction exceeded {max_states} states")));
                        }
                        ids.insert(target.clone(), subsets.len());
                        subsets.push(target);
                        subsets.len() - 1
                    }
                };
                row.push(id);
            }
            delta.push(row);
            next += 1;
        }
        let finals = subsets.iter().map(|s| s.iter().any(|&q| g.finals[q])).collect();
        Ok(Dfa { alphabet: alphabet.to_vec(), delta, finals }.minimize())
    }

    pub fn state_count(&self) -> usize {
        self.delta.len()
    }

    pub fn complement(&self) -> Dfa {
        Dfa { alphabet: self.alphabet.clone(), delta: self.delta.clone(), finals: self.finals.iter().map(|f| !f).collect() }
    }

    /// Runs the DFA; a letter outside the alphabet rejects.
    pub fn accepts<'a>(&self, word: impl IntoIterator<Item = &'a Letter>) -> bool {
        let mut q = 0;
        for a in word {
            match self.alphabet.iter().position(|b| b == a) {
                Some(k) => q = self.delta[q][k],
                None => return false,
            }
        }
        self.finals[q]
    }

    /// Moore partition refinement, keeping only reachable states.
    pub fn minimize(&self) -> Dfa {
        let mut class: Vec<usize> = self.finals.iter().map(|&f| usize::from(f)).collect();
        loop {
            let mut keys: BTreeMap<(usize, Vec<usize>), usize> = BTreeMap::new();
            let refined: Vec<usize> = (0..self.state_count())
                .map(|q| {
                    let key = (class[q], self.delta[q].iter().map(|&r| class[r]).collect());
                    let n = keys.len();
                    *keys.entry(key).or_insert(n)
                })
                .collect();
            let done = keys.len() == class.iter().collect::<BTreeSet<_>>().len();
            class = refined;
            if done {
                break;
            }
        }
        // renumber classes in breadth-first order from the initial state
        let mut order: BTreeMap<usize, usize> = BTreeMap::new();
        let mut queue = vec![0usize];
        let mut reps = Vec::new();
        order.insert(class[0], 0);
        while let Some(q) = queue.first().copied() {
            queue.remove(0);
            reps.push(q);
            for &r in &self.delta[q] {
                if !order.contains_key(&class[r]) {
                    order.insert(class[r], order.len());
                    queue.push(r);
                }
            }
        }
        Dfa {
            alphabet: self.alphabet.clone(),
            delta: reps.iter().map(|&q| self.delta[q].iter().map(|&r| order[&class[r]]).collect()).collect(),
            finals: reps.iter().map(|&q| self.finals[q]).collect(),
        }
    }

    /// Converts the DFA back to an expression by state elimination. `None`
    /// stands for the empty language.
    pub fn to_rewb(&self) -> Option<Rewb> {
        let n = self.state_count();
        let (start, end) = (n, n + 1);
        let mut edge: BTreeMap<(usize, usize), Rewb> = BTreeMap::new();
        let add = |edge: &mut BTreeMap<(usize, usize), Rewb>, p: usize, q: usize, r: Rewb| {
            let merged = match edge.remove(&(p, q)) {
                Some(old) => old.union(r),
                None => r,
            };
            edge.insert((p, q), merged);
        };
        add(&mut edge, start, 0, Rewb::Eps);
        for q in 0..n {
            if self.finals[q] {
                add(&mut edge, q, end, Rewb::Eps);
            }
            for (k, &r) in self.delta[q].iter().enumerate() {
                add(&mut edge, q, r, Rewb::Atom(self.alphabet[k].clone()));
            }
        }
        for k in 0..n {
            let lp = edge.remove(&(k, k)).map(Rewb::star);
            let ins: Vec<(usize, Rewb)> =
                edge.iter().filter(|((p, q), _)| *q == k && *p != k).map(|((p, _), r)| (*p, r.clone())).collect();
            let outs: Vec<(usize, Rewb)> =
                edge.iter().filter(|((p, q), _)| *p == k && *q != k).map(|((_, q), r)| (*q, r.clone())).collect();
            edge.retain(|(p, q), _| *p != k && *q != k);
            for (p, rin) in &ins {
                for (q, rout) in &outs {
                    let mid = match &lp {
                        Some(l) => cat(rin.clone(), l.clone()),
                        None => rin.clone(),
                    };
                    add(&mut edge, *p, *q, cat(mid, rout.clone()));
                }
            }
        }
        edge.remove(&(start, end))
    }
}

/// Concatenation that drops `eps` factors.
fn cat(l: Rewb, r: Rewb) -> Rewb {
    match (l, r) {
        (Rewb::Eps, r) => r,
        (l, Rewb::Eps) => l,
        (l, r) => l.concat(r),
    }
}

/// An expression for the words over `alphabet` that are not in `L(e)`, or
/// `None` if that set is empty.
pub fn complement_rewb(e: &Rewb, alphabet: &[Letter], max_states: usize) -> Result<Option<Rewb>> {
    Ok(Dfa::from_rewb(e, alphabet, max_states)?.complement().minimize().to_rewb())
}
