use std::collections::{BTreeSet, HashMap};

use super::DataWord;
use crate::ast::{Rewb, Valuation};
use crate::error::Result;

/// Decides `w ∈ L(e, nu)` directly from the inductive definition of the
/// language, without compiling an automaton. Used as a reference for the
/// automaton-based engines.
pub fn member_by_semantics(e: &Rewb, w: &DataWord, nu: &Valuation) -> Result<bool> {
    nu.check_compatible(e)?;
    let mut ctx = Ctx { w, memo: HashMap::new() };
    Ok(ctx.ends(e, nu, 0)?.contains(&w.len()))
}

struct Ctx<'w> {
    w: &'w DataWord,
    memo: HashMap<(*const Rewb, usize, Valuation), BTreeSet<usize>>,
}

impl Ctx<'_> {
    /// All `j` with `w[i..j] ∈ L(e, nu)`.
    fn ends(&mut self, e: &Rewb, nu: &Valuation, i: usize) -> Result<BTreeSet<usize>> {
        let key = (e as *const Rewb, i, nu.clone());
        if let Some(r) = self.memo.get(&key) {
            return Ok(r.clone());
        }
        let at = self.w.0.get(i);
        let out: BTreeSet<usize> = match e {
            Rewb::Eps => [i].into(),
            Rewb::Atom(a) => at.filter(|(b, _)| b == a).map(|_| i + 1).into_iter().collect(),
            Rewb::Test(a, c) => match at {
                Some((b, d)) if b == a && c.holds(d, nu)? => [i + 1].into(),
                _ => BTreeSet::new(),
            },
            Rewb::Union(l, r) => &self.ends(l, nu, i)? | &self.ends(r, nu, i)?,
            Rewb::Concat(l, r) => {
                let mut out = BTreeSet::new();
                for j in self.ends(l, nu, i)? {
                    out.extend(self.ends(r, nu, j)?);
                }
                out
            }
            Rewb::Star(b) => {
                let mut out: BTreeSet<usize> = [i].into();
                let mut todo = vec![i];
                while let Some(j) = todo.pop() {
                    for k in self.ends(b, nu, j)? {
                        if out.insert(k) {
                            todo.push(k);
                        }
                    }
                }
                out
            }
            Rewb::Bind(a, x, b) => match at {
                Some((c, d)) if c == a => self.ends(b, &nu.with(x.clone(), d.clone()), i + 1)?,
                _ => BTreeSet::new(),
            },
        };
        self.memo.insert(key, out.clone());
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_expr, parse_word};

    fn sem(e: &str, w: &str) -> bool {
        member_by_semantics(&parse_expr(e).unwrap(), &parse_word(w).unwrap(), &Valuation::new()).unwrap()
    }

    #[test]
    fn definition_examples() {
        assert!(sem("a@x(b[x=]*)", "a:5 b:5 b:5"));
        assert!(!sem("a@x(b[x=]*)", "a:5 b:7"));
        assert!(sem("(a@x(b[x=]))*", "a:1 b:1 a:2 b:2"));
        assert!(sem("(a@x(b[x=]))*", ""));
        assert!(!sem("(a@x(b[x=]))*", "a:1 b:2"));
        assert!(sem("a@x(b@x(c[x=]).c[x!=])", "a:1 b:2 c:2 c:3"));
    }
}
