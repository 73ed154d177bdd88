use std::collections::BTreeSet;

use super::{DataValue, Valuation, Var};
use crate::error::{Error, Result};

/// Boolean combination of `x=` and `x!=` atoms.
///
/// `Not(Eq(x))` and `Neq(x)` are different trees with the same meaning,
/// except that both require `x` to be defined.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Condition {
    Eq(Var),
    Neq(Var),
    Not(Box<Condition>),
    And(Box<Condition>, Box<Condition>),
    Or(Box<Condition>, Box<Condition>),
}

impl Condition {
    pub fn eq(x: &str) -> Condition {
        Condition::Eq(Var::lit(x))
    }

    pub fn neq(x: &str) -> Condition {
        Condition::Neq(Var::lit(x))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(self) -> Condition {
        Condition::Not(Box::new(self))
    }

    pub fn and(self, other: Condition) -> Condition {
        Condition::And(Box::new(self), Box::new(other))
    }

    pub fn or(self, other: Condition) -> Condition {
        Condition::Or(Box::new(self), Box::new(other))
    }

    /// Right-nested disjunction; `None` for an empty input.
    pub fn any(parts: impl IntoIterator<Item = Condition>) -> Option<Condition> {
        let mut parts: Vec<Condition> = parts.into_iter().collect();
        let mut acc = parts.pop()?;
        while let Some(c) = parts.pop() {
            acc = c.or(acc);
        }
        Some(acc)
    }

    /// Right-nested conjunction; `None` for an empty input.
    pub fn all(parts: impl IntoIterator<Item = Condition>) -> Option<Condition> {
        let mut parts: Vec<Condition> = parts.into_iter().collect();
        let mut acc = parts.pop()?;
        while let Some(c) = parts.pop() {
            acc = c.and(acc);
        }
        Some(acc)
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<Var>) {
        match self {
            Condition::Eq(x) | Condition::Neq(x) => {
                out.insert(x.clone());
            }
            Condition::Not(c) => c.collect_vars(out),
            Condition::And(l, r) | Condition::Or(l, r) => {
                l.collect_vars(out);
                r.collect_vars(out);
            }
        }
    }

    /// `d, nu |= self`. Reading an undefined variable is an error.
    pub fn holds(&self, d: &DataValue, nu: &Valuation) -> Result<bool> {
        self.eval(&mut |x: &Var| nu.get(x).map(|v| v == d).ok_or_else(|| Error::UndefinedRegister(x.clone())))
    }

    /// Evaluates the condition given a function deciding `nu(x) = d` for
    /// each atom variable.
    pub(crate) fn eval<F>(&self, equals: &mut F) -> Result<bool>
    where
        F: FnMut(&Var) -> Result<bool>,
    {
        Ok(match self {
            Condition::Eq(x) => equals(x)?,
            Condition::Neq(x) => !equals(x)?,
            Condition::Not(c) => !c.eval(equals)?,
            Condition::And(l, r) => l.eval(equals)? && r.eval(equals)?,
            Condition::Or(l, r) => l.eval(equals)? || r.eval(equals)?,
        })
    }

    /// Renames variables through `f`.
    pub(crate) fn map_vars(&self, f: &impl Fn(&Var) -> Var) -> Condition {
        match self {
            Condition::Eq(x) => Condition::Eq(f(x)),
            Condition::Neq(x) => Condition::Neq(f(x)),
            Condition::Not(c) => Condition::Not(Box::new(c.map_vars(f))),
            Condition::And(l, r) => Condition::And(Box::new(l.map_vars(f)), Box::new(r.map_vars(f))),
            Condition::Or(l, r) => Condition::Or(Box::new(l.map_vars(f)), Box::new(r.map_vars(f))),
        }
    }
}
