//! Abstract syntax of regular expressions with binding.
//!
//! An expression is built from the empty word `eps`, letters `a`, letter
//! tests `a[c]`, union, concatenation, Kleene star and bindings `a@x(r)`.
//! A binding reads one letter `a`, stores its data value in `x` and then
//! continues with `r`, where conditions may compare later data values
//! against `x`.

mod cond;
mod indist;
mod level;
pub(crate) mod rename;
mod unf;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

pub use cond::Condition;
pub use indist::indistinguishable_sampled;
pub use level::{classify, Level};
pub use rename::{alpha_rename, is_alpha_renamed};
pub use unf::to_unf;

use crate::error::{Error, Result};

fn is_ident(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

macro_rules! ident_newtype {
    ($(#[$meta:meta])* $name:ident, $what:literal) => {
        $(#[$meta])*
        #[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
        pub struct $name(String);

        impl $name {
            /// Validates `name` against the identifier rule
            /// `[A-Za-z_][A-Za-z0-9_]*`.
            pub fn new(name: impl Into<String>) -> Result<Self> {
                let name = name.into();
                if is_ident(&name) {
                    Ok($name(name))
                } else {
                    Err(Error::invalid(format!(concat!("`{}` is not a valid ", $what), name)))
                }
            }

            /// Like [`Self::new`] for names known to be well formed.
            ///
            /// Panics if `name` is not an identifier.
            pub fn lit(name: &str) -> Self {
                Self::new(name).unwrap_or_else(|e| panic!("{e}"))
            }

            pub fn as_str(&self) -> &str {
                &self.0
            }
        }

        impl fmt::Debug for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.0)
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.0)
            }
        }
    };
}

ident_newtype!(
    /// A symbol of the finite alphabet.
    Letter,
    "letter"
);
ident_newtype!(
    /// A variable name. Variables live in their own namespace.
    Var,
    "variable"
);

/// An opaque data value. Values are only ever compared for equality; the
/// derived order exists for deterministic output.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DataValue(String);

impl DataValue {
    /// Any nonempty token without whitespace, `:`, `,` or `=` is a value.
    pub fn new(token: impl Into<String>) -> Result<Self> {
        let token = token.into();
        if is_value_token(&token) {
            Ok(DataValue(token))
        } else {
            Err(Error::invalid(format!("`{token}` is not a valid data value")))
        }
    }

    /// Panics if `token` is not a valid value token.
    pub fn lit(token: &str) -> Self {
        Self::new(token).unwrap_or_else(|e| panic!("{e}"))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

pub(crate) fn is_value_token(s: &str) -> bool {
    !s.is_empty() && s.chars().all(|c| !c.is_whitespace() && !matches!(c, ':' | ',' | '=' | '#'))
}

impl fmt::Debug for DataValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Display for DataValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// A regular expression with binding.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Rewb {
    Eps,
    Atom(Letter),
    Test(Letter, Condition),
    Union(Box<Rewb>, Box<Rewb>),
    Concat(Box<Rewb>, Box<Rewb>),
    Star(Box<Rewb>),
    Bind(Letter, Var, Box<Rewb>),
}

impl Rewb {
    pub fn atom(letter: &str) -> Rewb {
        Rewb::Atom(Letter::lit(letter))
    }

    pub fn test(letter: &str, cond: Condition) -> Rewb {
        Rewb::Test(Letter::lit(letter), cond)
    }

    pub fn bind(letter: &str, var: &str, body: Rewb) -> Rewb {
        Rewb::Bind(Letter::lit(letter), Var::lit(var), Box::new(body))
    }

    pub fn union(self, other: Rewb) -> Rewb {
        Rewb::Union(Box::new(self), Box::new(other))
    }

    pub fn concat(self, other: Rewb) -> Rewb {
        Rewb::Concat(Box::new(self), Box::new(other))
    }

    pub fn star(self) -> Rewb {
        Rewb::Star(Box::new(self))
    }

    /// Left-nested union of `parts`; `None` when `parts` is empty.
    pub fn union_all(parts: impl IntoIterator<Item = Rewb>) -> Option<Rewb> {
        parts.into_iter().reduce(Rewb::union)
    }

    /// Left-nested concatenation of `parts`; `eps` when `parts` is empty.
    pub fn concat_all(parts: impl IntoIterator<Item = Rewb>) -> Rewb {
        parts.into_iter().reduce(Rewb::concat).unwrap_or(Rewb::Eps)
    }

    /// Number of expression nodes (conditions count as part of their test).
    pub fn size(&self) -> usize {
        1 + self.children().map(Rewb::size).sum::<usize>()
    }

    pub fn children(&self) -> impl Iterator<Item = &Rewb> {
        let (a, b): (Option<&Rewb>, Option<&Rewb>) = match self {
            Rewb::Eps | Rewb::Atom(_) | Rewb::Test(..) => (None, None),
            Rewb::Union(l, r) | Rewb::Concat(l, r) => (Some(l), Some(r)),
            Rewb::Star(b) | Rewb::Bind(_, _, b) => (Some(b), None),
        };
        a.into_iter().chain(b)
    }

    /// All sub-expressions in pre-order, starting with `self`.
    pub fn subexpressions(&self) -> Vec<&Rewb> {
        let mut out = Vec::new();
        let mut stack = vec![self];
        while let Some(e) = stack.pop() {
            out.push(e);
            let kids: Vec<&Rewb> = e.children().collect();
            stack.extend(kids.into_iter().rev());
        }
        out
    }

    /// Letters occurring anywhere in the expression.
    pub fn letters(&self) -> BTreeSet<Letter> {
        let mut out = BTreeSet::new();
        for e in self.subexpressions() {
            match e {
                Rewb::Atom(a) | Rewb::Test(a, _) | Rewb::Bind(a, _, _) => {
                    out.insert(a.clone());
                }
                _ => {}
            }
        }
        out
    }

    /// Binder variables in pre-order, with repetitions.
    pub fn binders(&self) -> Vec<&Var> {
        self.subexpressions()
            .into_iter()
            .filter_map(|e| match e {
                Rewb::Bind(_, x, _) => Some(x),
                _ => None,
            })
            .collect()
    }

    /// Every variable mentioned by a binder or a condition.
    pub fn all_vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        for e in self.subexpressions() {
            match e {
                Rewb::Bind(_, x, _) => {
                    out.insert(x.clone());
                }
                Rewb::Test(_, c) => out.extend(c.vars()),
                _ => {}
            }
        }
        out
    }

    /// Conditions of all letter tests, in pre-order.
    pub fn conditions(&self) -> Vec<&Condition> {
        self.subexpressions()
            .into_iter()
            .filter_map(|e| match e {
                Rewb::Test(_, c) => Some(c),
                _ => None,
            })
            .collect()
    }

    /// True if the empty word is in the language (independent of valuation).
    pub fn nullable(&self) -> bool {
        match self {
            Rewb::Eps | Rewb::Star(_) => true,
            Rewb::Atom(_) | Rewb::Test(..) | Rewb::Bind(..) => false,
            Rewb::Union(l, r) => l.nullable() || r.nullable(),
            Rewb::Concat(l, r) => l.nullable() && r.nullable(),
        }
    }
}

/// Variables that occur in a condition without an enclosing binder of the
/// same name.
pub fn free_vars(e: &Rewb) -> BTreeSet<Var> {
    fn go(e: &Rewb, bound: &mut Vec<Var>, out: &mut BTreeSet<Var>) {
        match e {
            Rewb::Eps | Rewb::Atom(_) => {}
            Rewb::Test(_, c) => {
                for v in c.vars() {
                    if !bound.contains(&v) {
                        out.insert(v);
                    }
                }
            }
            Rewb::Union(l, r) | Rewb::Concat(l, r) => {
                go(l, bound, out);
                go(r, bound, out);
            }
            Rewb::Star(b) => go(b, bound, out),
            Rewb::Bind(_, x, b) => {
                bound.push(x.clone());
                go(b, bound, out);
                bound.pop();
            }
        }
    }
    let mut out = BTreeSet::new();
    go(e, &mut Vec::new(), &mut out);
    out
}

/// A finite partial map from variables to data values.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Valuation(BTreeMap<Var, DataValue>);

impl Valuation {
    pub fn new() -> Self {
        Self::default()
    }

    /// `None` means "undefined", which is never conflated with a value.
    pub fn get(&self, x: &Var) -> Option<&DataValue> {
        self.0.get(x)
    }

    pub fn insert(&mut self, x: Var, d: DataValue) -> Option<DataValue> {
        self.0.insert(x, d)
    }

    /// The valuation `self[x -> d]`.
    pub fn with(&self, x: Var, d: DataValue) -> Valuation {
        let mut v = self.clone();
        v.insert(x, d);
        v
    }

    pub fn contains(&self, x: &Var) -> bool {
        self.0.contains_key(x)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Var, &DataValue)> {
        self.0.iter()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn restrict<'a>(&self, vars: impl IntoIterator<Item = &'a Var>) -> Valuation {
        Valuation(
            vars.into_iter()
                .filter_map(|x| self.0.get(x).map(|d| (x.clone(), d.clone())))
                .collect(),
        )
    }

    /// Values in the range of the valuation.
    pub fn range(&self) -> BTreeSet<&DataValue> {
        self.0.values().collect()
    }

    /// Checks that every free variable of `e` has a value.
    pub fn check_compatible(&self, e: &Rewb) -> Result<()> {
        let missing: Vec<Var> = free_vars(e).into_iter().filter(|x| !self.contains(x)).collect();
        if missing.is_empty() {
            Ok(())
        } else {
            Err(Error::Incompatible { missing })
        }
    }
}

impl FromIterator<(Var, DataValue)> for Valuation {
    fn from_iter<I: IntoIterator<Item = (Var, DataValue)>>(iter: I) -> Self {
        Valuation(iter.into_iter().collect())
    }
}
