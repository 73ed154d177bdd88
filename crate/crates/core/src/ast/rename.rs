use std::collections::{BTreeSet, HashSet};

use super::{free_vars, Rewb, Var};

/// Renames every binder to `<name>_<index>`, where `index` counts binders in
/// pre-order starting at 1. Free variables are left alone; if a generated
/// name would collide with a free variable, underscores are appended until
/// it does not.
pub fn alpha_rename(e: &Rewb) -> Rewb {
    let free = free_vars(e);
    let mut next = 0usize;
    let mut scope: Vec<(Var, Var)> = Vec::new();
    go(e, &free, &mut next, &mut scope)
}

fn go(e: &Rewb, free: &BTreeSet<Var>, next: &mut usize, scope: &mut Vec<(Var, Var)>) -> Rewb {
    match e {
        Rewb::Eps | Rewb::Atom(_) => e.clone(),
        Rewb::Test(a, c) => {
            let lookup = |x: &Var| {
                scope.iter().rev().find(|(old, _)| old == x).map(|(_, new)| new.clone()).unwrap_or_else(|| x.clone())
            };
            Rewb::Test(a.clone(), c.map_vars(&lookup))
        }
        Rewb::Union(l, r) => {
            let l = go(l, free, next, scope);
            Rewb::Union(Box::new(l), Box::new(go(r, free, next, scope)))
        }
        Rewb::Concat(l, r) => {
            let l = go(l, free, next, scope);
            Rewb::Concat(Box::new(l), Box::new(go(r, free, next, scope)))
        }
        Rewb::Star(b) => Rewb::Star(Box::new(go(b, free, next, scope))),
        Rewb::Bind(a, x, b) => {
            *next += 1;
            let mut name = format!("{}_{}", x.as_str(), next);
            while free.iter().any(|f| f.as_str() == name) {
                name.push('_');
            }
            let fresh = Var::lit(&name);
            scope.push((x.clone(), fresh.clone()));
            let body = go(b, free, next, scope);
            scope.pop();
            Rewb::Bind(a.clone(), fresh, Box::new(body))
        }
    }
}

/// True when binder names are pairwise distinct and disjoint from the free
/// variables.
pub fn is_alpha_renamed(e: &Rewb) -> bool {
    first_clash(e).is_none()
}

pub(crate) fn first_clash(e: &Rewb) -> Option<Var> {
    let free = free_vars(e);
    let mut seen = HashSet::new();
    for x in e.binders() {
        if free.contains(x) || !seen.insert(x) {
            return Some(x.clone());
        }
    }
    None
}
