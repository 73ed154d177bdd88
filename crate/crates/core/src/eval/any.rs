use std::collections::BTreeSet;

use super::{eval_flat, member, DataGraph, DataWord, PairSet};
use crate::ast::{free_vars, DataValue, Rewb, Valuation, Var};
use crate::error::Result;

/// A value token not in `used`: `fresh`, or `fresh_<n>` for the least `n`
/// that avoids a clash.
pub fn fresh_value<'a>(used: impl IntoIterator<Item = &'a DataValue>) -> DataValue {
    fresh_values(used, 1).pop().expect("one value")
}

fn fresh_values<'a>(used: impl IntoIterator<Item = &'a DataValue>, count: usize) -> Vec<DataValue> {
    let used: BTreeSet<&str> = used.into_iter().map(DataValue::as_str).collect();
    let mut out = Vec::new();
    let mut n = 0;
    while out.len() < count {
        let name = if n == 0 { "fresh".to_owned() } else { format!("fresh_{n}") };
        if !used.contains(name.as_str()) {
            out.push(DataValue::lit(&name));
        }
        n += 1;
    }
    out
}

/// Every valuation of `vars` where variable `k` takes a value from
/// `pools[k]`, in lexicographic order.
pub fn valuations(vars: &[Var], pools: &[Vec<DataValue>]) -> Vec<Valuation> {
    let mut out = vec![Valuation::new()];
    for (x, pool) in vars.iter().zip(pools) {
        out = out.iter().flat_map(|nu| pool.iter().map(|d| nu.with(x.clone(), d.clone()))).collect();
    }
    out
}

/// The valuations [`member_any`] and [`eval_any`] try: each free variable of
/// `e` ranges over `values` plus one fresh value shared by all variables.
pub fn candidate_valuations<'a>(e: &Rewb, values: impl IntoIterator<Item = &'a DataValue>) -> Vec<Valuation> {
    candidates(e, values.into_iter().collect(), false)
}

/// Candidate valuations for the free variables of `e`: every variable
/// ranges over `values` plus one fresh value, shared by all variables
/// unless `distinct` is set.
fn candidates(e: &Rewb, values: BTreeSet<&DataValue>, distinct: bool) -> Vec<Valuation> {
    let vars: Vec<Var> = free_vars(e).into_iter().collect();
    let fresh = fresh_values(values.iter().copied(), if distinct { vars.len() } else { 1 });
    let base: Vec<DataValue> = values.into_iter().cloned().collect();
    let pools: Vec<Vec<DataValue>> = (0..vars.len())
        .map(|k| {
            let mut pool = base.clone();
            pool.push(fresh[if distinct { k } else { 0 }].clone());
            pool
        })
        .collect();
    valuations(&vars, &pools)
}

/// `w ∈ L(e)`, the union of `L(e, nu)` over all compatible `nu`.
///
/// Conditions only compare a variable with the current data value, so a
/// variable's value matters only through which positions of `w` it equals;
/// the values of `w` plus one fresh value cover every case.
pub fn member_any(e: &Rewb, w: &DataWord) -> Result<bool> {
    member_any_impl(e, w, false)
}

/// [`member_any`] with a separate fresh value for each free variable.
pub fn member_any_distinct_fresh(e: &Rewb, w: &DataWord) -> Result<bool> {
    member_any_impl(e, w, true)
}

fn member_any_impl(e: &Rewb, w: &DataWord, distinct: bool) -> Result<bool> {
    for nu in candidates(e, w.values(), distinct) {
        if member(e, w, &nu)? {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Union of [`eval_flat`] over valuations of the free variables into the
/// graph's values plus one shared fresh value.
pub fn eval_any(e: &Rewb, g: &DataGraph) -> Result<PairSet> {
    eval_any_impl(e, g, false)
}

/// [`eval_any`] with a separate fresh value for each free variable.
pub fn eval_any_distinct_fresh(e: &Rewb, g: &DataGraph) -> Result<PairSet> {
    eval_any_impl(e, g, true)
}

fn eval_any_impl(e: &Rewb, g: &DataGraph, distinct: bool) -> Result<PairSet> {
    let mut out = PairSet::new();
    for nu in candidates(e, g.values(), distinct) {
        out.extend(eval_flat(e, g, &nu)?);
    }
    Ok(out)
}
