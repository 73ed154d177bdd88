use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{free_vars, DataValue, Rewb, Valuation, Var};
use crate::error::{Error, Result};

/// Randomized check that `vars` are indistinguishable in `e`: every
/// condition of `e` gives the same verdict under two valuations that agree
/// off `vars` and map `vars` onto the same set of values.
///
/// Returns `false` on the first counterexample. `true` only means none was
/// found in `trials` draws.
pub fn indistinguishable_sampled(e: &Rewb, vars: &[Var], trials: usize, seed: u64) -> Result<bool> {
    let free = free_vars(e);
    if let Some(x) = vars.iter().find(|x| !free.contains(x)) {
        return Err(Error::NotFree(x.clone()));
    }
    let conditions = e.conditions();
    if vars.is_empty() || conditions.is_empty() {
        return Ok(true);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pool: Vec<DataValue> = (0..vars.len() + 2).map(|i| DataValue::lit(&format!("v{i}"))).collect();

    for _ in 0..trials {
        let c = conditions[rng.gen_range(0..conditions.len())];
        let d = pool.choose(&mut rng).expect("nonempty pool");

        let mut base = Valuation::new();
        for x in c.vars() {
            if !vars.contains(&x) {
                base.insert(x, pool.choose(&mut rng).expect("nonempty pool").clone());
            }
        }
        let left: Vec<DataValue> = vars.iter().map(|_| pool.choose(&mut rng).unwrap().clone()).collect();
        let right = same_range(&left, &mut rng);

        let mut nu = base.clone();
        let mut nu2 = base;
        for (x, (l, r)) in vars.iter().zip(left.iter().zip(&right)) {
            nu.insert(x.clone(), l.clone());
            nu2.insert(x.clone(), r.clone());
        }
        if c.holds(d, &nu)? != c.holds(d, &nu2)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// A random assignment with the same set of values as `values`.
fn same_range(values: &[DataValue], rng: &mut impl Rng) -> Vec<DataValue> {
    let mut range: Vec<DataValue> = values.to_vec();
    range.sort();
    range.dedup();
    range.shuffle(rng);
    let mut slots: Vec<usize> = (0..values.len()).collect();
    slots.shuffle(rng);
    let mut out: Vec<Option<DataValue>> = vec![None; values.len()];
    for (slot, v) in slots.iter().zip(&range) {
        out[*slot] = Some(v.clone());
    }
    out.into_iter().map(|v| v.unwrap_or_else(|| range.choose(rng).unwrap().clone())).collect()
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeSet;

    use super::*;
    use crate::gadgets::eval_expr;
    use crate::syntax::parse_expr;

    fn vars(names: &[&str]) -> Vec<Var> {
        names.iter().map(|n| Var::lit(n)).collect()
    }

    #[test]
    fn eval_query_variables_are_indistinguishable() {
        let e = eval_expr(2).unwrap();
        assert!(indistinguishable_sampled(&e, &vars(&["x_1", "x_2"]), 200, 7).unwrap());
    }

    #[test]
    fn separate_tests_distinguish() {
        let e = parse_expr("a[x1=].b[x2=]").unwrap();
        assert!(!indistinguishable_sampled(&e, &vars(&["x1", "x2"]), 200, 7).unwrap());
    }

    #[test]
    fn exhaustive_counterexample_exists() {
        // over two values, x1 -> 0, x2 -> 1 versus x1 -> 1, x2 -> 0 separates x1=
        let c = parse_expr("a[x1=]").unwrap();
        let c = c.conditions()[0].clone();
        let (zero, one) = (DataValue::lit("0"), DataValue::lit("1"));
        let nu: Valuation = [(Var::lit("x1"), zero.clone()), (Var::lit("x2"), one.clone())].into_iter().collect();
        let nu2: Valuation = [(Var::lit("x1"), one), (Var::lit("x2"), zero.clone())].into_iter().collect();
        assert_ne!(c.holds(&zero, &nu).unwrap(), c.holds(&zero, &nu2).unwrap());
    }

    #[test]
    fn empty_variable_list() {
        assert!(indistinguishable_sampled(&parse_expr("a").unwrap(), &[], 10, 0).unwrap());
    }

    #[test]
    fn bound_variable_rejected() {
        let e = parse_expr("a@x(b[x=])").unwrap();
        assert!(matches!(indistinguishable_sampled(&e, &vars(&["x"]), 10, 0), Err(Error::NotFree(_))));
    }

    #[test]
    fn same_range_preserves_value_set() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let vals: Vec<DataValue> = (0..4).map(|_| DataValue::lit(&format!("v{}", rng.gen_range(0..3)))).collect();
            let out = same_range(&vals, &mut rng);
            let a: BTreeSet<_> = vals.iter().collect();
            let b: BTreeSet<_> = out.iter().collect();
            assert_eq!(a, b);
        }
    }
}
