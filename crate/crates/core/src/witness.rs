//! The objects separating the levels of the hierarchy: expressions `r_i`,
//! words `u_{i,n}`, words with a mismatch, and a harness for the pumping
//! property that connects them.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::ast::{alpha_rename, classify, Condition, DataValue, Letter, Rewb, Valuation};
use crate::automata::automaton_size;
use crate::error::{Error, Result};
use crate::eval::{member, DataWord};

/// `r_1 = (a1@x1(b1[x1=]))*` and `r_i = (ai@xi(r_{i-1}.bi[xi=]))*`.
pub fn r_expr(i: usize) -> Result<Rewb> {
    if i == 0 {
        return Err(Error::invalid("r_i is defined for i >= 1"));
    }
    let mut r: Option<Rewb> = None;
    for j in 1..=i {
        let x = format!("x{j}");
        let close = Rewb::test(&format!("b{j}"), Condition::eq(&x));
        let body = match r {
            None => close,
            Some(inner) => inner.concat(close),
        };
        r = Some(Rewb::bind(&format!("a{j}"), &x, body).star());
    }
    Ok(r.expect("i >= 1"))
}

fn d(level: usize, index: usize) -> DataValue {
    DataValue::lit(&format!("d_{level}_{index}"))
}

/// `u_{1,n} = Π_{j ≤ n²} (a1, d_1_j)(b1, d_1_j)` and
/// `u_{i,n} = Π_{j ≤ n²} (ai, d_i_j) u_{i-1,n} (bi, d_i_j)`.
pub fn u_word(i: usize, n: usize) -> Result<DataWord> {
    if i == 0 || n == 0 {
        return Err(Error::invalid("u_{i,n} is defined for i, n >= 1"));
    }
    let mut inner = DataWord::new();
    for level in 1..=i {
        let (a, b) = (Letter::lit(&format!("a{level}")), Letter::lit(&format!("b{level}")));
        let mut w = DataWord::new();
        for j in 1..=n * n {
            w.push(a.clone(), d(level, j));
            w.0.extend(inner.iter().cloned());
            w.push(b.clone(), d(level, j));
        }
        inner = w;
    }
    Ok(inner)
}

/// Two positions witnessing that a word is in `Mismatch_{i,n}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MismatchReport {
    /// Position of the `a_j` (0-based).
    pub p: usize,
    /// Position of the next `b_j` after `p`.
    pub p_prime: usize,
    pub j: usize,
    pub d: DataValue,
    pub d_prime: DataValue,
}

/// Checks that `w` has the letters of `u_{i,n}` and some `a_j` whose next
/// `b_j` carries a different value. Only the letter shape and one
/// mismatched pair are checked; other positions may carry any values.
pub fn is_mismatch(w: &DataWord, i: usize, n: usize) -> Option<MismatchReport> {
    let u = u_word(i, n).ok()?;
    if w.letters() != u.letters() {
        return None;
    }
    for (p, (a, d)) in w.iter().enumerate() {
        let Some(j) = a.as_str().strip_prefix('a').and_then(|s| s.parse::<usize>().ok()) else { continue };
        let b = format!("b{j}");
        let next = w.iter().enumerate().skip(p + 1).find(|(_, (c, _))| c.as_str() == b);
        if let Some((p_prime, (_, d_prime))) = next {
            if d != d_prime {
                return Some(MismatchReport { p, p_prime, j, d: d.clone(), d_prime: d_prime.clone() });
            }
        }
    }
    None
}

/// `count` words in `Mismatch_{i,n}`. The first `i` (at most `count`) are
/// canonical: `u_{i,n}` with the last `b_j` given a fresh value, for
/// `j = 1..=i`. The rest change one or two randomly chosen positions to a
/// fresh value or to another value of the word.
pub fn mismatch_samples(i: usize, n: usize, count: usize, seed: u64) -> Result<Vec<DataWord>> {
    let u = u_word(i, n)?;
    let mut out = Vec::with_capacity(count);
    let fresh = |k: usize| DataValue::lit(&format!("m_{k}"));
    for j in 1..=i.min(count) {
        let b = format!("b{j}");
        let last = u.iter().rposition(|(c, _)| c.as_str() == b).expect("b_j occurs");
        let mut w = u.clone();
        w.0[last].1 = fresh(0);
        out.push(w);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let values: Vec<DataValue> = u.values().into_iter().cloned().collect();
    while out.len() < count {
        let mut w = u.clone();
        let changes = rng.gen_range(1..=2);
        for k in 0..changes {
            let p = rng.gen_range(0..w.len());
            let old = w.0[p].1.clone();
            let new = if rng.gen_bool(0.5) {
                fresh(out.len() * 2 + k)
            } else {
                values.iter().filter(|v| **v != old).collect::<Vec<_>>().choose(&mut rng).map(|v| (*v).clone()).unwrap_or_else(|| fresh(0))
            };
            w.0[p].1 = new;
        }
        if is_mismatch(&w, i, n).is_some() {
            out.push(w);
        }
    }
    Ok(out)
}

/// Outcome of [`lemma1_harness`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HarnessReport {
    /// The level `i` used for `u_{i,n}`: the E-level of the expression.
    pub level: usize,
    /// `n` is not larger than `|aut(s)| + 1` or `|var(s)| + 1` for some
    /// sub-expression `s`, so the pumping property is not promised.
    pub size_warning: bool,
    /// Whether `x · u_{i,n} · z` is accepted.
    pub hypothesis_held: bool,
    /// Index of the first accepted mismatch sample, if any.
    pub mismatch_found: Option<usize>,
    pub samples_tried: usize,
}

/// Tests the pumping property on one instance: if `e` accepts
/// `x · u_{i,n} · z` then it should accept `x · ū · z` for some `ū` in
/// `Mismatch_{i,n}`. Up to `budget` samples are tried; not finding one is
/// inconclusive, because the mismatch set is infinite.
pub fn lemma1_harness(
    e: &Rewb,
    n: usize,
    x: &DataWord,
    z: &DataWord,
    nu: &Valuation,
    budget: usize,
) -> Result<HarnessReport> {
    nu.check_compatible(e)?;
    let level = classify(e).e_level;
    let renamed = alpha_rename(e);
    let size_warning = renamed.subexpressions().into_iter().any(|s| {
        let vars: BTreeSet<_> = s.all_vars();
        n <= automaton_size(s) + 1 || n <= vars.len() + 1
    });
    let wrap = |u: &DataWord| x.concat(u).concat(z);
    let hypothesis_held = member(e, &wrap(&u_word(level, n)?), nu)?;
    let mut report = HarnessReport { level, size_warning, hypothesis_held, mismatch_found: None, samples_tried: 0 };
    if !hypothesis_held || budget == 0 {
        return Ok(report);
    }
    for (k, s) in mismatch_samples(level, n, budget, 0)?.iter().enumerate() {
        report.samples_tried += 1;
        if member(e, &wrap(s), nu)? {
            report.mismatch_found = Some(k);
            break;
        }
    }
    Ok(report)
}
