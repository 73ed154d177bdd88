use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::ast::{Condition, DataValue, Letter, Rewb};
use crate::automata::classical::complement_rewb;
use crate::error::{Error, Result, SourceError};
use crate::eval::{fresh_value, DataWord};
use crate::witness::{r_expr, u_word};

/// State budget for the complement automata inside `Δ`.
pub const DEFAULT_COMPLEMENT_STATES: usize = 10_000;

const HASH: &str = "hash";

fn dollar(j: usize) -> String {
    format!("dollar{j}")
}

fn all(ls: &[Letter]) -> Vec<&Letter> {
    ls.iter().collect()
}

fn is_dollar(a: &Letter) -> bool {
    a.as_str().strip_prefix("dollar").is_some_and(|n| !n.is_empty() && n.bytes().all(|b| b.is_ascii_digit()))
}

/// A Post correspondence instance. Words are strings whose characters are
/// the letters, so they can never collide with the multi-character letters
/// the encoding reserves (`hash`, `dollar<j>`, `a<j>`, `b<j>`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PcpInstance {
    pairs: Vec<(String, String)>,
}

impl PcpInstance {
    pub fn new(pairs: Vec<(String, String)>) -> Result<Self> {
        if pairs.is_empty() {
            return Err(Error::invalid("a PCP instance needs at least one pair"));
        }
        for (u, v) in &pairs {
            if u.is_empty() || v.is_empty() {
                return Err(Error::invalid("PCP words must be nonempty"));
            }
            if let Some(c) = u.chars().chain(v.chars()).find(|c| !c.is_ascii_lowercase()) {
                return Err(Error::invalid(format!("PCP letters are lowercase ASCII letters, found `{c}`")));
            }
        }
        Ok(PcpInstance { pairs })
    }

    /// Parses `ab/a,c/bc`.
    pub fn parse(text: &str) -> Result<Self> {
        let mut pairs = Vec::new();
        let mut offset = 0;
        for part in text.split(',') {
            let col = offset + 1;
            offset += part.len() + 1;
            let (u, v) = part
                .trim()
                .split_once('/')
                .ok_or_else(|| Error::Parse(SourceError::new(format!("expected `u/v`, found `{}`", part.trim()), 1, col)))?;
            pairs.push((u.to_owned(), v.to_owned()));
        }
        PcpInstance::new(pairs)
    }

    pub fn pairs(&self) -> &[(String, String)] {
        &self.pairs
    }

    /// The letters occurring in the pairs, sorted.
    pub fn alphabet(&self) -> Vec<Letter> {
        let mut cs: Vec<char> = self.pairs.iter().flat_map(|(u, v)| u.chars().chain(v.chars())).collect();
        cs.sort_unstable();
        cs.dedup();
        cs.into_iter().map(|c| Letter::lit(&c.to_string())).collect()
    }

    fn side(&self, seq: &[usize], left: bool) -> Result<String> {
        let mut out = String::new();
        for &j in seq {
            let (u, v) = self.pairs.get(j.wrapping_sub(1)).ok_or_else(|| {
                Error::invalid(format!("pair index {j} is out of range 1..={}", self.pairs.len()))
            })?;
            out.push_str(if left { u } else { v });
        }
        Ok(out)
    }
}

impl fmt::Display for PcpInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.pairs.iter().map(|(u, v)| format!("{u}/{v}")).collect();
        write!(f, "{}", parts.join(","))
    }
}

/// Whether the 1-based index sequence `seq` is a solution. The empty
/// sequence is not a solution.
pub fn pcp_check_solution(inst: &PcpInstance, seq: &[usize]) -> Result<bool> {
    Ok(!seq.is_empty() && inst.side(seq, true)? == inst.side(seq, false)?)
}

/// The encoding of `seq`, which must be a solution.
pub fn pcp_encode(inst: &PcpInstance, seq: &[usize], i: usize) -> Result<DataWord> {
    if !pcp_check_solution(inst, seq)? {
        return Err(Error::invalid("the index sequence is not a solution; use pcp_encode_unchecked"));
    }
    pcp_encode_unchecked(inst, seq, i)
}

/// `θ1 (hash,d1) z (hash,d2) θ2` for any nonempty index sequence. Each side
/// lists `(dollar<l_t>, h<t>)` before the letters of the `t`-th chosen
/// word, and numbers its letters `1, 2, …` from left to right; `z` is the
/// shortest nonempty word of the witness language at level `i`.
pub fn pcp_encode_unchecked(inst: &PcpInstance, seq: &[usize], i: usize) -> Result<DataWord> {
    if seq.is_empty() {
        return Err(Error::invalid("the index sequence must be nonempty"));
    }
    inst.side(seq, true)?;
    let side = |left: bool| {
        let mut w = DataWord::new();
        let mut pos = 0;
        for (t, &j) in seq.iter().enumerate() {
            w.push(Letter::lit(&dollar(j)), DataValue::lit(&format!("h{}", t + 1)));
            let (u, v) = &inst.pairs[j - 1];
            for c in (if left { u } else { v }).chars() {
                pos += 1;
                w.push(Letter::lit(&c.to_string()), DataValue::lit(&pos.to_string()));
            }
        }
        w
    };
    let mut w = side(true);
    w.push(Letter::lit(HASH), DataValue::lit("d1"));
    w = w.concat(&u_word(i, 1)?);
    w.push(Letter::lit(HASH), DataValue::lit("d2"));
    Ok(w.concat(&side(false)))
}

/// A single property of the encoding to break.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PcpMutation {
    /// The first dollar of the left side becomes a plain letter.
    LetterShape,
    /// The first `hash` reuses the value of the first left symbol.
    RepeatedHashValue,
    /// The last left symbol reuses the value of the first.
    RepeatedPrefixValue,
    /// The last dollar of the right side gets a fresh value.
    DollarValueMismatch,
    /// The last plain letter of the right side gets a fresh value.
    PositionValueMismatch,
    /// A plain letter of the right side changes but keeps its value.
    LetterAtSharedValue,
}

impl PcpMutation {
    pub const ALL: [PcpMutation; 6] = [
        PcpMutation::LetterShape,
        PcpMutation::RepeatedHashValue,
        PcpMutation::RepeatedPrefixValue,
        PcpMutation::DollarValueMismatch,
        PcpMutation::PositionValueMismatch,
        PcpMutation::LetterAtSharedValue,
    ];

    pub fn name(self) -> &'static str {
        match self {
            PcpMutation::LetterShape => "letter-shape",
            PcpMutation::RepeatedHashValue => "repeated-hash-value",
            PcpMutation::RepeatedPrefixValue => "repeated-prefix-value",
            PcpMutation::DollarValueMismatch => "dollar-value-mismatch",
            PcpMutation::PositionValueMismatch => "position-value-mismatch",
            PcpMutation::LetterAtSharedValue => "letter-at-shared-value",
        }
    }
}

impl fmt::Display for PcpMutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PcpMutation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        PcpMutation::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::invalid(format!("unknown mutation `{s}`")))
    }
}

/// Breaks one property of an encoding produced by [`pcp_encode`]. The seed
/// picks among equally suitable positions and replacement letters.
pub fn pcp_mutate(w: &DataWord, kind: PcpMutation, seed: u64) -> Result<DataWord> {
    let hashes: Vec<usize> = (0..w.len()).filter(|&p| w.0[p].0.as_str() == HASH).collect();
    let &[h1, h2] = hashes.as_slice() else {
        return Err(Error::invalid("an encoding has exactly two `hash` symbols"));
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = w.clone();
    let plain = |p: &usize| !is_dollar(&w.0[*p].0);
    let left: Vec<usize> = (0..h1).collect();
    let right: Vec<usize> = (h2 + 1..w.len()).collect();
    let mut sigma: Vec<Letter> =
        left.iter().chain(&right).filter(|p| plain(p)).map(|&p| w.0[p].0.clone()).collect();
    sigma.sort();
    sigma.dedup();
    let missing = |what: &str| Error::invalid(format!("the word has no {what} to mutate"));
    let fresh = fresh_value(w.values());
    match kind {
        PcpMutation::LetterShape => {
            let p = *left.iter().find(|p| !plain(p)).ok_or_else(|| missing("left dollar"))?;
            out.0[p].0 = sigma.choose(&mut rng).ok_or_else(|| missing("plain letter"))?.clone();
        }
        PcpMutation::RepeatedHashValue => {
            let first = left.first().ok_or_else(|| missing("left side"))?;
            out.0[h1].1 = w.0[*first].1.clone();
        }
        PcpMutation::RepeatedPrefixValue => {
            if left.len() < 2 {
                return Err(missing("second left symbol"));
            }
            out.0[h1 - 1].1 = w.0[0].1.clone();
        }
        PcpMutation::DollarValueMismatch => {
            let p = *right.iter().rev().find(|p| !plain(p)).ok_or_else(|| missing("right dollar"))?;
            out.0[p].1 = fresh;
        }
        PcpMutation::PositionValueMismatch => {
            let p = *right.iter().rev().find(|p| plain(p)).ok_or_else(|| missing("right letter"))?;
            out.0[p].1 = fresh;
        }
        PcpMutation::LetterAtSharedValue => {
            let candidates: Vec<usize> = right.iter().copied().filter(|p| plain(p)).collect();
            let p = *candidates.choose(&mut rng).ok_or_else(|| missing("right letter"))?;
            let others: Vec<&Letter> = sigma.iter().filter(|a| **a != w.0[p].0).collect();
            out.0[p].0 = (*others.choose(&mut rng).ok_or_else(|| missing("second plain letter"))?).clone();
        }
    }
    Ok(out)
}

/// The expression `Δ` over level `i`, with the default complement budget.
pub fn pcp_delta(inst: &PcpInstance, i: usize) -> Result<Rewb> {
    pcp_delta_with_budget(inst, i, DEFAULT_COMPLEMENT_STATES)
}

/// `Δ` accepts every word of the shape `θ1 hash r hash θ2` (with `r` in the
/// witness language at level `i`) that fails to encode a solution: a side
/// of the wrong shape, a repeated value where values must be unique, or a
/// disagreement between the two sides on dollars, positions or letters.
pub fn pcp_delta_with_budget(inst: &PcpInstance, i: usize, max_states: usize) -> Result<Rewb> {
    let r = r_expr(i)?;
    let sigma = inst.alphabet();
    let n = inst.pairs.len();
    let dollars: Vec<Letter> = (1..=n).map(|j| Letter::lit(&dollar(j))).collect();
    let gamma_p: Vec<Letter> = sigma.iter().chain(&dollars).cloned().collect();
    let gamma: Vec<Letter> = gamma_p.iter().cloned().chain([Letter::lit(HASH)]).collect();

    let atom = |a: &Letter| Rewb::atom(a.as_str());
    let any_of = |ls: &[Letter]| Rewb::union_all(ls.iter().map(atom)).expect("nonempty alphabet");
    let star_of = |ls: &[Letter]| any_of(ls).star();
    let tests = |ls: &[&Letter], c: &Condition| {
        Rewb::union_all(ls.iter().map(|a| Rewb::test(a.as_str(), c.clone()))).expect("nonempty alphabet")
    };
    let g = || star_of(&gamma);
    let s = || star_of(&sigma);
    let h = || Rewb::atom(HASH);
    let mid = || h().concat(r.clone()).concat(h());
    let opt_dollar = || Rewb::Eps.union(any_of(&dollars));
    let (eq_x, ne_x, ne_y) = (Condition::eq("x"), Condition::neq("x"), Condition::neq("y"));

    let mut terms: Vec<Rewb> = Vec::new();

    // shape: one side is not a sequence of dollar-prefixed pair words
    for left in [true, false] {
        let blocks = Rewb::union_all(inst.pairs.iter().enumerate().map(|(j, (u, v))| {
            let word = if left { u } else { v };
            Rewb::concat_all(std::iter::once(Rewb::atom(&dollar(j + 1))).chain(word.chars().map(|c| Rewb::atom(&c.to_string()))))
        }))
        .expect("nonempty instance");
        if let Some(phi) = complement_rewb(&blocks.star(), &gamma_p, max_states)? {
            terms.push(if left { phi.concat(mid()).concat(g()) } else { g().concat(mid()).concat(phi) });
        }
    }

    // the hash values occur elsewhere
    for a in &gamma {
        let a = a.as_str();
        terms.push(Rewb::concat_all([g(), Rewb::bind(a, "x", g().concat(Rewb::test(HASH, eq_x.clone()))), r.clone(), g()]));
        terms.push(g().concat(Rewb::bind(HASH, "x", Rewb::concat_all([r.clone(), g(), Rewb::test(a, eq_x.clone()), g()]))));
        terms.push(Rewb::concat_all([g(), Rewb::bind(a, "x", Rewb::concat_all([g(), h(), r.clone(), Rewb::test(HASH, eq_x.clone())])), g()]));
        terms.push(Rewb::concat_all([g(), h(), r.clone(), Rewb::bind(HASH, "x", Rewb::concat_all([g(), Rewb::test(a, eq_x.clone()), g()]))]));
    }

    // a value repeats within one side
    let repeat = |a: &Letter| Rewb::bind(a.as_str(), "x", Rewb::concat_all([g(), tests(&all(&gamma), &eq_x), g()]));
    for a in &gamma {
        terms.push(Rewb::concat_all([g(), repeat(a), mid(), g()]));
        terms.push(Rewb::concat_all([g(), mid(), g(), repeat(a)]));
    }

    // first or last dollars disagree
    for d in &dollars {
        let d = d.as_str();
        terms.push(Rewb::bind(d, "x", Rewb::concat_all([g(), mid(), tests(&all(&dollars), &ne_x)])).concat(g()));
        terms.push(Rewb::concat_all([g(), Rewb::bind(d, "x", Rewb::concat_all([s(), mid(), g(), tests(&all(&dollars), &ne_x)])), s()]));
    }

    // consecutive dollars on the left are not consecutive on the right
    for d1 in &dollars {
        for d2 in &dollars {
            let inner = Rewb::concat_all([g(), mid(), g(), tests(&all(&dollars), &eq_x), s(), tests(&all(&dollars), &ne_y)]);
            let body = s().concat(Rewb::bind(d2.as_str(), "y", inner));
            terms.push(Rewb::concat_all([g(), Rewb::bind(d1.as_str(), "x", body), g()]));
        }
    }

    // first or last plain letters disagree
    for a in &sigma {
        let first = Rewb::bind(a.as_str(), "x", Rewb::concat_all([g(), mid(), any_of(&dollars), tests(&all(&sigma), &ne_x)]));
        terms.push(Rewb::concat_all([any_of(&dollars), first, g()]));
        terms.push(g().concat(Rewb::bind(a.as_str(), "x", Rewb::concat_all([mid(), g(), tests(&all(&sigma), &ne_x)]))));
    }

    // consecutive plain letters on the left are not consecutive on the right
    for a1 in &sigma {
        for a2 in &sigma {
            let inner = Rewb::concat_all([g(), mid(), g(), tests(&all(&sigma), &eq_x), opt_dollar(), tests(&all(&sigma), &ne_y)]);
            let body = opt_dollar().concat(Rewb::bind(a2.as_str(), "y", inner));
            terms.push(Rewb::concat_all([g(), Rewb::bind(a1.as_str(), "x", body), g()]));
        }
    }

    // the same value carries different letters on the two sides
    for a in &gamma_p {
        let others: Vec<&Letter> = gamma_p.iter().filter(|b| *b != a).collect();
        if others.is_empty() {
            continue;
        }
        let body = Rewb::concat_all([g(), mid(), g(), tests(&others, &eq_x)]);
        terms.push(Rewb::concat_all([g(), Rewb::bind(a.as_str(), "x", body), g()]));
    }

    Ok(Rewb::union_all(terms).expect("at least one family"))
}
