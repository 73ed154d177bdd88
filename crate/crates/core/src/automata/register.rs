use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;

use super::glushkov::{Glushkov, MetaRe};
use crate::ast::rename::first_clash;
use crate::ast::{free_vars, Condition, DataValue, Letter, Rewb, Valuation, Var};
use crate::error::{Error, Result};
use crate::eval::DataWord;
use crate::syntax::print_condition;

/// One transition of a [`RegisterNfa`]. A missing guard is `true`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct RegTransition {
    pub src: usize,
    pub letter: Letter,
    pub guard: Option<Condition>,
    pub store: Option<Var>,
    pub dst: usize,
}

impl fmt::Display for RegTransition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -> {} : {}", self.src, self.dst, self.letter)?;
        if let Some(c) = &self.guard {
            write!(f, " [{}]", print_condition(c))?;
        }
        if let Some(x) = &self.store {
            write!(f, " store {x}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub(crate) struct RegSym {
    letter: Letter,
    guard: Option<Condition>,
    store: Option<Var>,
}

/// Flattened automaton with guards and store actions, one state per letter
/// occurrence plus an initial state 0.
#[derive(Clone, Debug)]
pub struct RegisterNfa {
    pub state_count: usize,
    pub initial: usize,
    pub finals: BTreeSet<usize>,
    pub transitions: Vec<RegTransition>,
    /// Free variables of the source expression; their registers start at
    /// the caller's valuation, all other registers start undefined.
    pub free: BTreeSet<Var>,
    positions: Glushkov<RegSym>,
}

fn flatten(e: &Rewb) -> MetaRe<RegSym> {
    let sym = |a: &Letter, guard: Option<&Condition>, store: Option<&Var>| {
        MetaRe::Sym(RegSym { letter: a.clone(), guard: guard.cloned(), store: store.cloned() })
    };
    match e {
        Rewb::Eps => MetaRe::Eps,
        Rewb::Atom(a) => sym(a, None, None),
        Rewb::Test(a, c) => sym(a, Some(c), None),
        Rewb::Union(l, r) => flatten(l).union(flatten(r)),
        Rewb::Concat(l, r) => flatten(l).concat(flatten(r)),
        Rewb::Star(b) => flatten(b).star(),
        Rewb::Bind(a, x, b) => sym(a, None, Some(x)).concat(flatten(b)),
    }
}

/// Compiles an alpha-renamed expression to a register NFA.
pub fn register_nfa(e: &Rewb) -> Result<RegisterNfa> {
    if let Some(x) = first_clash(e) {
        return Err(Error::NotAlphaRenamed(x));
    }
    let positions = Glushkov::new(flatten(e));
    let transitions = positions
        .edges()
        .map(|(p, q)| {
            let s = positions.label(q);
            RegTransition { src: p, letter: s.letter.clone(), guard: s.guard.clone(), store: s.store.clone(), dst: q }
        })
        .collect();
    Ok(RegisterNfa {
        state_count: positions.state_count(),
        initial: 0,
        finals: (0..positions.state_count()).filter(|&q| positions.finals[q]).collect(),
        transitions,
        free: free_vars(e),
        positions,
    })
}

impl RegisterNfa {
    /// Variables read by some guard.
    pub fn guard_vars(&self) -> BTreeSet<Var> {
        self.transitions.iter().filter_map(|t| t.guard.as_ref()).flat_map(Condition::vars).collect()
    }

    /// Runs the automaton on `w` with registers for free variables taken
    /// from `nu`.
    pub fn accepts(&self, w: &DataWord, nu: &Valuation) -> Result<bool> {
        let m = Machine::new(self);
        let mut values = Interner::default();
        let regs = m.initial_regs(nu, &mut values);
        let word: Vec<(u32, u32)> = w.iter().map(|(a, d)| (m.letter_id(a), values.intern(d))).collect();
        m.accepts(&word, regs)
    }

    pub fn dump(&self) -> String {
        let mut out = format!("states {}\ninitial {}\nfinal", self.state_count, self.initial);
        for q in &self.finals {
            out.push_str(&format!(" {q}"));
        }
        out.push('\n');
        for t in &self.transitions {
            out.push_str(&format!("{t}\n"));
        }
        out
    }
}

/// Interns data values to dense ids.
#[derive(Clone, Debug, Default)]
pub(crate) struct Interner {
    ids: HashMap<DataValue, u32>,
    values: Vec<DataValue>,
}

impl Interner {
    pub(crate) fn intern(&mut self, d: &DataValue) -> u32 {
        if let Some(&i) = self.ids.get(d) {
            return i;
        }
        let i = self.values.len() as u32;
        self.ids.insert(d.clone(), i);
        self.values.push(d.clone());
        i
    }
}

pub(crate) const UNDEF: u32 = u32::MAX;

/// Register contents, indexed like [`Machine::vars`]; [`UNDEF`] marks an
/// unassigned register.
pub(crate) type Regs = Vec<u32>;

#[derive(Clone, Debug)]
enum Guard {
    Eq(usize),
    Neq(usize),
    Not(Box<Guard>),
    And(Box<Guard>, Box<Guard>),
    Or(Box<Guard>, Box<Guard>),
}

impl Guard {
    fn new(c: &Condition, index: &HashMap<Var, usize>) -> Guard {
        match c {
            Condition::Eq(x) => Guard::Eq(index[x]),
            Condition::Neq(x) => Guard::Neq(index[x]),
            Condition::Not(c) => Guard::Not(Box::new(Guard::new(c, index))),
            Condition::And(l, r) => Guard::And(Box::new(Guard::new(l, index)), Box::new(Guard::new(r, index))),
            Condition::Or(l, r) => Guard::Or(Box::new(Guard::new(l, index)), Box::new(Guard::new(r, index))),
        }
    }

    fn holds(&self, regs: &[u32], d: u32, vars: &[Var]) -> Result<bool> {
        let read = |i: usize| match regs[i] {
            UNDEF => Err(Error::UndefinedRegister(vars[i].clone())),
            v => Ok(v == d),
        };
        Ok(match self {
            Guard::Eq(i) => read(*i)?,
            Guard::Neq(i) => !read(*i)?,
            Guard::Not(g) => !g.holds(regs, d, vars)?,
            Guard::And(l, r) => l.holds(regs, d, vars)? && r.holds(regs, d, vars)?,
            Guard::Or(l, r) => l.holds(regs, d, vars)? || r.holds(regs, d, vars)?,
        })
    }
}

#[derive(Clone, Debug)]
struct Step {
    letter: u32,
    guard: Option<Guard>,
    store: Option<usize>,
}

/// A register NFA with letters, registers and guards resolved to indices.
#[derive(Clone, Debug)]
pub(crate) struct Machine {
    pub vars: Vec<Var>,
    free: Vec<usize>,
    letters: HashMap<Letter, u32>,
    steps: Vec<Step>,
    succ: Vec<Vec<usize>>,
    finals: Vec<bool>,
}

impl Machine {
    pub(crate) fn new(nfa: &RegisterNfa) -> Machine {
        let g = &nfa.positions;
        let mut vars: BTreeSet<Var> = nfa.free.clone();
        for s in &g.symbols {
            vars.extend(s.store.iter().cloned());
            vars.extend(s.guard.iter().flat_map(Condition::vars));
        }
        let vars: Vec<Var> = vars.into_iter().collect();
        let index: HashMap<Var, usize> = vars.iter().cloned().enumerate().map(|(i, x)| (x, i)).collect();
        let mut letters = HashMap::new();
        let mut steps = vec![Step { letter: UNDEF, guard: None, store: None }];
        for s in &g.symbols {
            let n = letters.len() as u32;
            let letter = *letters.entry(s.letter.clone()).or_insert(n);
            steps.push(Step {
                letter,
                guard: s.guard.as_ref().map(|c| Guard::new(c, &index)),
                store: s.store.as_ref().map(|x| index[x]),
            });
        }
        Machine {
            free: nfa.free.iter().map(|x| index[x]).collect(),
            vars,
            letters,
            steps,
            succ: g.succ.clone(),
            finals: g.finals.clone(),
        }
    }

    /// Letter id, or [`UNDEF`] for a letter the expression never reads.
    pub(crate) fn letter_id(&self, a: &Letter) -> u32 {
        self.letters.get(a).copied().unwrap_or(UNDEF)
    }

    pub(crate) fn initial_regs(&self, nu: &Valuation, values: &mut Interner) -> Regs {
        let mut regs = vec![UNDEF; self.vars.len()];
        for &i in &self.free {
            if let Some(d) = nu.get(&self.vars[i]) {
                regs[i] = values.intern(d);
            }
        }
        regs
    }

    pub(crate) fn is_final(&self, q: usize) -> bool {
        self.finals[q]
    }

    /// Calls `f` with every successor configuration after reading
    /// `(letter, value)` from state `q`.
    pub(crate) fn step(
        &self,
        q: usize,
        regs: &Regs,
        letter: u32,
        value: u32,
        mut f: impl FnMut(usize, Regs),
    ) -> Result<()> {
        if letter == UNDEF {
            return Ok(());
        }
        for &q2 in &self.succ[q] {
            let s = &self.steps[q2];
            if s.letter != letter {
                continue;
            }
            if let Some(g) = &s.guard {
                if !g.holds(regs, value, &self.vars)? {
                    continue;
                }
            }
            let mut next = regs.clone();
            if let Some(i) = s.store {
                next[i] = value;
            }
            f(q2, next);
        }
        Ok(())
    }

    pub(crate) fn accepts(&self, word: &[(u32, u32)], regs: Regs) -> Result<bool> {
        let mut cur: HashSet<(usize, Regs)> = [(0, regs)].into();
        for &(a, d) in word {
            let mut next = HashSet::new();
            for (q, regs) in &cur {
                self.step(*q, regs, a, d, |q2, r2| {
                    next.insert((q2, r2));
                })?;
            }
            if next.is_empty() {
                return Ok(false);
            }
            cur = next;
        }
        Ok(cur.iter().any(|(q, _)| self.finals[*q]))
    }
}
