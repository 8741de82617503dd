//! Weak leftmost-outermost small-step semantics. Reduction never goes under
//! a lambda and never touches an application argument; the only
//! probabilistic rule is the coin, which branches with exact rational
//! weights. On top of `step` sit a reproducible seeded sampler and the
//! finite powers of the term matrix (weak-normal terms absorb with a
//! self-loop of weight 1).

use crate::prob::{show_rat, Prob, Rat};
use crate::syntax::{subst, PTerm};
use num::{BigInt, One, Zero};
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::collections::{BTreeMap, HashMap};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("no reduction rule applies to the non-normal term `{term}`")]
pub struct StuckError {
    pub term: PTerm,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StepOutcome {
    /// Numeral or abstraction: no rule applies, the term matrix self-loops.
    WeakNormal,
    Det(PTerm),
    /// The active redex is a coin: heads is the numeral-0 side with weight
    /// kappa, tails the numeral-1 side with weight 1 - kappa.
    Branch {
        kappa: Prob,
        if_heads: PTerm,
        if_tails: PTerm,
    },
}

pub fn step(m: &PTerm) -> Result<StepOutcome, StuckError> {
    match m {
        PTerm::Num(_) | PTerm::Lam { .. } => Ok(StepOutcome::WeakNormal),
        PTerm::Var(_) => Err(StuckError { term: m.clone() }),
        PTerm::Coin(kappa) => Ok(StepOutcome::Branch {
            kappa: kappa.clone(),
            if_heads: PTerm::Num(0),
            if_tails: PTerm::Num(1),
        }),
        PTerm::Fix(inner) => Ok(StepOutcome::Det(PTerm::app(
            (**inner).clone(),
            m.clone(),
        ))),
        PTerm::Succ(inner) => match &**inner {
            PTerm::Num(n) => Ok(StepOutcome::Det(PTerm::Num(n + 1))),
            _ => under(inner, m, |next| PTerm::succ(next)),
        },
        PTerm::If { scrutinee, zero, binder, succ } => match &**scrutinee {
            PTerm::Num(0) => Ok(StepOutcome::Det((**zero).clone())),
            PTerm::Num(n) => Ok(StepOutcome::Det(subst(succ, binder, &PTerm::Num(n - 1)))),
            _ => under(scrutinee, m, |next| PTerm::If {
                scrutinee: Box::new(next),
                zero: zero.clone(),
                binder: binder.clone(),
                succ: succ.clone(),
            }),
        },
        PTerm::App { fun, arg } => {
            if let PTerm::Lam { binder, body, .. } = &**fun {
                return Ok(StepOutcome::Det(subst(body, binder, arg)));
            }
            under(fun, m, |next| PTerm::App {
                fun: Box::new(next),
                arg: arg.clone(),
            })
        }
    }
}

/// Congruence: push the step of `inner` through the context `rebuild`.
/// A weak-normal `inner` here means the whole term is stuck (e.g. an
/// abstraction under succ), which cannot happen for well-typed input.
fn under(
    inner: &PTerm,
    whole: &PTerm,
    rebuild: impl Fn(PTerm) -> PTerm,
) -> Result<StepOutcome, StuckError> {
    match step(inner)? {
        StepOutcome::WeakNormal => Err(StuckError { term: whole.clone() }),
        StepOutcome::Det(next) => Ok(StepOutcome::Det(rebuild(next))),
        StepOutcome::Branch { kappa, if_heads, if_tails } => Ok(StepOutcome::Branch {
            kappa,
            if_heads: rebuild(if_heads),
            if_tails: rebuild(if_tails),
        }),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RunResult {
    Value(PTerm),
    Timeout(PTerm),
}

/// One Monte-Carlo trajectory through the transition system. The generator
/// is ChaCha8 seeded from the 64-bit seed; each coin consumes one 64-bit
/// draw u and takes heads exactly when u/2^64 < kappa as rationals, so runs
/// are bit-reproducible across platforms.
pub fn run_sample(m: &PTerm, seed: u64, max_steps: usize) -> Result<RunResult, StuckError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut current = m.clone();
    for _ in 0..max_steps {
        match step(&current)? {
            StepOutcome::WeakNormal => return Ok(RunResult::Value(current)),
            StepOutcome::Det(next) => current = next,
            StepOutcome::Branch { kappa, if_heads, if_tails } => {
                current = if heads(&mut rng, &kappa) { if_heads } else { if_tails };
            }
        }
    }
    match step(&current)? {
        StepOutcome::WeakNormal => Ok(RunResult::Value(current)),
        _ => Ok(RunResult::Timeout(current)),
    }
}

fn heads(rng: &mut ChaCha8Rng, kappa: &Prob) -> bool {
    let u = rng.next_u64();
    let r = kappa.rat();
    // u/2^64 < p/q  <=>  u*q < p*2^64, all exact
    BigInt::from(u) * r.denom() < r.numer() * (BigInt::one() << 64u32)
}

/// Exact row of Prob^depth at `m`: outcomes are the weak-normal terms
/// reached within `depth` steps, residual is the mass still in flight.
#[derive(Debug, Clone, PartialEq)]
pub struct TermDist {
    outcomes: HashMap<PTerm, Rat>,
    residual: Rat,
}

impl TermDist {
    fn new(outcomes: HashMap<PTerm, Rat>, residual: Rat) -> Self {
        let outcomes: HashMap<_, _> =
            outcomes.into_iter().filter(|(_, w)| !w.is_zero()).collect();
        let total = outcomes
            .values()
            .fold(residual.clone(), |acc, w| acc + w);
        assert!(total.is_one(), "probability not conserved: total {total}");
        TermDist { outcomes, residual }
    }

    pub fn weight(&self, m: &PTerm) -> Rat {
        self.outcomes.get(m).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn outcomes(&self) -> impl Iterator<Item = (&PTerm, &Rat)> {
        self.outcomes.iter()
    }

    pub fn residual(&self) -> &Rat {
        &self.residual
    }

    pub fn outcome_mass(&self) -> Rat {
        self.outcomes.values().fold(Rat::zero(), |acc, w| acc + w)
    }

    pub fn len(&self) -> usize {
        self.outcomes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.outcomes.is_empty()
    }
}

impl Serialize for TermDist {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr {
            outcomes: BTreeMap<String, String>,
            residual: String,
        }
        let outcomes = self
            .outcomes
            .iter()
            .map(|(term, w)| (term.to_string(), show_rat(w)))
            .collect();
        Repr { outcomes, residual: show_rat(&self.residual) }.serialize(serializer)
    }
}

type Row = HashMap<PTerm, Rat>;

fn add_mass(row: &mut Row, term: PTerm, mass: Rat) {
    use std::collections::hash_map::Entry;
    match row.entry(term) {
        Entry::Occupied(mut e) => *e.get_mut() += mass,
        Entry::Vacant(e) => {
            e.insert(mass);
        }
    }
}

fn advance(row: &Row, memo: &mut HashMap<PTerm, StepOutcome>) -> Result<Row, StuckError> {
    let mut next = Row::with_capacity(row.len() + 2);
    for (term, mass) in row {
        let outcome = match memo.get(term) {
            Some(cached) => cached.clone(),
            None => {
                let fresh = step(term)?;
                memo.insert(term.clone(), fresh.clone());
                fresh
            }
        };
        match outcome {
            StepOutcome::WeakNormal => add_mass(&mut next, term.clone(), mass.clone()),
            StepOutcome::Det(successor) => add_mass(&mut next, successor, mass.clone()),
            StepOutcome::Branch { kappa, if_heads, if_tails } => {
                let ph = kappa.rat() * mass;
                let pt = mass - &ph;
                if !ph.is_zero() {
                    add_mass(&mut next, if_heads, ph);
                }
                if !pt.is_zero() {
                    add_mass(&mut next, if_tails, pt);
                }
            }
        }
    }
    Ok(next)
}

/// Full Prob^k row at `m`, keeping non-normal terms. The reduction tree is
/// explored as a DAG: alpha-equivalent terms share one entry, and step
/// results are memoized for the duration of the call.
pub fn power_row(m: &PTerm, k: usize) -> Result<Row, StuckError> {
    let mut row = Row::new();
    row.insert(m.clone(), Rat::one());
    let mut memo = HashMap::new();
    for _ in 0..k {
        row = advance(&row, &mut memo)?;
    }
    Ok(row)
}

pub fn distribution(m: &PTerm, depth: usize) -> Result<TermDist, StuckError> {
    let row = power_row(m, depth)?;
    let mut outcomes = Row::new();
    let mut residual = Rat::zero();
    for (term, mass) in row {
        if term.is_weak_normal() {
            outcomes.insert(term, mass);
        } else {
            residual += mass;
        }
    }
    Ok(TermDist::new(outcomes, residual))
}

/// Prob^depth mass on the numeral n: a certified lower bound for the
/// limit probability, monotone nondecreasing in depth.
pub fn prob_numeral(m: &PTerm, n: u64, depth: usize) -> Result<Rat, StuckError> {
    Ok(distribution(m, depth)?.weight(&PTerm::Num(n)))
}
