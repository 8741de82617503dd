//! Data-parallel driver for embarrassingly parallel workloads: Monte-Carlo
//! sampling and corpus-wide checks. With the `parallel` feature (default)
//! the maps run on rayon; without it they run sequentially. Either way the
//! output is bit-identical: results keep input order and every trajectory
//! derives its own seed from the base seed, never from thread identity.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use std::collections::BTreeMap;

use crate::adequacy::{check_invariance, CheckReport, HarnessError};
use crate::denotational::DenoteConfig;
use crate::operational::{run_sample, RunResult, StuckError};
use crate::prob::Rat;
use crate::syntax::PTerm;

/// Order-preserving map, parallel when the `parallel` feature is on.
pub fn par_map<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Send + Sync,
{
    #[cfg(feature = "parallel")]
    {
        items.par_iter().map(|item| f(item)).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.iter().map(f).collect()
    }
}

/// splitmix64 finalizer: decorrelates consecutive indices into
/// independent-looking 64-bit seeds.
pub fn derive_seed(base: u64, index: u64) -> u64 {
    let mut z = base.wrapping_add(index.wrapping_mul(0x9e37_79b9_7f4a_7c15));
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// `runs` independent trajectories of m. Trajectory i is seeded with
/// derive_seed(base_seed, i), so the result vector does not depend on the
/// schedule or on the `parallel` feature.
pub fn sample_many(
    m: &PTerm,
    base_seed: u64,
    runs: usize,
    max_steps: usize,
) -> Result<Vec<RunResult>, StuckError> {
    let indices: Vec<u64> = (0..runs as u64).collect();
    par_map(&indices, |i| run_sample(m, derive_seed(base_seed, *i), max_steps))
        .into_iter()
        .collect()
}

/// Empirical summary of a batch of trajectories.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Tally {
    /// Finished runs per reached numeral.
    pub numerals: BTreeMap<u64, usize>,
    /// Finished runs whose weak normal form is not a numeral.
    pub other_values: usize,
    pub timeouts: usize,
}

impl Tally {
    pub fn total(&self) -> usize {
        self.numerals.values().sum::<usize>() + self.other_values + self.timeouts
    }

    /// Empirical frequency of the numeral n.
    pub fn frequency(&self, n: u64) -> Rat {
        let hits = self.numerals.get(&n).copied().unwrap_or(0);
        Rat::new((hits as u64).into(), (self.total().max(1) as u64).into())
    }
}

pub fn tally(results: &[RunResult]) -> Tally {
    let mut t = Tally::default();
    for r in results {
        match r {
            RunResult::Value(PTerm::Num(n)) => *t.numerals.entry(*n).or_insert(0) += 1,
            RunResult::Value(_) => t.other_values += 1,
            RunResult::Timeout(_) => t.timeouts += 1,
        }
    }
    t
}

/// Invariance check over a whole corpus, aggregated in a schedule-free
/// order: reports are sorted by the printed term text.
pub fn corpus_invariance(
    terms: &[PTerm],
    cfg: &DenoteConfig,
    tol: &Rat,
) -> Vec<(String, Result<CheckReport, HarnessError>)> {
    let mut reports: Vec<(String, Result<CheckReport, HarnessError>)> =
        par_map(terms, |m| (m.to_string(), check_invariance(m, cfg, tol)));
    reports.sort_by(|a, b| a.0.cmp(&b.0));
    reports
}
