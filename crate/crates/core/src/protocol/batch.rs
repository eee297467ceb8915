//! Parallel batches. Round `i` always uses [`RoundSeed::new(master, i)`], and
//! tallies are integer counts merged by addition, so results do not depend
//! on scheduling.

use std::collections::BTreeMap;

use rayon::prelude::*;

use super::{RoundRecord, RoundSeed};
use crate::error::Result;

pub trait Tally: Default + Send {
    fn add(&mut self, record: &RoundRecord);
    fn merge(&mut self, other: Self);
}

pub fn tally_rounds<T, F>(master: u64, rounds: u64, run: F) -> Result<T>
where
    T: Tally,
    F: Fn(RoundSeed) -> Result<RoundRecord> + Sync,
{
    (0..rounds)
        .into_par_iter()
        .map(|i| run(RoundSeed::new(master, i)))
        .try_fold(T::default, |mut t, rec| {
            t.add(&rec?);
            Ok(t)
        })
        .try_reduce(T::default, |mut a, b| {
            a.merge(b);
            Ok(a)
        })
}

/// All records in round order.
pub fn run_rounds<F>(master: u64, rounds: u64, run: F) -> Result<Vec<RoundRecord>>
where
    F: Fn(RoundSeed) -> Result<RoundRecord> + Sync,
{
    (0..rounds)
        .into_par_iter()
        .map(|i| run(RoundSeed::new(master, i)))
        .collect()
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SuccessCount {
    pub attempts: u64,
    pub successes: u64,
}

impl SuccessCount {
    fn add(&mut self, outcome: Option<bool>) {
        if let Some(ok) = outcome {
            self.attempts += 1;
            self.successes += ok as u64;
        }
    }

    fn merge(&mut self, other: &SuccessCount) {
        self.attempts += other.attempts;
        self.successes += other.successes;
    }

    pub fn frequency(&self) -> Option<f64> {
        (self.attempts > 0).then(|| self.successes as f64 / self.attempts as f64)
    }
}

/// Counts of `(sent, outcome)` pairs, bit indices and success rates.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RoundCounts {
    pub rounds: u64,
    pub aborts: u64,
    pub cells: BTreeMap<(Option<usize>, usize), u64>,
    pub b_counts: [u64; 3],
    pub honest: SuccessCount,
    pub alice_cheat: SuccessCount,
    pub bob_cheat: SuccessCount,
}

impl Tally for RoundCounts {
    fn add(&mut self, rec: &RoundRecord) {
        self.rounds += 1;
        self.aborts += rec.abort as u64;
        if let Some(t) = rec.transmission {
            *self.cells.entry((t.sent, t.outcome)).or_insert(0) += 1;
        }
        let b = rec.relabeled.and_then(|v| v.b).or(rec.b);
        if let Some(b) = b {
            self.b_counts[b] += 1;
        }
        self.honest.add(rec.honest_output_correct());
        self.alice_cheat.add(rec.alice_cheat_success());
        self.bob_cheat.add(rec.bob_cheat_success());
    }

    fn merge(&mut self, other: Self) {
        self.rounds += other.rounds;
        self.aborts += other.aborts;
        for (k, v) in other.cells {
            *self.cells.entry(k).or_insert(0) += v;
        }
        for (a, b) in self.b_counts.iter_mut().zip(other.b_counts) {
            *a += b;
        }
        self.honest.merge(&other.honest);
        self.alice_cheat.merge(&other.alice_cheat);
        self.bob_cheat.merge(&other.bob_cheat);
    }
}
