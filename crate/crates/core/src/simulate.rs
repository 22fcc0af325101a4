//! Monte Carlo referee for the two-setting game.
//!
//! Each run draws the three setting choices from the mixed profile, then one
//! outcome triple from the chosen block of the joint table, and pays
//! according to the outcome. Randomness comes from the same PCG-XSH-RR
//! 64/32 streams as [`crate::search`]: worker `w` uses `Pcg32::new(seed, w)`.
//!
//! Probabilities are turned into `u64` thresholds `floor(p · 2^64)` computed
//! exactly, so draws are bit-reproducible and zero-probability outcomes are
//! never produced. Runs are tallied per table entry; payoff sums are then
//! formed exactly from the tallies.

use alloc::format;

use num_bigint::BigInt;
use num_traits::{Float, One, ToPrimitive, Zero};
use rand::RngCore;
use rand_pcg::Pcg32;

use crate::classical::MixedProfile;
use crate::game::{payoff_for_outcome, GameParams, PayoffTriple, Player};
use crate::joint::{check_normalization, locate, JointDistribution, ENTRIES};
use crate::rational::{to_f64, u64_threshold};
use crate::search::worker_iterations;
use crate::{Error, Rational, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimulationConfig {
    pub distribution: JointDistribution,
    pub profile: MixedProfile,
    pub runs: u64,
    pub seed: u64,
    pub workers: usize,
}

impl SimulationConfig {
    pub fn new(distribution: JointDistribution, profile: MixedProfile, runs: u64, seed: u64) -> Self {
        SimulationConfig { distribution, profile, runs, seed, workers: 1 }
    }

    pub fn validate(&self) -> Result<()> {
        if self.runs == 0 {
            return Err(Error::InvalidConfig("runs must be at least 1"));
        }
        if self.workers == 0 {
            return Err(Error::InvalidConfig("workers must be at least 1"));
        }
        let v = check_normalization(&self.distribution);
        if !v.ok() {
            return Err(Error::InvalidDistribution(format!(
                "not normalized (blocks {:?}, negative entries {:?})",
                v.failing_blocks(),
                v.negative
            )));
        }
        Ok(())
    }
}

/// Number of runs that ended on each table entry.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Tally {
    pub counts: [u64; ENTRIES],
}

impl Tally {
    pub fn new() -> Self {
        Tally { counts: [0; ENTRIES] }
    }

    pub fn merge(mut self, other: &Tally) -> Self {
        for (a, b) in self.counts.iter_mut().zip(other.counts.iter()) {
            *a += b;
        }
        self
    }

    pub fn runs(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// Runs per block, in block order.
    pub fn block_visits(&self) -> [u64; 8] {
        core::array::from_fn(|b| self.counts[8 * b..8 * b + 8].iter().sum())
    }
}

impl Default for Tally {
    fn default() -> Self {
        Tally::new()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimulationResult {
    pub means: [f64; 3],
    pub std_errors: [f64; 3],
    pub exact_means: [Rational; 3],
    pub runs: u64,
    pub seed: u64,
    pub tally: Tally,
}

struct Thresholds {
    /// Probability of the first setting, per player.
    first: [u128; 3],
    /// Cumulative outcome thresholds, per block.
    outcomes: [[u128; 8]; 8],
}

impl Thresholds {
    fn of(config: &SimulationConfig) -> Self {
        let first = config.profile.as_array().each_ref().map(u64_threshold);
        let outcomes = core::array::from_fn(|b| {
            let mut acc = Rational::zero();
            core::array::from_fn(|k| {
                acc += config.distribution.p(8 * b + k + 1);
                if k == 7 {
                    // Normalized blocks end exactly at 2^64.
                    1u128 << 64
                } else {
                    u64_threshold(&acc)
                }
            })
        });
        Thresholds { first, outcomes }
    }
}

/// Runs this worker's share of `config.runs`.
pub fn simulate_worker(config: &SimulationConfig, worker: usize) -> Tally {
    let th = Thresholds::of(config);
    let runs = worker_iterations(config.runs as usize, config.workers, worker);
    let mut rng = Pcg32::new(config.seed, worker as u64);
    let mut tally = Tally::new();
    for _ in 0..runs {
        let second = th.first.map(|t| u128::from(rng.next_u64()) >= t);
        let block = match second {
            [false, false, false] => 0,
            [true, false, false] => 1,
            [false, true, false] => 2,
            [false, false, true] => 3,
            [false, true, true] => 4,
            [true, false, true] => 5,
            [true, true, false] => 6,
            [true, true, true] => 7,
        };
        let u = u128::from(rng.next_u64());
        let pos = th.outcomes[block].iter().position(|&t| u < t).expect("last threshold is 2^64");
        tally.counts[8 * block + pos] += 1;
    }
    tally
}

/// Means and standard errors from a tally. Sums are exact; only the final
/// figures are converted to floating point.
pub fn summarize(params: &GameParams, config: &SimulationConfig, tally: &Tally) -> SimulationResult {
    let n = tally.runs();
    let mut sum = PayoffTriple::zero();
    let mut sum_sq = PayoffTriple::zero();
    for (k, &c) in tally.counts.iter().enumerate() {
        if c == 0 {
            continue;
        }
        let (_, outcome) = locate(k + 1);
        let pay = payoff_for_outcome(params, outcome);
        let count = Rational::from_integer(BigInt::from(c));
        let squared = PayoffTriple(pay.0.clone().map(|v| &v * &v));
        sum.add_scaled(&pay, &count);
        sum_sq.add_scaled(&squared, &count);
    }
    let nq = Rational::from_integer(BigInt::from(n));
    let exact_means = Player::ALL.map(|p| sum.get(p) / &nq);
    let std_errors = Player::ALL.map(|p| {
        if n < 2 {
            return 0.0;
        }
        let s = sum.get(p);
        let var = (sum_sq.get(p) - s * s / &nq) / (&nq - Rational::one());
        Float::sqrt((to_f64(&var) / n.to_f64().unwrap_or(f64::INFINITY)).max(0.0))
    });
    SimulationResult {
        means: exact_means.each_ref().map(to_f64),
        std_errors,
        exact_means,
        runs: n,
        seed: config.seed,
        tally: *tally,
    }
}

pub fn simulate_runs(params: &GameParams, config: &SimulationConfig) -> Result<SimulationResult> {
    config.validate()?;
    let tally = (0..config.workers)
        .map(|w| simulate_worker(config, w))
        .fold(Tally::new(), |acc, t| acc.merge(&t));
    Ok(summarize(params, config, &tally))
}
