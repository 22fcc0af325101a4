//! Searching the embedded no-signaling polytope for tables that make (C,C,C)
//! an equilibrium with the largest possible worst-case margin.
//!
//! The polytope is cut out by normalization, the no-signaling chains, the 37
//! embedding zeros and nonnegativity. Two methods are offered: an exact LP
//! over the ten independent entries, and seeded random sampling.
//!
//! Random draws use PCG-XSH-RR 64/32 (`rand_pcg::Pcg32`: 64-bit LCG state,
//! 32-bit xorshift-rotate output). Worker `w` of a search seeded with `seed`
//! uses `Pcg32::new(seed, w)`, i.e. the same state seed on stream `w`, so
//! results do not depend on how workers are scheduled.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rand::Rng;
use rand_pcg::Pcg32;

use crate::epr::{
    ccc_margin_forms, ccc_margins, closed_forms, complete_distribution, CompletionInput,
    DEPENDENT_INDICES, INDEPENDENT_INDICES,
};
use crate::game::{GameParams, PayoffRatios};
use crate::joint::{
    check_embedding_zeros, check_no_signaling, check_normalization, JointDistribution,
    NO_SIGNALING_CHAINS, PERMITTED,
};
use crate::linear::LinExpr;
use crate::lp::{self, LinearProgram, LpOutcome, Relation};
use crate::rational::to_f64;
use crate::{Error, Rational, Result};

/// Grid denominator used by [`PolytopeSampler`].
pub const DEFAULT_RESOLUTION: u32 = 1000;

/// Rejected draws tolerated by [`sample_polytope`] before giving up.
pub const REJECTION_BUDGET: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Objective {
    /// Maximize the smallest of the three (C,C,C) margins.
    MaxMinCccMargin,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Lp,
    Random,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchConfig {
    pub params: GameParams,
    pub objective: Objective,
    pub method: Method,
    pub seed: u64,
    /// Samples drawn by the random method.
    pub iterations: usize,
    /// Window of the floating-point pre-screen in the random method: a sample
    /// is evaluated exactly unless its float objective trails the incumbent by
    /// more than this.
    pub tolerance: Rational,
    pub workers: usize,
    /// A feasible table whose objective the result must not fall below.
    pub warm_start: Option<JointDistribution>,
}

impl SearchConfig {
    pub fn new(params: GameParams, method: Method) -> Self {
        SearchConfig {
            params,
            objective: Objective::MaxMinCccMargin,
            method,
            seed: 0,
            iterations: 1000,
            tolerance: Rational::new(BigInt::from(1), BigInt::from(1_000_000_000)),
            workers: 1,
            warm_start: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.iterations == 0 {
            return Err(Error::InvalidConfig("iterations must be at least 1"));
        }
        if self.workers == 0 {
            return Err(Error::InvalidConfig("workers must be at least 1"));
        }
        if self.tolerance.is_negative() {
            return Err(Error::InvalidConfig("tolerance must be nonnegative"));
        }
        PayoffRatios::of(&self.params)?;
        Ok(())
    }
}

/// Exact re-check outcomes for a reported table.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Certificate {
    pub normalization: bool,
    pub no_signaling: bool,
    pub embedding: bool,
}

impl Certificate {
    pub fn ok(&self) -> bool {
        self.normalization && self.no_signaling && self.embedding
    }
}

pub fn certify(d: &JointDistribution) -> Certificate {
    Certificate {
        normalization: check_normalization(d).ok(),
        no_signaling: check_no_signaling(d).ok(),
        embedding: check_embedding_zeros(d).ok(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchResult {
    pub method: Method,
    pub distribution: JointDistribution,
    pub margins: [Rational; 3],
    pub objective: Rational,
    pub certificate: Certificate,
    /// Samples evaluated (random method) or 1 (LP).
    pub evaluated: usize,
    pub warm_start_objective: Option<Rational>,
}

/// A scored table from the random method.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Candidate {
    pub distribution: JointDistribution,
    pub objective: Rational,
}

impl Candidate {
    /// Higher objective wins; ties go to the lexicographically smaller table.
    pub fn better_than(&self, other: &Candidate) -> bool {
        self.objective > other.objective
            || (self.objective == other.objective && self.distribution < other.distribution)
    }
}

pub fn merge(a: Option<Candidate>, b: Option<Candidate>) -> Option<Candidate> {
    match (a, b) {
        (Some(a), Some(b)) => Some(if b.better_than(&a) { b } else { a }),
        (a, None) => a,
        (None, b) => b,
    }
}

/// Smallest (C,C,C) margin of a table that satisfies every exact check.
pub fn min_ccc_margin(params: &GameParams, d: &JointDistribution) -> Result<Rational> {
    let cert = certify(d);
    if !cert.ok() {
        return Err(Error::InvalidDistribution(alloc::format!("{cert:?}")));
    }
    let [a, b, c] = ccc_margins(params, d)?;
    Ok(a.min(b).min(c))
}

/// Source of candidate independents for [`sample_with`].
pub trait IndependentsSource {
    fn draw(&mut self) -> CompletionInput;
}

/// Draws independents on a `1/resolution` grid so that their completion is
/// feasible: a random block-1 table, then the one free coupling of each of
/// the three two-party tables (blocks 2, 3, 4) within its Fréchet bounds.
#[derive(Debug, Clone)]
pub struct PolytopeSampler {
    rng: Pcg32,
    resolution: u32,
}

impl PolytopeSampler {
    pub fn new(seed: u64, stream: u64) -> Self {
        PolytopeSampler { rng: Pcg32::new(seed, stream), resolution: DEFAULT_RESOLUTION }
    }

    pub fn with_resolution(mut self, resolution: u32) -> Self {
        assert!(resolution > 0);
        self.resolution = resolution;
        self
    }

    fn coupling(&mut self, a: u32, b: u32) -> u32 {
        let lo = (a + b).saturating_sub(self.resolution);
        let hi = a.min(b);
        self.rng.random_range(lo..=hi)
    }
}

impl IndependentsSource for PolytopeSampler {
    fn draw(&mut self) -> CompletionInput {
        let n = self.resolution;
        let mut cuts = [0u32; 7];
        for c in cuts.iter_mut() {
            *c = self.rng.random_range(0..=n);
        }
        cuts.sort_unstable();
        let mut block = [0u32; 8];
        let mut prev = 0;
        for (k, slot) in block.iter_mut().enumerate() {
            let next = if k < 7 { cuts[k] } else { n };
            *slot = next - prev;
            prev = next;
        }
        let [q1, q2, q3, q4, q5, q6, q7, _] = block;
        let (alice, bob, chris) = (q1 + q2 + q3 + q4, q1 + q3 + q5 + q7, q1 + q2 + q5 + q6);
        // Block 2: Bob and Chris, Alice on −1.
        let p13 = self.coupling(bob, chris);
        let p15 = bob - p13;
        // Block 3: Alice and Chris, Bob on −1.
        let p18 = self.coupling(alice, chris);
        let p20 = alice - p18;
        let p22 = chris - p18;
        // Block 4: Alice and Bob, Chris on −1.
        let p27 = self.coupling(alice, bob);
        let den = BigInt::from(n);
        let values = [q1, q3, q5, q6, p13, p15, p18, p20, p22, p27]
            .map(|v| Rational::new(BigInt::from(v), den.clone()));
        CompletionInput::new(values).expect("grid values lie in [0, 1]")
    }
}

/// First feasible completion produced by `source`, rejecting infeasible draws.
pub fn sample_with<S: IndependentsSource>(source: &mut S, budget: usize) -> Result<JointDistribution> {
    for _ in 0..budget {
        match complete_distribution(&source.draw()) {
            Ok(d) => return Ok(d),
            Err(Error::InfeasibleCompletion { .. }) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(Error::SamplingFailed { attempts: budget })
}

/// One table from stream 0 of `config.seed`.
pub fn sample_polytope(config: &SearchConfig) -> Result<JointDistribution> {
    sample_with(&mut PolytopeSampler::new(config.seed, 0), REJECTION_BUDGET)
}

/// Iterations assigned to `worker` out of `workers`.
pub fn worker_iterations(total: usize, workers: usize, worker: usize) -> usize {
    total / workers + usize::from(worker < total % workers)
}

struct FloatRatios([f64; 5]);

impl FloatRatios {
    fn of(r: &PayoffRatios) -> Self {
        FloatRatios([
            to_f64(&r.alpha_over_beta),
            to_f64(&r.theta_over_beta),
            to_f64(&r.delta_over_theta),
            to_f64(&r.omega_over_beta),
            to_f64(&r.epsilon_over_omega),
        ])
    }

    fn min_margin(&self, p: &[f64; 64]) -> f64 {
        let [ab, tb, dt, wb, ew] = self.0;
        let q = |i: usize| p[i - 1];
        let a = q(5) + ab * q(1) - q(13)
            + tb * (q(6) + q(7) - q(14) - q(15) + dt * (q(2) + q(3)))
            + wb * (q(8) - q(16) + ew * q(4));
        let b = q(2) + ab * q(1) - q(18)
            + tb * (q(4) + q(6) - q(20) - q(22) + dt * (q(3) + q(5)))
            + wb * (q(8) - q(24) + ew * q(7));
        let c = q(3) + ab * q(1) - q(27)
            + tb * (q(4) + q(7) - q(28) - q(31) + dt * (q(2) + q(5)))
            + wb * (q(8) - q(32) + ew * q(6));
        a.min(b).min(c)
    }
}

/// Best sample of one random-search worker, starting from `incumbent`.
pub fn random_search_worker(
    config: &SearchConfig,
    worker: usize,
    incumbent: Option<Candidate>,
) -> Result<(Option<Candidate>, usize)> {
    let ratios = PayoffRatios::of(&config.params)?;
    let float = FloatRatios::of(&ratios);
    let tol = to_f64(&config.tolerance);
    let mut sampler = PolytopeSampler::new(config.seed, worker as u64);
    let mut best = incumbent;
    let mut best_float = best.as_ref().map_or(f64::NEG_INFINITY, |c| to_f64(&c.objective));
    let mut evaluated = 0;
    for _ in 0..worker_iterations(config.iterations, config.workers, worker) {
        let d = sample_with(&mut sampler, REJECTION_BUDGET)?;
        evaluated += 1;
        if float.min_margin(&d.to_f64()) < best_float - tol {
            continue;
        }
        let objective = min_ccc_margin(&config.params, &d)?;
        let cand = Candidate { distribution: d, objective };
        if best.as_ref().is_none_or(|b| cand.better_than(b)) {
            best_float = to_f64(&cand.objective);
            best = Some(cand);
        }
    }
    Ok((best, evaluated))
}

/// Reduced LP: the ten independents plus the slack `t` (variable 10);
/// dependents enter through their closed forms.
pub fn reduced_program(params: &GameParams) -> Result<LinearProgram> {
    let ratios = PayoffRatios::of(params)?;
    const VARS: usize = 11;
    let ind: [LinExpr; 10] = core::array::from_fn(|k| LinExpr::var(k, VARS));
    let dep = closed_forms(&ind);
    let entry = |i: usize| {
        if let Some(k) = INDEPENDENT_INDICES.iter().position(|&j| j == i) {
            ind[k].clone()
        } else if let Some(k) = DEPENDENT_INDICES.iter().position(|&j| j == i) {
            dep[k].clone()
        } else {
            LinExpr::zero(VARS)
        }
    };
    let mut objective = alloc::vec![Rational::zero(); VARS];
    objective[10] = Rational::from_integer(1.into());
    let mut lp = LinearProgram::new(VARS, objective);
    for e in &dep {
        add_ge_zero(&mut lp, e.clone(), VARS);
    }
    for m in ccc_margin_forms(&ratios, entry) {
        add_ge_zero(&mut lp, m - LinExpr::var(10, VARS), VARS);
    }
    Ok(lp)
}

/// Full LP over the 27 permitted entries (in [`PERMITTED`] order) plus `t`
/// (variable 27), with normalization and every chain equality as rows.
pub fn full_program(params: &GameParams) -> Result<LinearProgram> {
    let ratios = PayoffRatios::of(params)?;
    const VARS: usize = 28;
    let entry = |i: usize| match PERMITTED.iter().position(|&j| j == i) {
        Some(k) => LinExpr::var(k, VARS),
        None => LinExpr::zero(VARS),
    };
    let sum = |idx: &[usize]| idx.iter().fold(LinExpr::zero(VARS), |acc, &i| acc + entry(i));
    let mut objective = alloc::vec![Rational::zero(); VARS];
    objective[27] = Rational::from_integer(1.into());
    let mut lp = LinearProgram::new(VARS, objective);
    for block in 0..8 {
        let idx: Vec<usize> = (8 * block + 1..=8 * block + 8).collect();
        let e = sum(&idx);
        lp.add(e.coeffs, Relation::Eq, Rational::from_integer(1.into()) - e.constant);
    }
    for chain in NO_SIGNALING_CHAINS {
        for group in &chain[1..] {
            let e = sum(group) - sum(&chain[0]);
            lp.add(e.coeffs, Relation::Eq, -e.constant);
        }
    }
    for m in ccc_margin_forms(&ratios, entry) {
        add_ge_zero(&mut lp, m - LinExpr::var(27, VARS), VARS);
    }
    Ok(lp)
}

fn add_ge_zero(lp: &mut LinearProgram, mut e: LinExpr, vars: usize) {
    e.coeffs.resize(vars, Rational::zero());
    lp.add(e.coeffs, Relation::Ge, -e.constant);
}

fn finish(config: &SearchConfig, cand: Candidate, evaluated: usize, warm: Option<Rational>) -> Result<SearchResult> {
    let margins = ccc_margins(&config.params, &cand.distribution)?;
    let certificate = certify(&cand.distribution);
    debug_assert!(certificate.ok());
    Ok(SearchResult {
        method: config.method,
        distribution: cand.distribution,
        margins,
        objective: cand.objective,
        certificate,
        evaluated,
        warm_start_objective: warm,
    })
}

fn warm_start(config: &SearchConfig) -> Result<Option<Candidate>> {
    match &config.warm_start {
        None => Ok(None),
        Some(d) => Ok(Some(Candidate {
            objective: min_ccc_margin(&config.params, d)?,
            distribution: d.clone(),
        })),
    }
}

fn solve_lp(config: &SearchConfig) -> Result<Candidate> {
    let (value, solution) = match lp::solve(&reduced_program(&config.params)?) {
        LpOutcome::Optimal { value, solution } => (value, solution),
        LpOutcome::Infeasible => return Err(Error::Infeasible),
        LpOutcome::Unbounded => return Err(Error::Unbounded),
    };
    let input = CompletionInput::new(core::array::from_fn(|k| solution[k].clone()))?;
    let distribution = complete_distribution(&input)?;
    let objective = min_ccc_margin(&config.params, &distribution)?;
    assert_eq!(objective, value, "LP optimum must match the re-evaluated table");
    Ok(Candidate { distribution, objective })
}

/// Combines per-worker random-search results into a report.
pub fn finish_random(
    config: &SearchConfig,
    parts: impl IntoIterator<Item = (Option<Candidate>, usize)>,
) -> Result<SearchResult> {
    let warm = warm_start(config)?;
    let mut best = warm.clone();
    let mut evaluated = 0;
    for (cand, n) in parts {
        best = merge(best, cand);
        evaluated += n;
    }
    let best = best.ok_or(Error::SamplingFailed { attempts: 0 })?;
    finish(config, best, evaluated, warm.map(|w| w.objective))
}

/// Maximizes the smallest (C,C,C) margin over the embedded polytope.
pub fn maximize_min_ccc_margin(config: &SearchConfig) -> Result<SearchResult> {
    config.validate()?;
    match config.method {
        Method::Lp => {
            let warm = warm_start(config)?;
            let best = solve_lp(config)?;
            if let Some(w) = &warm {
                assert!(best.objective >= w.objective, "LP optimum below a feasible point");
            }
            finish(config, best, 1, warm.map(|w| w.objective))
        }
        Method::Random => {
            let parts = (0..config.workers)
                .map(|w| random_search_worker(config, w, None))
                .collect::<Result<Vec<_>>>()?;
            finish_random(config, parts)
        }
    }
}
