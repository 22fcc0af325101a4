//! Payoffs and Nash conditions when play is driven by a joint probability
//! table: factorizable coins or general no-signaling correlations.

use alloc::format;

use num_traits::{One, Zero};

use crate::classical::MixedProfile;
use crate::game::{payoff_for_outcome, GameParams, PayoffRatios, PayoffTriple, PureProfile};
use crate::joint::{
    check_embedding_zeros, check_normalization, outcome_at, CoinMarginals, JointDistribution,
    BLOCKS, EMBEDDING_ZEROS,
};
use crate::linear::Linear;
use crate::nash::{endpoint_report, NEReport};
use crate::rational::in_unit_interval;
use crate::{Error, Rational, Result};

/// Coefficients of the factorizable Nash brackets when every second coin
/// always lands on −1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReducedCoefficients {
    /// `α − β − 2δ + 2θ + ε − ω`
    pub delta1: Rational,
    /// `δ − ε − θ + ω`
    pub delta2: Rational,
    /// `ε − ω`
    pub delta3: Rational,
}

impl ReducedCoefficients {
    pub fn of(p: &GameParams) -> Self {
        let two = Rational::from_integer(2.into());
        ReducedCoefficients {
            delta1: &p.alpha - &p.beta - &two * &p.delta + &two * &p.theta + &p.epsilon - &p.omega,
            delta2: &p.delta - &p.epsilon - &p.theta + &p.omega,
            delta3: &p.epsilon - &p.omega,
        }
    }
}

/// Table indices of the ten free entries of an embedded no-signaling table.
pub const INDEPENDENT_INDICES: [usize; 10] = [1, 3, 5, 6, 13, 15, 18, 20, 22, 27];

/// Table indices fixed by the independents, in the order returned by
/// [`closed_forms`].
pub const DEPENDENT_INDICES: [usize; 17] =
    [2, 4, 7, 8, 14, 16, 24, 28, 31, 32, 36, 40, 47, 48, 54, 56, 64];

/// Values of `p1, p3, p5, p6, p13, p15, p18, p20, p22, p27`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct CompletionInput {
    values: [Rational; 10],
}

impl CompletionInput {
    pub fn new(values: [Rational; 10]) -> Result<Self> {
        const NAMES: [&str; 10] = ["p1", "p3", "p5", "p6", "p13", "p15", "p18", "p20", "p22", "p27"];
        for (name, v) in NAMES.iter().zip(&values) {
            if !in_unit_interval(v) {
                return Err(Error::OutOfRange { name, value: v.clone() });
            }
        }
        Ok(CompletionInput { values })
    }

    /// Reads the independents back off a table.
    pub fn from_distribution(d: &JointDistribution) -> Result<Self> {
        CompletionInput::new(INDEPENDENT_INDICES.map(|i| d.p(i).clone()))
    }

    pub fn values(&self) -> &[Rational; 10] {
        &self.values
    }

    /// Value for table index `index`, if it is one of the independents.
    pub fn get(&self, index: usize) -> Option<&Rational> {
        INDEPENDENT_INDICES.iter().position(|&i| i == index).map(|k| &self.values[k])
    }
}

/// The dependent entries of an embedded table as affine functions of the
/// independents, from normalization and the no-signaling chains.
pub fn closed_forms<T: Linear>(ind: &[T; 10]) -> [T; 17] {
    let [p1, p3, p5, p6, p13, p15, p18, p20, p22, p27] = ind.clone();
    let one = || T::constant(Rational::one());
    let p2 = p18.clone() + p22.clone() - p1.clone() - p5.clone() - p6.clone();
    let p7 = p13.clone() + p15.clone() - p1.clone() - p3.clone() - p5.clone();
    let p4 = p18.clone() + p20.clone() - p1.clone() - p2.clone() - p3.clone();
    let p8 = one()
        - (p1.clone() + p2.clone() + p3.clone() + p4.clone() + p5.clone() + p6.clone() + p7.clone());
    // Single-party marginals of block 1.
    let alice = p1.clone() + p2.clone() + p3.clone() + p4.clone();
    let bob = p1.clone() + p3.clone() + p5.clone() + p7.clone();
    let chris = p1 + p2.clone() + p5 + p6;
    let p14 = chris.clone() - p13.clone();
    let p16 = one() - p13 - p14.clone() - p15;
    let p24 = one() - p18 - p20 - p22;
    let p28 = alice.clone() - p27.clone();
    let p31 = bob.clone() - p27.clone();
    let p32 = one() - p27 - p28.clone() - p31.clone();
    let p36 = alice;
    let p40 = one() - p36.clone();
    let p47 = bob;
    let p48 = one() - p47.clone();
    let p54 = chris;
    let p56 = one() - p54.clone();
    [p2, p4, p7, p8, p14, p16, p24, p28, p31, p32, p36, p40, p47, p48, p54, p56, one()]
}

/// Fills in an embedded no-signaling table from its ten independent entries.
pub fn complete_distribution(input: &CompletionInput) -> Result<JointDistribution> {
    let mut d = JointDistribution::zeros();
    for (&i, v) in INDEPENDENT_INDICES.iter().zip(&input.values) {
        d.set(i, v.clone());
    }
    for (&i, v) in DEPENDENT_INDICES.iter().zip(closed_forms(&input.values)) {
        if !in_unit_interval(&v) {
            return Err(Error::InfeasibleCompletion { index: i, value: v });
        }
        d.set(i, v);
    }
    Ok(d)
}

fn require_normalized(d: &JointDistribution) -> Result<()> {
    let v = check_normalization(d);
    if v.ok() {
        Ok(())
    } else {
        Err(Error::InvalidDistribution(format!(
            "not normalized (blocks {:?}, negative entries {:?})",
            v.failing_blocks(),
            v.negative
        )))
    }
}

fn require_embedded(d: &JointDistribution) -> Result<()> {
    require_normalized(d)?;
    let v = check_embedding_zeros(d);
    if v.ok() {
        Ok(())
    } else {
        Err(Error::EmbeddingViolation(v.nonzero))
    }
}

fn block_payoffs(params: &GameParams, d: &JointDistribution, block: PureProfile) -> PayoffTriple {
    let mut out = PayoffTriple::zero();
    for (pos, p) in (1..=8).zip(d.block(crate::joint::block_number(block))) {
        if !p.is_zero() {
            out.add_scaled(&payoff_for_outcome(params, outcome_at(pos)), p);
        }
    }
    out
}

fn mixed_payoff(params: &GameParams, d: &JointDistribution, profile: &MixedProfile) -> PayoffTriple {
    let mut out = PayoffTriple::zero();
    for block in BLOCKS {
        let w = profile.weight(block);
        if !w.is_zero() {
            out.add_scaled(&block_payoffs(params, d, block), &w);
        }
    }
    out
}

/// Expected payoffs when the players' settings are `block`.
pub fn epr_pure_payoffs(
    params: &GameParams,
    d: &JointDistribution,
    block: PureProfile,
) -> Result<PayoffTriple> {
    require_normalized(d)?;
    Ok(block_payoffs(params, d, block))
}

pub fn epr_mixed_payoff(
    params: &GameParams,
    d: &JointDistribution,
    profile: &MixedProfile,
) -> Result<PayoffTriple> {
    require_normalized(d)?;
    Ok(mixed_payoff(params, d, profile))
}

pub fn epr_is_nash(
    params: &GameParams,
    d: &JointDistribution,
    profile: &MixedProfile,
) -> Result<NEReport> {
    require_normalized(d)?;
    Ok(endpoint_report(profile, |p| mixed_payoff(params, d, p)))
}

/// The three (C,C,C) Nash left-hand sides, grouped by payoff ratio, for a table
/// whose embedding zeros hold. `entry(i)` yields `p_i`.
pub fn ccc_margin_forms<T: Linear>(r: &PayoffRatios, entry: impl Fn(usize) -> T) -> [T; 3] {
    let p = |i| entry(i);
    let side = |own: usize, dev: [usize; 4], mixed: [usize; 2], dd: [usize; 2], eps: usize| {
        let [dev_beta, dev_t1, dev_t2, dev_omega] = dev;
        let lead = p(own) + p(1).scale(&r.alpha_over_beta) - p(dev_beta);
        let middle = p(mixed[0]) + p(mixed[1]) - p(dev_t1) - p(dev_t2)
            + (p(dd[0]) + p(dd[1])).scale(&r.delta_over_theta);
        let tail = p(8) - p(dev_omega) + p(eps).scale(&r.epsilon_over_omega);
        lead + middle.scale(&r.theta_over_beta) + tail.scale(&r.omega_over_beta)
    };
    [
        side(5, [13, 14, 15, 16], [6, 7], [2, 3], 4),
        side(2, [18, 20, 22, 24], [4, 6], [3, 5], 7),
        side(3, [27, 28, 31, 32], [4, 7], [2, 5], 6),
    ]
}

/// Deviation margins at (C,C,C) divided by `β`, for Alice, Bob and Chris.
pub fn ccc_margins(params: &GameParams, d: &JointDistribution) -> Result<[Rational; 3]> {
    require_embedded(d)?;
    let ratios = PayoffRatios::of(params)?;
    let out = ccc_margin_forms(&ratios, |i| d.p(i).clone());
    debug_assert!({
        let report = endpoint_report(&MixedProfile::pure(BLOCKS[0]), |p| mixed_payoff(params, d, p));
        report.margins.iter().zip(&out).all(|(g, m)| *g == m * &params.beta)
    });
    Ok(out)
}

/// Deviation margins at (D,D,D): `(p36, p47, p54) · (ω − ε)`.
pub fn ddd_margins(params: &GameParams, d: &JointDistribution) -> Result<[Rational; 3]> {
    require_embedded(d)?;
    let gap = &params.omega - &params.epsilon;
    let out = [36, 47, 54].map(|i| d.p(i) * &gap);
    debug_assert!({
        let report = endpoint_report(&MixedProfile::pure(BLOCKS[7]), |p| mixed_payoff(params, d, p));
        report.margins == out
    });
    Ok(out)
}

/// Per-player factor multiplying `(x⋆ − x)` (and likewise for `y`, `z`) in the
/// Nash inequalities of factorizable play with `s = s′ = s″ = 0`. It equals
/// the payoff gain of switching from the second to the first setting.
pub fn reduced_factorizable_ne(
    params: &GameParams,
    m: &CoinMarginals,
    profile: &MixedProfile,
) -> Result<[Rational; 3]> {
    if m.second.iter().any(|s| !s.is_zero()) {
        return Err(Error::NonZeroSecondCoin);
    }
    m.validate()?;
    let c = ReducedCoefficients::of(params);
    let [r0, r1, r2] = &m.first;
    let [x, y, z] = profile.as_array();
    let all = r0 * r1 * r2;
    let bracket = |pair: &Rational, near: Rational, own: &Rational| {
        pair * &all * &c.delta1 + own * near * &c.delta2 + own * &c.delta3
    };
    Ok([
        bracket(&(y * z), z * r2 + y * r1, r0),
        bracket(&(x * z), z * r2 + x * r0, r1),
        bracket(&(x * y), y * r1 + x * r0, r2),
    ])
}

/// True iff every entry in [`EMBEDDING_ZEROS`] vanishes.
pub fn is_embedded(d: &JointDistribution) -> bool {
    EMBEDDING_ZEROS.iter().all(|&i| d.p(i).is_zero())
}
