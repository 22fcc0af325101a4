//! The 64-entry joint probability table of the two-setting game.
//!
//! Entry `p_i` (1-based) is the probability of an outcome triple given the
//! players' setting choices. The table is split into eight blocks of eight,
//! one per strategy triple, in the order
//!
//! ```text
//! block 1  (S1,S1,S1)  p1..p8      block 5  (S1,S2,S2)  p33..p40
//! block 2  (S2,S1,S1)  p9..p16     block 6  (S2,S1,S2)  p41..p48
//! block 3  (S1,S2,S1)  p17..p24    block 7  (S2,S2,S1)  p49..p56
//! block 4  (S1,S1,S2)  p25..p32    block 8  (S2,S2,S2)  p57..p64
//! ```
//!
//! and within a block the outcomes run
//! `(+,+,+) (+,−,+) (+,+,−) (+,−,−) (−,+,+) (−,−,+) (−,+,−) (−,−,−)`:
//! Alice's sign splits the halves, Chris's sign alternates in pairs and Bob's
//! sign alternates singly.

use alloc::format;
use alloc::vec::Vec;

use num_traits::{One, Signed, Zero};

use crate::game::{OutcomeTriple, Player, PureProfile, Sign, Strategy};
use crate::rational::{in_unit_interval, to_f64};
use crate::{Error, Rational, Result};

pub const ENTRIES: usize = 64;

use Strategy::{First as S1, Second as S2};

/// Strategy triples in block order.
pub const BLOCKS: [PureProfile; 8] = [
    PureProfile([S1, S1, S1]),
    PureProfile([S2, S1, S1]),
    PureProfile([S1, S2, S1]),
    PureProfile([S1, S1, S2]),
    PureProfile([S1, S2, S2]),
    PureProfile([S2, S1, S2]),
    PureProfile([S2, S2, S1]),
    PureProfile([S2, S2, S2]),
];

/// Entries that must vanish when every second coin always lands on −1.
pub const EMBEDDING_ZEROS: [usize; 37] = [
    9, 10, 11, 12, 17, 19, 21, 23, 25, 26, 29, 30, 33, 34, 35, 37, 38, 39, 41, 42, 43, 44, 45, 46,
    49, 50, 51, 52, 53, 55, 57, 58, 59, 60, 61, 62, 63,
];

/// The 27 entries left free by [`EMBEDDING_ZEROS`].
pub const PERMITTED: [usize; 27] = [
    1, 2, 3, 4, 5, 6, 7, 8, 13, 14, 15, 16, 18, 20, 22, 24, 27, 28, 31, 32, 36, 40, 47, 48, 54, 56,
    64,
];

/// One equality chain `sum(group 0) = sum(group 1) = sum(group 2) = sum(group 3)`.
pub type Chain = [[usize; 4]; 4];

/// The twelve single-party marginal chains: rows 0..4 fix Alice's outcome
/// statistics, rows 4..8 Bob's, rows 8..12 Chris's. Each row equates the
/// same marginal across the four blocks sharing that player's setting.
pub const NO_SIGNALING_CHAINS: [Chain; 12] = [
    // Alice
    [[1, 2, 3, 4], [17, 18, 19, 20], [25, 26, 27, 28], [33, 34, 35, 36]],
    [[5, 6, 7, 8], [21, 22, 23, 24], [29, 30, 31, 32], [37, 38, 39, 40]],
    [[9, 10, 11, 12], [41, 42, 43, 44], [49, 50, 51, 52], [57, 58, 59, 60]],
    [[13, 14, 15, 16], [45, 46, 47, 48], [53, 54, 55, 56], [61, 62, 63, 64]],
    // Bob
    [[1, 3, 5, 7], [9, 11, 13, 15], [25, 27, 29, 31], [41, 43, 45, 47]],
    [[2, 4, 6, 8], [10, 12, 14, 16], [26, 28, 30, 32], [42, 44, 46, 48]],
    [[17, 19, 21, 23], [33, 35, 37, 39], [49, 51, 53, 55], [57, 59, 61, 63]],
    [[18, 20, 22, 24], [34, 36, 38, 40], [50, 52, 54, 56], [58, 60, 62, 64]],
    // Chris
    [[1, 2, 5, 6], [17, 18, 21, 22], [9, 10, 13, 14], [49, 50, 53, 54]],
    [[3, 4, 7, 8], [19, 20, 23, 24], [11, 12, 15, 16], [51, 52, 55, 56]],
    [[25, 26, 29, 30], [33, 34, 37, 38], [41, 42, 45, 46], [57, 58, 61, 62]],
    [[27, 28, 31, 32], [35, 36, 39, 40], [43, 44, 47, 48], [59, 60, 63, 64]],
];

pub fn block_number(profile: PureProfile) -> usize {
    BLOCKS.iter().position(|b| *b == profile).expect("every profile has a block") + 1
}

/// Position 1..=8 of an outcome inside its block.
pub fn position_of(outcome: OutcomeTriple) -> usize {
    let minus = |s: Sign| usize::from(s == Sign::Minus);
    let [a, b, c] = outcome.0;
    4 * minus(a) + 2 * minus(c) + minus(b) + 1
}

pub fn outcome_at(position: usize) -> OutcomeTriple {
    assert!((1..=8).contains(&position));
    let k = position - 1;
    let sign = |bit: usize| if bit == 1 { Sign::Minus } else { Sign::Plus };
    OutcomeTriple([sign(k >> 2 & 1), sign(k & 1), sign(k >> 1 & 1)])
}

/// 1-based table index of `outcome` under the settings `block`.
pub fn index_of(block: PureProfile, outcome: OutcomeTriple) -> usize {
    8 * (block_number(block) - 1) + position_of(outcome)
}

/// Inverse of [`index_of`].
pub fn locate(index: usize) -> (PureProfile, OutcomeTriple) {
    assert!((1..=ENTRIES).contains(&index), "index {index} outside 1..=64");
    (BLOCKS[(index - 1) / 8], outcome_at((index - 1) % 8 + 1))
}

/// Head probabilities of each player's first and second coin (or
/// measurement direction). Values read off a non-factorizable table need not
/// lie in `[0, 1]`; [`CoinMarginals::validate`] checks the range.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoinMarginals {
    /// `r, r′, r″` for Alice, Bob, Chris.
    pub first: [Rational; 3],
    /// `s, s′, s″` for Alice, Bob, Chris.
    pub second: [Rational; 3],
}

impl CoinMarginals {
    pub fn new(first: [Rational; 3], second: [Rational; 3]) -> Self {
        CoinMarginals { first, second }
    }

    pub fn validate(&self) -> Result<()> {
        const NAMES: [&str; 6] = ["r", "r'", "r''", "s", "s'", "s''"];
        for (name, v) in NAMES.iter().zip(self.first.iter().chain(self.second.iter())) {
            if !in_unit_interval(v) {
                return Err(Error::OutOfRange { name, value: v.clone() });
            }
        }
        Ok(())
    }

    pub fn head(&self, player: Player, setting: Strategy) -> &Rational {
        match setting {
            Strategy::First => &self.first[player.index()],
            Strategy::Second => &self.second[player.index()],
        }
    }
}

/// Sixty-four joint probabilities. Construction only checks the length; the
/// `check_*` functions report the probabilistic invariants.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct JointDistribution {
    p: Vec<Rational>,
}

impl JointDistribution {
    pub fn from_entries(entries: Vec<Rational>) -> Result<Self> {
        if entries.len() != ENTRIES {
            return Err(Error::InvalidDistribution(format!(
                "expected {ENTRIES} entries, got {}",
                entries.len()
            )));
        }
        Ok(JointDistribution { p: entries })
    }

    pub fn zeros() -> Self {
        JointDistribution { p: (0..ENTRIES).map(|_| Rational::zero()).collect() }
    }

    /// Every entry equal to 1/8.
    pub fn uniform() -> Self {
        let eighth = Rational::new(1.into(), 8.into());
        JointDistribution { p: (0..ENTRIES).map(|_| eighth.clone()).collect() }
    }

    /// `p_index`, 1-based.
    pub fn p(&self, index: usize) -> &Rational {
        &self.p[index - 1]
    }

    pub fn set(&mut self, index: usize, value: Rational) {
        self.p[index - 1] = value;
    }

    pub fn entries(&self) -> &[Rational] {
        &self.p
    }

    pub fn block(&self, block: usize) -> &[Rational] {
        &self.p[8 * (block - 1)..8 * block]
    }

    pub fn prob(&self, settings: PureProfile, outcome: OutcomeTriple) -> &Rational {
        self.p(index_of(settings, outcome))
    }

    pub fn to_f64(&self) -> [f64; ENTRIES] {
        let mut out = [0.0; ENTRIES];
        for (o, q) in out.iter_mut().zip(&self.p) {
            *o = to_f64(q);
        }
        out
    }

    /// Product distribution of independent coins.
    pub fn from_marginals(m: &CoinMarginals) -> Result<Self> {
        m.validate()?;
        let mut p = Vec::with_capacity(ENTRIES);
        for block in BLOCKS {
            for pos in 1..=8 {
                let outcome = outcome_at(pos);
                let mut v = Rational::one();
                for player in Player::ALL {
                    let head = m.head(player, block.get(player));
                    v *= match outcome.0[player.index()] {
                        Sign::Plus => head.clone(),
                        Sign::Minus => Rational::one() - head,
                    };
                }
                p.push(v);
            }
        }
        Ok(JointDistribution { p })
    }

    fn sum(&self, indices: &[usize]) -> Rational {
        indices.iter().map(|&i| self.p(i)).sum()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalizationVerdict {
    pub block_sums: [Rational; 8],
    /// 1-based indices of negative entries.
    pub negative: Vec<usize>,
}

impl NormalizationVerdict {
    pub fn ok(&self) -> bool {
        self.negative.is_empty() && self.block_sums.iter().all(|s| s.is_one())
    }

    /// Block numbers (1-based) whose sum differs from one.
    pub fn failing_blocks(&self) -> Vec<usize> {
        (1..=8).filter(|&b| !self.block_sums[b - 1].is_one()).collect()
    }
}

pub fn check_normalization(d: &JointDistribution) -> NormalizationVerdict {
    let block_sums = core::array::from_fn(|b| d.block(b + 1).iter().sum());
    let negative = (1..=ENTRIES).filter(|&i| d.p(i).is_negative()).collect();
    NormalizationVerdict { block_sums, negative }
}

/// A chain of [`NO_SIGNALING_CHAINS`] whose four sums are not all equal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainViolation {
    pub player: Player,
    /// Row 0..4 within that player's chains.
    pub row: usize,
    pub sums: [Rational; 4],
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NoSignalingVerdict {
    pub violations: Vec<ChainViolation>,
}

impl NoSignalingVerdict {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

pub fn check_no_signaling(d: &JointDistribution) -> NoSignalingVerdict {
    let mut violations = Vec::new();
    for (n, chain) in NO_SIGNALING_CHAINS.iter().enumerate() {
        let sums = chain.map(|group| d.sum(&group));
        if sums.iter().any(|s| *s != sums[0]) {
            violations.push(ChainViolation { player: Player::ALL[n / 4], row: n % 4, sums });
        }
    }
    NoSignalingVerdict { violations }
}

/// A two-party marginal that changes with the third party's setting.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairViolation {
    pub pair: (Player, Player),
    pub settings: (Strategy, Strategy),
    pub outcomes: (Sign, Sign),
    /// Marginal with the third party on its first and second setting.
    pub sums: [Rational; 2],
}

/// Full three-party no-signaling: every two-party marginal is independent of
/// the remaining party's setting. This implies the single-party chains of
/// [`check_no_signaling`] but is strictly stronger.
pub fn check_pairwise_no_signaling(d: &JointDistribution) -> Vec<PairViolation> {
    let mut out = Vec::new();
    let pairs = [(0usize, 1usize, 2usize), (0, 2, 1), (1, 2, 0)];
    for (i, j, k) in pairs {
        for si in Strategy::BOTH {
            for sj in Strategy::BOTH {
                for oi in Sign::BOTH {
                    for oj in Sign::BOTH {
                        let sums = [S1, S2].map(|sk| {
                            let mut settings = [S1; 3];
                            settings[i] = si;
                            settings[j] = sj;
                            settings[k] = sk;
                            Sign::BOTH
                                .iter()
                                .map(|&ok| {
                                    let mut signs = [Sign::Plus; 3];
                                    signs[i] = oi;
                                    signs[j] = oj;
                                    signs[k] = ok;
                                    d.prob(PureProfile(settings), OutcomeTriple(signs)).clone()
                                })
                                .sum::<Rational>()
                        });
                        if sums[0] != sums[1] {
                            out.push(PairViolation {
                                pair: (Player::ALL[i], Player::ALL[j]),
                                settings: (si, sj),
                                outcomes: (oi, oj),
                                sums,
                            });
                        }
                    }
                }
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmbeddingVerdict {
    /// Forbidden indices carrying nonzero probability.
    pub nonzero: Vec<usize>,
}

impl EmbeddingVerdict {
    pub fn ok(&self) -> bool {
        self.nonzero.is_empty()
    }
}

pub fn check_embedding_zeros(d: &JointDistribution) -> EmbeddingVerdict {
    EmbeddingVerdict {
        nonzero: EMBEDDING_ZEROS.iter().copied().filter(|&i| !d.p(i).is_zero()).collect(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    /// Marginals read off the table; not range checked.
    pub marginals: CoinMarginals,
    pub factorizable: bool,
    /// First index where the product of the marginals differs from the table.
    pub first_mismatch: Option<usize>,
}

/// Reads single-party marginals off the chain representatives and tests
/// whether their product reproduces the table.
pub fn extract_marginals(d: &JointDistribution) -> Result<Factorization> {
    let norm = check_normalization(d);
    if !norm.ok() {
        return Err(Error::InvalidDistribution(format!(
            "not normalized (blocks {:?}, negative entries {:?})",
            norm.failing_blocks(),
            norm.negative
        )));
    }
    let marginals = CoinMarginals {
        first: [d.sum(&[1, 2, 3, 4]), d.sum(&[1, 3, 5, 7]), d.sum(&[1, 2, 5, 6])],
        second: [d.sum(&[9, 10, 11, 12]), d.sum(&[17, 19, 21, 23]), d.sum(&[25, 26, 29, 30])],
    };
    let first_mismatch = (1..=ENTRIES).find(|&i| {
        let (settings, outcome) = locate(i);
        let mut product = Rational::one();
        for player in Player::ALL {
            let head = marginals.head(player, settings.get(player));
            product *= match outcome.0[player.index()] {
                Sign::Plus => head.clone(),
                Sign::Minus => Rational::one() - head,
            };
        }
        product != *d.p(i)
    });
    Ok(Factorization { marginals, factorizable: first_mismatch.is_none(), first_mismatch })
}

/// Floating-point counterpart of [`extract_marginals`]: the six marginals
/// `(r, r′, r″, s, s′, s″)` and whether every product matches within `tol`.
/// Any decision made with it must be re-checked exactly.
pub fn extract_marginals_approx(p: &[f64; ENTRIES], tol: f64) -> ([f64; 6], bool) {
    let s = |idx: [usize; 4]| idx.iter().map(|&i| p[i - 1]).sum::<f64>();
    let m = [
        s([1, 2, 3, 4]),
        s([1, 3, 5, 7]),
        s([1, 2, 5, 6]),
        s([9, 10, 11, 12]),
        s([17, 19, 21, 23]),
        s([25, 26, 29, 30]),
    ];
    let ok = (1..=ENTRIES).all(|i| {
        let (settings, outcome) = locate(i);
        let mut product = 1.0;
        for player in Player::ALL {
            let k = player.index() + if settings.get(player) == S2 { 3 } else { 0 };
            product *= match outcome.0[player.index()] {
                Sign::Plus => m[k],
                Sign::Minus => 1.0 - m[k],
            };
        }
        (product - p[i - 1]).abs() <= tol
    });
    (m, ok)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};
    use Sign::{Minus as M, Plus as P};

    fn marg(v: [Rational; 6]) -> CoinMarginals {
        let [a, b, c, d, e, f] = v;
        CoinMarginals::new([a, b, c], [d, e, f])
    }

    #[test]
    fn index_examples() {
        assert_eq!(index_of(PureProfile([S1, S1, S1]), OutcomeTriple([P, P, P])), 1);
        assert_eq!(index_of(PureProfile([S2, S2, S2]), OutcomeTriple([M, M, M])), 64);
        assert_eq!(index_of(PureProfile([S2, S1, S2]), OutcomeTriple([P, P, P])), 41);
        assert_eq!(index_of(PureProfile([S1, S1, S1]), OutcomeTriple([P, M, P])), 2);
        assert_eq!(index_of(PureProfile([S1, S1, S1]), OutcomeTriple([P, P, M])), 3);
        assert_eq!(index_of(PureProfile([S2, S2, S2]), OutcomeTriple([M, M, P])), 62);
    }

    #[test]
    fn index_is_a_bijection() {
        let mut seen = [false; ENTRIES];
        for block in BLOCKS {
            for pos in 1..=8 {
                let i = index_of(block, outcome_at(pos));
                assert!(!seen[i - 1]);
                seen[i - 1] = true;
                assert_eq!(locate(i), (block, outcome_at(pos)));
            }
        }
        assert!(seen.iter().all(|s| *s));
    }

    #[test]
    fn permitted_and_forbidden_partition_the_table() {
        let mut all: Vec<usize> = EMBEDDING_ZEROS.iter().chain(PERMITTED.iter()).copied().collect();
        all.sort_unstable();
        assert_eq!(all, (1..=64).collect::<Vec<_>>());
    }

    #[test]
    fn uniform_marginals_give_uniform_table() {
        let half = ratio(1, 2);
        let d = JointDistribution::from_marginals(&marg(core::array::from_fn(|_| half.clone()))).unwrap();
        assert_eq!(d, JointDistribution::uniform());
    }

    #[test]
    fn deterministic_coins_put_unit_mass_per_block() {
        let d = JointDistribution::from_marginals(&marg([int(1), int(1), int(1), int(0), int(0), int(0)]))
            .unwrap();
        let ones = [1, 13, 18, 27, 36, 47, 54, 64];
        for i in 1..=64 {
            let expect = if ones.contains(&i) { int(1) } else { int(0) };
            assert_eq!(*d.p(i), expect, "p_{i}");
        }
    }

    #[test]
    fn product_entry_matches_hand_computation() {
        let d = JointDistribution::from_marginals(&marg([
            ratio(38, 100),
            ratio(54, 100),
            ratio(1, 2),
            int(0),
            int(0),
            int(0),
        ]))
        .unwrap();
        assert_eq!(*d.p(1), ratio(513, 5000));
    }

    #[test]
    fn out_of_range_marginal_rejected() {
        let m = marg([int(0), int(0), int(2), int(0), int(0), int(0)]);
        assert!(matches!(
            JointDistribution::from_marginals(&m),
            Err(Error::OutOfRange { name: "r''", .. })
        ));
    }

    #[test]
    fn normalization_failures() {
        let v = check_normalization(&JointDistribution::zeros());
        assert!(!v.ok());
        assert_eq!(v.failing_blocks(), (1..=8).collect::<Vec<_>>());

        let mut d = JointDistribution::uniform();
        d.set(1, ratio(1, 4));
        let v = check_normalization(&d);
        assert_eq!(v.failing_blocks(), [1]);

        let mut d = JointDistribution::uniform();
        d.set(1, ratio(1, 4));
        d.set(2, int(0));
        let v = check_normalization(&d);
        assert!(v.ok());

        d.set(1, ratio(3, 8));
        d.set(2, ratio(-1, 8));
        let v = check_normalization(&d);
        assert_eq!(v.negative, [2]);
        assert!(!v.ok());
    }

    #[test]
    fn bob_chain_catches_asymmetric_perturbation() {
        let mut d = JointDistribution::uniform();
        d.set(1, ratio(1, 4));
        d.set(2, int(0));
        assert!(check_normalization(&d).ok());
        let v = check_no_signaling(&d);
        assert!(!v.ok());
        // Alice's block-1 marginal is untouched; Bob's odd/even split is not.
        assert!(v.violations.iter().all(|c| c.player != Player::Alice));
        assert!(v.violations.iter().any(|c| c.player == Player::Bob && c.row == 0));
        assert!(v.violations.iter().any(|c| c.player == Player::Bob && c.row == 1));
    }

    #[test]
    fn embedding_zero_checks() {
        let m = marg([ratio(1, 3), ratio(2, 5), ratio(3, 7), int(0), int(0), int(0)]);
        assert!(check_embedding_zeros(&JointDistribution::from_marginals(&m).unwrap()).ok());
        let v = check_embedding_zeros(&JointDistribution::uniform());
        assert_eq!(v.nonzero, EMBEDDING_ZEROS);
    }

    #[test]
    fn uniform_is_factorizable() {
        let f = extract_marginals(&JointDistribution::uniform()).unwrap();
        assert!(f.factorizable);
        assert_eq!(f.marginals.first, core::array::from_fn(|_| ratio(1, 2)));
    }

    #[test]
    fn extraction_requires_normalization() {
        assert!(matches!(
            extract_marginals(&JointDistribution::zeros()),
            Err(Error::InvalidDistribution(_))
        ));
    }

    #[test]
    fn approx_extraction_agrees_on_product_tables() {
        let m = marg([ratio(1, 3), ratio(2, 5), ratio(3, 7), ratio(1, 9), int(0), ratio(5, 6)]);
        let d = JointDistribution::from_marginals(&m).unwrap();
        let (vals, ok) = extract_marginals_approx(&d.to_f64(), 1e-9);
        assert!(ok);
        assert!((vals[0] - 1.0 / 3.0).abs() < 1e-12);
        let mut skewed = d.clone();
        skewed.set(1, d.p(1) + ratio(1, 100));
        skewed.set(2, d.p(2) - ratio(1, 100));
        assert!(!extract_marginals_approx(&skewed.to_f64(), 1e-9).1);
    }

    #[test]
    fn product_tables_satisfy_pairwise_no_signaling() {
        let m = marg([ratio(1, 3), ratio(2, 5), ratio(3, 7), ratio(1, 9), int(0), ratio(5, 6)]);
        let d = JointDistribution::from_marginals(&m).unwrap();
        assert!(check_pairwise_no_signaling(&d).is_empty());
        assert!(check_no_signaling(&d).ok());
    }

    #[test]
    fn pairwise_check_is_stricter() {
        // Alice and Bob perfectly correlated when Chris picks S1, anti-correlated
        // when he picks S2: single-party marginals stay at 1/2 everywhere.
        let mut d = JointDistribution::zeros();
        for i in 1..=64 {
            let (settings, outcome) = locate(i);
            let same = outcome.0[0] == outcome.0[1];
            let want_same = settings.get(Player::Chris) == S1;
            if same == want_same {
                d.set(i, ratio(1, 4));
            }
        }
        assert!(check_normalization(&d).ok());
        assert!(check_no_signaling(&d).ok());
        assert!(!check_pairwise_no_signaling(&d).is_empty());
    }
}
