//! The symmetric three-player, two-strategy game and the generalized
//! Prisoner's Dilemma conditions.

use alloc::vec::Vec;
use core::fmt;

use num_traits::Zero;

use crate::rational::int;
use crate::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Player {
    Alice,
    Bob,
    Chris,
}

impl Player {
    pub const ALL: [Player; 3] = [Player::Alice, Player::Bob, Player::Chris];

    pub fn index(self) -> usize {
        self as usize
    }
}

/// A pure strategy. `First` is S1 (cooperate in the Prisoner's Dilemma),
/// `Second` is S2 (defect).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Strategy {
    First,
    Second,
}

impl Strategy {
    pub const BOTH: [Strategy; 2] = [Strategy::First, Strategy::Second];

    pub fn other(self) -> Self {
        match self {
            Strategy::First => Strategy::Second,
            Strategy::Second => Strategy::First,
        }
    }
}

/// One measurement (or coin) outcome.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub const BOTH: [Sign; 2] = [Sign::Plus, Sign::Minus];

    /// Head (+1) selects the S1 row of the payoff table, tail (-1) the S2 row.
    pub fn as_strategy(self) -> Strategy {
        match self {
            Sign::Plus => Strategy::First,
            Sign::Minus => Strategy::Second,
        }
    }
}

/// Strategies of (Alice, Bob, Chris).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PureProfile(pub [Strategy; 3]);

impl PureProfile {
    pub fn new(alice: Strategy, bob: Strategy, chris: Strategy) -> Self {
        PureProfile([alice, bob, chris])
    }

    pub fn get(&self, player: Player) -> Strategy {
        self.0[player.index()]
    }

    pub fn with(mut self, player: Player, strategy: Strategy) -> Self {
        self.0[player.index()] = strategy;
        self
    }

    /// All eight profiles, Alice's strategy varying slowest.
    pub fn all() -> [PureProfile; 8] {
        let mut out = [PureProfile([Strategy::First; 3]); 8];
        for (n, slot) in out.iter_mut().enumerate() {
            for k in 0..3 {
                if n >> (2 - k) & 1 == 1 {
                    slot.0[k] = Strategy::Second;
                }
            }
        }
        out
    }
}

impl fmt::Display for PureProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = |s: Strategy| match s {
            Strategy::First => "S1",
            Strategy::Second => "S2",
        };
        write!(f, "({},{},{})", tag(self.0[0]), tag(self.0[1]), tag(self.0[2]))
    }
}

/// Outcomes of (Alice, Bob, Chris).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OutcomeTriple(pub [Sign; 3]);

impl OutcomeTriple {
    pub fn as_profile(&self) -> PureProfile {
        PureProfile(self.0.map(Sign::as_strategy))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PayoffTriple(pub [Rational; 3]);

impl PayoffTriple {
    pub fn zero() -> Self {
        PayoffTriple([Rational::zero(), Rational::zero(), Rational::zero()])
    }

    pub fn get(&self, player: Player) -> &Rational {
        &self.0[player.index()]
    }

    pub(crate) fn add_scaled(&mut self, other: &PayoffTriple, weight: &Rational) {
        for (acc, v) in self.0.iter_mut().zip(other.0.iter()) {
            *acc += v * weight;
        }
    }
}

/// The six payoff constants of the symmetric game.
///
/// A player's payoff depends on their own strategy and on how many of the
/// other two chose `Second`:
///
/// | own \ others on S2 | 0 | 1 | 2 |
/// |--------------------|---|---|---|
/// | First              | α | δ | ε |
/// | Second             | β | θ | ω |
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GameParams {
    pub alpha: Rational,
    pub beta: Rational,
    pub delta: Rational,
    pub epsilon: Rational,
    pub theta: Rational,
    pub omega: Rational,
}

impl GameParams {
    pub fn new(
        alpha: Rational,
        beta: Rational,
        delta: Rational,
        epsilon: Rational,
        theta: Rational,
        omega: Rational,
    ) -> Self {
        GameParams { alpha, beta, delta, epsilon, theta, omega }
    }

    pub fn from_integers(v: [i64; 6]) -> Self {
        let [a, b, d, e, t, w] = v.map(int);
        GameParams::new(a, b, d, e, t, w)
    }

    /// Payoff constants built from `β` and the five ratios
    /// α/β, θ/β, δ/θ, ω/β, ε/ω.
    pub fn from_ratios(beta: Rational, ratios: &PayoffRatios) -> Self {
        let theta = &beta * &ratios.theta_over_beta;
        let omega = &beta * &ratios.omega_over_beta;
        GameParams {
            alpha: &beta * &ratios.alpha_over_beta,
            delta: &theta * &ratios.delta_over_theta,
            epsilon: &omega * &ratios.epsilon_over_omega,
            theta,
            omega,
            beta,
        }
    }

    pub fn scaled(&self, k: &Rational) -> Self {
        GameParams {
            alpha: &self.alpha * k,
            beta: &self.beta * k,
            delta: &self.delta * k,
            epsilon: &self.epsilon * k,
            theta: &self.theta * k,
            omega: &self.omega * k,
        }
    }

    pub fn as_array(&self) -> [&Rational; 6] {
        [&self.alpha, &self.beta, &self.delta, &self.epsilon, &self.theta, &self.omega]
    }

    fn payoff_for(&self, own: Strategy, others_second: usize) -> &Rational {
        match (own, others_second) {
            (Strategy::First, 0) => &self.alpha,
            (Strategy::First, 1) => &self.delta,
            (Strategy::First, _) => &self.epsilon,
            (Strategy::Second, 0) => &self.beta,
            (Strategy::Second, 1) => &self.theta,
            (Strategy::Second, _) => &self.omega,
        }
    }
}

/// The five payoff ratios in which the (C,C,C) Nash inequalities are written.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PayoffRatios {
    pub alpha_over_beta: Rational,
    pub theta_over_beta: Rational,
    pub delta_over_theta: Rational,
    pub omega_over_beta: Rational,
    pub epsilon_over_omega: Rational,
}

impl PayoffRatios {
    pub fn of(params: &GameParams) -> crate::Result<Self> {
        let div = |num: &Rational, den: &Rational, name| {
            if den.is_zero() {
                Err(crate::Error::UndefinedRatio(name))
            } else {
                Ok(num / den)
            }
        };
        Ok(PayoffRatios {
            alpha_over_beta: div(&params.alpha, &params.beta, "alpha/beta")?,
            theta_over_beta: div(&params.theta, &params.beta, "theta/beta")?,
            delta_over_theta: div(&params.delta, &params.theta, "delta/theta")?,
            omega_over_beta: div(&params.omega, &params.beta, "omega/beta")?,
            epsilon_over_omega: div(&params.epsilon, &params.omega, "epsilon/omega")?,
        })
    }
}

pub fn payoff_table(params: &GameParams, profile: PureProfile) -> PayoffTriple {
    let seconds = profile.0.iter().filter(|s| **s == Strategy::Second).count();
    PayoffTriple(profile.0.map(|own| {
        let others = seconds - usize::from(own == Strategy::Second);
        params.payoff_for(own, others).clone()
    }))
}

pub fn payoff_for_outcome(params: &GameParams, outcome: OutcomeTriple) -> PayoffTriple {
    payoff_table(params, outcome.as_profile())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PdGroup {
    /// Defection dominates.
    Dominance,
    /// More cooperating opponents is better.
    Monotonicity,
    /// Fixing one player leaves a two-player Prisoner's Dilemma.
    PairwiseDilemma,
}

/// One strict inequality of the generalized Prisoner's Dilemma.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PdCondition {
    BetaGtAlpha,
    OmegaGtEpsilon,
    ThetaGtDelta,
    BetaGtTheta,
    ThetaGtOmega,
    AlphaGtDelta,
    DeltaGtEpsilon,
    DeltaGtOmega,
    AlphaGtTheta,
    DeltaGtMeanEpsilonTheta,
    AlphaGtMeanDeltaBeta,
}

impl PdCondition {
    pub const ALL: [PdCondition; 11] = [
        PdCondition::BetaGtAlpha,
        PdCondition::OmegaGtEpsilon,
        PdCondition::ThetaGtDelta,
        PdCondition::BetaGtTheta,
        PdCondition::ThetaGtOmega,
        PdCondition::AlphaGtDelta,
        PdCondition::DeltaGtEpsilon,
        PdCondition::DeltaGtOmega,
        PdCondition::AlphaGtTheta,
        PdCondition::DeltaGtMeanEpsilonTheta,
        PdCondition::AlphaGtMeanDeltaBeta,
    ];

    pub fn group(self) -> PdGroup {
        use PdCondition::*;
        match self {
            BetaGtAlpha | OmegaGtEpsilon | ThetaGtDelta => PdGroup::Dominance,
            BetaGtTheta | ThetaGtOmega | AlphaGtDelta | DeltaGtEpsilon => PdGroup::Monotonicity,
            _ => PdGroup::PairwiseDilemma,
        }
    }

    /// Left and right sides of the inequality `lhs > rhs`.
    pub fn sides(self, p: &GameParams) -> (Rational, Rational) {
        use PdCondition::*;
        let two = int(2);
        match self {
            BetaGtAlpha => (p.beta.clone(), p.alpha.clone()),
            OmegaGtEpsilon => (p.omega.clone(), p.epsilon.clone()),
            ThetaGtDelta => (p.theta.clone(), p.delta.clone()),
            BetaGtTheta => (p.beta.clone(), p.theta.clone()),
            ThetaGtOmega => (p.theta.clone(), p.omega.clone()),
            AlphaGtDelta => (p.alpha.clone(), p.delta.clone()),
            DeltaGtEpsilon => (p.delta.clone(), p.epsilon.clone()),
            DeltaGtOmega => (p.delta.clone(), p.omega.clone()),
            AlphaGtTheta => (p.alpha.clone(), p.theta.clone()),
            DeltaGtMeanEpsilonTheta => (p.delta.clone(), (&p.epsilon + &p.theta) / &two),
            AlphaGtMeanDeltaBeta => (p.alpha.clone(), (&p.delta + &p.beta) / &two),
        }
    }

    pub fn holds(self, p: &GameParams) -> bool {
        let (lhs, rhs) = self.sides(p);
        lhs > rhs
    }
}

impl fmt::Display for PdCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use PdCondition::*;
        let s = match self {
            BetaGtAlpha => "beta > alpha",
            OmegaGtEpsilon => "omega > epsilon",
            ThetaGtDelta => "theta > delta",
            BetaGtTheta => "beta > theta",
            ThetaGtOmega => "theta > omega",
            AlphaGtDelta => "alpha > delta",
            DeltaGtEpsilon => "delta > epsilon",
            DeltaGtOmega => "delta > omega",
            AlphaGtTheta => "alpha > theta",
            DeltaGtMeanEpsilonTheta => "delta > (epsilon + theta)/2",
            AlphaGtMeanDeltaBeta => "alpha > (delta + beta)/2",
        };
        f.write_str(s)
    }
}

impl fmt::Display for PdGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PdGroup::Dominance => "a",
            PdGroup::Monotonicity => "b",
            PdGroup::PairwiseDilemma => "c",
        })
    }
}

/// Violated generalized Prisoner's Dilemma conditions; empty means valid.
/// Inequalities are strict, so equality is a violation.
pub fn validate_pd(params: &GameParams) -> Vec<PdCondition> {
    PdCondition::ALL.into_iter().filter(|c| !c.holds(params)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;
    use Sign::*;
    use Strategy::*;

    fn pd() -> GameParams {
        GameParams::from_integers([7, 9, 4, 1, 5, 3])
    }

    fn triple(v: [i64; 3]) -> PayoffTriple {
        PayoffTriple(v.map(int))
    }

    #[test]
    fn payoff_table_rows() {
        let p = pd();
        assert_eq!(payoff_table(&p, PureProfile::new(First, First, First)), triple([7, 7, 7]));
        assert_eq!(payoff_table(&p, PureProfile::new(Second, First, First)), triple([9, 4, 4]));
        assert_eq!(payoff_table(&p, PureProfile::new(Second, Second, Second)), triple([3, 3, 3]));
        assert_eq!(payoff_table(&p, PureProfile::new(First, Second, Second)), triple([1, 5, 5]));
        assert_eq!(payoff_table(&p, PureProfile::new(Second, First, Second)), triple([5, 1, 5]));
    }

    #[test]
    fn payoff_for_outcome_maps_signs_to_rows() {
        let p = pd();
        assert_eq!(payoff_for_outcome(&p, OutcomeTriple([Plus, Plus, Plus])), triple([7, 7, 7]));
        assert_eq!(payoff_for_outcome(&p, OutcomeTriple([Minus, Plus, Plus])), triple([9, 4, 4]));
        assert_eq!(payoff_for_outcome(&p, OutcomeTriple([Minus, Minus, Minus])), triple([3, 3, 3]));
    }

    #[test]
    fn payoffs_are_symmetric_under_player_permutations() {
        let p = GameParams::from_integers([11, 2, 3, 5, 7, 13]);
        let perms = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
        for profile in PureProfile::all() {
            let base = payoff_table(&p, profile);
            for perm in perms {
                let permuted = PureProfile(perm.map(|k| profile.0[k]));
                let expect = PayoffTriple(perm.map(|k| base.0[k].clone()));
                assert_eq!(payoff_table(&p, permuted), expect);
            }
        }
    }

    #[test]
    fn canonical_fixture_is_a_valid_pd() {
        assert!(validate_pd(&pd()).is_empty());
    }

    #[test]
    fn scaled_ratio_example_breaks_pd_ordering() {
        let p = GameParams::new(int(90), int(100), ratio(1, 5), ratio(9, 10), int(1), int(1));
        let v = validate_pd(&p);
        for c in [
            PdCondition::ThetaGtOmega,
            PdCondition::DeltaGtEpsilon,
            PdCondition::DeltaGtOmega,
            PdCondition::DeltaGtMeanEpsilonTheta,
        ] {
            assert!(v.contains(&c), "{c} should fail");
        }
        assert_eq!(v.len(), 4);
    }

    #[test]
    fn degenerate_game_violates_everything() {
        let p = GameParams::from_integers([0; 6]);
        assert_eq!(validate_pd(&p).len(), PdCondition::ALL.len());
    }

    #[test]
    fn groups_partition_conditions() {
        let count = |g| PdCondition::ALL.iter().filter(|c| c.group() == g).count();
        assert_eq!(count(PdGroup::Dominance), 3);
        assert_eq!(count(PdGroup::Monotonicity), 4);
        assert_eq!(count(PdGroup::PairwiseDilemma), 4);
    }

    #[test]
    fn ratios_round_trip_through_params() {
        let r = PayoffRatios {
            alpha_over_beta: ratio(9, 10),
            theta_over_beta: ratio(1, 100),
            delta_over_theta: ratio(1, 5),
            omega_over_beta: ratio(1, 100),
            epsilon_over_omega: ratio(9, 10),
        };
        let p = GameParams::from_ratios(int(100), &r);
        assert_eq!(p, GameParams::new(int(90), int(100), ratio(1, 5), ratio(9, 10), int(1), int(1)));
        assert_eq!(PayoffRatios::of(&p).unwrap(), r);
        assert!(PayoffRatios::of(&GameParams::from_integers([1, 0, 1, 1, 1, 1])).is_err());
    }
}
