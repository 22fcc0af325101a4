//! Classical play: each player holds one coin and picks a strategy with some
//! probability. Payoffs are trilinear in the three probabilities.

use alloc::vec::Vec;

use num_traits::One;

use crate::game::{payoff_table, GameParams, PayoffTriple, Player, PureProfile, Strategy};
use crate::nash::{endpoint_report, NEReport};
use crate::rational::in_unit_interval;
use crate::{Error, Rational, Result};

/// Probabilities `(x, y, z)` with which Alice, Bob and Chris play their
/// first strategy.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MixedProfile([Rational; 3]);

impl MixedProfile {
    pub fn new(x: Rational, y: Rational, z: Rational) -> Result<Self> {
        for (name, v) in [("x", &x), ("y", &y), ("z", &z)] {
            if !in_unit_interval(v) {
                return Err(Error::OutOfRange { name, value: v.clone() });
            }
        }
        Ok(MixedProfile([x, y, z]))
    }

    pub fn pure(profile: PureProfile) -> Self {
        MixedProfile(profile.0.map(|s| match s {
            Strategy::First => Rational::one(),
            Strategy::Second => Rational::from_integer(0.into()),
        }))
    }

    pub fn get(&self, player: Player) -> &Rational {
        &self.0[player.index()]
    }

    pub fn as_array(&self) -> &[Rational; 3] {
        &self.0
    }

    /// Same profile with one player's probability replaced. The caller keeps
    /// the value inside `[0, 1]`.
    pub(crate) fn with(&self, player: Player, value: Rational) -> Self {
        let mut out = self.clone();
        out.0[player.index()] = value;
        out
    }

    /// Probability that the realized pure profile is `profile`.
    pub fn weight(&self, profile: PureProfile) -> Rational {
        let mut w = Rational::one();
        for (p, s) in self.0.iter().zip(profile.0) {
            w *= match s {
                Strategy::First => p.clone(),
                Strategy::Second => Rational::one() - p,
            };
        }
        w
    }
}

pub fn mixed_payoff_classical(params: &GameParams, profile: &MixedProfile) -> PayoffTriple {
    let mut out = PayoffTriple::zero();
    for pure in PureProfile::all() {
        out.add_scaled(&payoff_table(params, pure), &profile.weight(pure));
    }
    out
}

pub fn is_nash_classical(params: &GameParams, profile: &MixedProfile) -> NEReport {
    endpoint_report(profile, |p| mixed_payoff_classical(params, p))
}

/// Pure profiles from which no player gains by switching strategy.
pub fn enumerate_pure_ne(params: &GameParams) -> Vec<PureProfile> {
    PureProfile::all()
        .into_iter()
        .filter(|profile| {
            let here = payoff_table(params, *profile);
            Player::ALL.iter().all(|&player| {
                let dev = profile.with(player, profile.get(player).other());
                here.get(player) >= payoff_table(params, dev).get(player)
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};
    use crate::game::Strategy::Second;
    use proptest::prelude::{prop, prop_assert_eq, proptest};
    use proptest::strategy::Strategy as _;

    fn pd() -> GameParams {
        GameParams::from_integers([7, 9, 4, 1, 5, 3])
    }

    fn profile(x: Rational, y: Rational, z: Rational) -> MixedProfile {
        MixedProfile::new(x, y, z).unwrap()
    }

    #[test]
    fn corner_and_centre_payoffs() {
        let p = pd();
        let all = |v: Rational| PayoffTriple([v.clone(), v.clone(), v]);
        assert_eq!(mixed_payoff_classical(&p, &profile(int(1), int(1), int(1))), all(int(7)));
        assert_eq!(mixed_payoff_classical(&p, &profile(int(0), int(0), int(0))), all(int(3)));
        let half = ratio(1, 2);
        assert_eq!(
            mixed_payoff_classical(&p, &profile(half.clone(), half.clone(), half)),
            all(ratio(19, 4))
        );
    }

    #[test]
    fn all_defect_is_nash_with_margin_two() {
        let r = is_nash_classical(&pd(), &profile(int(0), int(0), int(0)));
        assert!(r.nash);
        assert_eq!(r.margins, [int(2), int(2), int(2)]);
        assert_eq!(r.binding, [int(1), int(1), int(1)]);
    }

    #[test]
    fn all_cooperate_is_not_nash() {
        let r = is_nash_classical(&pd(), &profile(int(1), int(1), int(1)));
        assert!(!r.nash);
        assert_eq!(r.margins[0], int(-2));
    }

    #[test]
    fn out_of_range_profile_is_rejected() {
        assert!(matches!(
            MixedProfile::new(int(2), int(0), int(0)),
            Err(Error::OutOfRange { name: "x", .. })
        ));
        assert!(MixedProfile::new(int(0), ratio(-1, 3), int(0)).is_err());
    }

    #[test]
    fn pd_has_unique_pure_equilibrium() {
        assert_eq!(enumerate_pure_ne(&pd()), [PureProfile::new(Second, Second, Second)]);
    }

    #[test]
    fn constant_game_makes_everything_an_equilibrium() {
        assert_eq!(enumerate_pure_ne(&GameParams::from_integers([4; 6])).len(), 8);
    }

    #[test]
    fn pure_enumeration_matches_brute_force() {
        let p = GameParams::from_integers([0, 1, 0, 0, 0, 0]);
        let mut expected = Vec::new();
        for prof in PureProfile::all() {
            let mut ok = true;
            for player in Player::ALL {
                let dev = prof.with(player, prof.get(player).other());
                let mine = mixed_payoff_classical(&p, &MixedProfile::pure(prof));
                let theirs = mixed_payoff_classical(&p, &MixedProfile::pure(dev));
                ok &= mine.get(player) >= theirs.get(player);
            }
            if ok {
                expected.push(prof);
            }
        }
        assert_eq!(enumerate_pure_ne(&p), expected);
    }

    fn small_rational() -> impl proptest::strategy::Strategy<Value = Rational> {
        (-20i64..20, 1i64..6).prop_map(|(n, d)| ratio(n, d))
    }

    fn unit_rational() -> impl proptest::strategy::Strategy<Value = Rational> {
        (0i64..=16).prop_map(|n| ratio(n, 16))
    }

    proptest! {
        #[test]
        fn payoff_is_affine_in_own_probability(
            params in prop::array::uniform6(small_rational()),
            y in unit_rational(), z in unit_rational(),
        ) {
            let [a, b, d, e, t, w] = params;
            let p = GameParams::new(a, b, d, e, t, w);
            let at = |x: Rational| mixed_payoff_classical(&p, &profile(x, y.clone(), z.clone())).0[0].clone();
            let (lo, mid, hi) = (at(int(0)), at(ratio(1, 3)), at(int(1)));
            prop_assert_eq!(mid, &lo + (&hi - &lo) * ratio(1, 3));
        }

        #[test]
        fn endpoint_check_agrees_with_grid_scan(
            params in prop::array::uniform6(small_rational()),
            xyz in prop::array::uniform3(unit_rational()),
        ) {
            let [a, b, d, e, t, w] = params;
            let p = GameParams::new(a, b, d, e, t, w);
            let [x, y, z] = xyz;
            let prof = profile(x, y, z);
            let report = is_nash_classical(&p, &prof);
            let base = mixed_payoff_classical(&p, &prof);
            let mut grid_ok = true;
            for player in Player::ALL {
                for k in 0..=16 {
                    let dev = prof.with(player, ratio(k, 16));
                    grid_ok &= base.get(player) >= mixed_payoff_classical(&p, &dev).get(player);
                }
            }
            prop_assert_eq!(report.nash, grid_ok);
        }
    }
}
