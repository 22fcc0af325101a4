//! Unilateral-deviation margins shared by the classical and joint-probability
//! games.

use num_traits::{One, Zero};

use crate::classical::MixedProfile;
use crate::game::{PayoffTriple, Player};
use crate::Rational;

/// Deviation margins of one profile.
///
/// `margins[i]` is `Π_i(profile) − Π_i(deviation)` for the worst unilateral
/// deviation of player `i`, and `binding[i]` is that deviation's probability
/// of playing the first strategy. Payoffs are affine in each player's own
/// probability, so only the pure endpoints `0` and `1` need checking;
/// an endpoint equal to the player's current probability is not a deviation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NEReport {
    pub margins: [Rational; 3],
    pub binding: [Rational; 3],
    pub nash: bool,
}

impl NEReport {
    pub fn margin(&self, player: Player) -> &Rational {
        &self.margins[player.index()]
    }

    pub fn min_margin(&self) -> &Rational {
        self.margins.iter().min().expect("three margins")
    }
}

pub(crate) fn endpoint_report<F>(profile: &MixedProfile, payoff: F) -> NEReport
where
    F: Fn(&MixedProfile) -> PayoffTriple,
{
    let base = payoff(profile);
    let mut margins: [Option<(Rational, Rational)>; 3] = [None, None, None];
    for player in Player::ALL {
        let current = profile.get(player);
        for endpoint in [Rational::zero(), Rational::one()] {
            if *current == endpoint {
                continue;
            }
            let deviated = profile.with(player, endpoint.clone());
            let diff = base.get(player) - payoff(&deviated).get(player);
            let slot = &mut margins[player.index()];
            if slot.as_ref().is_none_or(|(m, _)| diff < *m) {
                *slot = Some((diff, endpoint));
            }
        }
    }
    let [a, b, c] = margins.map(|m| m.expect("a probability differs from at least one endpoint"));
    let nash = !(a.0 < Rational::zero() || b.0 < Rational::zero() || c.0 < Rational::zero());
    NEReport {
        margins: [a.0, b.0, c.0],
        binding: [a.1, b.1, c.1],
        nash,
    }
}
