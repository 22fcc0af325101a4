//! Independent oracles shared by the integration tests. Nothing here goes
//! through the crate's own payoff, indexing or completion code.

#![allow(dead_code)]

use num_bigint::BigInt;
use num_traits::{One, Zero};
use qgame_core::game::GameParams;
use qgame_core::Rational;
use rand::Rng;
use rand_pcg::Pcg32;

pub fn q(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn example_params() -> GameParams {
    GameParams::new(q(90, 1), q(100, 1), q(1, 5), q(9, 10), q(1, 1), q(1, 1))
}

pub fn example_independents() -> [Rational; 10] {
    [(1, 10), (13, 100), (16, 100), (1, 10), (14, 100), (2, 5), (13, 100), (1, 4), (37, 100), (1, 5)]
        .map(|(n, d)| q(n, d))
}

/// `(settings, outcome)` of 1-based entry `i`, with `true` meaning the second
/// setting / a −1 outcome, spelled out table by table.
pub fn decode(i: usize) -> ([bool; 3], [bool; 3]) {
    const SETTINGS: [[bool; 3]; 8] = [
        [false, false, false],
        [true, false, false],
        [false, true, false],
        [false, false, true],
        [false, true, true],
        [true, false, true],
        [true, true, false],
        [true, true, true],
    ];
    const OUTCOMES: [[bool; 3]; 8] = [
        [false, false, false],
        [false, true, false],
        [false, false, true],
        [false, true, true],
        [true, false, false],
        [true, true, false],
        [true, false, true],
        [true, true, true],
    ];
    (SETTINGS[(i - 1) / 8], OUTCOMES[(i - 1) % 8])
}

/// Row of the symmetric payoff table for strategies given as "plays S2" flags.
pub fn payoff_row(p: &GameParams, s: [bool; 3]) -> [Rational; 3] {
    let (a, b, d, e, t, w) = (&p.alpha, &p.beta, &p.delta, &p.epsilon, &p.theta, &p.omega);
    let row = match s {
        [false, false, false] => [a, a, a],
        [true, false, false] => [b, d, d],
        [false, true, false] => [d, b, d],
        [false, false, true] => [d, d, b],
        [false, true, true] => [e, t, t],
        [true, false, true] => [t, e, t],
        [true, true, false] => [t, t, e],
        [true, true, true] => [w, w, w],
    };
    row.map(Clone::clone)
}

/// Expected payoff by summing over all 64 (settings, outcome) pairs.
pub fn brute_force_payoff(p: &GameParams, table: &[Rational], profile: &[Rational; 3]) -> [Rational; 3] {
    let mut out = [Rational::zero(), Rational::zero(), Rational::zero()];
    for i in 1..=64 {
        let (settings, outcome) = decode(i);
        let mut w = table[i - 1].clone();
        for k in 0..3 {
            w *= if settings[k] { Rational::one() - &profile[k] } else { profile[k].clone() };
        }
        if w.is_zero() {
            continue;
        }
        for (o, v) in out.iter_mut().zip(payoff_row(p, outcome)) {
            *o += &w * v;
        }
    }
    out
}

/// Sparse linear equation `Σ coeff·p_i = rhs` over the 64 entries.
pub struct Equation {
    pub terms: Vec<(usize, Rational)>,
    pub rhs: Rational,
}

/// Every linear constraint of an embedded no-signaling table with the ten
/// independents pinned, written directly from the block layout.
pub fn completion_system(independents: &[Rational; 10]) -> Vec<Equation> {
    let mut eqs = Vec::new();
    let one = Rational::one();
    for b in 0..8 {
        eqs.push(Equation { terms: (1..=8).map(|k| (8 * b + k, one.clone())).collect(), rhs: one.clone() });
    }
    // Single-party marginals independent of the other two settings.
    for player in 0..3 {
        for setting in [false, true] {
            for sign in [false, true] {
                let members = |others: [bool; 2]| -> Vec<usize> {
                    (1..=64)
                        .filter(|&i| {
                            let (s, o) = decode(i);
                            let rest: Vec<bool> = (0..3).filter(|&k| k != player).map(|k| s[k]).collect();
                            s[player] == setting && o[player] == sign && rest == others
                        })
                        .collect()
                };
                let base = members([false, false]);
                for others in [[false, true], [true, false], [true, true]] {
                    let mut terms: Vec<(usize, Rational)> = base.iter().map(|&i| (i, one.clone())).collect();
                    terms.extend(members(others).into_iter().map(|i| (i, -one.clone())));
                    eqs.push(Equation { terms, rhs: Rational::zero() });
                }
            }
        }
    }
    // Second settings always yield −1.
    for i in 1..=64 {
        let (s, o) = decode(i);
        if (0..3).any(|k| s[k] && !o[k]) {
            eqs.push(Equation { terms: vec![(i, one.clone())], rhs: Rational::zero() });
        }
    }
    for (&i, v) in [1, 3, 5, 6, 13, 15, 18, 20, 22, 27].iter().zip(independents) {
        eqs.push(Equation { terms: vec![(i, one.clone())], rhs: v.clone() });
    }
    eqs
}

/// Gauss-Jordan elimination; `Some(x)` iff the system is consistent with a
/// unique solution.
pub fn solve_unique(eqs: &[Equation], n: usize) -> Option<Vec<Rational>> {
    let mut m: Vec<Vec<Rational>> = eqs
        .iter()
        .map(|e| {
            let mut row = vec![Rational::zero(); n + 1];
            for (i, c) in &e.terms {
                row[i - 1] += c;
            }
            row[n] = e.rhs.clone();
            row
        })
        .collect();
    let mut rank = 0;
    for col in 0..n {
        let pivot = (rank..m.len()).find(|&r| !m[r][col].is_zero())?;
        m.swap(rank, pivot);
        let inv = Rational::one() / &m[rank][col];
        for v in m[rank].iter_mut() {
            *v *= &inv;
        }
        let prow = m[rank].clone();
        for (r, row) in m.iter_mut().enumerate() {
            if r != rank && !row[col].is_zero() {
                let f = row[col].clone();
                for (x, p) in row.iter_mut().zip(&prow) {
                    *x -= &f * p;
                }
            }
        }
        rank += 1;
    }
    if m[rank..].iter().any(|row| !row[n].is_zero()) {
        return None;
    }
    Some((0..n).map(|c| m[c][n].clone()).collect())
}

/// Generalized Prisoner's Dilemma parameters: strictly increasing
/// `ε < ω < δ < θ < α < β` with random gaps. Callers filter with
/// `validate_pd` for the two averaging conditions.
pub fn random_ordered_params(rng: &mut Pcg32) -> GameParams {
    let mut v = [Rational::zero(), Rational::zero(), Rational::zero(), Rational::zero(), Rational::zero(), Rational::zero()];
    let mut acc = q(rng.random_range(1..20), 1);
    for slot in v.iter_mut() {
        *slot = acc.clone();
        acc += q(rng.random_range(1..40), rng.random_range(1..5));
    }
    let [e, w, d, t, a, b] = v;
    GameParams::new(a, b, d, e, t, w)
}

pub fn random_unit(rng: &mut Pcg32, den: i64) -> Rational {
    q(rng.random_range(0..=den), den)
}

pub fn random_params(rng: &mut Pcg32) -> GameParams {
    let mut r = || q(rng.random_range(-20..=20), rng.random_range(1..=4));
    GameParams::new(r(), r(), r(), r(), r(), r())
}
