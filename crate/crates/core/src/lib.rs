//! Exact analysis of three-player, two-strategy symmetric games played through
//! shared randomness.
//!
//! A game is played in one of three ways:
//!
//! - classically, with each player flipping a single coin ([`classical`]);
//! - with two coins per player whose joint statistics factorize into
//!   per-coin marginals ([`joint::JointDistribution::from_marginals`]);
//! - with arbitrary joint probabilities that only obey normalization and the
//!   no-signaling marginal equalities ([`joint`], [`epr`]).
//!
//! All arithmetic is done in exact rationals ([`Rational`]). The crate is
//! `no_std` and only needs `alloc`; file formats, reports and the CLI live in
//! the `qgame` companion crate.

#![no_std]

extern crate alloc;

pub mod classical;
pub mod epr;
pub mod error;
pub mod game;
pub mod joint;
pub mod linear;
pub mod lp;
pub mod nash;
pub mod rational;
pub mod search;
pub mod simulate;

pub use error::{Error, Result};
pub use rational::Rational;
